#include "treelogic/nnf.hpp"

#include "treelogic/cycle.hpp"
#include "treelogic/errors.hpp"

#include <cassert>
#include <unordered_map>

namespace treelogic {

namespace {

using VarMap = std::unordered_map<std::string, std::string>;

const Formula* neg(FormulaArena& a, const Formula* f, VarMap& duals);

// Rebuild f under the dual-variable renaming without flipping polarity.
const Formula* pos(FormulaArena& a, const Formula* f, VarMap& duals) {
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
            return f;
        case Kind::Var: {
            auto it = duals.find(f->text);
            return it == duals.end() ? f : a.var(it->second);
        }
        case Kind::Or: return a.or_(pos(a, f->kids[0], duals), pos(a, f->kids[1], duals));
        case Kind::And: return a.and_(pos(a, f->kids[0], duals), pos(a, f->kids[1], duals));
        case Kind::Implies:
            return a.implies(pos(a, f->kids[0], duals), pos(a, f->kids[1], duals));
        case Kind::Equiv: return a.equiv(pos(a, f->kids[0], duals), pos(a, f->kids[1], duals));
        case Kind::Not: return a.not_(pos(a, f->kids[0], duals));
        case Kind::Modal: return a.modal(f->prog, pos(a, f->kids[0], duals));
        case Kind::Let: {
            std::vector<std::pair<std::string, const Formula*>> bs;
            for (std::size_t i = 0; i < f->binding_count(); ++i)
                bs.emplace_back(f->binders[i], pos(a, f->kids[i], duals));
            return a.let(std::move(bs), pos(a, f->let_body(), duals));
        }
        case Kind::Call:
        case Kind::Str:
            throw UnexpandedPredicate("predicate call in formula passed to negate");
    }
    return f;
}

const Formula* neg(FormulaArena& a, const Formula* f, VarMap& duals) {
    switch (f->kind) {
        case Kind::True: return a.fls();
        case Kind::False: return a.tru();
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
            return a.not_(f);
        case Kind::Var: {
            auto it = duals.find(f->text);
            // A variable under negation must belong to a binder being
            // dualized; positivity validation guarantees this.
            assert(it != duals.end());
            return a.var(it->second);
        }
        case Kind::Or: return a.and_(neg(a, f->kids[0], duals), neg(a, f->kids[1], duals));
        case Kind::And: return a.or_(neg(a, f->kids[0], duals), neg(a, f->kids[1], duals));
        case Kind::Implies:
            return a.and_(pos(a, f->kids[0], duals), neg(a, f->kids[1], duals));
        case Kind::Equiv:
            return a.or_(a.and_(pos(a, f->kids[0], duals), neg(a, f->kids[1], duals)),
                         a.and_(pos(a, f->kids[1], duals), neg(a, f->kids[0], duals)));
        case Kind::Not: return pos(a, f->kids[0], duals);
        case Kind::Modal: {
            // ~<p>phi == <p>~phi | ~<p>T
            const Formula* no_succ = a.not_(a.modal(f->prog, a.tru()));
            if (f->kids[0]->kind == Kind::True) return no_succ;
            return a.or_(a.modal(f->prog, neg(a, f->kids[0], duals)), no_succ);
        }
        case Kind::Let: {
            std::vector<std::pair<std::string, const Formula*>> bs;
            for (auto& name : f->binders) duals[name] = a.fresh_var(display_of(name) + "~");
            for (std::size_t i = 0; i < f->binding_count(); ++i)
                bs.emplace_back(duals[f->binders[i]], neg(a, f->kids[i], duals));
            const Formula* body = neg(a, f->let_body(), duals);
            for (auto& name : f->binders) duals.erase(name);
            return a.let(std::move(bs), body);
        }
        case Kind::Call:
        case Kind::Str:
            throw UnexpandedPredicate("predicate call in formula passed to negate");
    }
    return f;
}

const Formula* nnf_rec(FormulaArena& a, const Formula* f) {
    switch (f->kind) {
        case Kind::True:
        case Kind::False:
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
        case Kind::Var:
            return f;
        case Kind::Or: return a.or_(nnf_rec(a, f->kids[0]), nnf_rec(a, f->kids[1]));
        case Kind::And: return a.and_(nnf_rec(a, f->kids[0]), nnf_rec(a, f->kids[1]));
        case Kind::Implies: {
            VarMap duals;
            return a.or_(nnf_rec(a, neg(a, f->kids[0], duals)), nnf_rec(a, f->kids[1]));
        }
        case Kind::Equiv: {
            VarMap d1, d2;
            const Formula* fwd = a.or_(nnf_rec(a, neg(a, f->kids[0], d1)), nnf_rec(a, f->kids[1]));
            const Formula* bwd = a.or_(nnf_rec(a, neg(a, f->kids[1], d2)), nnf_rec(a, f->kids[0]));
            return a.and_(fwd, bwd);
        }
        case Kind::Not: {
            VarMap duals;
            return nnf_rec(a, neg(a, f->kids[0], duals));
        }
        case Kind::Modal: return a.modal(f->prog, nnf_rec(a, f->kids[0]));
        case Kind::Let: {
            std::vector<std::pair<std::string, const Formula*>> bs;
            for (std::size_t i = 0; i < f->binding_count(); ++i)
                bs.emplace_back(f->binders[i], nnf_rec(a, f->kids[i]));
            return a.let(std::move(bs), nnf_rec(a, f->let_body()));
        }
        case Kind::Call:
        case Kind::Str:
            throw UnexpandedPredicate("predicate call survives to NNF conversion");
    }
    return f;
}

} // namespace

const Formula* negate(FormulaArena& a, const Formula* f) {
    if (!is_expanded(f)) throw UnexpandedPredicate("predicate call in formula passed to negate");
    validate_recursion(f);
    CycleReport r = cycle_check(f);
    if (!r.ok)
        throw CycleError("formula is not cycle-free: " + r.violations.front().variable +
                         " uses a program and its converse");
    VarMap duals;
    return neg(a, f, duals);
}

NnfFormula to_nnf(FormulaArena& a, const Formula* f) {
    if (!is_expanded(f)) throw UnexpandedPredicate("predicate call survives to NNF conversion");
    validate_recursion(f);
    CycleReport r = cycle_check(f);
    if (!r.ok)
        throw CycleError("formula is not cycle-free: " + r.violations.front().variable +
                         " uses a program and its converse");
    return NnfFormula{nnf_rec(a, f)};
}

bool is_nnf(const Formula* f) {
    switch (f->kind) {
        case Kind::Implies:
        case Kind::Equiv:
        case Kind::Call:
        case Kind::Str:
            return false;
        case Kind::Not: {
            const Formula* g = f->kids[0];
            return g->is_atom() || (g->kind == Kind::Modal && g->kids[0]->kind == Kind::True);
        }
        default:
            for (auto* k : f->kids)
                if (!is_nnf(k)) return false;
            return true;
    }
}

} // namespace treelogic
