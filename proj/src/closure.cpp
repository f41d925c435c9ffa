#include "treelogic/closure.hpp"

#include "treelogic/errors.hpp"

#include <cassert>
#include <deque>

namespace treelogic {

Closure compute_closure(FormulaArena& a, NnfFormula root) {
    Closure c;
    std::deque<const Formula*> work{root.f};
    auto add = [&](const Formula* f) {
        if (c.member_set.emplace(f, true).second) {
            c.formulas.push_back(f);
            work.push_back(f);
        }
    };
    c.member_set.emplace(root.f, true);
    c.formulas.push_back(root.f);
    while (!work.empty()) {
        const Formula* f = work.front();
        work.pop_front();
        switch (f->kind) {
            case Kind::Or:
            case Kind::And:
            case Kind::Not:
            case Kind::Modal:
                for (auto* k : f->kids) add(k);
                break;
            case Kind::Let: {
                const Formula* ex = a.expand_let(f);
                c.let_expansion.emplace(f, ex);
                add(ex);
                break;
            }
            case Kind::Var:
                throw UnboundVariable("free variable $" + f->display_name() +
                                      " reached the closure");
            case Kind::Implies:
            case Kind::Equiv:
            case Kind::Call:
            case Kind::Str:
                throw Error("closure expects negation normal form");
            default:
                break; // atoms, T, F
        }
    }
    return c;
}

Lean compute_lean(FormulaArena& a, const Closure& c) {
    Lean lean;
    auto add_member = [&](const Formula* f) -> std::pair<std::size_t, bool> {
        auto it = lean.index.find(f);
        if (it != lean.index.end()) return {it->second, false};
        std::size_t i = lean.members.size();
        lean.members.push_back(f);
        lean.index.emplace(f, i);
        return {i, true};
    };

    // Atoms first, in closure insertion order.
    for (auto* f : c.formulas) {
        if (f->is_atom()) {
            auto [i, fresh] = add_member(f);
            if (fresh) {
                if (f->kind == Kind::Element)
                    lean.element_atoms.push_back(i);
                else
                    lean.flex_atoms.push_back(i);
            }
        }
    }
    lean.atom_count = lean.members.size();

    // Modal formulas, then the four <p>T members.
    for (auto* f : c.formulas)
        if (f->kind == Kind::Modal) add_member(f);
    for (Prog p : {Prog::FirstChild, Prog::NextSibling, Prog::Parent, Prog::PrevSibling})
        add_member(a.modal(p, a.tru()));

    for (std::size_t i = lean.atom_count; i < lean.members.size(); ++i) {
        const Formula* f = lean.members[i];
        int slot = prog_slot(f->prog);
        lean.evs[slot].push_back({i, f->kids[0]});
        if (f->kids[0]->kind == Kind::True) lean.modal_true[slot] = i;
    }
    return lean;
}

namespace {

Tri tri_not(Tri t) {
    if (t == Tri::Unknown) return Tri::Unknown;
    return t == Tri::True ? Tri::False : Tri::True;
}

} // namespace

bool entails(const Closure& c, const Lean& lean, const Bitvec& bits, const Formula* f) {
    switch (f->kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
        case Kind::Modal: {
            auto it = lean.index.find(f);
            assert(it != lean.index.end());
            return bits.get(it->second);
        }
        case Kind::Not: return !entails(c, lean, bits, f->kids[0]);
        case Kind::And:
            return entails(c, lean, bits, f->kids[0]) && entails(c, lean, bits, f->kids[1]);
        case Kind::Or:
            return entails(c, lean, bits, f->kids[0]) || entails(c, lean, bits, f->kids[1]);
        case Kind::Let: return entails(c, lean, bits, c.let_expansion.at(f));
        default:
            throw Error("entailment over a formula outside the closure fragment");
    }
}

Tri entails3(const Closure& c, const Lean& lean, const Bitvec& bits, const Bitvec& known,
             const Formula* f) {
    switch (f->kind) {
        case Kind::True: return Tri::True;
        case Kind::False: return Tri::False;
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
        case Kind::Modal: {
            auto it = lean.index.find(f);
            assert(it != lean.index.end());
            if (!known.get(it->second)) return Tri::Unknown;
            return bits.get(it->second) ? Tri::True : Tri::False;
        }
        case Kind::Not: return tri_not(entails3(c, lean, bits, known, f->kids[0]));
        case Kind::And: {
            Tri l = entails3(c, lean, bits, known, f->kids[0]);
            if (l == Tri::False) return Tri::False;
            Tri r = entails3(c, lean, bits, known, f->kids[1]);
            if (r == Tri::False) return Tri::False;
            return (l == Tri::True && r == Tri::True) ? Tri::True : Tri::Unknown;
        }
        case Kind::Or: {
            Tri l = entails3(c, lean, bits, known, f->kids[0]);
            if (l == Tri::True) return Tri::True;
            Tri r = entails3(c, lean, bits, known, f->kids[1]);
            if (r == Tri::True) return Tri::True;
            return (l == Tri::False && r == Tri::False) ? Tri::False : Tri::Unknown;
        }
        case Kind::Let: return entails3(c, lean, bits, known, c.let_expansion.at(f));
        default:
            throw Error("entailment over a formula outside the closure fragment");
    }
}

} // namespace treelogic
