#include "treelogic/formula.hpp"

#include "treelogic/errors.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace treelogic {

const char* prog_name(Prog p) {
    switch (p) {
        case Prog::FirstChild: return "1";
        case Prog::NextSibling: return "2";
        case Prog::Parent: return "-1";
        case Prog::PrevSibling: return "-2";
    }
    return "?";
}

std::size_t FormulaArena::NodeHash::operator()(const Formula* f) const {
    std::size_t h = static_cast<std::size_t>(f->kind) * 1000003u;
    h ^= std::hash<std::string>{}(f->text) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(static_cast<int8_t>(f->prog)) + 0x9e3779b9 + (h << 6) + (h >> 2);
    for (auto* k : f->kids)
        h ^= std::hash<const void*>{}(k) + 0x9e3779b9 + (h << 6) + (h >> 2);
    for (auto& b : f->binders)
        h ^= std::hash<std::string>{}(b) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
}

bool FormulaArena::NodeEq::operator()(const Formula* a, const Formula* b) const {
    return a->kind == b->kind && a->prog == b->prog && a->text == b->text && a->kids == b->kids &&
           a->binders == b->binders;
}

const Formula* FormulaArena::intern(Kind k, std::string text, std::vector<const Formula*> kids,
                                    Prog prog, std::vector<std::string> binders) {
    Formula probe{k, prog, std::move(text), std::move(kids), std::move(binders)};
    auto it = interned_.find(&probe);
    if (it != interned_.end()) return *it;
    store_.push_back(std::move(probe));
    const Formula* f = &store_.back();
    interned_.insert(f);
    return f;
}

const Formula* FormulaArena::or_(const Formula* a, const Formula* b) {
    if (a->kind == Kind::True || b->kind == Kind::True) return tru();
    if (a->kind == Kind::False) return b;
    if (b->kind == Kind::False) return a;
    if (a == b) return a;
    return intern(Kind::Or, "", {a, b});
}

const Formula* FormulaArena::and_(const Formula* a, const Formula* b) {
    if (a->kind == Kind::False || b->kind == Kind::False) return fls();
    if (a->kind == Kind::True) return b;
    if (b->kind == Kind::True) return a;
    if (a == b) return a;
    return intern(Kind::And, "", {a, b});
}

const Formula* FormulaArena::not_(const Formula* a) {
    if (a->kind == Kind::True) return fls();
    if (a->kind == Kind::False) return tru();
    if (a->kind == Kind::Not) return a->kids[0];
    return intern(Kind::Not, "", {a});
}

const Formula* FormulaArena::modal(Prog p, const Formula* f) {
    if (f->kind == Kind::False) return fls();
    return intern(Kind::Modal, "", {f}, p);
}

const Formula* FormulaArena::let(std::vector<std::pair<std::string, const Formula*>> bindings,
                                 const Formula* body) {
    assert(!bindings.empty());
    std::vector<const Formula*> kids;
    std::vector<std::string> names;
    for (auto& [n, f] : bindings) {
        names.push_back(n);
        kids.push_back(f);
    }
    kids.push_back(body);
    return intern(Kind::Let, "", std::move(kids), Prog::FirstChild, std::move(names));
}

const Formula* FormulaArena::or_all(const std::vector<const Formula*>& fs) {
    if (fs.empty()) return fls();
    const Formula* acc = fs.back();
    for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = or_(*it, acc);
    return acc;
}

const Formula* FormulaArena::and_all(const std::vector<const Formula*>& fs) {
    if (fs.empty()) return tru();
    const Formula* acc = fs.back();
    for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = and_(*it, acc);
    return acc;
}

std::string FormulaArena::fresh_var(const std::string& prefix) {
    return prefix + "@" + std::to_string(++var_counter_);
}

namespace {

const Formula* substitute_rec(FormulaArena& a, const Formula* f,
                              const std::unordered_map<std::string, const Formula*>& sub,
                              std::unordered_map<const Formula*, const Formula*>& memo) {
    if (sub.empty()) return f;
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    const Formula* out = f;
    switch (f->kind) {
        case Kind::Var: {
            auto s = sub.find(f->text);
            out = s == sub.end() ? f : s->second;
            break;
        }
        case Kind::True:
        case Kind::False:
        case Kind::Element:
        case Kind::Attribute:
        case Kind::Prop:
        case Kind::Context:
        case Kind::Str:
            out = f;
            break;
        case Kind::Let: {
            // Bound names are globally unique, so they never collide with the
            // substitution domain; still, mask them out for safety.
            auto inner = sub;
            for (auto& b : f->binders) inner.erase(b);
            std::vector<std::pair<std::string, const Formula*>> bindings;
            std::unordered_map<const Formula*, const Formula*> memo2;
            for (std::size_t i = 0; i < f->binding_count(); ++i)
                bindings.emplace_back(f->binders[i],
                                      substitute_rec(a, f->kids[i], inner, memo2));
            const Formula* body = substitute_rec(a, f->let_body(), inner, memo2);
            out = a.let(std::move(bindings), body);
            break;
        }
        default: {
            std::vector<const Formula*> kids;
            kids.reserve(f->kids.size());
            for (auto* k : f->kids) kids.push_back(substitute_rec(a, k, sub, memo));
            if (kids == f->kids) {
                out = f;
            } else {
                switch (f->kind) {
                    case Kind::Or: out = a.or_(kids[0], kids[1]); break;
                    case Kind::And: out = a.and_(kids[0], kids[1]); break;
                    case Kind::Implies: out = a.implies(kids[0], kids[1]); break;
                    case Kind::Equiv: out = a.equiv(kids[0], kids[1]); break;
                    case Kind::Not: out = a.not_(kids[0]); break;
                    case Kind::Modal: out = a.modal(f->prog, kids[0]); break;
                    case Kind::Call: out = a.call(f->text, std::move(kids)); break;
                    default: assert(false);
                }
            }
            break;
        }
    }
    memo.emplace(f, out);
    return out;
}

} // namespace

const Formula* FormulaArena::substitute(
    const Formula* f, const std::unordered_map<std::string, const Formula*>& sub) {
    std::unordered_map<const Formula*, const Formula*> memo;
    return substitute_rec(*this, f, sub, memo);
}

const Formula* FormulaArena::expand_let(const Formula* l) {
    assert(l->kind == Kind::Let);
    auto it = expand_cache_.find(l);
    if (it != expand_cache_.end()) return it->second;

    // Recursive occurrences inside binding bodies become re-wrapped binders;
    // occurrences in the in-body are replaced by one unfolding of the body.
    std::unordered_map<std::string, const Formula*> wrap;
    for (auto& name : l->binders) {
        std::vector<std::pair<std::string, const Formula*>> bindings;
        for (std::size_t i = 0; i < l->binding_count(); ++i)
            bindings.emplace_back(l->binders[i], l->kids[i]);
        wrap[name] = let(std::move(bindings), var(name));
    }
    std::unordered_map<std::string, const Formula*> once;
    for (std::size_t i = 0; i < l->binding_count(); ++i)
        once[l->binders[i]] = substitute(l->kids[i], wrap);
    const Formula* out = substitute(l->let_body(), once);
    expand_cache_.emplace(l, out);
    return out;
}

const Formula* FormulaArena::unfold(const Formula* l, const std::string& v) {
    assert(l->kind == Kind::Let);
    std::size_t i = 0;
    for (; i < l->binding_count(); ++i)
        if (l->binders[i] == v || display_of(l->binders[i]) == v) break;
    if (i == l->binding_count()) throw UnboundVariable("variable " + v + " not bound by this binder");
    std::unordered_map<std::string, const Formula*> wrap;
    for (auto& name : l->binders) {
        std::vector<std::pair<std::string, const Formula*>> bindings;
        for (std::size_t j = 0; j < l->binding_count(); ++j)
            bindings.emplace_back(l->binders[j], l->kids[j]);
        wrap[name] = let(std::move(bindings), var(name));
    }
    return substitute(l->kids[i], wrap);
}

std::size_t formula_size(const Formula* f) {
    std::size_t n = 1;
    for (auto* k : f->kids) n += formula_size(k);
    return n;
}

namespace {
void free_vars_rec(const Formula* f, std::vector<std::string>& scope,
                   std::vector<std::string>& out) {
    if (f->kind == Kind::Var) {
        if (std::find(scope.begin(), scope.end(), f->text) == scope.end())
            if (std::find(out.begin(), out.end(), f->text) == out.end()) out.push_back(f->text);
        return;
    }
    if (f->kind == Kind::Let) {
        std::size_t mark = scope.size();
        for (auto& b : f->binders) scope.push_back(b);
        for (auto* k : f->kids) free_vars_rec(k, scope, out);
        scope.resize(mark);
        return;
    }
    for (auto* k : f->kids) free_vars_rec(k, scope, out);
}
} // namespace

std::vector<std::string> free_variables(const Formula* f) {
    std::vector<std::string> scope, out;
    free_vars_rec(f, scope, out);
    return out;
}

bool is_closed(const Formula* f) { return free_variables(f).empty(); }

bool is_expanded(const Formula* f) {
    if (f->kind == Kind::Call || f->kind == Kind::Str) return false;
    for (auto* k : f->kids)
        if (!is_expanded(k)) return false;
    return true;
}

} // namespace treelogic
