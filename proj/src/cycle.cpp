#include "treelogic/cycle.hpp"

#include "treelogic/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace treelogic {

namespace {

struct Scope {
    const Formula* binder;
    std::vector<std::string> names;
};

// Per bound variable (keyed by binder node + internal name so that shadowing
// cannot merge distinct variables): union of programs seen between its
// occurrences and its binder.
using VarKey = std::pair<const Formula*, std::string>;
using ProgSets = std::map<VarKey, std::set<Prog>>;

void collect(const Formula* f, std::vector<Scope>& scopes,
             std::vector<std::set<Prog>>& path_progs, ProgSets& out) {
    switch (f->kind) {
        case Kind::Var: {
            // Find the binding scope, accumulate programs crossed since it.
            for (std::size_t i = scopes.size(); i-- > 0;) {
                auto& sc = scopes[i];
                if (std::find(sc.names.begin(), sc.names.end(), f->text) != sc.names.end()) {
                    std::set<Prog>& dst = out[{sc.binder, f->text}];
                    for (std::size_t j = i; j < path_progs.size(); ++j)
                        dst.insert(path_progs[j].begin(), path_progs[j].end());
                    return;
                }
            }
            return; // free variable; closedness handled elsewhere
        }
        case Kind::Modal: {
            // The program guards everything below, for every open scope.
            std::vector<bool> added(path_progs.size(), false);
            for (std::size_t j = 0; j < path_progs.size(); ++j)
                if (!path_progs[j].count(f->prog)) {
                    path_progs[j].insert(f->prog);
                    added[j] = true;
                }
            collect(f->kids[0], scopes, path_progs, out);
            for (std::size_t j = 0; j < path_progs.size(); ++j)
                if (added[j]) path_progs[j].erase(f->prog);
            return;
        }
        case Kind::Let: {
            scopes.push_back({f, f->binders});
            path_progs.emplace_back();
            for (auto* k : f->kids) collect(k, scopes, path_progs, out);
            path_progs.pop_back();
            scopes.pop_back();
            return;
        }
        default:
            for (auto* k : f->kids) collect(k, scopes, path_progs, out);
            return;
    }
}

} // namespace

CycleReport cycle_check(const Formula* f) {
    std::vector<Scope> scopes;
    std::vector<std::set<Prog>> path_progs;
    ProgSets sets;
    collect(f, scopes, path_progs, sets);

    CycleReport report;
    for (auto& [key, progs] : sets) {
        for (Prog p : {Prog::FirstChild, Prog::NextSibling}) {
            if (progs.count(p) && progs.count(converse(p))) {
                report.ok = false;
                report.violations.push_back({"$" + display_of(key.second), p, converse(p)});
            }
        }
    }
    return report;
}

namespace {

// Positivity: every variable occurrence sits under an even number of
// negations (counting the left side of Implies and both sides of Equiv as
// mixed polarity).
void check_positive(const Formula* f, bool negated, const std::set<std::string>& bound) {
    switch (f->kind) {
        case Kind::Var:
            if (negated)
                throw Error("variable $" + f->display_name() +
                            " occurs under negation; fixpoint bodies must be monotone");
            return;
        case Kind::Not:
            check_positive(f->kids[0], !negated, bound);
            return;
        case Kind::Implies:
            check_positive(f->kids[0], !negated, bound);
            check_positive(f->kids[1], negated, bound);
            return;
        case Kind::Equiv:
            for (auto* k : f->kids) {
                check_positive(k, negated, bound);
                check_positive(k, !negated, bound);
            }
            return;
        default:
            for (auto* k : f->kids) check_positive(k, negated, bound);
            return;
    }
}

// Guardedness: within each binder, the dependency graph "Xi mentions Xj with
// no modality in between" must be acyclic, including self-loops.
struct GuardCtx {
    std::map<std::string, std::set<std::string>> edges;
};

void unguarded_vars(const Formula* f, std::set<std::string>& out) {
    switch (f->kind) {
        case Kind::Var:
            out.insert(f->text);
            return;
        case Kind::Modal:
            return; // guarded below here
        case Kind::Let:
            // variables of an inner let's own bindings are distinct names;
            // free occurrences in its bodies are reachable unguarded only via
            // the in-body once expanded, so be conservative and scan all kids.
            for (auto* k : f->kids) unguarded_vars(k, out);
            return;
        default:
            for (auto* k : f->kids) unguarded_vars(k, out);
            return;
    }
}

void collect_guards(const Formula* f, GuardCtx& ctx) {
    if (f->kind == Kind::Let) {
        for (std::size_t i = 0; i < f->binding_count(); ++i) {
            std::set<std::string> direct;
            unguarded_vars(f->kids[i], direct);
            for (auto& v : direct) ctx.edges[f->binders[i]].insert(v);
        }
    }
    for (auto* k : f->kids) collect_guards(k, ctx);
}

bool has_cycle(const std::map<std::string, std::set<std::string>>& edges) {
    std::map<std::string, int> state; // 0 unseen, 1 in stack, 2 done
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
        int& s = state[v];
        if (s == 1) return true;
        if (s == 2) return false;
        s = 1;
        auto it = edges.find(v);
        if (it != edges.end())
            for (auto& w : it->second)
                if (dfs(w)) return true;
        state[v] = 2;
        return false;
    };
    for (auto& [v, _] : edges)
        if (dfs(v)) return true;
    return false;
}

} // namespace

void validate_recursion(const Formula* f) {
    auto free = free_variables(f);
    if (!free.empty())
        throw UnboundVariable("unbound variable $" + display_of(free.front()));
    check_positive(f, false, {});
    GuardCtx ctx;
    collect_guards(f, ctx);
    if (has_cycle(ctx.edges))
        throw Error("unguarded recursion: a bound variable reaches itself with no modality");
}

} // namespace treelogic
