#include "treelogic/model_check.hpp"

#include "treelogic/cycle.hpp"
#include "treelogic/errors.hpp"

#include <cassert>
#include <map>

namespace treelogic {

TreeIndex::TreeIndex(const BinaryNode* root) {
    // Preorder walk; the empty tree yields an empty index.
    std::vector<const BinaryNode*> stack;
    if (root) stack.push_back(root);
    while (!stack.empty()) {
        const BinaryNode* n = stack.back();
        stack.pop_back();
        index_of.emplace(n, static_cast<int>(nodes.size()));
        nodes.push_back(n);
        if (n->second) stack.push_back(n->second.get());
        if (n->first) stack.push_back(n->first.get());
    }
    std::size_t sz = nodes.size();
    first_child.assign(sz, -1);
    second_child.assign(sz, -1);
    parent1.assign(sz, -1);
    parent2.assign(sz, -1);
    for (std::size_t i = 0; i < sz; ++i) {
        const BinaryNode* n = nodes[i];
        if (n->first) {
            int c = index_of.at(n->first.get());
            first_child[i] = c;
            parent1[static_cast<std::size_t>(c)] = static_cast<int>(i);
        }
        if (n->second) {
            int c = index_of.at(n->second.get());
            second_child[i] = c;
            parent2[static_cast<std::size_t>(c)] = static_cast<int>(i);
        }
    }
}

namespace {

struct Evaluator {
    const TreeIndex& idx;
    // Fixpoint variable environment.
    std::map<std::string, Bitvec> env;

    Bitvec all() const {
        Bitvec b(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) b.set(i);
        return b;
    }

    Bitvec eval(const Formula* f) {
        std::size_t sz = idx.size();
        Bitvec out(sz);
        switch (f->kind) {
            case Kind::True: return all();
            case Kind::False: return out;
            case Kind::Element:
                for (std::size_t i = 0; i < sz; ++i)
                    if (idx.nodes[i]->label == f->text) out.set(i);
                return out;
            case Kind::Attribute:
                for (std::size_t i = 0; i < sz; ++i)
                    if (idx.nodes[i]->attributes.count(f->text)) out.set(i);
                return out;
            case Kind::Prop:
                if (f->text == "_context") {
                    for (std::size_t i = 0; i < sz; ++i)
                        if (idx.nodes[i]->mark_context) out.set(i);
                }
                // other free propositions hold nowhere on a concrete tree
                return out;
            case Kind::Context:
                for (std::size_t i = 0; i < sz; ++i)
                    if (idx.nodes[i]->mark_context) out.set(i);
                return out;
            case Kind::Var: {
                auto it = env.find(f->text);
                if (it == env.end()) throw UnboundVariable("unbound $" + f->display_name());
                return it->second;
            }
            case Kind::Or: {
                out = eval(f->kids[0]);
                out |= eval(f->kids[1]);
                return out;
            }
            case Kind::And: {
                out = eval(f->kids[0]);
                out &= eval(f->kids[1]);
                return out;
            }
            case Kind::Implies: {
                Bitvec a = eval(f->kids[0]), b = eval(f->kids[1]);
                for (std::size_t i = 0; i < sz; ++i)
                    if (!a.get(i) || b.get(i)) out.set(i);
                return out;
            }
            case Kind::Equiv: {
                Bitvec a = eval(f->kids[0]), b = eval(f->kids[1]);
                for (std::size_t i = 0; i < sz; ++i)
                    if (a.get(i) == b.get(i)) out.set(i);
                return out;
            }
            case Kind::Not: {
                Bitvec a = eval(f->kids[0]);
                for (std::size_t i = 0; i < sz; ++i)
                    if (!a.get(i)) out.set(i);
                return out;
            }
            case Kind::Modal: {
                Bitvec a = eval(f->kids[0]);
                for (std::size_t i = 0; i < sz; ++i) {
                    int m = -1;
                    switch (f->prog) {
                        case Prog::FirstChild: m = idx.first_child[i]; break;
                        case Prog::NextSibling: m = idx.second_child[i]; break;
                        case Prog::Parent: m = idx.parent1[i]; break;
                        case Prog::PrevSibling: m = idx.parent2[i]; break;
                    }
                    if (m >= 0 && a.get(static_cast<std::size_t>(m))) out.set(i);
                }
                return out;
            }
            case Kind::Let: {
                // Least fixpoint by simultaneous iteration from the bottom.
                // Shadowed bindings are saved and restored.
                std::map<std::string, Bitvec> saved;
                for (auto& b : f->binders) {
                    auto it = env.find(b);
                    if (it != env.end()) saved.emplace(b, it->second);
                    env[b] = Bitvec(sz);
                }
                std::size_t budget = f->binding_count() * sz + 2;
                bool changed = true;
                while (changed) {
                    if (budget-- == 0)
                        throw Error("fixpoint iteration did not converge (non-monotone body?)");
                    changed = false;
                    for (std::size_t i = 0; i < f->binding_count(); ++i) {
                        Bitvec next = eval(f->kids[i]);
                        Bitvec& cur = env[f->binders[i]];
                        if (next != cur) {
                            cur = next;
                            changed = true;
                        }
                    }
                }
                Bitvec res = eval(f->let_body());
                for (auto& b : f->binders) env.erase(b);
                for (auto& [b, v] : saved) env.emplace(b, std::move(v));
                return res;
            }
            case Kind::Call:
            case Kind::Str:
                throw UnexpandedPredicate("predicate call reached the model checker");
        }
        return out;
    }
};

} // namespace

Bitvec eval_nodes(const Formula* f, const TreeIndex& idx) {
    Evaluator ev{idx};
    return ev.eval(f);
}

bool model_check(const Formula* f, const BinaryNode* tree, const BinaryNode* node) {
    CycleReport r = cycle_check(f);
    if (!r.ok)
        throw CycleError("formula is not cycle-free: " + r.violations.front().variable);
    TreeIndex idx(tree);
    if (!node) return false;
    Bitvec sel = eval_nodes(f, idx);
    auto it = idx.index_of.find(node);
    assert(it != idx.index_of.end());
    return sel.get(static_cast<std::size_t>(it->second));
}

bool satisfied_somewhere(const Formula* f, const BinaryNode* tree) {
    TreeIndex idx(tree);
    if (idx.size() == 0) return false;
    return eval_nodes(f, idx).any();
}

} // namespace treelogic
