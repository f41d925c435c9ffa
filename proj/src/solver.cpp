#include "treelogic/solver.hpp"

#include "treelogic/cycle.hpp"
#include "treelogic/errors.hpp"
#include "treelogic/model_check.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace treelogic {

const char* const kOtherLabel = "_other";

const Formula* wrap_existential(FormulaArena& a, const Formula* goal_nnf) {
    std::string x = a.fresh_var("X");
    const Formula* below =
        a.or_(a.modal(Prog::FirstChild, a.var(x)), a.modal(Prog::NextSibling, a.var(x)));
    return a.let({{x, a.or_(goal_nnf, below)}}, a.var(x));
}

Analysis analyze(FormulaArena& a, const Formula* goal) {
    using clock = std::chrono::steady_clock;
    Analysis an;
    an.goal = goal;
    an.goal_nnf = to_nnf(a, goal);
    an.wrapped = wrap_existential(a, an.goal_nnf.f);

    auto t0 = clock::now();
    an.closure = compute_closure(a, NnfFormula{an.wrapped});
    auto t1 = clock::now();
    an.lean = compute_lean(a, an.closure);
    auto t2 = clock::now();
    an.ms_closure = std::chrono::duration<double, std::milli>(t1 - t0).count();
    an.ms_lean = std::chrono::duration<double, std::milli>(t2 - t1).count();
    return an;
}

namespace {

constexpr int kD1 = 0; // program 1
constexpr int kD2 = 1; // program 2
constexpr int kB1 = 2; // program -1
constexpr int kB2 = 3; // program -2

// A node type plus the child types that justified it.
struct TypeRec {
    Bitvec bits;
    int32_t just1 = -1;
    int32_t just2 = -1;
};

struct Engine {
    const Closure& closure;
    const Lean& lean;
    const SolverOptions& opts;

    std::vector<TypeRec> types;
    std::unordered_map<Bitvec, int32_t, BitvecHash> type_index;

    // Child signatures per forward direction: what a parent sees of a child.
    // Key layout: [converse-back-eventuality bits][forward-satisfaction bits].
    std::vector<Bitvec> sig_keys[2];
    std::vector<int32_t> sig_rep[2]; // representative (first) type per signature
    std::unordered_map<Bitvec, int32_t, BitvecHash> sig_index[2];

    std::atomic<bool> timed_out{false};
    std::chrono::steady_clock::time_point deadline;

    explicit Engine(const Closure& c, const Lean& l, const SolverOptions& o)
        : closure(c), lean(l), opts(o) {}

    int back_slot(int dir) const { return dir == kD1 ? kB1 : kB2; }

    Bitvec signature(int dir, const Bitvec& bits) const {
        const auto& back = lean.evs[back_slot(dir)];
        const auto& fwd = lean.evs[dir];
        Bitvec key(back.size() + fwd.size());
        for (std::size_t k = 0; k < back.size(); ++k)
            if (bits.get(back[k].member)) key.set(k);
        for (std::size_t k = 0; k < fwd.size(); ++k)
            if (entails(closure, lean, bits, fwd[k].operand)) key.set(back.size() + k);
        return key;
    }

    // Candidate node types for a pair of child signatures (-1 meaning no
    // child on that side). Forward bits are copied from the signatures; the
    // child's converse eventualities induce entailment constraints on the
    // candidate; the remaining free bits (element name, attributes and other
    // propositions, own back eventualities per parent-edge kind) are
    // enumerated false-first with three-valued pruning.
    std::vector<Bitvec> candidates(int s1, int s2) const {
        std::vector<Bitvec> out;
        std::size_t n = lean.size();
        Bitvec bits(n), known(n);

        struct Constraint {
            const Formula* operand;
            bool required;
        };
        std::vector<Constraint> constraints;

        auto install_dir = [&](int dir, int sig) {
            const auto& back = lean.evs[back_slot(dir)];
            const auto& fwd = lean.evs[dir];
            for (std::size_t k = 0; k < fwd.size(); ++k) {
                known.set(fwd[k].member);
                if (sig >= 0) bits.set(fwd[k].member, sig_keys[dir][sig].get(back.size() + k));
            }
            if (sig >= 0)
                for (std::size_t k = 0; k < back.size(); ++k)
                    constraints.push_back(
                        {back[k].operand, sig_keys[dir][sig].get(k)});
        };
        install_dir(kD1, s1);
        install_dir(kD2, s2);

        auto check = [&]() {
            for (auto& c : constraints) {
                Tri t = entails3(closure, lean, bits, known, c.operand);
                if (t != Tri::Unknown && (t == Tri::True) != c.required) return false;
            }
            return true;
        };

        // Free positions common to every parent-edge kind.
        std::vector<std::size_t> free_common(lean.flex_atoms.begin(), lean.flex_atoms.end());

        std::function<void(const std::vector<std::size_t>&, std::size_t)> assign =
            [&](const std::vector<std::size_t>& free, std::size_t pos) {
                if (pos == free.size()) {
                    out.push_back(bits);
                    return;
                }
                std::size_t m = free[pos];
                for (bool v : {false, true}) {
                    bits.set(m, v);
                    known.set(m);
                    if (check()) assign(free, pos + 1);
                    bits.set(m, false);
                    known.set(m, false);
                }
            };

        auto enumerate_elements = [&](const std::vector<std::size_t>& free) {
            // exactly one element name, or none (a label outside the alphabet)
            for (auto m : lean.element_atoms) known.set(m);
            for (std::size_t choice = 0; choice <= lean.element_atoms.size(); ++choice) {
                bool other = choice == lean.element_atoms.size();
                if (!other) bits.set(lean.element_atoms[choice]);
                if (check()) assign(free, 0);
                if (!other) bits.set(lean.element_atoms[choice], false);
            }
            for (auto m : lean.element_atoms) known.set(m, false);
        };

        // Parent-edge kind: none (rootable), via 1, or via 2.
        for (int pk = 0; pk < 3; ++pk) {
            const auto& b1 = lean.evs[kB1];
            const auto& b2 = lean.evs[kB2];
            for (auto& e : b1) known.set(e.member);
            for (auto& e : b2) known.set(e.member);

            std::vector<std::size_t> free = free_common;
            if (pk == 1) {
                bits.set(lean.modal_true[kB1]);
                for (auto& e : b1)
                    if (e.member != lean.modal_true[kB1]) {
                        known.set(e.member, false);
                        free.push_back(e.member);
                    }
            } else if (pk == 2) {
                bits.set(lean.modal_true[kB2]);
                for (auto& e : b2)
                    if (e.member != lean.modal_true[kB2]) {
                        known.set(e.member, false);
                        free.push_back(e.member);
                    }
            }
            if (check()) enumerate_elements(free);

            for (auto& e : b1) {
                bits.set(e.member, false);
                known.set(e.member, false);
            }
            for (auto& e : b2) {
                bits.set(e.member, false);
                known.set(e.member, false);
            }
        }
        return out;
    }

    bool rootable(const Bitvec& bits) const {
        return !bits.get(lean.modal_true[kB1]) && !bits.get(lean.modal_true[kB2]);
    }
};

struct Pair {
    int32_t s1;
    int32_t s2;
};

} // namespace

SolverResult run_fixpoint(const Analysis& an, const SolverOptions& opts) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();

    Engine eng(an.closure, an.lean, opts);
    eng.deadline = t0 + std::chrono::duration_cast<clock::duration>(
                            std::chrono::duration<double>(opts.timeout_seconds));

    SolverResult res;
    res.stats.lean_size = an.lean.size();
    res.stats.eventualities = an.lean.ev_count();
    res.stats.symbols = an.lean.atom_count;

    std::vector<Pair> pairs{{-1, -1}};
    int32_t sat_type = -1;

    while (!pairs.empty() && sat_type < 0) {
        if (clock::now() > eng.deadline) {
            res.verdict = Verdict::Timeout;
            res.stats.iterations++;
            res.stats.types = eng.types.size();
            res.stats.ms_fixpoint =
                std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            return res;
        }

        // Evaluate all pairs of this round; results are merged in pair order
        // so the outcome does not depend on scheduling.
        std::vector<std::vector<Bitvec>> found(pairs.size());
#ifdef _OPENMP
        if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pairs.size()); ++i) {
                if (eng.timed_out.load(std::memory_order_relaxed)) continue;
                found[static_cast<std::size_t>(i)] =
                    eng.candidates(pairs[static_cast<std::size_t>(i)].s1,
                                   pairs[static_cast<std::size_t>(i)].s2);
                if ((i & 63) == 0 && clock::now() > eng.deadline)
                    eng.timed_out.store(true, std::memory_order_relaxed);
            }
        } else
#endif
        {
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                found[i] = eng.candidates(pairs[i].s1, pairs[i].s2);
                if ((i & 63) == 0 && clock::now() > eng.deadline) {
                    eng.timed_out.store(true);
                    break;
                }
            }
        }
        if (eng.timed_out.load()) {
            res.verdict = Verdict::Timeout;
            res.stats.iterations++;
            res.stats.types = eng.types.size();
            res.stats.ms_fixpoint =
                std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            return res;
        }

        // Merge: append genuinely new types, justification = the pair's
        // representative children; check satisfaction as types arrive.
        std::size_t first_new = eng.types.size();
        for (std::size_t i = 0; i < pairs.size() && sat_type < 0; ++i) {
            int32_t j1 = pairs[i].s1 < 0 ? -1 : eng.sig_rep[0][pairs[i].s1];
            int32_t j2 = pairs[i].s2 < 0 ? -1 : eng.sig_rep[1][pairs[i].s2];
            for (auto& bits : found[i]) {
                if (eng.type_index.count(bits)) continue;
                int32_t idx = static_cast<int32_t>(eng.types.size());
                eng.type_index.emplace(bits, idx);
                eng.types.push_back({bits, j1, j2});
                if (eng.rootable(bits) && entails(an.closure, an.lean, bits, an.wrapped)) {
                    sat_type = idx;
                    break;
                }
            }
        }

        // Register signatures of the new types; new signatures seed the next
        // round's pairs.
        std::size_t new_start[2] = {eng.sig_keys[0].size(), eng.sig_keys[1].size()};
        for (std::size_t t = first_new; t < eng.types.size(); ++t) {
            for (int dir = 0; dir < 2; ++dir) {
                Bitvec key = eng.signature(dir, eng.types[t].bits);
                auto it = eng.sig_index[dir].find(key);
                if (it == eng.sig_index[dir].end()) {
                    eng.sig_index[dir].emplace(key, static_cast<int32_t>(eng.sig_keys[dir].size()));
                    eng.sig_keys[dir].push_back(key);
                    eng.sig_rep[dir].push_back(static_cast<int32_t>(t));
                }
            }
        }

        res.stats.iterations++;
        if (opts.on_iteration) opts.on_iteration(res.stats.iterations);
        if (sat_type >= 0) break;

        pairs.clear();
        std::size_t all1 = eng.sig_keys[0].size();
        std::size_t all2 = eng.sig_keys[1].size();
        // (new left sigs) x (anything) plus (old left or none) x (new right sigs)
        for (std::size_t s1 = new_start[0]; s1 < all1; ++s1) {
            pairs.push_back({static_cast<int32_t>(s1), -1});
            for (std::size_t s2 = 0; s2 < all2; ++s2)
                pairs.push_back({static_cast<int32_t>(s1), static_cast<int32_t>(s2)});
        }
        for (std::size_t s2 = new_start[1]; s2 < all2; ++s2) {
            pairs.push_back({-1, static_cast<int32_t>(s2)});
            for (std::size_t s1 = 0; s1 < new_start[0]; ++s1)
                pairs.push_back({static_cast<int32_t>(s1), static_cast<int32_t>(s2)});
        }
    }

    res.stats.types = eng.types.size();
    res.stats.ms_fixpoint = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    if (sat_type < 0) {
        res.verdict = Verdict::Unsat;
        return res;
    }
    res.verdict = Verdict::Sat;

    // Witness: follow justification links. The same type always yields the
    // same subtree, so memoize and clone.
    std::size_t ctx_member = an.lean.size();
    for (auto m : an.lean.flex_atoms)
        if (an.lean.members[m]->kind == Kind::Context) ctx_member = m;

    std::unordered_map<int32_t, BinaryTree> memo;
    std::function<BinaryTree(int32_t)> build = [&](int32_t t) -> BinaryTree {
        auto it = memo.find(t);
        if (it != memo.end()) return clone(it->second.get());
        const TypeRec& rec = eng.types[static_cast<std::size_t>(t)];
        auto node = std::make_unique<BinaryNode>();
        node->label = kOtherLabel;
        for (auto m : an.lean.element_atoms)
            if (rec.bits.get(m)) node->label = an.lean.members[m]->text;
        for (auto m : an.lean.flex_atoms)
            if (rec.bits.get(m) && an.lean.members[m]->kind == Kind::Attribute)
                node->attributes.insert(an.lean.members[m]->text);
        if (ctx_member < an.lean.size() && rec.bits.get(ctx_member)) node->mark_context = true;
        if (rec.just1 >= 0) node->first = build(rec.just1);
        if (rec.just2 >= 0) node->second = build(rec.just2);
        BinaryTree result = clone(node.get());
        memo.emplace(t, std::move(node));
        return result;
    };
    res.witness = build(sat_type);

    // Context/target annotations from the marking formulas.
    {
        TreeIndex idx(res.witness.get());
        for (auto* cf : opts.context_marks) {
            Bitvec sel = eval_nodes(cf, idx);
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (sel.get(i)) const_cast<BinaryNode*>(idx.nodes[i])->mark_context = true;
        }
        const Formula* target = opts.target_mark ? opts.target_mark : an.goal;
        Bitvec sel = eval_nodes(target, idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (sel.get(i)) const_cast<BinaryNode*>(idx.nodes[i])->mark_target = true;
    }
    return res;
}

SolverResult solve(FormulaArena& a, const Formula* goal, const SolverOptions& opts) {
    Analysis an = analyze(a, goal);
    return run_fixpoint(an, opts);
}

} // namespace treelogic
