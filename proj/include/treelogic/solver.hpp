#ifndef TREELOGIC_SOLVER_HPP
#define TREELOGIC_SOLVER_HPP

#include "treelogic/closure.hpp"
#include "treelogic/formula.hpp"
#include "treelogic/nnf.hpp"
#include "treelogic/tree.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace treelogic {

enum class Verdict { Sat, Unsat, Timeout };

struct SolverStats {
    std::size_t lean_size = 0;
    std::size_t eventualities = 0;
    std::size_t symbols = 0;
    std::size_t iterations = 0;
    std::size_t types = 0;
    double ms_closure = 0;
    double ms_lean = 0;
    double ms_fixpoint = 0;
};

struct SolverResult {
    Verdict verdict = Verdict::Unsat;
    BinaryTree witness; // non-null iff Sat
    SolverStats stats;
};

struct SolverOptions {
    bool parallel = true;          // OpenMP candidate evaluation when available
    double timeout_seconds = 60.0; // wall clock; Timeout verdict when exceeded
    // Witness annotation: nodes satisfying any of these formulas receive the
    // context mark; nodes satisfying target_mark receive the target mark.
    std::vector<const Formula*> context_marks;
    const Formula* target_mark = nullptr;
    std::function<void(std::size_t)> on_iteration; // called once per fixpoint round
};

// Preprocessing shared by the solver and the CLI trace: NNF conversion, the
// existential wrapper mu X. f | <1>X | <2>X (satisfiability means the goal
// holds at SOME node of SOME finite tree), closure and Lean.
struct Analysis {
    const Formula* goal = nullptr;
    NnfFormula goal_nnf;
    const Formula* wrapped = nullptr;
    Closure closure;
    Lean lean;
    double ms_closure = 0;
    double ms_lean = 0;
};

const Formula* wrap_existential(FormulaArena& a, const Formula* goal_nnf);

Analysis analyze(FormulaArena& a, const Formula* goal);

// Bottom-up least fixpoint over node types assembled from justifying child
// pairs (leaf seeds first). Deterministic: identical inputs yield identical
// verdicts and witnesses regardless of thread count.
SolverResult run_fixpoint(const Analysis& an, const SolverOptions& opts = {});

SolverResult solve(FormulaArena& a, const Formula* goal, const SolverOptions& opts = {});

// Label used for witness nodes whose type carries no element name from the
// formula's alphabet.
extern const char* const kOtherLabel;

} // namespace treelogic

#endif
