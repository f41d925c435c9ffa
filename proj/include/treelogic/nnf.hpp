#ifndef TREELOGIC_NNF_HPP
#define TREELOGIC_NNF_HPP

#include "treelogic/formula.hpp"

namespace treelogic {

// A formula in negation normal form: no Implies/Equiv/Call, negation only on
// name atoms, #, and <p>T.
struct NnfFormula {
    const Formula* f = nullptr;
};

// Semantic negation. The result's models are exactly the non-models of f.
// Fixpoint binders are dualized (cycle-freeness keeps the dual inside the
// alternation-free fragment). Throws CycleError when f is not cycle-free and
// UnexpandedPredicate when predicate calls remain.
const Formula* negate(FormulaArena& a, const Formula* f);

// Negation normal form; Implies(a,b) becomes ~a|b, Equiv the conjunction of
// both implications.
NnfFormula to_nnf(FormulaArena& a, const Formula* f);

bool is_nnf(const Formula* f);

} // namespace treelogic

#endif
