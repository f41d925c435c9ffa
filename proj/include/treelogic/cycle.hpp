#ifndef TREELOGIC_CYCLE_HPP
#define TREELOGIC_CYCLE_HPP

#include "treelogic/formula.hpp"

#include <string>
#include <vector>

namespace treelogic {

// Result of the cycle-freeness analysis. A formula is cycle-free when, for
// every bound variable, the set of programs guarding its occurrences (walking
// from each occurrence up to the binder) never contains both a program and
// its converse.
struct CycleReport {
    struct Violation {
        std::string variable; // display name, $-prefixed
        Prog prog;
        Prog conv;
    };
    bool ok = true;
    std::vector<Violation> violations;
};

CycleReport cycle_check(const Formula* f);

// Checks required at solver entry beyond cycle-freeness:
//  - the formula is closed,
//  - every variable occurs positively (under an even number of negations),
//  - recursion is guarded (no variable cycle without an intervening modality).
// Throws Error/UnboundVariable on violation.
void validate_recursion(const Formula* f);

} // namespace treelogic

#endif
