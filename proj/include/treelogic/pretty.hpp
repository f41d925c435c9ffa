#ifndef TREELOGIC_PRETTY_HPP
#define TREELOGIC_PRETTY_HPP

#include "treelogic/formula.hpp"

#include <string>

namespace treelogic {

// Renders a formula in the solver's trace syntax: binary connectives fully
// parenthesized, single-binding fixpoints as "(mu Xk.(...))", multi-binding
// ones as "(let_mu X1=..., ... in Xk)". Variables are renumbered X1, X2, ...
// in depth-first post-order, so output is stable under internal renaming.
std::string pretty_print(const Formula* f);

} // namespace treelogic

#endif
