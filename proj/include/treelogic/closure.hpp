#ifndef TREELOGIC_CLOSURE_HPP
#define TREELOGIC_CLOSURE_HPP

#include "treelogic/bitvec.hpp"
#include "treelogic/formula.hpp"
#include "treelogic/nnf.hpp"

#include <unordered_map>
#include <vector>

namespace treelogic {

// Fisher-Ladner closure: the smallest set containing the root formula,
// closed under immediate subformulas and one-step fixpoint unfolding.
// Unfoldings are identified up to the binder (hash-consing), which keeps the
// set finite. Binder nodes are never entered directly; only their expansions
// are, so members never contain free variables.
struct Closure {
    std::vector<const Formula*> formulas; // insertion order
    std::unordered_map<const Formula*, const Formula*> let_expansion;

    bool contains(const Formula* f) const { return member_set.count(f) != 0; }
    std::unordered_map<const Formula*, bool> member_set; // value unused
};

Closure compute_closure(FormulaArena& a, NnfFormula root);

// The Lean: name/proposition atoms of the closure followed by its modal
// formulas, with <1>T, <2>T, <-1>T, <-2>T always present. Member order is
// insertion order and fixes the node-type bit layout.
struct Lean {
    std::vector<const Formula*> members; // atoms first, then eventualities
    std::size_t atom_count = 0;
    std::unordered_map<const Formula*, std::size_t> index;

    struct Ev {
        std::size_t member;     // index into members
        const Formula* operand; // phi of <p>phi
    };
    // Slot order: 1, 2, -1, -2.
    std::vector<Ev> evs[4];
    std::size_t modal_true[4] = {0, 0, 0, 0}; // member index of <p>T per slot

    std::vector<std::size_t> element_atoms; // element-name members
    std::vector<std::size_t> flex_atoms;    // attribute/proposition/# members

    std::size_t size() const { return members.size(); }
    std::size_t ev_count() const { return members.size() - atom_count; }
    bool has(const Formula* f) const { return index.count(f) != 0; }
};

constexpr int prog_slot(Prog p) {
    switch (p) {
        case Prog::FirstChild: return 0;
        case Prog::NextSibling: return 1;
        case Prog::Parent: return 2;
        case Prog::PrevSibling: return 3;
    }
    return 0;
}

Lean compute_lean(FormulaArena& a, const Closure& c);

// Truth of a closure formula at a node whose Lean assignment is `bits`.
// Structural: atoms and modal members are read from the bits, booleans
// recurse, binders are read through one unfolding.
bool entails(const Closure& c, const Lean& lean, const Bitvec& bits, const Formula* f);

// Three-valued variant over a partial assignment; `known` marks decided bits.
enum class Tri : uint8_t { False = 0, True = 1, Unknown = 2 };
Tri entails3(const Closure& c, const Lean& lean, const Bitvec& bits, const Bitvec& known,
             const Formula* f);

} // namespace treelogic

#endif
