#ifndef TREELOGIC_MODEL_CHECK_HPP
#define TREELOGIC_MODEL_CHECK_HPP

#include "treelogic/bitvec.hpp"
#include "treelogic/formula.hpp"
#include "treelogic/tree.hpp"

#include <unordered_map>
#include <vector>

namespace treelogic {

// Preorder index over a binary tree, with parent links for the converse
// modalities.
struct TreeIndex {
    std::vector<const BinaryNode*> nodes;
    std::vector<int> first_child;  // -1 when absent
    std::vector<int> second_child; // -1 when absent
    std::vector<int> parent1;      // node whose first successor is this, -1
    std::vector<int> parent2;      // node whose second successor is this, -1
    std::unordered_map<const BinaryNode*, int> index_of;

    explicit TreeIndex(const BinaryNode* root);
    std::size_t size() const { return nodes.size(); }
};

// Direct semantic evaluation on a finite tree, independent of the
// satisfiability engine. Fixpoints are evaluated as least fixpoints over the
// node-set lattice. Returns the set of nodes where f holds.
Bitvec eval_nodes(const Formula* f, const TreeIndex& idx);

bool model_check(const Formula* f, const BinaryNode* tree, const BinaryNode* node);

// True when some node of the tree satisfies f.
bool satisfied_somewhere(const Formula* f, const BinaryNode* tree);

} // namespace treelogic

#endif
