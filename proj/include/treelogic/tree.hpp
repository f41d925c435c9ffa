#ifndef TREELOGIC_TREE_HPP
#define TREELOGIC_TREE_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace treelogic {

// Unranked document tree: ordered element children, unordered attribute set.
// Marks carry the solver's context/target annotations.
struct UnrankedTree {
    std::string label;
    std::set<std::string> attributes;
    bool mark_context = false;
    bool mark_target = false;
    std::vector<UnrankedTree> children;

    bool operator==(const UnrankedTree& o) const {
        return label == o.label && attributes == o.attributes && mark_context == o.mark_context &&
               mark_target == o.mark_target && children == o.children;
    }
};

// First-child/next-sibling binary form. A null pointer is the empty tree.
struct BinaryNode {
    std::string label;
    std::set<std::string> attributes;
    bool mark_context = false;
    bool mark_target = false;
    std::unique_ptr<BinaryNode> first;
    std::unique_ptr<BinaryNode> second;
};

using BinaryTree = std::unique_ptr<BinaryNode>;

BinaryTree clone(const BinaryNode* t);
bool tree_equal(const BinaryNode* a, const BinaryNode* b);
std::size_t node_count(const BinaryNode* t);
std::size_t node_count(const UnrankedTree& t);

// The encoding f: f(sigma(h), h') = sigma(f(h), f(h')), f(empty) = empty.
// Attributes and marks are copied unchanged.
BinaryTree encode(const std::vector<UnrankedTree>& hedge);

// The inverse mapping f^-1.
std::vector<UnrankedTree> decode(const BinaryNode* t);

// Indented XML. When any mark is present in the tree the root element carries
// xmlns:solver="http://wam.inrialpes.fr/xml" and marked nodes render
// solver:context="true" / solver:target="true". Declared attributes render
// with empty values.
std::string to_xml(const UnrankedTree& t);

// Functional term notation over the binary form, '#' printing the empty
// tree. Inner leaves are compressed to their bare label.
std::string term_print(const BinaryNode* t);

inline std::string term_print(const BinaryTree& t) { return term_print(t.get()); }

} // namespace treelogic

#endif
