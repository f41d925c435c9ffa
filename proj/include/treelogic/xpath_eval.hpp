#ifndef TREELOGIC_XPATH_EVAL_HPP
#define TREELOGIC_XPATH_EVAL_HPP

#include "treelogic/tree.hpp"
#include "treelogic/xpath.hpp"

#include <set>
#include <vector>

namespace treelogic {

// Reference XPath evaluator over unranked trees, kept independent of the
// logic compilation so the two paths can check each other. Nodes are
// identified by document order (preorder), 0 = root.
struct DocIndex {
    std::vector<const UnrankedTree*> nodes; // document order
    std::vector<int> parent;                // -1 for the root
    std::vector<std::vector<int>> children;

    explicit DocIndex(const UnrankedTree& root);
    std::size_t size() const { return nodes.size(); }
};

// Selected node ids for a sugar-free query evaluated from the given context
// node set.
std::set<int> eval_xpath(const XPathQuery& q, const DocIndex& doc, const std::set<int>& context);

} // namespace treelogic

#endif
