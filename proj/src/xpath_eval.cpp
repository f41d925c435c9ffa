#include "treelogic/xpath_eval.hpp"

#include "treelogic/errors.hpp"

#include <algorithm>
#include <functional>

namespace treelogic {

DocIndex::DocIndex(const UnrankedTree& root) {
    std::function<void(const UnrankedTree&, int)> walk = [&](const UnrankedTree& n, int par) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back(&n);
        parent.push_back(par);
        children.emplace_back();
        if (par >= 0) children[static_cast<std::size_t>(par)].push_back(id);
        for (auto& c : n.children) walk(c, id);
    };
    walk(root, -1);
}

namespace {

using NodeSet = std::set<int>;

int child_position(const DocIndex& doc, int n) {
    int p = doc.parent[static_cast<std::size_t>(n)];
    if (p < 0) return 0;
    const auto& sibs = doc.children[static_cast<std::size_t>(p)];
    return static_cast<int>(std::find(sibs.begin(), sibs.end(), n) - sibs.begin());
}

void descendants_of(const DocIndex& doc, int n, NodeSet& out) {
    for (int c : doc.children[static_cast<std::size_t>(n)]) {
        out.insert(c);
        descendants_of(doc, c, out);
    }
}

NodeSet axis_nodes(const DocIndex& doc, Axis ax, int n) {
    NodeSet out;
    auto sibs_after = [&](int m, bool after) {
        int p = doc.parent[static_cast<std::size_t>(m)];
        if (p < 0) return;
        const auto& sibs = doc.children[static_cast<std::size_t>(p)];
        int k = child_position(doc, m);
        if (after)
            for (std::size_t i = static_cast<std::size_t>(k) + 1; i < sibs.size(); ++i)
                out.insert(sibs[i]);
        else
            for (int i = 0; i < k; ++i) out.insert(sibs[static_cast<std::size_t>(i)]);
    };
    switch (ax) {
        case Axis::Self: out.insert(n); break;
        case Axis::Child:
            for (int c : doc.children[static_cast<std::size_t>(n)]) out.insert(c);
            break;
        case Axis::Parent:
            if (doc.parent[static_cast<std::size_t>(n)] >= 0)
                out.insert(doc.parent[static_cast<std::size_t>(n)]);
            break;
        case Axis::Descendant: descendants_of(doc, n, out); break;
        case Axis::Ancestor:
            for (int p = doc.parent[static_cast<std::size_t>(n)]; p >= 0;
                 p = doc.parent[static_cast<std::size_t>(p)])
                out.insert(p);
            break;
        case Axis::DescendantOrSelf:
            out.insert(n);
            descendants_of(doc, n, out);
            break;
        case Axis::AncestorOrSelf:
            out.insert(n);
            for (int p = doc.parent[static_cast<std::size_t>(n)]; p >= 0;
                 p = doc.parent[static_cast<std::size_t>(p)])
                out.insert(p);
            break;
        case Axis::FollowingSibling: sibs_after(n, true); break;
        case Axis::PrecedingSibling: sibs_after(n, false); break;
        case Axis::Following: {
            // Document order after n, excluding descendants.
            NodeSet desc;
            descendants_of(doc, n, desc);
            for (int m = n + 1; m < static_cast<int>(doc.size()); ++m)
                if (!desc.count(m)) out.insert(m);
            break;
        }
        case Axis::Preceding: {
            NodeSet anc;
            for (int p = doc.parent[static_cast<std::size_t>(n)]; p >= 0;
                 p = doc.parent[static_cast<std::size_t>(p)])
                anc.insert(p);
            for (int m = 0; m < n; ++m)
                if (!anc.count(m)) out.insert(m);
            break;
        }
    }
    return out;
}

bool test_matches(const NodeTest& t, const DocIndex& doc, int n) {
    return t.any || doc.nodes[static_cast<std::size_t>(n)]->label == t.label;
}

bool eval_qualifier(const Qualifier& q, const DocIndex& doc, int n);

NodeSet eval_path(const PathExpr& p, const DocIndex& doc, const NodeSet& context) {
    NodeSet cur = context;
    for (auto& s : p.steps) {
        NodeSet next;
        for (int n : cur)
            for (int m : axis_nodes(doc, s.axis, n))
                if (test_matches(s.test, doc, m)) next.insert(m);
        // qualifiers filter the selected nodes
        NodeSet kept;
        for (int m : next) {
            bool ok = true;
            for (auto& q : s.qualifiers)
                if (!eval_qualifier(*q, doc, m)) {
                    ok = false;
                    break;
                }
            if (ok) kept.insert(m);
        }
        cur = std::move(kept);
    }
    return cur;
}

bool eval_qualifier(const Qualifier& q, const DocIndex& doc, int n) {
    switch (q.kind) {
        case Qualifier::Kind::And: return eval_qualifier(*q.lhs, doc, n) && eval_qualifier(*q.rhs, doc, n);
        case Qualifier::Kind::Or: return eval_qualifier(*q.lhs, doc, n) || eval_qualifier(*q.rhs, doc, n);
        case Qualifier::Kind::Not: return !eval_qualifier(*q.lhs, doc, n);
        case Qualifier::Kind::Path: return !eval_path(*q.path, doc, {n}).empty();
        case Qualifier::Kind::PathAttr: {
            for (int m : eval_path(*q.path, doc, {n}))
                if (doc.nodes[static_cast<std::size_t>(m)]->attributes.count(q.attr)) return true;
            return false;
        }
        case Qualifier::Kind::Attr:
            return doc.nodes[static_cast<std::size_t>(n)]->attributes.count(q.attr) != 0;
        default:
            throw Error("sugared qualifier reached the reference evaluator; desugar first");
    }
}

} // namespace

std::set<int> eval_xpath(const XPathQuery& q, const DocIndex& doc, const std::set<int>& context) {
    switch (q.kind) {
        case XPathQuery::Kind::Absolute: {
            // Steps start from the virtual document node, whose only child is
            // the root.
            if (q.path.steps.empty()) return {};
            const Step& s0 = q.path.steps.front();
            NodeSet seed;
            switch (s0.axis) {
                case Axis::Child:
                    if (test_matches(s0.test, doc, 0)) seed.insert(0);
                    break;
                case Axis::Descendant:
                case Axis::DescendantOrSelf:
                    for (int m = 0; m < static_cast<int>(doc.size()); ++m)
                        if (test_matches(s0.test, doc, m)) seed.insert(m);
                    break;
                default:
                    return {};
            }
            NodeSet kept;
            for (int m : seed) {
                bool ok = true;
                for (auto& ql : s0.qualifiers)
                    if (!eval_qualifier(*ql, doc, m)) {
                        ok = false;
                        break;
                    }
                if (ok) kept.insert(m);
            }
            PathExpr rest;
            for (std::size_t i = 1; i < q.path.steps.size(); ++i) {
                Step s;
                s.axis = q.path.steps[i].axis;
                s.test = q.path.steps[i].test;
                for (auto& ql : q.path.steps[i].qualifiers) {
                    // share qualifier subtrees by re-evaluating from the AST
                }
                rest.steps.push_back(std::move(s));
            }
            // Evaluate remaining steps directly on the original AST to keep
            // qualifiers; simplest is a recursive call shape:
            NodeSet cur = kept;
            for (std::size_t i = 1; i < q.path.steps.size(); ++i) {
                const Step& s = q.path.steps[i];
                NodeSet next;
                for (int n : cur)
                    for (int m : axis_nodes(doc, s.axis, n))
                        if (test_matches(s.test, doc, m)) next.insert(m);
                NodeSet kept2;
                for (int m : next) {
                    bool ok = true;
                    for (auto& ql : s.qualifiers)
                        if (!eval_qualifier(*ql, doc, m)) {
                            ok = false;
                            break;
                        }
                    if (ok) kept2.insert(m);
                }
                cur = std::move(kept2);
            }
            return cur;
        }
        case XPathQuery::Kind::Relative: return eval_path(q.path, doc, context);
        case XPathQuery::Kind::Union: {
            NodeSet l = eval_xpath(*q.lhs, doc, context);
            NodeSet r = eval_xpath(*q.rhs, doc, context);
            l.insert(r.begin(), r.end());
            return l;
        }
        case XPathQuery::Kind::Intersection: {
            NodeSet l = eval_xpath(*q.lhs, doc, context);
            NodeSet r = eval_xpath(*q.rhs, doc, context);
            NodeSet out;
            for (int n : l)
                if (r.count(n)) out.insert(n);
            return out;
        }
    }
    return {};
}

} // namespace treelogic
