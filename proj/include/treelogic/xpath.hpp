#ifndef TREELOGIC_XPATH_HPP
#define TREELOGIC_XPATH_HPP

#include "treelogic/formula.hpp"

#include <memory>
#include <string>
#include <vector>

namespace treelogic {

enum class Axis {
    Self,
    Child,
    Parent,
    Descendant,
    Ancestor,
    DescendantOrSelf,
    AncestorOrSelf,
    FollowingSibling,
    PrecedingSibling,
    Following,
    Preceding,
};

const char* axis_name(Axis a);

// Node test: a label or *.
struct NodeTest {
    bool any = false;
    std::string label;

    bool operator==(const NodeTest& o) const { return any == o.any && label == o.label; }
};

struct PathExpr;

// Qualifier expression. Position()/count() forms are parse-time sugar and are
// rewritten away by desugar() before compilation or evaluation.
struct Qualifier {
    enum class Kind {
        And,
        Or,
        Not,
        Path,     // path
        Attr,     // @nt
        PathAttr, // path/@nt
        PositionEq,   // position() = k   (k >= 1; k = 0 encodes last())
        CountEq0,     // count(path) = 0
        CountGt0,     // count(path) > 0
        CountNtGt,    // count(nt) > k, k > 0
    };
    Kind kind;
    std::unique_ptr<Qualifier> lhs, rhs; // And/Or; Not uses lhs
    std::unique_ptr<PathExpr> path;      // Path/PathAttr/CountEq0/CountGt0
    std::string attr;                    // Attr/PathAttr
    int k = 0;                           // PositionEq/CountNtGt
    NodeTest nt;                         // CountNtGt

    bool operator==(const Qualifier& o) const;
};

struct Step {
    Axis axis = Axis::Child;
    NodeTest test;
    std::vector<std::unique_ptr<Qualifier>> qualifiers;

    bool operator==(const Step& o) const;
};

struct PathExpr {
    std::vector<Step> steps;

    bool operator==(const PathExpr& o) const { return steps == o.steps; }
};

struct XPathQuery {
    enum class Kind { Absolute, Relative, Union, Intersection };
    Kind kind;
    PathExpr path;                        // Absolute/Relative
    std::unique_ptr<XPathQuery> lhs, rhs; // Union/Intersection

    bool operator==(const XPathQuery& o) const;
};

XPathQuery parse_xpath(const std::string& text);

// Applies the position()/count() rewritings exhaustively; the output contains
// no sugared forms. Idempotent.
XPathQuery desugar(const XPathQuery& q);
bool has_sugar(const XPathQuery& q);

// Compiles a sugar-free query into a closed cycle-free formula satisfied at
// exactly the nodes the query selects when evaluated from nodes satisfying
// `context`, under the first-child/next-sibling encoding.
const Formula* compile_query(FormulaArena& a, const XPathQuery& q, const Formula* context);

std::string to_string(const XPathQuery& q);

} // namespace treelogic

#endif
