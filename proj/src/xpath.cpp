#include "treelogic/xpath.hpp"

#include "treelogic/errors.hpp"

#include <cassert>
#include <cctype>
#include <functional>
#include <sstream>

namespace treelogic {

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::Self: return "self";
        case Axis::Child: return "child";
        case Axis::Parent: return "parent";
        case Axis::Descendant: return "descendant";
        case Axis::Ancestor: return "ancestor";
        case Axis::DescendantOrSelf: return "descendant-or-self";
        case Axis::AncestorOrSelf: return "ancestor-or-self";
        case Axis::FollowingSibling: return "following-sibling";
        case Axis::PrecedingSibling: return "preceding-sibling";
        case Axis::Following: return "following";
        case Axis::Preceding: return "preceding";
    }
    return "?";
}

bool Qualifier::operator==(const Qualifier& o) const {
    if (kind != o.kind || attr != o.attr || k != o.k || !(nt == o.nt)) return false;
    auto eq = [](const auto& a, const auto& b) {
        if (!a && !b) return true;
        if (!a || !b) return false;
        return *a == *b;
    };
    return eq(lhs, o.lhs) && eq(rhs, o.rhs) && eq(path, o.path);
}

bool Step::operator==(const Step& o) const {
    if (axis != o.axis || !(test == o.test) || qualifiers.size() != o.qualifiers.size())
        return false;
    for (std::size_t i = 0; i < qualifiers.size(); ++i)
        if (!(*qualifiers[i] == *o.qualifiers[i])) return false;
    return true;
}

bool XPathQuery::operator==(const XPathQuery& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Absolute || kind == Kind::Relative) return path == o.path;
    return *lhs == *o.lhs && *rhs == *o.rhs;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct XPathParser {
    const std::string& src;
    std::size_t pos = 0;

    explicit XPathParser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw XPathSyntaxError(msg, static_cast<int>(pos));
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_word(const char* w) {
        skip_ws();
        std::size_t n = std::string(w).size();
        if (src.compare(pos, n, w) == 0) {
            // keywords must not run into a name character
            char next = pos + n < src.size() ? src[pos + n] : '\0';
            if (!is_name_char(next)) {
                pos += n;
                return true;
            }
        }
        return false;
    }

    bool peek(char c) {
        skip_ws();
        return pos < src.size() && src[pos] == c;
    }

    static bool is_name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    std::string name() {
        skip_ws();
        if (pos >= src.size() || !is_name_start(src[pos])) fail("expected a name");
        std::size_t start = pos;
        while (pos < src.size() && is_name_char(src[pos])) ++pos;
        return src.substr(start, pos - start);
    }

    int number() {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
            fail("expected a number");
        }
        int v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
            v = v * 10 + (src[pos++] - '0');
        return v;
    }

    XPathQuery query() {
        XPathQuery q = primary();
        for (;;) {
            skip_ws();
            if (eat('|')) {
                auto rhs = std::make_unique<XPathQuery>(primary());
                XPathQuery u;
                u.kind = XPathQuery::Kind::Union;
                u.lhs = std::make_unique<XPathQuery>(std::move(q));
                u.rhs = std::move(rhs);
                q = std::move(u);
            } else if (eat('&') || eat_word("intersect")) {
                auto rhs = std::make_unique<XPathQuery>(primary());
                XPathQuery u;
                u.kind = XPathQuery::Kind::Intersection;
                u.lhs = std::make_unique<XPathQuery>(std::move(q));
                u.rhs = std::move(rhs);
                q = std::move(u);
            } else {
                break;
            }
        }
        return q;
    }

    XPathQuery primary() {
        skip_ws();
        XPathQuery q;
        if (eat('/')) {
            q.kind = XPathQuery::Kind::Absolute;
            q.path = path();
        } else {
            q.kind = XPathQuery::Kind::Relative;
            q.path = path();
        }
        return q;
    }

    PathExpr path() {
        PathExpr p;
        p.steps.push_back(step());
        while (true) {
            skip_ws();
            if (pos < src.size() && src[pos] == '/') {
                if (pos + 1 < src.size() && src[pos + 1] == '@')
                    break; // trailing attribute step handled by caller
                ++pos;
                p.steps.push_back(step());
            } else {
                break;
            }
        }
        return p;
    }

    Axis axis_from_name(const std::string& n) {
        for (Axis a :
             {Axis::Self, Axis::Child, Axis::Parent, Axis::Descendant, Axis::Ancestor,
              Axis::DescendantOrSelf, Axis::AncestorOrSelf, Axis::FollowingSibling,
              Axis::PrecedingSibling, Axis::Following, Axis::Preceding})
            if (n == axis_name(a)) return a;
        if (n == "attribute")
            throw UnsupportedAxis("attribute:: cannot be used as a navigation axis");
        fail("unknown axis '" + n + "'");
    }

    NodeTest nodetest() {
        skip_ws();
        NodeTest t;
        if (eat('*')) {
            t.any = true;
            return t;
        }
        t.label = name();
        return t;
    }

    Step step() {
        skip_ws();
        Step s;
        if (pos < src.size() && src[pos] == '@')
            fail("attribute step is only allowed inside qualifiers");
        // axis::nodetest or bare nodetest (child axis)
        std::size_t save = pos;
        if (pos < src.size() && (is_name_start(src[pos]))) {
            std::string n = name();
            skip_ws();
            if (pos + 1 < src.size() && src[pos] == ':' && src[pos + 1] == ':') {
                pos += 2;
                s.axis = axis_from_name(n);
                s.test = nodetest();
            } else {
                pos = save;
                s.axis = Axis::Child;
                s.test = nodetest();
            }
        } else {
            s.axis = Axis::Child;
            s.test = nodetest();
        }
        while (eat('[')) {
            s.qualifiers.push_back(std::make_unique<Qualifier>(qualifier()));
            if (!eat(']')) fail("expected ']'");
        }
        return s;
    }

    Qualifier qualifier() { return qual_or(); }

    Qualifier qual_or() {
        Qualifier q = qual_and();
        while (eat_word("or")) {
            Qualifier r;
            r.kind = Qualifier::Kind::Or;
            r.lhs = std::make_unique<Qualifier>(std::move(q));
            r.rhs = std::make_unique<Qualifier>(qual_and());
            q = std::move(r);
        }
        return q;
    }

    Qualifier qual_and() {
        Qualifier q = qual_atom();
        while (eat_word("and")) {
            Qualifier r;
            r.kind = Qualifier::Kind::And;
            r.lhs = std::make_unique<Qualifier>(std::move(q));
            r.rhs = std::make_unique<Qualifier>(qual_atom());
            q = std::move(r);
        }
        return q;
    }

    Qualifier qual_atom() {
        skip_ws();
        Qualifier q;
        if (eat_word("not")) {
            if (!eat('(')) fail("expected '(' after not");
            q.kind = Qualifier::Kind::Not;
            q.lhs = std::make_unique<Qualifier>(qualifier());
            if (!eat(')')) fail("expected ')'");
            return q;
        }
        if (eat_word("position")) {
            if (!eat('(') || !eat(')')) fail("expected '()' after position");
            if (!eat('=')) fail("expected '=' after position()");
            if (eat_word("last")) {
                if (!eat('(') || !eat(')')) fail("expected '()' after last");
                q.kind = Qualifier::Kind::PositionEq;
                q.k = 0; // last()
                return q;
            }
            q.kind = Qualifier::Kind::PositionEq;
            q.k = number();
            if (q.k < 1) fail("position() index must be >= 1");
            return q;
        }
        if (eat_word("count")) {
            if (!eat('(')) fail("expected '(' after count");
            PathExpr p = path();
            if (!eat(')')) fail("expected ')'");
            skip_ws();
            if (eat('=')) {
                int v = number();
                if (v != 0) fail("only count(path)=0 is supported");
                q.kind = Qualifier::Kind::CountEq0;
                q.path = std::make_unique<PathExpr>(std::move(p));
                return q;
            }
            if (eat('>')) {
                int v = number();
                if (v == 0) {
                    q.kind = Qualifier::Kind::CountGt0;
                    q.path = std::make_unique<PathExpr>(std::move(p));
                    return q;
                }
                // count(nt) > k with k > 0: a single child step with no qualifier
                if (p.steps.size() != 1 || p.steps[0].axis != Axis::Child ||
                    !p.steps[0].qualifiers.empty())
                    fail("count(...)>k requires a bare node test");
                q.kind = Qualifier::Kind::CountNtGt;
                q.nt = p.steps[0].test;
                q.k = v;
                return q;
            }
            fail("expected '=' or '>' after count(...)");
        }
        if (eat('(')) {
            Qualifier inner = qualifier();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (peek('@')) {
            ++pos;
            q.kind = Qualifier::Kind::Attr;
            NodeTest t = nodetest();
            if (t.any)
                throw UnsupportedAxis("attribute wildcard @* is not supported in qualifiers");
            q.attr = t.label;
            return q;
        }
        // path, possibly ending in /@nt
        PathExpr p = path();
        skip_ws();
        if (pos + 1 < src.size() && src[pos] == '/' && src[pos + 1] == '@') {
            pos += 2;
            NodeTest t = nodetest();
            if (t.any)
                throw UnsupportedAxis("attribute wildcard @* is not supported in qualifiers");
            q.kind = Qualifier::Kind::PathAttr;
            q.path = std::make_unique<PathExpr>(std::move(p));
            q.attr = t.label;
            return q;
        }
        q.kind = Qualifier::Kind::Path;
        q.path = std::make_unique<PathExpr>(std::move(p));
        return q;
    }
};

} // namespace

XPathQuery parse_xpath(const std::string& text) {
    XPathParser p(text);
    XPathQuery q = p.query();
    p.skip_ws();
    if (p.pos != text.size()) {
        if (text[p.pos] == '@' || text.compare(p.pos, 2, "/@") == 0)
            throw UnsupportedAxis("a query may not select attribute nodes");
        throw XPathSyntaxError("trailing input after query", static_cast<int>(p.pos));
    }
    return q;
}

// ---------------------------------------------------------------------------
// Desugaring (the position()/count() rewritings)
// ---------------------------------------------------------------------------

namespace {

std::unique_ptr<Qualifier> clone_q(const Qualifier& q);

PathExpr clone_path(const PathExpr& p) {
    PathExpr out;
    for (auto& s : p.steps) {
        Step cs;
        cs.axis = s.axis;
        cs.test = s.test;
        for (auto& q : s.qualifiers) cs.qualifiers.push_back(clone_q(*q));
        out.steps.push_back(std::move(cs));
    }
    return out;
}

std::unique_ptr<Qualifier> clone_q(const Qualifier& q) {
    auto out = std::make_unique<Qualifier>();
    out->kind = q.kind;
    out->attr = q.attr;
    out->k = q.k;
    out->nt = q.nt;
    if (q.lhs) out->lhs = clone_q(*q.lhs);
    if (q.rhs) out->rhs = clone_q(*q.rhs);
    if (q.path) out->path = std::make_unique<PathExpr>(clone_path(*q.path));
    return out;
}

std::unique_ptr<Qualifier> path_qual(PathExpr p) {
    auto q = std::make_unique<Qualifier>();
    q->kind = Qualifier::Kind::Path;
    q->path = std::make_unique<PathExpr>(std::move(p));
    return q;
}

std::unique_ptr<Qualifier> not_qual(std::unique_ptr<Qualifier> inner) {
    auto q = std::make_unique<Qualifier>();
    q->kind = Qualifier::Kind::Not;
    q->lhs = std::move(inner);
    return q;
}

// k composed steps of the same (axis, nt) form.
PathExpr repeated_steps(Axis axis, const NodeTest& nt, int k) {
    PathExpr p;
    for (int i = 0; i < k; ++i) {
        Step s;
        s.axis = axis;
        s.test = nt;
        p.steps.push_back(std::move(s));
    }
    return p;
}

std::unique_ptr<Qualifier> desugar_qual(const Qualifier& q, const Step& owner);

void desugar_step(Step& s) {
    std::vector<std::unique_ptr<Qualifier>> out;
    for (auto& q : s.qualifiers) out.push_back(desugar_qual(*q, s));
    s.qualifiers = std::move(out);
}

void desugar_path(PathExpr& p) {
    for (auto& s : p.steps) desugar_step(s);
}

std::unique_ptr<Qualifier> desugar_qual(const Qualifier& q, const Step& owner) {
    switch (q.kind) {
        case Qualifier::Kind::And:
        case Qualifier::Kind::Or: {
            auto out = std::make_unique<Qualifier>();
            out->kind = q.kind;
            out->lhs = desugar_qual(*q.lhs, owner);
            out->rhs = desugar_qual(*q.rhs, owner);
            return out;
        }
        case Qualifier::Kind::Not: {
            auto out = std::make_unique<Qualifier>();
            out->kind = Qualifier::Kind::Not;
            out->lhs = desugar_qual(*q.lhs, owner);
            return out;
        }
        case Qualifier::Kind::Path: {
            auto out = std::make_unique<Qualifier>();
            out->kind = Qualifier::Kind::Path;
            out->path = std::make_unique<PathExpr>(clone_path(*q.path));
            desugar_path(*out->path);
            return out;
        }
        case Qualifier::Kind::PathAttr: {
            auto out = clone_q(q);
            desugar_path(*out->path);
            return out;
        }
        case Qualifier::Kind::Attr:
            return clone_q(q);
        case Qualifier::Kind::PositionEq: {
            if (q.k == 0) {
                // position()=last(): within a preceding-sibling::* step, last
                // means the leftmost sibling; otherwise the rightmost.
                if (owner.axis == Axis::PrecedingSibling && owner.test.any)
                    return not_qual(
                        path_qual(repeated_steps(Axis::PrecedingSibling, owner.test, 1)));
                return not_qual(
                    path_qual(repeated_steps(Axis::FollowingSibling, owner.test, 1)));
            }
            if (q.k == 1)
                return not_qual(
                    path_qual(repeated_steps(Axis::PrecedingSibling, owner.test, 1)));
            return path_qual(repeated_steps(Axis::PrecedingSibling, owner.test, q.k - 1));
        }
        case Qualifier::Kind::CountEq0: {
            auto inner = path_qual(clone_path(*q.path));
            desugar_path(*inner->path);
            return not_qual(std::move(inner));
        }
        case Qualifier::Kind::CountGt0: {
            auto out = path_qual(clone_path(*q.path));
            desugar_path(*out->path);
            return out;
        }
        case Qualifier::Kind::CountNtGt: {
            // nt/(following-sibling::nt)^k
            PathExpr p;
            Step first;
            first.axis = Axis::Child;
            first.test = q.nt;
            p.steps.push_back(std::move(first));
            PathExpr rest = repeated_steps(Axis::FollowingSibling, q.nt, q.k);
            for (auto& s : rest.steps) p.steps.push_back(std::move(s));
            return path_qual(std::move(p));
        }
    }
    return clone_q(q);
}

void desugar_query(XPathQuery& q) {
    if (q.kind == XPathQuery::Kind::Absolute || q.kind == XPathQuery::Kind::Relative) {
        desugar_path(q.path);
    } else {
        desugar_query(*q.lhs);
        desugar_query(*q.rhs);
    }
}

bool qual_has_sugar(const Qualifier& q) {
    switch (q.kind) {
        case Qualifier::Kind::PositionEq:
        case Qualifier::Kind::CountEq0:
        case Qualifier::Kind::CountGt0:
        case Qualifier::Kind::CountNtGt:
            return true;
        case Qualifier::Kind::And:
        case Qualifier::Kind::Or:
            return qual_has_sugar(*q.lhs) || qual_has_sugar(*q.rhs);
        case Qualifier::Kind::Not:
            return qual_has_sugar(*q.lhs);
        case Qualifier::Kind::Path:
        case Qualifier::Kind::PathAttr: {
            for (auto& s : q.path->steps)
                for (auto& sq : s.qualifiers)
                    if (qual_has_sugar(*sq)) return true;
            return false;
        }
        case Qualifier::Kind::Attr:
            return false;
    }
    return false;
}

} // namespace

bool has_sugar(const XPathQuery& q) {
    if (q.kind == XPathQuery::Kind::Union || q.kind == XPathQuery::Kind::Intersection)
        return has_sugar(*q.lhs) || has_sugar(*q.rhs);
    for (auto& s : q.path.steps)
        for (auto& sq : s.qualifiers)
            if (qual_has_sugar(*sq)) return true;
    return false;
}

XPathQuery desugar(const XPathQuery& q) {
    XPathQuery out;
    out.kind = q.kind;
    if (q.kind == XPathQuery::Kind::Union || q.kind == XPathQuery::Kind::Intersection) {
        out.lhs = std::make_unique<XPathQuery>(desugar(*q.lhs));
        out.rhs = std::make_unique<XPathQuery>(desugar(*q.rhs));
    } else {
        out.path = clone_path(q.path);
        desugar_query(out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compilation into the logic
// ---------------------------------------------------------------------------

namespace {

struct Compiler {
    FormulaArena& a;

    const Formula* mu(const std::string& prefix,
                      const std::function<const Formula*(const Formula*)>& body) {
        std::string x = a.fresh_var(prefix);
        return a.let({{x, body(a.var(x))}}, a.var(x));
    }

    const Formula* m(Prog p, const Formula* f) { return a.modal(p, f); }

    // --- Inverse axis transformers: nodes reachable from a chi-node via the
    // axis (used left-to-right along a path). ---

    // n is a child of some chi-node: climb the sibling chain, then up.
    const Formula* inv_child(const Formula* chi) {
        return mu("Xc", [&](const Formula* z) {
            return a.or_(m(Prog::Parent, chi), m(Prog::PrevSibling, z));
        });
    }
    // n is the parent of a chi-node: chi among the first child's sibling chain.
    const Formula* inv_parent(const Formula* chi) {
        return m(Prog::FirstChild, mu("Xp", [&](const Formula* z) {
                     return a.or_(chi, m(Prog::NextSibling, z));
                 }));
    }
    // n is a descendant of a chi-node: some ancestor satisfies chi.
    const Formula* inv_descendant(const Formula* chi) {
        return mu("Xd", [&](const Formula* z) {
            return a.or_(m(Prog::Parent, a.or_(chi, z)), m(Prog::PrevSibling, z));
        });
    }
    // n is an ancestor of a chi-node: some strict descendant satisfies chi.
    const Formula* inv_ancestor(const Formula* chi) {
        return m(Prog::FirstChild, mu("Xa", [&](const Formula* z) {
                     return a.or_(chi, a.or_(m(Prog::FirstChild, z), m(Prog::NextSibling, z)));
                 }));
    }
    const Formula* inv_dos(const Formula* chi) { return a.or_(chi, inv_descendant(chi)); }
    const Formula* inv_aos(const Formula* chi) { return a.or_(chi, inv_ancestor(chi)); }
    // n follows a chi-sibling: some preceding sibling satisfies chi.
    const Formula* inv_following_sibling(const Formula* chi) {
        return mu("Xf", [&](const Formula* z) { return m(Prog::PrevSibling, a.or_(chi, z)); });
    }
    const Formula* inv_preceding_sibling(const Formula* chi) {
        return mu("Xg", [&](const Formula* z) { return m(Prog::NextSibling, a.or_(chi, z)); });
    }
    const Formula* inv_axis(Axis ax, const Formula* chi) {
        switch (ax) {
            case Axis::Self: return chi;
            case Axis::Child: return inv_child(chi);
            case Axis::Parent: return inv_parent(chi);
            case Axis::Descendant: return inv_descendant(chi);
            case Axis::Ancestor: return inv_ancestor(chi);
            case Axis::DescendantOrSelf: return inv_dos(chi);
            case Axis::AncestorOrSelf: return inv_aos(chi);
            case Axis::FollowingSibling: return inv_following_sibling(chi);
            case Axis::PrecedingSibling: return inv_preceding_sibling(chi);
            case Axis::Following:
                // following = ancestor-or-self / following-sibling / descendant-or-self
                return inv_dos(inv_following_sibling(inv_aos(chi)));
            case Axis::Preceding:
                return inv_dos(inv_preceding_sibling(inv_aos(chi)));
        }
        return chi;
    }

    // --- Forward axis transformers: there is a node reachable via the axis
    // satisfying k (used right-to-left inside qualifiers). ---

    const Formula* fwd_child(const Formula* k) {
        return m(Prog::FirstChild, mu("Yc", [&](const Formula* z) {
                     return a.or_(k, m(Prog::NextSibling, z));
                 }));
    }
    const Formula* fwd_parent(const Formula* k) {
        return mu("Yp", [&](const Formula* z) {
            return a.or_(m(Prog::Parent, k), m(Prog::PrevSibling, z));
        });
    }
    const Formula* fwd_descendant(const Formula* k) {
        return m(Prog::FirstChild, mu("Yd", [&](const Formula* z) {
                     return a.or_(k, a.or_(m(Prog::FirstChild, z), m(Prog::NextSibling, z)));
                 }));
    }
    const Formula* fwd_ancestor(const Formula* k) {
        return mu("Ya", [&](const Formula* z) {
            return a.or_(m(Prog::Parent, a.or_(k, z)), m(Prog::PrevSibling, z));
        });
    }
    const Formula* fwd_following_sibling(const Formula* k) {
        return m(Prog::NextSibling, mu("Yf", [&](const Formula* z) {
                     return a.or_(k, m(Prog::NextSibling, z));
                 }));
    }
    const Formula* fwd_preceding_sibling(const Formula* k) {
        return mu("Yg", [&](const Formula* z) { return m(Prog::PrevSibling, a.or_(k, z)); });
    }
    const Formula* fwd_axis(Axis ax, const Formula* k) {
        switch (ax) {
            case Axis::Self: return k;
            case Axis::Child: return fwd_child(k);
            case Axis::Parent: return fwd_parent(k);
            case Axis::Descendant: return fwd_descendant(k);
            case Axis::Ancestor: return fwd_ancestor(k);
            case Axis::DescendantOrSelf: return a.or_(k, fwd_descendant(k));
            case Axis::AncestorOrSelf: return a.or_(k, fwd_ancestor(k));
            case Axis::FollowingSibling: return fwd_following_sibling(k);
            case Axis::PrecedingSibling: return fwd_preceding_sibling(k);
            case Axis::Following: {
                const Formula* inner = fwd_following_sibling(fwd_dos(k));
                return a.or_(inner, fwd_ancestor(inner));
            }
            case Axis::Preceding: {
                const Formula* inner = fwd_preceding_sibling(fwd_dos(k));
                return a.or_(inner, fwd_ancestor(inner));
            }
        }
        return k;
    }
    const Formula* fwd_dos(const Formula* k) { return a.or_(k, fwd_descendant(k)); }

    const Formula* test_formula(const NodeTest& t) {
        return t.any ? a.tru() : a.element(t.label);
    }

    const Formula* qualifier_formula(const Qualifier& q) {
        switch (q.kind) {
            case Qualifier::Kind::And:
                return a.and_(qualifier_formula(*q.lhs), qualifier_formula(*q.rhs));
            case Qualifier::Kind::Or:
                return a.or_(qualifier_formula(*q.lhs), qualifier_formula(*q.rhs));
            case Qualifier::Kind::Not: return negate(a, qualifier_formula(*q.lhs));
            case Qualifier::Kind::Path: return exists_path(*q.path, a.tru());
            case Qualifier::Kind::PathAttr: return exists_path(*q.path, a.attribute(q.attr));
            case Qualifier::Kind::Attr: return a.attribute(q.attr);
            default:
                throw Error("sugared qualifier reached the compiler; desugar first");
        }
    }

    // Existential path from the current node; `fin` is conjoined at the last
    // selected node.
    const Formula* exists_path(const PathExpr& p, const Formula* fin) {
        const Formula* k = fin;
        for (std::size_t i = p.steps.size(); i-- > 0;) {
            const Step& s = p.steps[i];
            const Formula* node = test_formula(s.test);
            for (auto& q : s.qualifiers) node = a.and_(node, qualifier_formula(*q));
            k = fwd_axis(s.axis, a.and_(node, k));
        }
        return k;
    }

    // Nodes at root level: the binary root or one of its siblings.
    const Formula* root_level() {
        const Formula* is_root = a.and_(a.not_(m(Prog::Parent, a.tru())),
                                        a.not_(m(Prog::PrevSibling, a.tru())));
        return mu("Xr", [&](const Formula* z) {
            return a.or_(is_root, m(Prog::PrevSibling, z));
        });
    }

    const Formula* compile_path(const PathExpr& p, const Formula* context, bool absolute) {
        const Formula* chi = context;
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            const Step& s = p.steps[i];
            const Formula* here;
            if (i == 0 && absolute) {
                // First step from the virtual document node.
                switch (s.axis) {
                    case Axis::Child:
                        here = root_level();
                        break;
                    case Axis::Descendant:
                    case Axis::DescendantOrSelf:
                        here = a.tru();
                        break;
                    default:
                        here = a.fls(); // nothing reachable from the document node
                }
            } else {
                here = inv_axis(s.axis, chi);
            }
            const Formula* f = a.and_(test_formula(s.test), here);
            for (auto& q : s.qualifiers) f = a.and_(f, qualifier_formula(*q));
            chi = f;
        }
        return chi;
    }

    const Formula* compile(const XPathQuery& q, const Formula* context) {
        switch (q.kind) {
            case XPathQuery::Kind::Absolute: return compile_path(q.path, context, true);
            case XPathQuery::Kind::Relative: return compile_path(q.path, context, false);
            case XPathQuery::Kind::Union:
                return a.or_(compile(*q.lhs, context), compile(*q.rhs, context));
            case XPathQuery::Kind::Intersection:
                return a.and_(compile(*q.lhs, context), compile(*q.rhs, context));
        }
        return a.fls();
    }
};

} // namespace

const Formula* compile_query(FormulaArena& a, const XPathQuery& q, const Formula* context) {
    if (has_sugar(q)) throw Error("query must be desugared before compilation");
    Compiler c{a};
    return c.compile(q, context);
}

// ---------------------------------------------------------------------------
// Printing (diagnostics and tests)
// ---------------------------------------------------------------------------

namespace {

void print_path(const PathExpr& p, std::ostringstream& out);

void print_qual(const Qualifier& q, std::ostringstream& out) {
    switch (q.kind) {
        case Qualifier::Kind::And:
            print_qual(*q.lhs, out);
            out << " and ";
            print_qual(*q.rhs, out);
            break;
        case Qualifier::Kind::Or:
            print_qual(*q.lhs, out);
            out << " or ";
            print_qual(*q.rhs, out);
            break;
        case Qualifier::Kind::Not:
            out << "not(";
            print_qual(*q.lhs, out);
            out << ")";
            break;
        case Qualifier::Kind::Path: print_path(*q.path, out); break;
        case Qualifier::Kind::PathAttr:
            print_path(*q.path, out);
            out << "/@" << q.attr;
            break;
        case Qualifier::Kind::Attr: out << "@" << q.attr; break;
        case Qualifier::Kind::PositionEq:
            out << "position()=" << (q.k == 0 ? std::string("last()") : std::to_string(q.k));
            break;
        case Qualifier::Kind::CountEq0:
            out << "count(";
            print_path(*q.path, out);
            out << ")=0";
            break;
        case Qualifier::Kind::CountGt0:
            out << "count(";
            print_path(*q.path, out);
            out << ")>0";
            break;
        case Qualifier::Kind::CountNtGt:
            out << "count(" << (q.nt.any ? "*" : q.nt.label) << ")>" << q.k;
            break;
    }
}

void print_path(const PathExpr& p, std::ostringstream& out) {
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        if (i) out << "/";
        const Step& s = p.steps[i];
        out << axis_name(s.axis) << "::" << (s.test.any ? "*" : s.test.label);
        for (auto& q : s.qualifiers) {
            out << "[";
            print_qual(*q, out);
            out << "]";
        }
    }
}

} // namespace

std::string to_string(const XPathQuery& q) {
    std::ostringstream out;
    switch (q.kind) {
        case XPathQuery::Kind::Absolute:
            out << "/";
            print_path(q.path, out);
            break;
        case XPathQuery::Kind::Relative: print_path(q.path, out); break;
        case XPathQuery::Kind::Union:
            out << to_string(*q.lhs) << " | " << to_string(*q.rhs);
            break;
        case XPathQuery::Kind::Intersection:
            out << to_string(*q.lhs) << " & " << to_string(*q.rhs);
            break;
    }
    return out.str();
}

} // namespace treelogic
