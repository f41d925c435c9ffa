#include "treelogic/tree.hpp"

#include <sstream>

namespace treelogic {

BinaryTree clone(const BinaryNode* t) {
    if (!t) return nullptr;
    auto n = std::make_unique<BinaryNode>();
    n->label = t->label;
    n->attributes = t->attributes;
    n->mark_context = t->mark_context;
    n->mark_target = t->mark_target;
    n->first = clone(t->first.get());
    n->second = clone(t->second.get());
    return n;
}

bool tree_equal(const BinaryNode* a, const BinaryNode* b) {
    if (!a || !b) return a == b;
    return a->label == b->label && a->attributes == b->attributes &&
           a->mark_context == b->mark_context && a->mark_target == b->mark_target &&
           tree_equal(a->first.get(), b->first.get()) &&
           tree_equal(a->second.get(), b->second.get());
}

std::size_t node_count(const BinaryNode* t) {
    if (!t) return 0;
    return 1 + node_count(t->first.get()) + node_count(t->second.get());
}

std::size_t node_count(const UnrankedTree& t) {
    std::size_t n = 1;
    for (auto& c : t.children) n += node_count(c);
    return n;
}

namespace {

BinaryTree encode_from(const std::vector<UnrankedTree>& hedge, std::size_t i) {
    if (i >= hedge.size()) return nullptr;
    const UnrankedTree& u = hedge[i];
    auto n = std::make_unique<BinaryNode>();
    n->label = u.label;
    n->attributes = u.attributes;
    n->mark_context = u.mark_context;
    n->mark_target = u.mark_target;
    n->first = encode_from(u.children, 0);
    n->second = encode_from(hedge, i + 1);
    return n;
}

} // namespace

BinaryTree encode(const std::vector<UnrankedTree>& hedge) { return encode_from(hedge, 0); }

std::vector<UnrankedTree> decode(const BinaryNode* t) {
    std::vector<UnrankedTree> hedge;
    for (const BinaryNode* n = t; n; n = n->second.get()) {
        UnrankedTree u;
        u.label = n->label;
        u.attributes = n->attributes;
        u.mark_context = n->mark_context;
        u.mark_target = n->mark_target;
        u.children = decode(n->first.get());
        hedge.push_back(std::move(u));
    }
    return hedge;
}

namespace {

bool has_marks(const UnrankedTree& t) {
    if (t.mark_context || t.mark_target) return true;
    for (auto& c : t.children)
        if (has_marks(c)) return true;
    return false;
}

void xml_rec(const UnrankedTree& t, int depth, bool ns_here, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '<' << t.label;
    if (ns_here) out << " xmlns:solver=\"http://wam.inrialpes.fr/xml\"";
    for (auto& a : t.attributes) out << ' ' << a << "=\"\"";
    if (t.mark_context) out << " solver:context=\"true\"";
    if (t.mark_target) out << " solver:target=\"true\"";
    if (t.children.empty()) {
        out << "/>\n";
        return;
    }
    out << ">\n";
    for (auto& c : t.children) xml_rec(c, depth + 1, false, out);
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "</" << t.label << ">\n";
}

} // namespace

std::string to_xml(const UnrankedTree& t) {
    std::ostringstream out;
    xml_rec(t, 0, has_marks(t), out);
    return out.str();
}

namespace {

void term_rec(const BinaryNode* t, bool root, std::ostringstream& out) {
    if (!t) {
        out << '#';
        return;
    }
    out << t->label;
    if (!root && !t->first && !t->second) return; // inner leaves print bare
    out << '(';
    term_rec(t->first.get(), false, out);
    out << ", ";
    term_rec(t->second.get(), false, out);
    out << ')';
}

} // namespace

std::string term_print(const BinaryNode* t) {
    std::ostringstream out;
    if (!t) return "#";
    term_rec(t, true, out);
    return out.str();
}

} // namespace treelogic
