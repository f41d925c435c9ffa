#ifndef TREELOGIC_FORMULA_HPP
#define TREELOGIC_FORMULA_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace treelogic {

// Navigation program inside modalities. 1 and 2 move to the first and second
// successor of a binary-tree node; -1 and -2 are their converses.
enum class Prog : int8_t {
    FirstChild = 1,
    NextSibling = 2,
    Parent = -1,
    PrevSibling = -2,
};

constexpr Prog converse(Prog p) {
    switch (p) {
        case Prog::FirstChild: return Prog::Parent;
        case Prog::NextSibling: return Prog::PrevSibling;
        case Prog::Parent: return Prog::FirstChild;
        case Prog::PrevSibling: return Prog::NextSibling;
    }
    return Prog::FirstChild; // unreachable
}

constexpr bool is_forward(Prog p) {
    return p == Prog::FirstChild || p == Prog::NextSibling;
}

const char* prog_name(Prog p); // "1", "2", "-1", "-2"

enum class Kind : uint8_t {
    True,
    False,
    Element,   // element name atom
    Attribute, // attribute name atom (@name)
    Prop,      // free proposition (e.g. _context)
    Context,   // the # start-context mark; behaves like Prop("_context")
    Or,
    And,
    Implies,
    Equiv,
    Not,
    Modal, // <p>f
    Var,
    Let,  // n-ary least-fixpoint binder
    Call, // predicate call, eliminated by expansion
    Str,  // string literal, only as a predicate argument
};

// Immutable formula node. Nodes are interned by FormulaArena, so structural
// equality is pointer equality.
struct Formula {
    Kind kind;
    Prog prog = Prog::FirstChild;          // Modal
    std::string text;                      // Element/Attribute/Prop/Var name, Call name, Str value
    std::vector<const Formula*> kids;      // operands; for Let: binding bodies then the in-body
    std::vector<std::string> binders;      // Let: bound variable names, aligned with kids[0..n-2]

    std::size_t binding_count() const { return binders.size(); }
    const Formula* binding_body(std::size_t i) const { return kids[i]; }
    const Formula* let_body() const { return kids.back(); }

    bool is_atom() const {
        return kind == Kind::Element || kind == Kind::Attribute || kind == Kind::Prop ||
               kind == Kind::Context;
    }

    std::string display_name() const;
};

// Internal variable names carry a "@id" suffix for global uniqueness which is
// stripped for user-facing output.
inline std::string display_of(const std::string& internal) {
    auto pos = internal.find('@');
    return pos == std::string::npos ? internal : internal.substr(0, pos);
}

inline std::string Formula::display_name() const { return display_of(text); }

// Hash-consing arena. All formulas live for the lifetime of the arena.
class FormulaArena {
public:
    const Formula* tru() { return intern(Kind::True); }
    const Formula* fls() { return intern(Kind::False); }
    const Formula* element(const std::string& name) { return intern(Kind::Element, name); }
    const Formula* attribute(const std::string& name) { return intern(Kind::Attribute, name); }
    const Formula* prop(const std::string& name) { return intern(Kind::Prop, name); }
    const Formula* context() { return intern(Kind::Context); }
    const Formula* var(const std::string& name) { return intern(Kind::Var, name); }
    const Formula* str(const std::string& s) { return intern(Kind::Str, s); }

    const Formula* or_(const Formula* a, const Formula* b);
    const Formula* and_(const Formula* a, const Formula* b);
    const Formula* implies(const Formula* a, const Formula* b) {
        return intern(Kind::Implies, "", {a, b});
    }
    const Formula* equiv(const Formula* a, const Formula* b) {
        return intern(Kind::Equiv, "", {a, b});
    }
    const Formula* not_(const Formula* a);
    const Formula* modal(Prog p, const Formula* f);
    const Formula* let(std::vector<std::pair<std::string, const Formula*>> bindings,
                       const Formula* body);
    const Formula* call(const std::string& name, std::vector<const Formula*> args) {
        return intern(Kind::Call, name, std::move(args));
    }

    // Right fold over a disjunct/conjunct list; empty lists yield the unit.
    const Formula* or_all(const std::vector<const Formula*>& fs);
    const Formula* and_all(const std::vector<const Formula*>& fs);

    // Fresh globally-unique variable name with the given display prefix.
    std::string fresh_var(const std::string& prefix);

    // Capture-avoiding substitution of free variables. Safe because bound
    // variables are globally unique by construction.
    const Formula* substitute(const Formula* f,
                              const std::unordered_map<std::string, const Formula*>& sub);

    // One-step expansion of a Let binder: the in-body with every bound
    // variable replaced by its binding body, where recursive occurrences
    // become the re-wrapped Let. Cached; this is the closure's unfolding.
    const Formula* expand_let(const Formula* let);

    // Expansion of a single bound variable of a Let binder.
    const Formula* unfold(const Formula* let, const std::string& var);

    std::size_t node_count() const { return store_.size(); }

private:
    friend struct FormulaKeyHash;
    const Formula* intern(Kind k, std::string text = "", std::vector<const Formula*> kids = {},
                          Prog prog = Prog::FirstChild, std::vector<std::string> binders = {});

    struct NodeHash {
        std::size_t operator()(const Formula* f) const;
    };
    struct NodeEq {
        bool operator()(const Formula* a, const Formula* b) const;
    };

    std::deque<Formula> store_;
    std::unordered_set<const Formula*, NodeHash, NodeEq> interned_;
    std::unordered_map<const Formula*, const Formula*> expand_cache_;
    uint64_t var_counter_ = 0;
};

// Number of AST nodes, counting shared subterms once per occurrence.
std::size_t formula_size(const Formula* f);

// Free variables of f (internal names).
std::vector<std::string> free_variables(const Formula* f);
bool is_closed(const Formula* f);

// True when f contains no Call/Str nodes.
bool is_expanded(const Formula* f);

} // namespace treelogic

#endif
