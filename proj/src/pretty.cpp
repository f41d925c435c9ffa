#include "treelogic/pretty.hpp"

#include <map>
#include <sstream>

namespace treelogic {

namespace {

// Pass 1: number binder variables in post-order (inner binders first, a
// multi-binding let numbers its variables in declaration order). This mirrors
// the trace output of the original tool, where the outermost recursion gets
// the highest index.
void number_vars(const Formula* f, std::map<std::string, int>& ids, int& next) {
    for (auto* k : f->kids) number_vars(k, ids, next);
    if (f->kind == Kind::Let)
        for (auto& b : f->binders)
            if (!ids.count(b)) ids[b] = next++;
}

struct Printer {
    const std::map<std::string, int>& ids;
    std::ostringstream out;

    std::string var_name(const std::string& internal) const {
        auto it = ids.find(internal);
        if (it != ids.end()) return "X" + std::to_string(it->second);
        return "$" + display_of(internal); // free variable
    }

    void print(const Formula* f) {
        switch (f->kind) {
            case Kind::True: out << "T"; break;
            case Kind::False: out << "F"; break;
            case Kind::Element: out << f->text; break;
            case Kind::Attribute: out << "@" << f->text; break;
            case Kind::Prop: out << f->text; break;
            case Kind::Context: out << "_context"; break;
            case Kind::Var: out << var_name(f->text); break;
            case Kind::Or: binary(f, " | "); break;
            case Kind::And: binary(f, " & "); break;
            case Kind::Implies: binary(f, " => "); break;
            case Kind::Equiv: binary(f, " <=> "); break;
            case Kind::Not:
                out << "~(";
                print(f->kids[0]);
                out << ")";
                break;
            case Kind::Modal:
                out << "<" << prog_name(f->prog) << ">";
                if (f->kids[0]->kids.empty() && f->kids[0]->kind != Kind::Let) {
                    print(f->kids[0]);
                } else {
                    out << "(";
                    print(f->kids[0]);
                    out << ")";
                }
                break;
            case Kind::Let: print_let(f); break;
            case Kind::Call: {
                out << f->text << "(";
                for (std::size_t i = 0; i < f->kids.size(); ++i) {
                    if (i) out << ", ";
                    print(f->kids[i]);
                }
                out << ")";
                break;
            }
            case Kind::Str: {
                out << '"';
                for (char c : f->text) {
                    if (c == '"' || c == '\\') out << '\\';
                    out << c;
                }
                out << '"';
                break;
            }
        }
    }

    void binary(const Formula* f, const char* op) {
        out << "(";
        print(f->kids[0]);
        out << op;
        print(f->kids[1]);
        out << ")";
    }

    void print_let(const Formula* f) {
        const Formula* body = f->let_body();
        bool mu_form = f->binding_count() == 1 && body->kind == Kind::Var &&
                       body->text == f->binders[0];
        if (mu_form) {
            out << "(mu " << var_name(f->binders[0]) << ".(";
            print(f->kids[0]);
            out << "))";
            return;
        }
        out << "(let_mu ";
        for (std::size_t i = 0; i < f->binding_count(); ++i) {
            if (i) out << ", ";
            out << var_name(f->binders[i]) << " = ";
            print(f->kids[i]);
        }
        out << " in ";
        print(body);
        out << ")";
    }
};

} // namespace

std::string pretty_print(const Formula* f) {
    std::map<std::string, int> ids;
    int next = 1;
    number_vars(f, ids, next);
    Printer p{ids};
    p.print(f);
    return p.out.str();
}

} // namespace treelogic
