#include "proofsynth/sexpr.hpp"

#include <cctype>
#include <set>

#include "proofsynth/errors.hpp"

namespace proofsynth {

std::string print_prop(const PropPtr& p) {
    switch (p->kind) {
        case PropKind::Var: return "(var " + p->name + ")";
        case PropKind::Imp: return "(imp " + print_prop(p->lhs) + " " + print_prop(p->rhs) + ")";
        case PropKind::Prod: return "(prod " + print_prop(p->lhs) + " " + print_prop(p->rhs) + ")";
        case PropKind::Sum: return "(sum " + print_prop(p->lhs) + " " + print_prop(p->rhs) + ")";
    }
    return {};
}

std::string print_term(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Hole: return "(hole " + std::to_string(t->hole) + ")";
        case TermKind::Var: return "(var " + t->name + ")";
        case TermKind::Abs: return "(lam " + t->name + " " + print_term(t->a) + ")";
        case TermKind::App: return "(app " + print_term(t->a) + " " + print_term(t->b) + ")";
        case TermKind::Pair: return "(pair " + print_term(t->a) + " " + print_term(t->b) + ")";
        case TermKind::CasePair:
            return "(casepair " + print_term(t->a) + " " + t->name + " " + t->name2 + " " +
                   print_term(t->b) + ")";
        case TermKind::Left: return "(left " + print_term(t->a) + ")";
        case TermKind::Right: return "(right " + print_term(t->a) + ")";
        case TermKind::CaseSum:
            return "(casesum " + print_term(t->a) + " " + t->name + " " + print_term(t->b) + " " +
                   t->name2 + " " + print_term(t->c) + ")";
    }
    return {};
}

namespace {

struct Lexer {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("unexpected end of input at offset " +
                                              std::to_string(pos));
        return s[pos];
    }
    void expect(char c) {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(pos));
        ++pos;
    }
    // atom: any run of chars that are not whitespace or parens
    std::string atom() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (pos == start)
            throw ParseError("expected an atom at offset " + std::to_string(start));
        return std::string(s.substr(start, pos - start));
    }
    int integer() {
        size_t start = pos;
        std::string a = atom();
        try {
            size_t used = 0;
            int v = std::stoi(a, &used);
            if (used != a.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected an integer at offset " + std::to_string(start));
        }
    }
};

PropPtr parse_prop_rec(Lexer& lx) {
    lx.expect('(');
    std::string head = lx.atom();
    PropPtr out;
    if (head == "var") {
        out = pvar(lx.atom());
    } else if (head == "imp" || head == "prod" || head == "sum") {
        PropPtr l = parse_prop_rec(lx);
        PropPtr r = parse_prop_rec(lx);
        out = head == "imp" ? pimp(l, r) : head == "prod" ? pprod(l, r) : psum(l, r);
    } else {
        throw ParseError("unknown proposition head '" + head + "'");
    }
    lx.expect(')');
    return out;
}

TermPtr parse_term_rec(Lexer& lx) {
    lx.expect('(');
    std::string head = lx.atom();
    TermPtr out;
    if (head == "hole") {
        out = hole(lx.integer());
    } else if (head == "var") {
        out = var(lx.atom());
    } else if (head == "lam") {
        std::string x = lx.atom();
        out = lam(x, parse_term_rec(lx));
    } else if (head == "app" || head == "pair") {
        TermPtr a = parse_term_rec(lx);
        TermPtr b = parse_term_rec(lx);
        out = head == "app" ? app(a, b) : pair(a, b);
    } else if (head == "casepair") {
        TermPtr scrut = parse_term_rec(lx);
        std::string x = lx.atom();
        std::string y = lx.atom();
        out = casepair(scrut, x, y, parse_term_rec(lx));
    } else if (head == "left" || head == "right") {
        TermPtr a = parse_term_rec(lx);
        out = head == "left" ? left(a) : right(a);
    } else if (head == "casesum") {
        TermPtr scrut = parse_term_rec(lx);
        std::string x = lx.atom();
        TermPtr lb = parse_term_rec(lx);
        std::string y = lx.atom();
        TermPtr rb = parse_term_rec(lx);
        out = casesum(scrut, x, lb, y, rb);
    } else {
        throw ParseError("unknown term head '" + head + "'");
    }
    lx.expect(')');
    return out;
}

void check_hole_ids(const TermPtr& t, std::set<int>& seen) {
    if (t->kind == TermKind::Hole) {
        if (!seen.insert(t->hole).second)
            throw ParseError("duplicate hole id " + std::to_string(t->hole));
        return;
    }
    for (int i = 0; i < term_child_count(t->kind); ++i) check_hole_ids(term_child(t, i), seen);
}

}  // namespace

PropPtr parse_prop(std::string_view s) {
    Lexer lx{s};
    PropPtr p = parse_prop_rec(lx);
    if (!lx.at_end()) throw ParseError("trailing input at offset " + std::to_string(lx.pos));
    return p;
}

TermPtr parse_term(std::string_view s) {
    Lexer lx{s};
    TermPtr t = parse_term_rec(lx);
    if (!lx.at_end()) throw ParseError("trailing input at offset " + std::to_string(lx.pos));
    std::set<int> seen;
    check_hole_ids(t, seen);
    return t;
}

}  // namespace proofsynth
