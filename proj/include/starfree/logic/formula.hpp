#pragma once

// Formula syntax shared by the word logic (L_SF) and the integer logic
// (L_{U,n}). Text form is a prefix grammar:
//
//   term    := name | max
//   formula := (< t t) | (= t t) | (<= t t) | (P a t) | (eps j n x)
//            | (succ x y)                      ; y = x+1, expanded at parse
//            | (not f) | (and f g ...) | (or f g ...) | (imp f g) | (iff f g)
//            | (E x f) | (A x f) | (Eb x f) | (Ab x f) | (top b f)
//
// `;` starts a comment running to the end of the line.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "starfree/error.hpp"

namespace starfree::logic {

struct Term {
    std::string var;
    bool is_max = false;

    static Term variable(std::string name) { return Term{std::move(name), false}; }
    static Term max() { return Term{"", true}; }

    std::string to_string() const { return is_max ? "max" : var; }
    bool operator==(const Term&) const = default;
};

enum class Op {
    less,
    equal,
    less_equal,
    letter,  // (P a t)
    eps,     // (eps j n x)
    not_,
    and_,
    or_,
    imp,
    iff,
    exists,
    forall,
    bexists, // (∃x)_U^{<b}
    bforall, // (∀x)_U^{<b}
    top,     // (∃b)(ε_1(b,b) ∧ f)
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    Op op;
    int index = 0;       // a of P_a, j of eps_j
    Term first, second;  // atom operands; P uses `first` only
    std::string var;     // bound variable of a quantifier or top
    FormulaPtr lhs, rhs; // connective operands; quantifier body is lhs

    bool is_atom() const { return op <= Op::eps; }
    bool is_quantifier() const {
        return op == Op::exists || op == Op::forall || op == Op::bexists || op == Op::bforall || op == Op::top;
    }
};

inline FormulaPtr make_atom(Op op, Term a, Term b, int index = 0) {
    return std::make_shared<const Formula>(Formula{op, index, std::move(a), std::move(b), {}, nullptr, nullptr});
}
inline FormulaPtr less(Term a, Term b) { return make_atom(Op::less, std::move(a), std::move(b)); }
inline FormulaPtr equal(Term a, Term b) { return make_atom(Op::equal, std::move(a), std::move(b)); }
inline FormulaPtr less_equal(Term a, Term b) { return make_atom(Op::less_equal, std::move(a), std::move(b)); }
inline FormulaPtr letter(int a, Term t) { return make_atom(Op::letter, std::move(t), Term{}, a); }
inline FormulaPtr eps(int j, std::string n, std::string x) {
    return make_atom(Op::eps, Term::variable(std::move(n)), Term::variable(std::move(x)), j);
}

inline FormulaPtr make_connective(Op op, FormulaPtr lhs, FormulaPtr rhs = nullptr) {
    return std::make_shared<const Formula>(Formula{op, 0, {}, {}, {}, std::move(lhs), std::move(rhs)});
}
inline FormulaPtr negate(FormulaPtr f) { return make_connective(Op::not_, std::move(f)); }
inline FormulaPtr conj(FormulaPtr f, FormulaPtr g) { return make_connective(Op::and_, std::move(f), std::move(g)); }
inline FormulaPtr disj(FormulaPtr f, FormulaPtr g) { return make_connective(Op::or_, std::move(f), std::move(g)); }
inline FormulaPtr implies(FormulaPtr f, FormulaPtr g) { return make_connective(Op::imp, std::move(f), std::move(g)); }
inline FormulaPtr iff(FormulaPtr f, FormulaPtr g) { return make_connective(Op::iff, std::move(f), std::move(g)); }

inline FormulaPtr make_quantifier(Op op, std::string var, FormulaPtr body) {
    return std::make_shared<const Formula>(Formula{op, 0, {}, {}, std::move(var), std::move(body), nullptr});
}
inline FormulaPtr exists(std::string v, FormulaPtr f) { return make_quantifier(Op::exists, std::move(v), std::move(f)); }
inline FormulaPtr forall(std::string v, FormulaPtr f) { return make_quantifier(Op::forall, std::move(v), std::move(f)); }
inline FormulaPtr bexists(std::string v, FormulaPtr f) { return make_quantifier(Op::bexists, std::move(v), std::move(f)); }
inline FormulaPtr bforall(std::string v, FormulaPtr f) { return make_quantifier(Op::bforall, std::move(v), std::move(f)); }
inline FormulaPtr top(std::string b, FormulaPtr f) { return make_quantifier(Op::top, std::move(b), std::move(f)); }

inline bool same(const Formula& f, const Formula& g) {
    if (f.op != g.op || f.index != g.index || !(f.first == g.first) || !(f.second == g.second) || f.var != g.var)
        return false;
    if (static_cast<bool>(f.lhs) != static_cast<bool>(g.lhs) || static_cast<bool>(f.rhs) != static_cast<bool>(g.rhs))
        return false;
    return (!f.lhs || same(*f.lhs, *g.lhs)) && (!f.rhs || same(*f.rhs, *g.rhs));
}

inline bool same(const FormulaPtr& f, const FormulaPtr& g) { return same(*f, *g); }

// ---------------------------------------------------------------------------
// Printing

inline std::string_view op_name(Op op) {
    switch (op) {
    case Op::less: return "<";
    case Op::equal: return "=";
    case Op::less_equal: return "<=";
    case Op::letter: return "P";
    case Op::eps: return "eps";
    case Op::not_: return "not";
    case Op::and_: return "and";
    case Op::or_: return "or";
    case Op::imp: return "imp";
    case Op::iff: return "iff";
    case Op::exists: return "E";
    case Op::forall: return "A";
    case Op::bexists: return "Eb";
    case Op::bforall: return "Ab";
    case Op::top: return "top";
    }
    return "?";
}

inline void print_to(std::ostream& out, const Formula& f) {
    out << '(' << op_name(f.op);
    switch (f.op) {
    case Op::less:
    case Op::equal:
    case Op::less_equal: out << ' ' << f.first.to_string() << ' ' << f.second.to_string(); break;
    case Op::letter: out << ' ' << f.index << ' ' << f.first.to_string(); break;
    case Op::eps: out << ' ' << f.index << ' ' << f.first.to_string() << ' ' << f.second.to_string(); break;
    case Op::not_:
        out << ' ';
        print_to(out, *f.lhs);
        break;
    case Op::and_:
    case Op::or_:
    case Op::imp:
    case Op::iff:
        out << ' ';
        print_to(out, *f.lhs);
        out << ' ';
        print_to(out, *f.rhs);
        break;
    default:
        out << ' ' << f.var << ' ';
        print_to(out, *f.lhs);
    }
    out << ')';
}

inline std::string print(const Formula& f) {
    std::ostringstream out;
    print_to(out, f);
    return out.str();
}
inline std::string print(const FormulaPtr& f) { return print(*f); }

// ---------------------------------------------------------------------------
// Variables

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    auto term = [&](const Term& t) {
        if (!t.is_max && !t.var.empty() && !bound.count(t.var)) out.insert(t.var);
    };
    if (f.is_atom()) {
        term(f.first);
        if (f.op != Op::letter) term(f.second);
        return;
    }
    if (f.is_quantifier()) {
        bool fresh = bound.insert(f.var).second;
        collect_free(*f.lhs, bound, out);
        if (fresh) bound.erase(f.var);
        return;
    }
    collect_free(*f.lhs, bound, out);
    if (f.rhs) collect_free(*f.rhs, bound, out);
}

inline std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

inline void collect_names(const Formula& f, std::set<std::string>& out) {
    if (f.is_atom()) {
        if (!f.first.is_max && !f.first.var.empty()) out.insert(f.first.var);
        if (f.op != Op::letter && !f.second.is_max && !f.second.var.empty()) out.insert(f.second.var);
        return;
    }
    if (f.is_quantifier()) out.insert(f.var);
    collect_names(*f.lhs, out);
    if (f.rhs) collect_names(*f.rhs, out);
}

inline std::set<std::string> variable_names(const Formula& f) {
    std::set<std::string> out;
    collect_names(f, out);
    return out;
}

inline bool mentions_max(const Formula& f) {
    if (f.is_atom()) return f.first.is_max || (f.op != Op::letter && f.second.is_max);
    return mentions_max(*f.lhs) || (f.rhs && mentions_max(*f.rhs));
}

inline std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
    if (!used.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string candidate = base + std::to_string(i);
        if (!used.count(candidate)) return candidate;
    }
}

/// Capture-free renaming of free occurrences of `from` (a variable or the
/// constant max when `from.is_max`) to `to`.
inline FormulaPtr substitute(const FormulaPtr& f, const Term& from, const Term& to) {
    auto swap = [&](const Term& t) { return t == from ? to : t; };
    if (f->is_atom())
        return make_atom(f->op, swap(f->first), f->op == Op::letter ? f->second : swap(f->second), f->index);
    if (f->is_quantifier()) {
        if (!from.is_max && f->var == from.var) return f;
        return make_quantifier(f->op, f->var, substitute(f->lhs, from, to));
    }
    return make_connective(f->op, substitute(f->lhs, from, to), f->rhs ? substitute(f->rhs, from, to) : nullptr);
}

/// Renames every bound variable through `rename` (old name -> new name);
/// names not in the map are kept.
inline FormulaPtr rename_bound(const FormulaPtr& f, const std::map<std::string, std::string>& rename) {
    if (f->is_atom()) return f;
    if (f->is_quantifier()) {
        auto it = rename.find(f->var);
        if (it == rename.end()) return make_quantifier(f->op, f->var, rename_bound(f->lhs, rename));
        FormulaPtr body = substitute(f->lhs, Term::variable(f->var), Term::variable(it->second));
        return make_quantifier(f->op, it->second, rename_bound(body, rename));
    }
    return make_connective(f->op, rename_bound(f->lhs, rename), f->rhs ? rename_bound(f->rhs, rename) : nullptr);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Sexp {
    std::string atom; // empty for lists
    std::vector<Sexp> items;
    std::size_t pos = 0;
    bool is_list() const { return atom.empty(); }
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    Sexp read_all() {
        skip();
        Sexp s = read();
        skip();
        if (i_ < text_.size()) fail("trailing input");
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::syntax_error, what + " at offset " + std::to_string(i_));
    }

    void skip() {
        while (i_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[i_]))) {
                ++i_;
            } else if (text_[i_] == ';') {
                while (i_ < text_.size() && text_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    Sexp read() {
        skip();
        if (i_ >= text_.size()) fail("unexpected end of input");
        Sexp s;
        s.pos = i_;
        if (text_[i_] == '(') {
            ++i_;
            while (true) {
                skip();
                if (i_ >= text_.size()) fail("missing ')'");
                if (text_[i_] == ')') {
                    ++i_;
                    break;
                }
                s.items.push_back(read());
            }
            if (s.items.empty()) fail("empty list");
            return s;
        }
        if (text_[i_] == ')') fail("unexpected ')'");
        if (text_[i_] == '+')
            fail("'+' between variables is not expressible in this logic (only y = x+1, written (succ x y))");
        std::size_t start = i_;
        while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) && text_[i_] != '(' &&
               text_[i_] != ')' && text_[i_] != ';') {
            if (text_[i_] == '+')
                fail("'+' between variables is not expressible in this logic (only y = x+1, written (succ x y))");
            ++i_;
        }
        s.atom = std::string(text_.substr(start, i_ - start));
        return s;
    }

    std::string_view text_;
    std::size_t i_ = 0;
};

inline const std::set<std::string>& keywords() {
    static const std::set<std::string> k{"<",  "=",      "<=",     "P",  "eps", "not", "and", "or",  "imp", "iff",
                                         "E",  "exists", "A",      "forall", "Eb",  "Ab",  "top", "succ", "max"};
    return k;
}

class Builder {
public:
    explicit Builder(std::set<std::string> used) : used_(std::move(used)) {}

    FormulaPtr build(const Sexp& s) {
        if (!s.is_list()) fail(s, "expected a parenthesised formula, got '" + s.atom + "'");
        const Sexp& head = s.items[0];
        if (head.is_list()) fail(head, "operator expected");
        const std::string& op = head.atom;
        auto arity = [&](std::size_t n) {
            if (s.items.size() != n + 1)
                fail(s, "'" + op + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
        };
        if (op == "<" || op == "=" || op == "<=") {
            arity(2);
            Term a = term(s.items[1]), b = term(s.items[2]);
            return make_atom(op == "<" ? Op::less : op == "=" ? Op::equal : Op::less_equal, a, b);
        }
        if (op == "P") {
            arity(2);
            return letter(number(s.items[1]), term(s.items[2]));
        }
        if (op == "eps") {
            arity(3);
            int j = number(s.items[1]);
            if (j < 1) fail(s.items[1], "eps coefficient must be at least 1");
            return make_atom(Op::eps, term(s.items[2]), term(s.items[3]), j);
        }
        if (op == "succ") {
            // y = x+1  ≡  x<y ∧ ∀z (x<z → y≤z)
            arity(2);
            Term x = term(s.items[1]), y = term(s.items[2]);
            std::set<std::string> avoid = used_;
            avoid.insert(x.var);
            avoid.insert(y.var);
            std::string z = fresh_name("z", avoid);
            used_.insert(z);
            return conj(less(x, y), forall(z, implies(less(x, Term::variable(z)), less_equal(y, Term::variable(z)))));
        }
        if (op == "not") {
            arity(1);
            return negate(build(s.items[1]));
        }
        if (op == "and" || op == "or") {
            if (s.items.size() < 3) fail(s, "'" + op + "' needs at least two operands");
            FormulaPtr acc = build(s.items[1]);
            for (std::size_t i = 2; i < s.items.size(); ++i)
                acc = make_connective(op == "and" ? Op::and_ : Op::or_, acc, build(s.items[i]));
            return acc;
        }
        if (op == "imp" || op == "iff") {
            arity(2);
            return make_connective(op == "imp" ? Op::imp : Op::iff, build(s.items[1]), build(s.items[2]));
        }
        Op q;
        if (op == "E" || op == "exists") q = Op::exists;
        else if (op == "A" || op == "forall") q = Op::forall;
        else if (op == "Eb") q = Op::bexists;
        else if (op == "Ab") q = Op::bforall;
        else if (op == "top") q = Op::top;
        else fail(head, "unknown operator '" + op + "'");
        arity(2);
        Term v = term(s.items[1]);
        if (v.is_max) fail(s.items[1], "max cannot be quantified");
        return make_quantifier(q, v.var, build(s.items[2]));
    }

private:
    [[noreturn]] static void fail(const Sexp& at, const std::string& what) {
        throw Error(ErrorKind::syntax_error, what + " at offset " + std::to_string(at.pos));
    }

    static Term term(const Sexp& s) {
        if (s.is_list()) fail(s, "expected a variable or max");
        if (s.atom == "max") return Term::max();
        const unsigned char c = static_cast<unsigned char>(s.atom[0]);
        if (!(std::isalpha(c) || c == '_') || keywords().count(s.atom))
            fail(s, "'" + s.atom + "' is not a variable name");
        for (char ch : s.atom)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\''))
                fail(s, "'" + s.atom + "' is not a variable name");
        return Term::variable(s.atom);
    }

    static int number(const Sexp& s) {
        if (s.is_list() || s.atom.empty() ||
            !std::all_of(s.atom.begin(), s.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            fail(s, "expected a non-negative integer");
        if (s.atom.size() > 6) fail(s, "integer too large");
        return std::stoi(s.atom);
    }

    std::set<std::string> used_;
};

inline void collect_atoms(const Sexp& s, std::set<std::string>& out) {
    if (!s.is_list()) out.insert(s.atom);
    for (const auto& i : s.items) collect_atoms(i, out);
}

inline FormulaPtr parse_any(std::string_view text) {
    Sexp s = Reader(text).read_all();
    std::set<std::string> used;
    collect_atoms(s, used);
    return Builder(std::move(used)).build(s);
}

inline bool uses_op(const Formula& f, Op op) {
    if (f.op == op) return true;
    if (f.is_atom()) return false;
    return uses_op(*f.lhs, op) || (f.rhs && uses_op(*f.rhs, op));
}

} // namespace detail

/// Parses a word-logic formula (free variables allowed; compile_sf checks
/// for sentences).
inline FormulaPtr parse_sf(std::string_view text) {
    FormulaPtr f = detail::parse_any(text);
    for (Op op : {Op::eps, Op::bexists, Op::bforall, Op::top})
        if (detail::uses_op(*f, op))
            throw Error(ErrorKind::syntax_error,
                        "'" + std::string(op_name(op)) + "' belongs to the integer logic, not the word logic");
    return f;
}

struct NumShape {
    std::string b;
    std::optional<std::string> n; // absent when the main part has no eps atom
};

/// Checks the L_{U,n} shape: a top wrapper, n only as the first argument of
/// eps, only bounded quantifiers, every other variable bound.
inline NumShape check_num_shape(const Formula& f) {
    auto violation = [](const std::string& what, const Formula& at) {
        throw Error(ErrorKind::shape_violation, what + ": " + print(at));
    };
    if (f.op != Op::top) violation("expected (top b f) or (E b (and (eps 1 b b) f))", f);
    NumShape shape{f.var, std::nullopt};

    std::vector<const Formula*> stack{f.lhs.get()};
    while (!stack.empty()) {
        const Formula* g = stack.back();
        stack.pop_back();
        if (g->op == Op::eps) {
            if (g->first.is_max) violation("max is not a term of the integer logic", *g);
            if (shape.n && *shape.n != g->first.var) violation("eps atoms disagree on the free variable", *g);
            shape.n = g->first.var;
        }
        if (!g->is_atom()) {
            stack.push_back(g->lhs.get());
            if (g->rhs) stack.push_back(g->rhs.get());
        }
    }
    if (shape.n && *shape.n == shape.b) violation("n and b must be different variables", f);

    std::vector<std::string> bound;
    auto is_bound = [&](const std::string& v) { return std::find(bound.begin(), bound.end(), v) != bound.end(); };
    auto check_var = [&](const Term& t, const Formula& at) {
        if (t.is_max) violation("max is not a term of the integer logic", at);
        if (t.var == shape.b) violation("b may only appear in the top wrapper", at);
        if (shape.n && t.var == *shape.n) violation("n may only appear as the first argument of eps", at);
        if (!is_bound(t.var)) violation("variable '" + t.var + "' is not introduced by a bounded quantifier", at);
    };
    auto walk = [&](auto&& self, const Formula& g) -> void {
        switch (g.op) {
        case Op::less:
        case Op::equal:
        case Op::less_equal:
            check_var(g.first, g);
            check_var(g.second, g);
            return;
        case Op::eps: check_var(g.second, g); return;
        case Op::letter: violation("letter predicates are written (eps j n x) in the integer logic", g);
        case Op::exists:
        case Op::forall: violation("only bounded quantifiers (Eb, Ab) may appear in the main part", g);
        case Op::top: violation("nested top wrapper", g);
        case Op::bexists:
        case Op::bforall:
            if (g.var == shape.b || (shape.n && g.var == *shape.n))
                violation("bounded quantifier may not rebind n or b", g);
            bound.push_back(g.var);
            self(self, *g.lhs);
            bound.pop_back();
            return;
        default:
            self(self, *g.lhs);
            if (g.rhs) self(self, *g.rhs);
        }
    };
    walk(walk, *f.lhs);
    return shape;
}

/// Parses an L_{U,n} formula; (E b (and (eps 1 b b) f ...)) is normalised to
/// (top b f).
inline FormulaPtr parse_num(std::string_view text) {
    detail::Sexp s = detail::Reader(text).read_all();
    std::set<std::string> used;
    detail::collect_atoms(s, used);
    detail::Builder builder(used);
    FormulaPtr f;
    auto is_b_guard = [](const detail::Sexp& e, const std::string& b) {
        return e.is_list() && e.items.size() == 4 && e.items[0].atom == "eps" && e.items[1].atom == "1" &&
               e.items[2].atom == b && e.items[3].atom == b;
    };
    if (s.is_list() && s.items.size() == 3 && (s.items[0].atom == "E" || s.items[0].atom == "exists") &&
        !s.items[1].is_list()) {
        const std::string& b = s.items[1].atom;
        const detail::Sexp& body = s.items[2];
        if (body.is_list() && body.items.size() >= 3 && body.items[0].atom == "and" && is_b_guard(body.items[1], b)) {
            detail::Sexp rest;
            if (body.items.size() == 3) {
                rest = body.items[2];
            } else {
                rest = body;
                rest.items.erase(rest.items.begin() + 1);
            }
            f = top(b, builder.build(rest));
        }
    }
    if (!f) f = builder.build(s);
    check_num_shape(*f);
    return f;
}

} // namespace starfree::logic
