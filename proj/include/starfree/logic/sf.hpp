#pragma once

// First-order logic on word models: evaluation and compilation to automata.

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "starfree/aperiodic.hpp"
#include "starfree/dfa.hpp"
#include "starfree/logic/formula.hpp"

namespace starfree::logic {

/// Positions 1..max counted from the right; digit_at[p] is the letter at p.
struct WordModel {
    int max = 0;
    std::vector<int> digit_at; // index 0 unused
    std::map<int, std::set<int>> predicates; // P_a for a >= 1 present in the word

    const std::set<int>& positions(int a) const {
        static const std::set<int> none;
        auto it = predicates.find(a);
        return it == predicates.end() ? none : it->second;
    }
};

inline WordModel word_model(const std::vector<int>& digits) {
    if (digits.empty()) throw Error(ErrorKind::empty_word, "word models exist only for nonempty words");
    WordModel m;
    m.max = static_cast<int>(digits.size());
    m.digit_at.assign(digits.size() + 1, 0);
    for (int p = 1; p <= m.max; ++p) {
        int d = digits[digits.size() - p];
        m.digit_at[p] = d;
        if (d >= 1) m.predicates[d].insert(p);
    }
    return m;
}

inline WordModel word_model(const Alphabet& alphabet, const Word& w) {
    return word_model(digits_from_word(alphabet, w));
}

using Valuation = std::map<std::string, int>;

namespace detail {

inline int position_of(const Term& t, const WordModel& m, const Valuation& v) {
    if (t.is_max) return m.max;
    auto it = v.find(t.var);
    if (it == v.end()) throw Error(ErrorKind::unbound_variable, "variable '" + t.var + "' has no value");
    return it->second;
}

inline bool eval(const Formula& f, const WordModel& m, Valuation& v) {
    switch (f.op) {
    case Op::less: return position_of(f.first, m, v) < position_of(f.second, m, v);
    case Op::equal: return position_of(f.first, m, v) == position_of(f.second, m, v);
    case Op::less_equal: return position_of(f.first, m, v) <= position_of(f.second, m, v);
    case Op::letter: return m.digit_at[position_of(f.first, m, v)] == f.index;
    case Op::not_: return !eval(*f.lhs, m, v);
    case Op::and_: return eval(*f.lhs, m, v) && eval(*f.rhs, m, v);
    case Op::or_: return eval(*f.lhs, m, v) || eval(*f.rhs, m, v);
    case Op::imp: return !eval(*f.lhs, m, v) || eval(*f.rhs, m, v);
    case Op::iff: return eval(*f.lhs, m, v) == eval(*f.rhs, m, v);
    case Op::exists:
    case Op::forall: {
        const bool want = f.op == Op::exists;
        auto saved = v.find(f.var) == v.end() ? std::optional<int>() : std::optional<int>(v[f.var]);
        bool result = !want;
        for (int p = 1; p <= m.max; ++p) {
            v[f.var] = p;
            if (eval(*f.lhs, m, v) == want) {
                result = want;
                break;
            }
        }
        if (saved) v[f.var] = *saved;
        else v.erase(f.var);
        return result;
    }
    default:
        throw Error(ErrorKind::invalid_argument, "'" + std::string(op_name(f.op)) + "' is not part of the word logic");
    }
}

} // namespace detail

inline bool eval_sf(const Formula& f, const WordModel& m, Valuation v = {}) { return detail::eval(f, m, v); }
inline bool eval_sf(const FormulaPtr& f, const WordModel& m, Valuation v = {}) { return detail::eval(*f, m, v); }

// ---------------------------------------------------------------------------
// Compilation
//
// A subformula with free variables x_0 < ... < x_{V-1} is compiled over the
// alphabet Σ × {0,1}^V (symbol parts [digit, bit_0, ..., bit_{V-1}]); the
// letter index is base * 2^V + mask with bit_i at weight 2^{V-1-i}. Words are
// read from position 1 (the least significant digit) upwards. Automata are
// only required to be right on words where every track carries exactly one 1.

namespace detail {

struct Tracked {
    Dfa dfa;
    std::vector<std::string> vars; // sorted
};

class Compiler {
public:
    explicit Compiler(Alphabet sigma) : sigma_(std::move(sigma)) {}

    Tracked compile(const FormulaPtr& f) {
        const std::string key = print(*f);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Tracked t = build(*f);
        memo_.emplace(key, t);
        return t;
    }

    const Alphabet& sigma() const { return sigma_; }

    Alphabet track_alphabet(std::size_t v) {
        if (auto it = alphabets_.find(v); it != alphabets_.end()) return it->second;
        std::vector<Symbol> symbols;
        for (const auto& s : sigma_.symbols())
            for (std::uint32_t mask = 0; mask < (1u << v); ++mask) {
                Symbol sym{{s.value()}};
                for (std::size_t i = 0; i < v; ++i) sym.parts.push_back((mask >> (v - 1 - i)) & 1);
                symbols.push_back(std::move(sym));
            }
        Alphabet a(std::move(symbols));
        alphabets_.emplace(v, a);
        return a;
    }

private:
    static bool bit(Letter l, std::size_t i, std::size_t v) { return (l >> (v - 1 - i)) & 1; }
    static Letter base(Letter l, std::size_t v) { return l >> v; }

    Tracked lift(const Tracked& t, const std::vector<std::string>& vars) {
        if (t.vars == vars) return t;
        const std::size_t from = t.vars.size(), to = vars.size();
        std::vector<std::size_t> where(from);
        for (std::size_t i = 0; i < from; ++i)
            where[i] = std::lower_bound(vars.begin(), vars.end(), t.vars[i]) - vars.begin();
        Alphabet alpha = track_alphabet(to);
        std::vector<State> table(t.dfa.size() * alpha.size());
        for (State q = 0; q < t.dfa.size(); ++q)
            for (Letter l = 0; l < alpha.size(); ++l) {
                Letter src = base(l, to) << from;
                for (std::size_t i = 0; i < from; ++i)
                    if (bit(l, where[i], to)) src |= 1u << (from - 1 - i);
                table[q * alpha.size() + l] = t.dfa.next(q, src);
            }
        return {Dfa(alpha, t.dfa.size(), t.dfa.initial(), t.dfa.accepting(), std::move(table)), vars};
    }

    Tracked combine(const Tracked& a, const Tracked& b, BoolOp op) {
        std::vector<std::string> vars;
        std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(vars));
        return {product(lift(a, vars).dfa, lift(b, vars).dfa, op), vars};
    }

    /// Exactly one letter carries bit i.
    Dfa validity(std::size_t i, std::size_t v) {
        return explore(track_alphabet(v), 0, [&](int s, Letter l) { return bit(l, i, v) ? (s == 0 ? 1 : 2) : s; },
                       [](int s) { return s == 1; });
    }

    Tracked atom(const Formula& f) {
        if (f.op == Op::letter) {
            const int a = f.index;
            if (!sigma_.contains(Symbol::digit(a)))
                throw Error(ErrorKind::invalid_argument, "letter " + std::to_string(a) + " is not in the alphabet");
            Alphabet alpha = track_alphabet(1);
            const Letter target = sigma_.index_of_digit(a);
            Dfa d = explore(alpha, 0,
                            [&](int s, Letter l) {
                                if (!bit(l, 0, 1)) return s;
                                return s == 0 && base(l, 1) == target ? 1 : 2;
                            },
                            [](int s) { return s == 1; });
            return {minimal(d), {f.first.var}};
        }
        if (f.first.var == f.second.var) {
            // x<x is false; x=x and x<=x hold on every valid word
            Alphabet alpha = track_alphabet(1);
            return {f.op == Op::less ? empty_language(alpha) : universal_language(alpha), {f.first.var}};
        }
        std::vector<std::string> vars{f.first.var, f.second.var};
        const bool swapped = vars[0] > vars[1];
        if (swapped) std::swap(vars[0], vars[1]);
        const std::size_t xi = swapped ? 1 : 0, yi = 1 - xi;
        Alphabet alpha = track_alphabet(2);
        // state: bit 0 = x seen, bit 1 = y seen, 4 = order violated
        auto step = [&](int s, Letter l) {
            if (s == 4) return 4;
            const bool bx = bit(l, xi, 2), by = bit(l, yi, 2);
            if ((bx && (s & 1)) || (by && (s & 2))) return 4;
            int seen = s | (bx ? 1 : 0) | (by ? 2 : 0);
            switch (f.op) {
            case Op::less:
                if (by && !(s & 1)) return 4;
                break;
            case Op::equal:
                if (bx != by) return 4;
                break;
            default: // less_equal
                if (by && !bx && !(s & 1)) return 4;
            }
            return seen;
        };
        Dfa d = explore(alpha, 0, step, [](int s) { return s == 3; });
        return {minimal(d), vars};
    }

    Tracked build(const Formula& f) {
        switch (f.op) {
        case Op::less:
        case Op::equal:
        case Op::less_equal:
        case Op::letter: return atom(f);
        case Op::not_: {
            Tracked t = compile(f.lhs);
            return {complement(t.dfa), t.vars};
        }
        case Op::and_: return combine(compile(f.lhs), compile(f.rhs), BoolOp::intersection);
        case Op::or_: return combine(compile(f.lhs), compile(f.rhs), BoolOp::union_);
        case Op::imp: {
            Tracked l = compile(f.lhs);
            return combine({complement(l.dfa), l.vars}, compile(f.rhs), BoolOp::union_);
        }
        case Op::iff: {
            Tracked t = combine(compile(f.lhs), compile(f.rhs), BoolOp::symmetric_difference);
            return {complement(t.dfa), t.vars};
        }
        case Op::exists: return project_out(compile(f.lhs), f.var);
        case Op::forall: {
            Tracked body = compile(f.lhs);
            Tracked t = project_out({complement(body.dfa), body.vars}, f.var);
            return {complement(t.dfa), t.vars};
        }
        default:
            throw Error(ErrorKind::invalid_argument, "'" + std::string(op_name(f.op)) + "' is not part of the word logic");
        }
    }

    Tracked project_out(const Tracked& body, const std::string& x) {
        auto it = std::find(body.vars.begin(), body.vars.end(), x);
        if (it == body.vars.end()) return body;
        const std::size_t xi = it - body.vars.begin(), v = body.vars.size();
        Dfa restricted = product(body.dfa, validity(xi, v), BoolOp::intersection);
        std::vector<std::string> vars = body.vars;
        vars.erase(vars.begin() + xi);
        Nfa nfa(track_alphabet(v - 1));
        for (State q = 0; q < restricted.size(); ++q) nfa.add_state(restricted.is_accepting(q));
        nfa.initials.push_back(restricted.initial());
        for (State q = 0; q < restricted.size(); ++q)
            for (Letter l = 0; l < restricted.letters(); ++l) {
                Letter b = base(l, v) << (v - 1);
                for (std::size_t i = 0, j = 0; i < v; ++i) {
                    if (i == xi) continue;
                    if (bit(l, i, v)) b |= 1u << (v - 2 - j);
                    ++j;
                }
                nfa.add_edge(q, b, restricted.next(q, l));
            }
        return {minimal(determinize(nfa)), vars};
    }

    Alphabet sigma_;
    std::unordered_map<std::string, Tracked> memo_;
    std::map<std::size_t, Alphabet> alphabets_;
};

} // namespace detail

/// Rewrites occurrences of max into a fresh variable pinned to the last
/// position: ∃m (¬∃z (m<z) ∧ φ[max:=m]).
inline FormulaPtr eliminate_max(const FormulaPtr& f) {
    if (!mentions_max(*f)) return f;
    auto used = variable_names(*f);
    std::string m = fresh_name("m", used);
    used.insert(m);
    std::string z = fresh_name("z", used);
    FormulaPtr pinned = negate(exists(z, less(Term::variable(m), Term::variable(z))));
    return exists(m, conj(pinned, substitute(f, Term::max(), Term::variable(m))));
}

/// Minimal automaton of {w ∈ Σ⁺ : word_model(w) ⊨ φ}, read most significant
/// digit first. Every result is checked to be aperiodic.
inline Dfa compile_sf(const FormulaPtr& sentence, const Alphabet& sigma) {
    if (auto fv = free_variables(*sentence); !fv.empty())
        throw Error(ErrorKind::not_a_sentence, "free variable '" + *fv.begin() + "' in " + print(*sentence));
    for (const auto& s : sigma.symbols())
        if (!s.is_digit()) throw Error(ErrorKind::invalid_argument, "compile_sf expects a digit alphabet");
    detail::Compiler compiler(sigma);
    detail::Tracked t = compiler.compile(eliminate_max(sentence));
    Dfa plain = relabel(t.dfa, sigma); // no tracks left; the symbols coincide
    Dfa result = minimal(intersect(reverse(plain), nonempty_words(sigma)));
    if (!is_aperiodic(result).aperiodic)
        throw Error(ErrorKind::not_aperiodic, "compiled automaton is not aperiodic: " + print(*sentence));
    return result;
}

} // namespace starfree::logic
