#pragma once

// The integer logic L_{U,n}: formulas (∃b)(ε_1(b,b) ∧ 𝔓) whose bound
// variables range over basis elements below b. Evaluation, the syntactic
// bridges to the word logic, and the canonical-representation sentence.

#include <optional>
#include <string>
#include <vector>

#include "starfree/logic/formula.hpp"
#include "starfree/logic/sf.hpp"
#include "starfree/numeration.hpp"

namespace starfree::logic {

// ---------------------------------------------------------------------------
// Translations

namespace detail {

inline FormulaPtr num_main_to_sf(const FormulaPtr& f) {
    switch (f->op) {
    case Op::eps: return letter(f->index, f->second);
    case Op::bexists: return exists(f->var, num_main_to_sf(f->lhs));
    case Op::bforall: return forall(f->var, num_main_to_sf(f->lhs));
    default:
        if (f->is_atom()) return f;
        return make_connective(f->op, num_main_to_sf(f->lhs), f->rhs ? num_main_to_sf(f->rhs) : nullptr);
    }
}

/// P_a(x) ↦ ε_a(n,x); P_0(x) ↦ no ε_j(n,x) holds; quantifiers become bounded.
inline FormulaPtr sf_to_num_main(const FormulaPtr& f, const std::string& n, int c) {
    switch (f->op) {
    case Op::letter: {
        const std::string& x = f->first.var;
        if (f->index > c)
            throw Error(ErrorKind::invalid_argument,
                        "letter " + std::to_string(f->index) + " exceeds the largest digit " + std::to_string(c));
        if (f->index >= 1) return eps(f->index, n, x);
        FormulaPtr any = eps(1, n, x);
        for (int j = 2; j <= c; ++j) any = disj(any, eps(j, n, x));
        return negate(any);
    }
    case Op::exists: return bexists(f->var, sf_to_num_main(f->lhs, n, c));
    case Op::forall: return bforall(f->var, sf_to_num_main(f->lhs, n, c));
    default:
        if (f->is_atom()) return f;
        return make_connective(f->op, sf_to_num_main(f->lhs, n, c), f->rhs ? sf_to_num_main(f->rhs, n, c) : nullptr);
    }
}

} // namespace detail

/// Drops the (∃b) shell and maps ε_j(n,x), bounded ∃, bounded ∀ to P_j(x),
/// ∃, ∀. Position x corresponds to the basis element U_{x-1}.
inline FormulaPtr num_to_sf(const FormulaPtr& psi) {
    check_num_shape(*psi);
    return detail::num_main_to_sf(psi->lhs);
}

/// The converse bridge. `max` becomes a bounded variable pinned to the
/// largest basis element below b.
inline FormulaPtr sf_to_num(const FormulaPtr& phi, const NumerationSystem& u) {
    if (auto fv = free_variables(*phi); !fv.empty())
        throw Error(ErrorKind::not_a_sentence, "free variable '" + *fv.begin() + "' in " + print(*phi));
    FormulaPtr body = phi;
    auto used = variable_names(*body);
    if (mentions_max(*body)) {
        std::string m = fresh_name("m", used);
        used.insert(m);
        std::string z = fresh_name("z", used);
        used.insert(z);
        body = exists(m, conj(forall(z, less_equal(Term::variable(z), Term::variable(m))),
                              substitute(body, Term::max(), Term::variable(m))));
    }
    std::string b = fresh_name("b", used);
    used.insert(b);
    std::string n = fresh_name("n", used);
    return top(b, detail::sf_to_num_main(body, n, u.max_digit()));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

/// digit[i][j]: ε_j(n, U_i) for i below the window end.
struct EpsTable {
    std::vector<std::vector<bool>> digit;
};

inline bool eval_main(const Formula& f, const EpsTable& eps_table, std::size_t m, std::map<std::string, std::size_t>& v) {
    auto idx = [&](const Term& t) { return v.at(t.var); };
    switch (f.op) {
    case Op::less: return idx(f.first) < idx(f.second);
    case Op::equal: return idx(f.first) == idx(f.second);
    case Op::less_equal: return idx(f.first) <= idx(f.second);
    case Op::eps: {
        std::size_t i = idx(f.second);
        const auto& row = eps_table.digit[i];
        return f.index < static_cast<int>(row.size()) && row[f.index];
    }
    case Op::not_: return !eval_main(*f.lhs, eps_table, m, v);
    case Op::and_: return eval_main(*f.lhs, eps_table, m, v) && eval_main(*f.rhs, eps_table, m, v);
    case Op::or_: return eval_main(*f.lhs, eps_table, m, v) || eval_main(*f.rhs, eps_table, m, v);
    case Op::imp: return !eval_main(*f.lhs, eps_table, m, v) || eval_main(*f.rhs, eps_table, m, v);
    case Op::iff: return eval_main(*f.lhs, eps_table, m, v) == eval_main(*f.rhs, eps_table, m, v);
    case Op::bexists:
    case Op::bforall: {
        // x ranges over U_0 .. U_{m-1}, the basis elements below b = U_m
        const bool want = f.op == Op::bexists;
        auto it = v.find(f.var);
        std::optional<std::size_t> saved = it == v.end() ? std::nullopt : std::optional<std::size_t>(it->second);
        bool result = !want;
        for (std::size_t i = 0; i < m; ++i) {
            v[f.var] = i;
            if (eval_main(*f.lhs, eps_table, m, v) == want) {
                result = want;
                break;
            }
        }
        if (saved) v[f.var] = *saved;
        else v.erase(f.var);
        return result;
    }
    default: throw Error(ErrorKind::shape_violation, "unexpected node in main part: " + print(f));
    }
}

inline std::size_t window_start(const Representation& rho) { return std::max<std::size_t>(1, rho.digits.size()); }

} // namespace detail

/// Default ∃b search window: states of the compiled word automaton + 1.
inline std::size_t default_slack(const FormulaPtr& psi, const NumerationSystem& u) {
    return compile_sf(num_to_sf(psi), u.digit_alphabet()).size() + 1;
}

/// ψ(n) with b = U_m searched over m ∈ [ℓ, ℓ+slack], ℓ = |ρ_U(n)| (1 for n = 0).
inline bool eval_num(const FormulaPtr& psi, const Natural& n, const NumerationSystem& u,
                     std::optional<std::size_t> slack = std::nullopt) {
    require_greedy(u);
    check_num_shape(*psi);
    const std::size_t s = slack ? *slack : default_slack(psi, u);
    const Representation rho = greedy_repr(u, n);
    const std::size_t lo = detail::window_start(rho), hi = lo + s;
    detail::EpsTable table;
    const int c = u.max_digit();
    for (std::size_t i = 0; i < hi; ++i) {
        std::vector<bool> row(c + 1, false);
        const Natural ui = u.basis(i);
        for (int j = 1; j <= c; ++j) row[j] = epsilon(u, rho, ui, j);
        table.digit.push_back(std::move(row));
    }
    std::map<std::string, std::size_t> v;
    for (std::size_t m = lo; m <= hi; ++m)
        if (detail::eval_main(*psi->lhs, table, m, v)) return true;
    return false;
}

/// Does some zero padding 0^j ρ_U(n) of length within the eval_num window
/// lie in the compiled language?
inline bool padded_member(const Dfa& compiled, const NumerationSystem& u, const Natural& n, std::size_t slack) {
    const Representation rho = greedy_repr(u, n);
    const std::size_t lo = detail::window_start(rho);
    std::vector<int> digits(lo - rho.digits.size(), 0);
    digits.insert(digits.end(), rho.digits.begin(), rho.digits.end());
    for (std::size_t m = lo; m <= lo + slack; ++m) {
        if (compiled.accepts(word_from_digits(compiled.alphabet(), digits))) return true;
        digits.insert(digits.begin(), 0);
    }
    return false;
}

/// {n ≤ horizon : ψ(n)}, cross-checked against the compiled word automaton.
inline std::vector<Natural> define_set(const FormulaPtr& psi, const NumerationSystem& u, const Natural& horizon,
                                       std::optional<std::size_t> slack = std::nullopt) {
    require_greedy(u);
    const Dfa compiled = compile_sf(num_to_sf(psi), u.digit_alphabet());
    const std::size_t s = slack ? *slack : compiled.size() + 1;
    std::vector<Natural> out;
    for (Natural n = 0; n <= horizon; ++n) {
        const bool direct = eval_num(psi, n, u, s);
        if (direct != padded_member(compiled, u, n, s))
            throw Error(ErrorKind::translation_mismatch,
                        "integer and word semantics disagree at n = " + n.str() + " for " + print(*psi));
        if (direct) out.push_back(n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical representations

/// The no-11 sentence written as in the worked example; the universal over
/// x = y forces every position to be 0, so it only defines 0⁺.
inline FormulaPtr fibonacci_sentence_literal() {
    return parse_sf("(A x (A y (or (E z (and (< x z) (< z y))) (not (and (P 1 x) (P 1 y))))))");
}

/// Words without two adjacent 1s.
inline FormulaPtr fibonacci_sentence() {
    return parse_sf(
        "(A x (A y (imp (< x y) (or (E z (and (< x z) (< z y))) (not (and (P 1 x) (P 1 y)))))))");
}

/// 𝔛: a sentence defining 𝒩_U ∩ Σ⁺.
inline FormulaPtr canonical_sentence(const NumerationSystem& u) {
    require_greedy(u);
    if (!is_aperiodic(canonical_dfa(u)).aperiodic)
        throw Error(ErrorKind::canonical_not_aperiodic, "canonical representations of " + u.describe() +
                                                           " do not form an aperiodic language");
    if (u.integer_base()) return parse_sf("(A x (= x x))");
    if (u.is_fibonacci()) return fibonacci_sentence();
    throw Error(ErrorKind::canonical_form_unknown, "no built-in canonical sentence for " + u.describe());
}

/// (∃b)(ε_1(b,b) ∧ 𝔓(ψ) ∧ 𝔛_ℕ), the two parts sharing only n and b.
inline FormulaPtr inject_canonical(const FormulaPtr& psi, const NumerationSystem& u) {
    const NumShape shape = check_num_shape(*psi);
    FormulaPtr x = canonical_sentence(u);
    auto used = variable_names(*psi);
    std::map<std::string, std::string> rename;
    for (const auto& v : variable_names(*x)) {
        std::string fresh = fresh_name(v, used);
        used.insert(fresh);
        rename[v] = fresh;
    }
    x = rename_bound(eliminate_max(x), rename);
    const std::string n = shape.n ? *shape.n : fresh_name("n", used);
    FormulaPtr x_n = detail::sf_to_num_main(x, n, u.max_digit());
    return top(shape.b, conj(psi->lhs, x_n));
}

} // namespace starfree::logic
