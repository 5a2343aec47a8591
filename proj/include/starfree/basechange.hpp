#pragma once

// Changing between base p and base p^k on automata: grouping k digits into
// one letter, and expanding a letter back into its k-digit block.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starfree/aperiodic.hpp"
#include "starfree/dfa.hpp"
#include "starfree/numeration.hpp"

namespace starfree {

namespace detail {

/// p when the alphabet is exactly {0, ..., p-1}.
inline int digit_base(const Alphabet& a) {
    for (Letter i = 0; i < a.size(); ++i)
        if (!a[i].is_digit() || a[i].value() != static_cast<int>(i))
            throw Error(ErrorKind::invalid_argument, "expected the digit alphabet {0,...,p-1}");
    if (a.size() < 2) throw Error(ErrorKind::invalid_argument, "a base needs at least two digits");
    return static_cast<int>(a.size());
}

/// k-digit base-p block of j, most significant first.
inline std::vector<int> block(std::int64_t j, int p, int k) {
    std::vector<int> out(k, 0);
    for (int i = k - 1; i >= 0; --i, j /= p) out[i] = static_cast<int>(j % p);
    return out;
}

inline std::int64_t int_pow(std::int64_t p, int k) {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

} // namespace detail

/// Grouped automaton before minimization: same states, initial and accepting
/// sets as `m`, with δ'(q, j) = δ(q, block_k(j)). With `close` set the
/// source is first saturated under insertion and removal of leading zeros
/// (so 0 loops on the initial state); otherwise it must already be.
inline Dfa group_table(const Dfa& m, int k, bool close = true) {
    if (k < 1) throw Error(ErrorKind::invalid_argument, "group exponent must be at least 1");
    const int p = detail::digit_base(m.alphabet());
    const std::int64_t q = detail::int_pow(p, k);
    if (q > 1 << 16) throw Error(ErrorKind::invalid_argument, "grouped alphabet too large");
    Dfa src = m;
    if (close) src = zero_normalize(m);
    else if (!equivalent(zero_normalize(m), m))
        throw Error(ErrorKind::not_zero_closed, "source language is not closed under leading zeros");
    Alphabet grouped = Alphabet::digits(0, static_cast<int>(q - 1));
    std::vector<State> table(src.size() * q);
    for (State s = 0; s < src.size(); ++s)
        for (std::int64_t j = 0; j < q; ++j) {
            State t = s;
            for (int d : detail::block(j, p, k)) t = src.next(t, static_cast<Letter>(d));
            table[s * q + j] = t;
        }
    return Dfa(grouped, src.size(), src.initial(), src.accepting(), std::move(table));
}

inline Dfa group_dfa(const Dfa& m, int k, bool close = true) { return minimal(group_table(m, k, close)); }

/// Replaces each letter j of Σ_{p^k} by its k-digit base-p block. Unless
/// `close` is false the result is saturated under leading zeros, so
/// 0*ρ_{p^k}(X) maps to 0*ρ_p(X).
inline Dfa expand_dfa(const Dfa& m, int p, bool close = true) {
    if (p < 2) throw Error(ErrorKind::invalid_argument, "base must be at least 2");
    const std::size_t size = m.letters();
    int k = 0;
    std::int64_t power = 1;
    while (power < static_cast<std::int64_t>(size)) {
        power *= p;
        ++k;
    }
    if (power != static_cast<std::int64_t>(size) || k < 1)
        throw Error(ErrorKind::not_a_power_alphabet,
                    "alphabet of size " + std::to_string(size) + " is not a power of " + std::to_string(p));
    detail::digit_base(m.alphabet());

    Nfa nfa(Alphabet::digits(0, p - 1));
    for (State q = 0; q < m.size(); ++q) nfa.add_state(m.is_accepting(q));
    nfa.initials.push_back(m.initial());
    for (State q = 0; q < m.size(); ++q)
        for (Letter j = 0; j < size; ++j) {
            auto digits = detail::block(j, p, k);
            State at = q;
            for (int i = 0; i + 1 < k; ++i) {
                State mid = nfa.add_state(false);
                nfa.add_edge(at, static_cast<Letter>(digits[i]), mid);
                at = mid;
            }
            nfa.add_edge(at, static_cast<Letter>(digits[k - 1]), m.next(q, j));
        }
    Dfa out = minimal(determinize(nfa));
    return close ? zero_normalize(out) : out;
}

struct GroupingReport {
    Dfa source;  // input saturated under leading zeros, base p
    Dfa grouped; // minimal, base p^k
    int p = 0;
    int k = 0;
    std::size_t grouped_states_before_minimization = 0;
    bool source_aperiodic = false;
    bool grouped_aperiodic = false;
    std::size_t samples = 0;
    std::size_t agreement = 0;
    std::optional<Natural> first_disagreement;
};

/// Groups, checks both automata for aperiodicity and compares membership of
/// ρ_p(n) and ρ_{p^k}(n) for n < samples. Raises PreservationViolated when an
/// aperiodic source yields a non-aperiodic grouped automaton.
inline GroupingReport grouping_preservation_check(const Dfa& m, int k, std::size_t samples = 10'000) {
    GroupingReport r;
    r.p = detail::digit_base(m.alphabet());
    r.k = k;
    r.source = zero_normalize(m);
    Dfa raw = group_table(r.source, k, false);
    r.grouped_states_before_minimization = raw.size();
    r.grouped = minimal(raw);
    r.source_aperiodic = is_aperiodic(r.source).aperiodic;
    r.grouped_aperiodic = is_aperiodic(r.grouped).aperiodic;
    if (r.source_aperiodic && !r.grouped_aperiodic)
        throw Error(ErrorKind::preservation_violated,
                    "grouping by " + std::to_string(k) + " turned an aperiodic automaton into a non-aperiodic one");
    const auto base_p = NumerationSystem::positional(r.p);
    const auto base_q = NumerationSystem::positional(static_cast<int>(detail::int_pow(r.p, k)));
    r.samples = samples;
    for (std::size_t n = 0; n < samples; ++n) {
        bool a = r.source.accepts(greedy_repr(base_p, n).word(r.source.alphabet()));
        bool b = r.grouped.accepts(greedy_repr(base_q, n).word(r.grouped.alphabet()));
        if (a == b) ++r.agreement;
        else if (!r.first_disagreement) r.first_disagreement = Natural(n);
    }
    return r;
}

} // namespace starfree
