#pragma once

// Bijective (p-adic) versus greedy p-ary representations: the normalization
// relation as a length-synchronized automaton over digit pairs, padding
// products, projections, and the transfer of star-freeness between the two.

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "starfree/aperiodic.hpp"
#include "starfree/dfa.hpp"
#include "starfree/numeration.hpp"
#include "starfree/setspec.hpp"

namespace starfree {

enum class Side { left, right };

inline int side_index(Side s) { return s == Side::left ? 0 : 1; }

/// The bijective track is padded with zeros on its most significant side,
/// i.e. words 0*{1..p}* when read most significant first.
inline constexpr bool pad_bijective_on_msd_side = true;

inline Alphabet normalization_alphabet(int p) {
    return Alphabet::product(Alphabet::digits(0, p), Alphabet::digits(0, p - 1));
}

/// Word over a pair alphabet from two equal-length digit sequences.
inline Word pair_word(const Alphabet& pairs, const std::vector<int>& left, const std::vector<int>& right) {
    if (left.size() != right.size()) throw Error(ErrorKind::invalid_argument, "pair tracks differ in length");
    Word w;
    w.reserve(left.size());
    for (std::size_t i = 0; i < left.size(); ++i) w.push_back(pairs.index_of(Symbol::pair(left[i], right[i])));
    return w;
}

/// ν̂_p^R, read least significant digit first: pairs (a, b) with
/// a ∈ {0..p}, b ∈ {0..p-1}; the left track is a bijective word followed by
/// its zero pad, the right track a p-ary word of the same value.
inline Dfa normalization_transducer_reversed(int p) {
    if (p < 2) throw Error(ErrorKind::invalid_argument, "base must be at least 2");
    const Alphabet sigma = normalization_alphabet(p);
    // (carry, in pad phase, dead)
    using Key = std::tuple<int, bool, bool>;
    auto step = [&](Key k, Letter letter) -> Key {
        auto [carry, pad, dead] = k;
        if (dead) return k;
        const int a = sigma[letter].parts[0], b = sigma[letter].parts[1];
        if (a == 0) {
            // pad: nothing left but the carry
            if (b != carry) return {0, true, true};
            return {0, true, false};
        }
        if (pad) return {0, true, true};
        const int sum = a + carry;
        if (sum % p != b) return {0, false, true};
        return {sum / p, false, false};
    };
    auto accept = [](Key k) { return !std::get<2>(k) && std::get<0>(k) == 0; };
    return minimal(explore(sigma, Key{0, false, false}, step, accept));
}

/// ν̂_p, read most significant digit first.
inline Dfa normalization_transducer(int p) { return minimal(reverse(normalization_transducer_reversed(p))); }

inline bool relation_contains(const Dfa& nu, const std::vector<int>& left, const std::vector<int>& right) {
    return nu.accepts(pair_word(nu.alphabet(), left, right));
}

/// L ⊕ Γ* (side left: L on the left track) or Γ* ⊕ L (side right).
inline Dfa pad_product(const Dfa& l, const Alphabet& gamma, Side side) {
    const Alphabet pairs =
        side == Side::left ? Alphabet::product(l.alphabet(), gamma) : Alphabet::product(gamma, l.alphabet());
    const int tracked = side_index(side);
    std::vector<State> table(l.size() * pairs.size());
    for (State q = 0; q < l.size(); ++q)
        for (Letter a = 0; a < pairs.size(); ++a)
            table[q * pairs.size() + a] = l.next(q, l.alphabet().index_of_digit(pairs[a].parts[tracked]));
    return minimal(Dfa(pairs, l.size(), l.initial(), l.accepting(), std::move(table)));
}

/// Erases the other track: determinized image under the letter-to-letter
/// projection onto `side`.
inline Dfa project(const Dfa& pairs, Side side) {
    if (!pairs.alphabet().is_pair_alphabet()) throw Error(ErrorKind::alphabet_mismatch, "projection needs a pair alphabet");
    const int keep = side_index(side);
    const Alphabet target = pairs.alphabet().component(keep);
    Nfa nfa(target);
    for (State q = 0; q < pairs.size(); ++q) nfa.add_state(pairs.is_accepting(q));
    nfa.initials.push_back(pairs.initial());
    for (State q = 0; q < pairs.size(); ++q)
        for (Letter a = 0; a < pairs.letters(); ++a)
            nfa.add_edge(q, target.index_of_digit(pairs.alphabet()[a].parts[keep]), pairs.next(q, a));
    return minimal(determinize(nfa));
}

/// p₂[(0*M ⊕ Σ_p*) ∩ ν̂_p] for M over {1..p}: the p-ary words, with any
/// leading zeros, of the values of the bijective words in M.
inline Dfa to_ary(const Dfa& m, int p) {
    if (!(m.alphabet() == Alphabet::digits(1, p)))
        throw Error(ErrorKind::alphabet_mismatch, "to_ary expects an automaton over {1,...,p}");
    const Dfa padded = leading_zero_closure(relabel(m, Alphabet::digits(0, p)));
    const Dfa joint = intersect(pad_product(padded, Alphabet::digits(0, p - 1), Side::left), normalization_transducer(p));
    return project(joint, Side::right);
}

/// Bijective words over {1..p} of the values whose p-ary words (possibly
/// zero padded) are accepted by M.
inline Dfa to_adic(const Dfa& m, int p) {
    if (!(m.alphabet() == Alphabet::digits(0, p - 1)))
        throw Error(ErrorKind::alphabet_mismatch, "to_adic expects an automaton over {0,...,p-1}");
    const Dfa ary = zero_normalize(m);
    const Dfa joint = intersect(pad_product(ary, Alphabet::digits(0, p), Side::right), normalization_transducer(p));
    const Dfa padded = project(joint, Side::left); // 0* then bijective digits
    const Alphabet wide = Alphabet::digits(0, p);
    // drop the pad: quotient by 0*, then keep words without any 0
    std::vector<State> table(2 * wide.size(), 0);
    table[0] = 1;
    std::fill(table.begin() + static_cast<long>(wide.size()), table.end(), 1);
    const Dfa no_zero(wide, 2, 0, {true, false}, std::move(table));
    return minimal(relabel(intersect(zero_quotient(padded), no_zero), Alphabet::digits(1, p)));
}

struct TransferReport {
    int p = 0;
    Dfa ary;  // 0*ρ_p(X)
    Dfa adic; // bijective representations of X
    AperiodicityReport ary_verdict;
    AperiodicityReport adic_verdict;
    bool round_trip = false; // to_ary(adic) ≡ ary
};

/// Both languages of X and their verdicts. VerdictMismatch when the verdicts
/// differ, TranslationMismatch when the round trip does not close.
inline TransferReport transfer_check(const SetSpec& spec, int p) {
    TransferReport r;
    r.p = p;
    r.ary = recognizer(spec, NumerationSystem::positional(p));
    r.adic = to_adic(r.ary, p);
    r.ary_verdict = is_aperiodic(r.ary);
    r.adic_verdict = is_aperiodic(r.adic);
    r.round_trip = equivalent(to_ary(r.adic, p), zero_normalize(r.ary));
    if (r.ary_verdict.aperiodic != r.adic_verdict.aperiodic)
        throw Error(ErrorKind::verdict_mismatch, std::string("base-") + std::to_string(p) + " language is " +
                                                     (r.ary_verdict.aperiodic ? "" : "not ") +
                                                     "aperiodic but the bijective one is " +
                                                     (r.adic_verdict.aperiodic ? "" : "not ") + "aperiodic");
    if (!r.round_trip)
        throw Error(ErrorKind::translation_mismatch, "to_ary(to_adic(M)) differs from the normalized input");
    return r;
}

} // namespace starfree
