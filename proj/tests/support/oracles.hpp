#pragma once

// Test-only brute-force oracles. Nothing here calls the monoid, definiteness
// or minimization code it is used to check.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "starfree/dfa.hpp"

namespace starfree::testing {

/// All words of length exactly `len` over a k-letter alphabet, in radix order.
inline std::vector<Word> words_of_length(std::size_t k, std::size_t len) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<Word> next;
        next.reserve(out.size() * k);
        for (const auto& w : out)
            for (Letter a = 0; a < k; ++a) {
                Word v = w;
                v.push_back(a);
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<Word> words_up_to(std::size_t k, std::size_t max_len) {
    std::vector<Word> out;
    for (std::size_t len = 0; len <= max_len; ++len) {
        auto ws = words_of_length(k, len);
        out.insert(out.end(), ws.begin(), ws.end());
    }
    return out;
}

/// Random complete automaton; every state count and accepting pattern is
/// possible, including unreachable states.
inline Dfa random_dfa(std::mt19937& rng, std::size_t states, std::size_t letters) {
    std::uniform_int_distribution<State> target(0, static_cast<State>(states - 1));
    std::bernoulli_distribution coin(0.5);
    std::vector<State> table(states * letters);
    for (auto& t : table) t = target(rng);
    std::vector<bool> acc(states);
    for (std::size_t q = 0; q < states; ++q) acc[q] = coin(rng);
    return Dfa(Alphabet::digits(0, static_cast<int>(letters) - 1), states, 0, std::move(acc), std::move(table));
}

inline bool member(const Dfa& d, const Word& w) { return d.accepts(w); }

inline Word power(const Word& v, std::size_t n) {
    Word out;
    for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), v.begin(), v.end());
    return out;
}

/// Pumping oracle: does uv^n w ∈ L ⇔ uv^(n+1) w ∈ L hold for all u, v, w of
/// length <= bound? Membership of uxw only depends on the state reached by
/// ux, so each state gets a signature listing which suffixes w (|w| <= bound)
/// it accepts; the identity is then a signature comparison.
inline bool pumping_holds(const Dfa& d, std::size_t n, std::size_t bound) {
    const std::size_t k = d.letters();
    const auto words = words_up_to(k, bound);
    std::vector<std::vector<bool>> sig(d.size());
    for (State q = 0; q < d.size(); ++q)
        for (const auto& w : words) sig[q].push_back(d.is_accepting(d.run(q, w)));
    std::set<State> from;
    for (const auto& u : words) from.insert(d.run(d.initial(), u));
    for (State q : from)
        for (const auto& v : words) {
            if (v.empty()) continue;
            State a = d.run(q, power(v, n));
            State b = d.run(a, v);
            if (sig[a] != sig[b]) return false;
        }
    return true;
}

/// ∃ n <= |Q|+1 such that the pumping identity holds up to length |Q|.
inline bool pumping_oracle_aperiodic(const Dfa& d, std::size_t bound) {
    for (std::size_t n = 1; n <= d.size() + 1; ++n)
        if (pumping_holds(d, n, bound)) return true;
    return false;
}

/// Least n for which the identity holds with |u|,|v|,|w| <= bound.
inline std::size_t pumping_index(const Dfa& d, std::size_t bound, std::size_t max_n = 32) {
    for (std::size_t n = 1; n <= max_n; ++n)
        if (pumping_holds(d, n, bound)) return n;
    return 0;
}

/// Compares a DFA with a predicate on every word up to a length.
inline bool agrees_up_to(const Dfa& d, std::size_t max_len, const std::function<bool(const Word&)>& pred) {
    for (const auto& w : words_up_to(d.letters(), max_len))
        if (d.accepts(w) != pred(w)) return false;
    return true;
}

} // namespace starfree::testing
