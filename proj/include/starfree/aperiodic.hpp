#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "starfree/dfa.hpp"
#include "starfree/error.hpp"

namespace starfree {

inline constexpr std::size_t default_monoid_cap = 1'000'000;

/// A word together with the states it permutes cyclically:
/// cycle[i] --word--> cycle[(i+1) % size].
struct PermutationWitness {
    Word word;
    std::vector<State> cycle;
};

struct AperiodicityReport {
    bool aperiodic = false;
    std::optional<std::size_t> index;
    std::optional<PermutationWitness> witness;
    std::size_t monoid_size = 0;
    /// The minimal automaton the verdict and witness refer to.
    Dfa minimal;
};

namespace detail {

struct FunctionHash {
    std::size_t operator()(const std::vector<State>& f) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (State s : f) h = (h ^ s) * 1099511628211ull;
        return h;
    }
};

/// Smallest m >= 1 with f^m = f^(m+1), or nullopt when f has a cycle of
/// length >= 2 (then `cycle` receives one such cycle).
inline std::optional<std::size_t> idempotent_power_index(const std::vector<State>& f,
                                                         std::vector<State>* cycle) {
    const std::size_t n = f.size();
    std::size_t worst = 1;
    std::vector<int> colour(n, 0); // 0 new, 1 on current path, 2 done
    std::vector<std::size_t> depth(n, 0);  // steps to reach a fixed point
    for (State start = 0; start < n; ++start) {
        if (colour[start]) continue;
        std::vector<State> path;
        State q = start;
        while (colour[q] == 0) {
            colour[q] = 1;
            path.push_back(q);
            q = f[q];
        }
        if (colour[q] == 1) {
            // q closes a new cycle on the current path
            auto it = std::find(path.begin(), path.end(), q);
            std::vector<State> cyc(it, path.end());
            if (cyc.size() >= 2) {
                if (cycle) *cycle = std::move(cyc);
                return std::nullopt;
            }
            depth[q] = 0;
            colour[q] = 2;
            path.pop_back();
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            depth[*it] = depth[f[*it]] + 1;
            colour[*it] = 2;
            worst = std::max(worst, depth[*it]);
        }
    }
    return worst;
}

} // namespace detail

/// Counter-freeness test on the transition monoid of the minimal automaton.
/// The monoid is generated breadth-first from the letters (words are
/// extended on the right), deduplicated by function table.
inline AperiodicityReport is_aperiodic(const Dfa& dfa, std::size_t monoid_cap = default_monoid_cap) {
    AperiodicityReport report;
    report.minimal = minimal(dfa);
    const Dfa& m = report.minimal;
    const std::size_t n = m.size();

    std::vector<std::vector<State>> elements;
    std::vector<std::size_t> parent;
    std::vector<Letter> via;
    std::unordered_map<std::vector<State>, std::size_t, detail::FunctionHash> seen;

    std::vector<State> identity(n);
    for (State q = 0; q < n; ++q) identity[q] = q;
    seen.emplace(identity, 0);
    elements.push_back(std::move(identity));
    parent.push_back(0);
    via.push_back(0);

    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (Letter a = 0; a < m.letters(); ++a) {
            std::vector<State> g(n);
            for (State q = 0; q < n; ++q) g[q] = m.next(elements[i][q], a);
            if (seen.find(g) != seen.end()) continue;
            if (elements.size() >= monoid_cap)
                throw Error(ErrorKind::monoid_cap_exceeded,
                            "transition monoid exceeds " + std::to_string(monoid_cap) + " elements");
            seen.emplace(g, elements.size());
            elements.push_back(std::move(g));
            parent.push_back(i);
            via.push_back(a);
        }
    }
    report.monoid_size = elements.size();

    std::size_t index = 1;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        std::vector<State> cycle;
        auto k = detail::idempotent_power_index(elements[i], &cycle);
        if (!k) {
            Word w;
            for (std::size_t j = i; j != 0; j = parent[j]) w.push_back(via[j]);
            std::reverse(w.begin(), w.end());
            report.aperiodic = false;
            report.witness = PermutationWitness{std::move(w), std::move(cycle)};
            return report;
        }
        index = std::max(index, *k);
    }
    report.aperiodic = true;
    report.index = index;
    return report;
}

/// Least n >= 1 with uv^n w ∈ L ⇔ uv^(n+1) w ∈ L for all u, v, w.
inline std::size_t aperiodicity_index(const Dfa& dfa, std::size_t monoid_cap = default_monoid_cap) {
    auto report = is_aperiodic(dfa, monoid_cap);
    if (!report.aperiodic) throw Error(ErrorKind::not_aperiodic, "language is not aperiodic");
    return *report.index;
}

/// Replays a witness on the automaton it was computed for.
inline bool witness_holds(const Dfa& minimal_dfa, const PermutationWitness& w) {
    if (w.cycle.size() < 2) return false;
    std::vector<State> sorted(w.cycle);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (std::size_t i = 0; i < w.cycle.size(); ++i) {
        if (w.cycle[i] >= minimal_dfa.size()) return false;
        if (minimal_dfa.run(w.cycle[i], w.word) != w.cycle[(i + 1) % w.cycle.size()]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

struct PairStep {
    State first;
    State second;
    Letter letter; // letter leading to the next pair of the cycle
};

struct DefinitenessReport {
    bool definite = false;
    /// Smallest k such that words of length >= k are classified by their
    /// last k letters.
    std::optional<std::size_t> horizon;
    std::optional<std::vector<PairStep>> witness;
    Dfa minimal;
};

/// Definiteness via the graph on unordered pairs of distinct minimal
/// states: ((p,q), a) -> (δ(p,a), δ(q,a)) when the targets differ. The
/// language is definite iff that graph is acyclic; the horizon is one more
/// than its longest path (0 when the minimal automaton has one state).
inline DefinitenessReport is_definite(const Dfa& dfa) {
    DefinitenessReport report;
    report.minimal = minimal(dfa);
    const Dfa& m = report.minimal;
    const std::size_t n = m.size();
    auto id = [n](State p, State q) {
        if (p > q) std::swap(p, q);
        return static_cast<std::size_t>(p) * n + q;
    };

    std::vector<int> colour(n * n, 0);
    std::vector<std::size_t> longest(n * n, 0); // vertices on the longest path from here
    std::optional<std::vector<PairStep>> cycle;

    // iterative DFS with explicit frames
    struct Frame {
        State p, q;
        Letter next_letter;
    };
    std::size_t best = 0;
    for (State p = 0; p < n && !cycle; ++p)
        for (State q = p + 1; q < n && !cycle; ++q) {
            if (colour[id(p, q)]) continue;
            std::vector<Frame> frames{{p, q, 0}};
            colour[id(p, q)] = 1;
            while (!frames.empty() && !cycle) {
                Frame& f = frames.back();
                if (f.next_letter == m.letters()) {
                    std::size_t v = id(f.p, f.q);
                    std::size_t len = 1;
                    for (Letter a = 0; a < m.letters(); ++a) {
                        State p2 = m.next(f.p, a), q2 = m.next(f.q, a);
                        if (p2 != q2) len = std::max(len, longest[id(p2, q2)] + 1);
                    }
                    longest[v] = len;
                    best = std::max(best, len);
                    colour[v] = 2;
                    frames.pop_back();
                    continue;
                }
                Letter a = f.next_letter++;
                State p2 = m.next(f.p, a), q2 = m.next(f.q, a);
                if (p2 == q2) continue;
                std::size_t v2 = id(p2, q2);
                if (colour[v2] == 1) {
                    // back edge: extract the cycle from the frame stack
                    std::vector<PairStep> steps;
                    std::size_t start = 0;
                    for (std::size_t i = 0; i < frames.size(); ++i)
                        if (id(frames[i].p, frames[i].q) == v2) start = i;
                    for (std::size_t i = start; i < frames.size(); ++i)
                        steps.push_back({frames[i].p, frames[i].q, frames[i].next_letter - 1});
                    cycle = std::move(steps);
                    break;
                }
                if (colour[v2] == 0) {
                    colour[v2] = 1;
                    frames.push_back({p2, q2, 0});
                }
            }
        }

    if (cycle) {
        report.definite = false;
        report.witness = std::move(cycle);
        return report;
    }
    report.definite = true;
    report.horizon = best;
    return report;
}

} // namespace starfree
