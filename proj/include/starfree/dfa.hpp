#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "starfree/alphabet.hpp"
#include "starfree/error.hpp"

namespace starfree {

using State = std::uint32_t;
inline constexpr State no_state = std::numeric_limits<State>::max();

/// Complete deterministic automaton. The transition table is row-major:
/// table[q * |alphabet| + a].
class Dfa {
public:
    Dfa() = default;

    Dfa(Alphabet alphabet, std::size_t states, State initial, std::vector<bool> accepting,
        std::vector<State> table)
        : alphabet_(std::move(alphabet)), states_(states), initial_(initial),
          accepting_(std::move(accepting)), table_(std::move(table)) {
        if (states_ == 0) throw Error(ErrorKind::invalid_argument, "automaton needs at least one state");
        if (initial_ >= states_) throw Error(ErrorKind::invalid_argument, "initial state out of range");
        if (accepting_.size() != states_)
            throw Error(ErrorKind::invalid_argument, "accepting flags do not match state count");
        if (table_.size() != states_ * alphabet_.size())
            throw Error(ErrorKind::invalid_argument, "transition table is not total");
        for (State t : table_)
            if (t >= states_) throw Error(ErrorKind::invalid_argument, "transition target out of range");
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return states_; }
    std::size_t letters() const { return alphabet_.size(); }
    State initial() const { return initial_; }
    bool is_accepting(State q) const { return accepting_[q]; }
    const std::vector<bool>& accepting() const { return accepting_; }
    State next(State q, Letter a) const { return table_[q * alphabet_.size() + a]; }
    const std::vector<State>& table() const { return table_; }

    std::vector<State> accepting_states() const {
        std::vector<State> out;
        for (State q = 0; q < states_; ++q)
            if (accepting_[q]) out.push_back(q);
        return out;
    }

    State run(State q, const Word& w) const {
        for (Letter a : w) q = next(q, a);
        return q;
    }

    bool accepts(const Word& w) const { return accepting_[run(initial_, w)]; }

    bool operator==(const Dfa&) const = default;

private:
    Alphabet alphabet_;
    std::size_t states_ = 0;
    State initial_ = 0;
    std::vector<bool> accepting_;
    std::vector<State> table_;
};

/// Nondeterministic automaton with epsilon moves; construction scratchpad
/// for concatenation, reversal and projection.
struct Nfa {
    Alphabet alphabet;
    std::vector<State> initials;
    std::vector<bool> accepting;
    std::vector<std::vector<std::vector<State>>> delta;
    std::vector<std::vector<State>> epsilon;

    explicit Nfa(Alphabet a) : alphabet(std::move(a)) {}

    std::size_t size() const { return accepting.size(); }

    State add_state(bool accept = false) {
        accepting.push_back(accept);
        delta.emplace_back(alphabet.size());
        epsilon.emplace_back();
        return static_cast<State>(accepting.size() - 1);
    }
    void add_edge(State from, Letter a, State to) { delta[from][a].push_back(to); }
    void add_epsilon(State from, State to) { epsilon[from].push_back(to); }
};

inline Nfa to_nfa(const Dfa& dfa) {
    Nfa nfa(dfa.alphabet());
    for (State q = 0; q < dfa.size(); ++q) nfa.add_state(dfa.is_accepting(q));
    for (State q = 0; q < dfa.size(); ++q)
        for (Letter a = 0; a < dfa.letters(); ++a) nfa.add_edge(q, a, dfa.next(q, a));
    nfa.initials = {dfa.initial()};
    return nfa;
}

namespace detail {

inline std::vector<State> epsilon_closure(const Nfa& nfa, std::vector<State> set) {
    std::vector<bool> seen(nfa.size(), false);
    std::vector<State> stack;
    for (State q : set)
        if (!seen[q]) {
            seen[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State r : nfa.epsilon[q])
            if (!seen[r]) {
                seen[r] = true;
                stack.push_back(r);
            }
    }
    std::vector<State> out;
    for (State q = 0; q < nfa.size(); ++q)
        if (seen[q]) out.push_back(q);
    return out;
}

} // namespace detail

/// Reachable part renumbered in breadth-first order from the initial state,
/// visiting successors in symbol order. Serialized automata depend on this.
inline Dfa canonical(const Dfa& dfa) {
    std::vector<State> order;
    std::vector<State> renumber(dfa.size(), no_state);
    renumber[dfa.initial()] = 0;
    order.push_back(dfa.initial());
    for (std::size_t i = 0; i < order.size(); ++i) {
        State q = order[i];
        for (Letter a = 0; a < dfa.letters(); ++a) {
            State r = dfa.next(q, a);
            if (renumber[r] == no_state) {
                renumber[r] = static_cast<State>(order.size());
                order.push_back(r);
            }
        }
    }
    std::vector<bool> accepting(order.size());
    std::vector<State> table(order.size() * dfa.letters());
    for (std::size_t i = 0; i < order.size(); ++i) {
        accepting[i] = dfa.is_accepting(order[i]);
        for (Letter a = 0; a < dfa.letters(); ++a)
            table[i * dfa.letters() + a] = renumber[dfa.next(order[i], a)];
    }
    return Dfa(dfa.alphabet(), order.size(), 0, std::move(accepting), std::move(table));
}

/// Subset construction over reachable subsets; the empty subset is the sink.
inline Dfa determinize(const Nfa& nfa) {
    const std::size_t k = nfa.alphabet.size();
    std::map<std::vector<State>, State> index;
    std::vector<std::vector<State>> subsets;
    std::vector<State> table;

    auto intern = [&](std::vector<State> s) {
        auto [it, fresh] = index.emplace(s, static_cast<State>(subsets.size()));
        if (fresh) subsets.push_back(std::move(s));
        return it->second;
    };

    std::vector<State> start = nfa.initials;
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    intern(detail::epsilon_closure(nfa, start));

    std::vector<bool> mark(nfa.size(), false);
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (Letter a = 0; a < k; ++a) {
            std::vector<State> targets;
            for (State q : subsets[i])
                for (State r : nfa.delta[q][a])
                    if (!mark[r]) {
                        mark[r] = true;
                        targets.push_back(r);
                    }
            for (State r : targets) mark[r] = false;
            std::sort(targets.begin(), targets.end());
            State t = intern(detail::epsilon_closure(nfa, std::move(targets)));
            table.push_back(t);
        }
    }
    std::vector<bool> accepting(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i)
        accepting[i] = std::any_of(subsets[i].begin(), subsets[i].end(),
                                   [&](State q) { return nfa.accepting[q]; });
    return Dfa(nfa.alphabet, subsets.size(), 0, std::move(accepting), std::move(table));
}

/// Maps states of a source automaton onto states of its minimal automaton.
/// Unreachable source states map to `no_state`.
struct StateMorphism {
    std::vector<State> image;

    State operator()(State q) const { return image[q]; }
};

struct Minimized {
    Dfa dfa;
    StateMorphism morphism;
};

/// Moore partition refinement on the reachable part. The result is
/// canonically numbered, so equal languages give identical automata.
inline Minimized minimize(const Dfa& dfa) {
    const std::size_t k = dfa.letters();
    // reachable states
    std::vector<bool> reach(dfa.size(), false);
    std::vector<State> order{dfa.initial()};
    reach[dfa.initial()] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (Letter a = 0; a < k; ++a) {
            State r = dfa.next(order[i], a);
            if (!reach[r]) {
                reach[r] = true;
                order.push_back(r);
            }
        }

    std::vector<State> cls(dfa.size(), no_state);
    bool has_acc = false, has_rej = false;
    for (State q : order) {
        has_acc |= dfa.is_accepting(q);
        has_rej |= !dfa.is_accepting(q);
    }
    for (State q : order) cls[q] = (has_acc && has_rej) ? (dfa.is_accepting(q) ? 1 : 0) : 0;
    std::size_t count = (has_acc && has_rej) ? 2 : 1;

    std::vector<State> sig(k + 1);
    while (true) {
        std::map<std::vector<State>, State> ids;
        std::vector<State> next_cls(dfa.size(), no_state);
        for (State q : order) {
            sig[0] = cls[q];
            for (Letter a = 0; a < k; ++a) sig[a + 1] = cls[dfa.next(q, a)];
            auto [it, fresh] = ids.emplace(sig, static_cast<State>(ids.size()));
            next_cls[q] = it->second;
        }
        bool stable = ids.size() == count;
        cls = std::move(next_cls);
        count = ids.size();
        if (stable) break;
    }

    std::vector<State> rep(count, no_state);
    for (State q : order)
        if (rep[cls[q]] == no_state) rep[cls[q]] = q;
    std::vector<bool> accepting(count);
    std::vector<State> table(count * k);
    for (State c = 0; c < count; ++c) {
        accepting[c] = dfa.is_accepting(rep[c]);
        for (Letter a = 0; a < k; ++a) table[c * k + a] = cls[dfa.next(rep[c], a)];
    }
    Dfa quotient(dfa.alphabet(), count, cls[dfa.initial()], std::move(accepting), std::move(table));

    // canonical renumbering of the quotient (all classes are reachable)
    std::vector<State> renumber(count, no_state);
    std::vector<State> bfs{quotient.initial()};
    renumber[quotient.initial()] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (Letter a = 0; a < k; ++a) {
            State r = quotient.next(bfs[i], a);
            if (renumber[r] == no_state) {
                renumber[r] = static_cast<State>(bfs.size());
                bfs.push_back(r);
            }
        }
    StateMorphism phi;
    phi.image.assign(dfa.size(), no_state);
    for (State q : order) phi.image[q] = renumber[cls[q]];
    return {canonical(quotient), std::move(phi)};
}

inline Dfa minimal(const Dfa& dfa) { return minimize(dfa).dfa; }

// ---------------------------------------------------------------------------
// Language constructors

/// Builds the reachable part of an automaton whose states are values of
/// `Key` (ordered), given a start key, a step function (key, letter) -> key
/// and an acceptance predicate.
template <class Key, class Step, class Accept>
Dfa explore(const Alphabet& alphabet, Key start, Step step, Accept accept) {
    std::map<Key, State> index;
    std::vector<Key> keys;
    std::vector<State> table;
    auto intern = [&](const Key& key) {
        auto [it, fresh] = index.emplace(key, static_cast<State>(keys.size()));
        if (fresh) keys.push_back(key);
        return it->second;
    };
    intern(start);
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (Letter a = 0; a < alphabet.size(); ++a) {
            Key next = step(Key(keys[i]), a);
            table.push_back(intern(next));
        }
    std::vector<bool> accepting(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) accepting[i] = accept(keys[i]);
    return Dfa(alphabet, keys.size(), 0, std::move(accepting), std::move(table));
}

inline Dfa empty_language(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, {false}, std::vector<State>(alphabet.size(), 0));
}

inline Dfa universal_language(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, {true}, std::vector<State>(alphabet.size(), 0));
}

/// Minimal automaton of a finite set of words (trie plus sink).
inline Dfa finite_language(const Alphabet& alphabet, const std::vector<Word>& words) {
    Nfa nfa(alphabet);
    State root = nfa.add_state();
    nfa.initials = {root};
    std::vector<std::vector<State>> child(1, std::vector<State>(alphabet.size(), no_state));
    for (const Word& w : words) {
        State q = root;
        for (Letter a : w) {
            if (a >= alphabet.size()) throw Error(ErrorKind::invalid_argument, "letter outside alphabet");
            if (child[q][a] == no_state) {
                State r = nfa.add_state();
                child.emplace_back(alphabet.size(), no_state);
                child[q][a] = r;
                nfa.add_edge(q, a, r);
            }
            q = child[q][a];
        }
        nfa.accepting[q] = true;
    }
    return minimal(determinize(nfa));
}

/// Words of length >= 1.
inline Dfa nonempty_words(const Alphabet& alphabet) {
    std::vector<State> table(2 * alphabet.size(), 1);
    return Dfa(alphabet, 2, 0, {false, true}, std::move(table));
}

// ---------------------------------------------------------------------------
// Boolean algebra, concatenation, reversal

enum class BoolOp { union_, intersection, difference, symmetric_difference };

inline void require_same_alphabet(const Dfa& lhs, const Dfa& rhs) {
    if (!(lhs.alphabet() == rhs.alphabet()))
        throw Error(ErrorKind::alphabet_mismatch, "operands are over different alphabets");
}

inline Dfa product(const Dfa& lhs, const Dfa& rhs, BoolOp op) {
    require_same_alphabet(lhs, rhs);
    const std::size_t k = lhs.letters();
    std::unordered_map<std::uint64_t, State> index;
    std::vector<std::pair<State, State>> pairs;
    std::vector<State> table;
    auto intern = [&](State p, State q) {
        std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
        auto [it, fresh] = index.emplace(key, static_cast<State>(pairs.size()));
        if (fresh) pairs.emplace_back(p, q);
        return it->second;
    };
    intern(lhs.initial(), rhs.initial());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (Letter a = 0; a < k; ++a) {
            auto [p, q] = pairs[i];
            table.push_back(intern(lhs.next(p, a), rhs.next(q, a)));
        }
    std::vector<bool> accepting(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        bool x = lhs.is_accepting(pairs[i].first), y = rhs.is_accepting(pairs[i].second);
        switch (op) {
        case BoolOp::union_: accepting[i] = x || y; break;
        case BoolOp::intersection: accepting[i] = x && y; break;
        case BoolOp::difference: accepting[i] = x && !y; break;
        case BoolOp::symmetric_difference: accepting[i] = x != y; break;
        }
    }
    return minimal(Dfa(lhs.alphabet(), pairs.size(), 0, std::move(accepting), std::move(table)));
}

inline Dfa unite(const Dfa& lhs, const Dfa& rhs) { return product(lhs, rhs, BoolOp::union_); }
inline Dfa intersect(const Dfa& lhs, const Dfa& rhs) { return product(lhs, rhs, BoolOp::intersection); }
inline Dfa subtract(const Dfa& lhs, const Dfa& rhs) { return product(lhs, rhs, BoolOp::difference); }

inline Dfa complement(const Dfa& dfa) {
    std::vector<bool> accepting(dfa.size());
    for (State q = 0; q < dfa.size(); ++q) accepting[q] = !dfa.is_accepting(q);
    return minimal(Dfa(dfa.alphabet(), dfa.size(), dfa.initial(), std::move(accepting), dfa.table()));
}

inline Dfa concat(const Dfa& lhs, const Dfa& rhs) {
    require_same_alphabet(lhs, rhs);
    Nfa nfa = to_nfa(lhs);
    const State offset = static_cast<State>(nfa.size());
    for (State q = 0; q < rhs.size(); ++q) nfa.add_state(rhs.is_accepting(q));
    for (State q = 0; q < rhs.size(); ++q)
        for (Letter a = 0; a < rhs.letters(); ++a) nfa.add_edge(offset + q, a, offset + rhs.next(q, a));
    for (State q = 0; q < lhs.size(); ++q)
        if (lhs.is_accepting(q)) {
            nfa.accepting[q] = false;
            nfa.add_epsilon(q, offset + rhs.initial());
        }
    return minimal(determinize(nfa));
}

/// Accepts the mirror images of the accepted words.
inline Dfa reverse(const Dfa& dfa) {
    Nfa nfa(dfa.alphabet());
    for (State q = 0; q < dfa.size(); ++q) nfa.add_state(q == dfa.initial());
    for (State q = 0; q < dfa.size(); ++q)
        for (Letter a = 0; a < dfa.letters(); ++a) nfa.add_edge(dfa.next(q, a), a, q);
    nfa.initials = dfa.accepting_states();
    return minimal(determinize(nfa));
}

// ---------------------------------------------------------------------------
// Emptiness and equivalence

/// Shortest accepted word (breadth-first, symbol order), if any.
inline std::optional<Word> shortest_accepted(const Dfa& dfa) {
    std::vector<State> parent(dfa.size(), no_state);
    std::vector<Letter> via(dfa.size(), 0);
    std::vector<bool> seen(dfa.size(), false);
    std::deque<State> queue{dfa.initial()};
    seen[dfa.initial()] = true;
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        if (dfa.is_accepting(q)) {
            Word w;
            for (State s = q; parent[s] != no_state; s = parent[s]) w.push_back(via[s]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (Letter a = 0; a < dfa.letters(); ++a) {
            State r = dfa.next(q, a);
            if (!seen[r]) {
                seen[r] = true;
                parent[r] = q;
                via[r] = a;
                queue.push_back(r);
            }
        }
    }
    return std::nullopt;
}

inline bool is_empty(const Dfa& dfa) { return !shortest_accepted(dfa).has_value(); }

/// Shortest word in the symmetric difference, or nullopt when equivalent.
inline std::optional<Word> distinguishing_word(const Dfa& lhs, const Dfa& rhs) {
    require_same_alphabet(lhs, rhs);
    const std::size_t k = lhs.letters();
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<std::pair<State, State>> pairs;
    std::vector<std::size_t> parent;
    std::vector<Letter> via;
    auto key = [](State p, State q) { return (static_cast<std::uint64_t>(p) << 32) | q; };
    pairs.emplace_back(lhs.initial(), rhs.initial());
    parent.push_back(0);
    via.push_back(0);
    index.emplace(key(lhs.initial(), rhs.initial()), 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [p, q] = pairs[i];
        if (lhs.is_accepting(p) != rhs.is_accepting(q)) {
            Word w;
            for (std::size_t j = i; j != 0; j = parent[j]) w.push_back(via[j]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (Letter a = 0; a < k; ++a) {
            State p2 = lhs.next(p, a), q2 = rhs.next(q, a);
            if (index.emplace(key(p2, q2), pairs.size()).second) {
                pairs.emplace_back(p2, q2);
                parent.push_back(i);
                via.push_back(a);
            }
        }
    }
    return std::nullopt;
}

inline bool equivalent(const Dfa& lhs, const Dfa& rhs) { return !distinguishing_word(lhs, rhs).has_value(); }

/// L(lhs) ⊆ L(rhs)
inline bool included(const Dfa& lhs, const Dfa& rhs) { return is_empty(subtract(lhs, rhs)); }

// ---------------------------------------------------------------------------
// Leading zeros

/// 0*L
inline Dfa leading_zero_closure(const Dfa& dfa, int zero = 0) {
    const Letter z = dfa.alphabet().index_of_digit(zero);
    Nfa nfa = to_nfa(dfa);
    State pad = nfa.add_state(false);
    nfa.add_edge(pad, z, pad);
    nfa.add_epsilon(pad, dfa.initial());
    nfa.initials = {pad};
    return minimal(determinize(nfa));
}

/// L minus the words that start with a zero.
inline Dfa strip_leading_zeros(const Dfa& dfa, int zero = 0) {
    const Alphabet& sigma = dfa.alphabet();
    const Letter z = sigma.index_of_digit(zero);
    // automaton for 0·Σ*
    std::vector<State> table(3 * sigma.size());
    for (Letter a = 0; a < sigma.size(); ++a) {
        table[0 * sigma.size() + a] = (a == z) ? 1 : 2;
        table[1 * sigma.size() + a] = 1;
        table[2 * sigma.size() + a] = 2;
    }
    Dfa zero_start(sigma, 3, 0, {false, true, false}, std::move(table));
    return subtract(dfa, zero_start);
}

/// Left quotient by 0*: { w : 0^j w ∈ L for some j >= 0 }.
inline Dfa zero_quotient(const Dfa& dfa, int zero = 0) {
    const Letter z = dfa.alphabet().index_of_digit(zero);
    Nfa nfa = to_nfa(dfa);
    std::vector<bool> seen(dfa.size(), false);
    State q = dfa.initial();
    nfa.initials.clear();
    while (!seen[q]) {
        seen[q] = true;
        nfa.initials.push_back(q);
        q = dfa.next(q, z);
    }
    return minimal(determinize(nfa));
}

/// Normal form 0*ρ(X) of a language whose words are (possibly zero-padded)
/// representations: saturate under removal and insertion of leading zeros.
inline Dfa zero_normalize(const Dfa& dfa, int zero = 0) {
    return leading_zero_closure(strip_leading_zeros(zero_quotient(dfa, zero), zero), zero);
}

/// Re-expresses an automaton over another alphabet: shared symbols keep
/// their transitions, new symbols lead to a sink, dropped symbols vanish.
inline Dfa relabel(const Dfa& dfa, const Alphabet& target) {
    const std::size_t k = target.size();
    const State sink = static_cast<State>(dfa.size());
    std::vector<State> table((dfa.size() + 1) * k, sink);
    std::vector<bool> accepting(dfa.accepting());
    accepting.push_back(false);
    for (Letter b = 0; b < k; ++b) {
        auto a = dfa.alphabet().find(target[b]);
        if (!a) continue;
        for (State q = 0; q < dfa.size(); ++q) table[q * k + b] = dfa.next(q, *a);
    }
    return minimal(Dfa(target, dfa.size() + 1, dfa.initial(), std::move(accepting), std::move(table)));
}

/// Number of accepted words of each length 0..max_len (saturating at 2^63).
inline std::vector<std::uint64_t> count_by_length(const Dfa& dfa, std::size_t max_len) {
    std::vector<std::uint64_t> ways(dfa.size(), 0), next(dfa.size());
    ways[dfa.initial()] = 1;
    std::vector<std::uint64_t> out;
    constexpr std::uint64_t cap = std::uint64_t{1} << 63;
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::uint64_t total = 0;
        for (State q = 0; q < dfa.size(); ++q)
            if (dfa.is_accepting(q)) total = std::min(cap, total + ways[q]);
        out.push_back(total);
        std::fill(next.begin(), next.end(), 0);
        for (State q = 0; q < dfa.size(); ++q)
            if (ways[q])
                for (Letter a = 0; a < dfa.letters(); ++a) {
                    auto& slot = next[dfa.next(q, a)];
                    slot = std::min(cap, slot + ways[q]);
                }
        ways.swap(next);
    }
    return out;
}

} // namespace starfree
