#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "starfree/padic.hpp"

namespace starfree {
namespace {

using testing::agrees_up_to;
using testing::random_dfa;
using testing::words_up_to;

std::vector<int> ary_digits(std::uint64_t n, int p) {
    std::vector<int> out;
    for (; n; n /= p) out.insert(out.begin(), static_cast<int>(n % p));
    return out;
}

// digits in {1..p}
std::vector<int> adic_digits(std::uint64_t n, int p) {
    std::vector<int> out;
    while (n) {
        int d = static_cast<int>(n % p);
        if (d == 0) d = p;
        out.insert(out.begin(), d);
        n = (n - d) / p;
    }
    return out;
}

std::uint64_t value_of(const std::vector<int>& digits, int p) {
    std::uint64_t v = 0;
    for (int d : digits) v = v * p + d;
    return v;
}

std::vector<int> pad_to(std::vector<int> w, std::size_t len) {
    w.insert(w.begin(), len - w.size(), 0);
    return w;
}

Dfa up_dfa(const std::string& text, int p) {
    return up_to_dfa(std::get<UltimatelyPeriodic>(parse_spec(text)), NumerationSystem::positional(p));
}

// 0*10* over {0,1}
Dfa powers_of_two() {
    std::vector<State> t{0, 1, 1, 2, 2, 2};
    return Dfa(Alphabet::digits(0, 1), 3, 0, {false, true, false}, t);
}

std::vector<Dfa> battery(int p, unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::vector<Dfa> out;
    out.push_back(up_dfa("up:2N", p));
    out.push_back(up_dfa("up:6N", p));
    out.push_back(up_dfa("up:4N+1", p));
    if (p == 2) out.push_back(powers_of_two());
    for (int i = 0; i < count; ++i) out.push_back(random_dfa(rng, 1 + i % 5, p));
    return out;
}

TEST(Normalization, WorkedPair) {
    Dfa nu = normalization_transducer(2);
    EXPECT_TRUE(relation_contains(nu, {0, 1, 2, 1}, {1, 0, 0, 1}));
    EXPECT_FALSE(relation_contains(nu, {0, 1, 2, 2}, {1, 0, 0, 1}));
    EXPECT_FALSE(relation_contains(nu, {1, 0, 2, 1}, {1, 0, 0, 1})); // pad inside the digits
    EXPECT_TRUE(nu.accepts({}));
    EXPECT_TRUE(relation_contains(nu, {0, 0}, {0, 0}));
}

TEST(Normalization, AcceptsEveryValuePair) {
    for (int p : {2, 3}) {
        Dfa nu = normalization_transducer(p);
        for (std::uint64_t n = 0; n <= 10'000; ++n) {
            auto v = ary_digits(n, p);
            auto u = adic_digits(n, p);
            ASSERT_LE(u.size(), v.size());
            ASSERT_TRUE(relation_contains(nu, pad_to(u, v.size()), v)) << n;
            ASSERT_TRUE(relation_contains(nu, pad_to(u, v.size() + 2), pad_to(v, v.size() + 2))) << n;
        }
    }
}

TEST(Normalization, RejectsRandomPairsOfDifferentValue) {
    std::mt19937 rng(2024);
    for (int p : {2, 3}) {
        Dfa nu = normalization_transducer(p);
        int accepted = 0;
        for (int trial = 0; trial < 10'000; ++trial) {
            const std::size_t len = 1 + rng() % 12;
            std::vector<int> u(len), v(len);
            const std::size_t pad = rng() % (len + 1);
            for (std::size_t i = 0; i < len; ++i) {
                u[i] = i < pad ? 0 : 1 + static_cast<int>(rng() % p);
                v[i] = static_cast<int>(rng() % p);
            }
            // a quarter of the time, force equal values when they fit
            if (trial % 4 == 0) {
                auto exact = ary_digits(value_of(u, p), p);
                if (exact.size() <= len) v = pad_to(exact, len);
            }
            const bool same = value_of(u, p) == value_of(v, p);
            ASSERT_EQ(relation_contains(nu, u, v), same);
            accepted += same;
        }
        EXPECT_GT(accepted, 1000);
    }
}

TEST(Normalization, LeftTrackShapeIsEnforced) {
    // any left word over {0..p}: accepted iff it is pad-then-digits and values agree
    for (int p : {2, 3}) {
        Dfa nu = normalization_transducer(p);
        for (const Word& lw : words_up_to(p + 1, 5)) {
            std::vector<int> u(lw.begin(), lw.end());
            const auto first = std::find_if(u.begin(), u.end(), [](int d) { return d != 0; });
            const bool shape = std::find(first, u.end(), 0) == u.end();
            const std::uint64_t val = value_of(u, p);
            auto v = ary_digits(val, p);
            if (v.size() > u.size()) {
                continue;
            }
            ASSERT_EQ(relation_contains(nu, u, pad_to(v, u.size())), shape);
        }
    }
}

TEST(Normalization, TrimAutomatonIsAperiodic) {
    for (int p : {2, 3, 4}) {
        EXPECT_TRUE(is_aperiodic(normalization_transducer_reversed(p)).aperiodic) << p;
        EXPECT_TRUE(is_aperiodic(normalization_transducer(p)).aperiodic) << p;
    }
}

TEST(PadProduct, LeftTrackInOnesThenZeros) {
    std::vector<State> t{3, 1, 2, 1, 2, 3, 3, 3};
    Dfa l(Alphabet::digits(0, 1), 4, 0, {false, true, true, false}, t); // 1⁺0*
    Dfa prod = pad_product(l, Alphabet::digits(0, 1), Side::left);
    ASSERT_EQ(prod.letters(), 4u);
    EXPECT_TRUE(agrees_up_to(prod, 6, [&](const Word& w) {
        Word left;
        for (Letter a : w) left.push_back(static_cast<Letter>(prod.alphabet()[a].parts[0]));
        return l.accepts(left);
    }));
}

TEST(PadProduct, UniversalIsFull) {
    Dfa prod = pad_product(universal_language(Alphabet::digits(0, 2)), Alphabet::digits(0, 1), Side::right);
    EXPECT_TRUE(equivalent(prod, universal_language(prod.alphabet())));
}

TEST(Project, RetractsPadProduct) {
    for (const Dfa& l : battery(3, 9, 25))
        for (Side side : {Side::left, Side::right})
            ASSERT_TRUE(equivalent(project(pad_product(l, Alphabet::digits(0, 1), side), side), l));
}

TEST(Project, NormalizationTracks) {
    Dfa nu = normalization_transducer(2);
    EXPECT_TRUE(equivalent(project(nu, Side::right), universal_language(Alphabet::digits(0, 1))));
    Dfa left = project(nu, Side::left);
    // padded bijective words whose binary form fits in the same length
    EXPECT_TRUE(agrees_up_to(left, 8, [](const Word& w) {
        auto first = std::find_if(w.begin(), w.end(), [](Letter a) { return a != 0; });
        if (std::find(first, w.end(), 0u) != w.end()) return false;
        return ary_digits(value_of(std::vector<int>(w.begin(), w.end()), 2), 2).size() <= w.size();
    }));
    EXPECT_FALSE(left.accepts({2}));
    EXPECT_TRUE(left.accepts({0, 2}));
    EXPECT_TRUE(is_empty(project(empty_language(nu.alphabet()), Side::left)));
}

TEST(ToAry, EvenBijectiveWords) {
    // value parity of a bijective binary word is the parity of its last digit
    std::vector<State> t{1, 2, 1, 2, 1, 2};
    Dfa even(Alphabet::digits(1, 2), 3, 0, {true, false, true}, t);
    Dfa ary = to_ary(even, 2);
    EXPECT_TRUE(equivalent(ary, up_dfa("up:2N", 2)));
    for (std::uint64_t n = 0; n <= 10'000; ++n)
        ASSERT_EQ(ary.accepts(word_from_digits(ary.alphabet(), ary_digits(n, 2))), n % 2 == 0) << n;
}

TEST(ToAry, NineInBaseTwo) {
    Dfa m = finite_language(Alphabet::digits(1, 2), {word_from_digits(Alphabet::digits(1, 2), {1, 2, 1})});
    Dfa ary = to_ary(m, 2);
    Dfa expect = leading_zero_closure(finite_language(Alphabet::digits(0, 1), {Word{1, 0, 0, 1}}));
    EXPECT_TRUE(equivalent(ary, expect));
}

TEST(ToAry, EmptyGivesEmpty) { EXPECT_TRUE(is_empty(to_ary(empty_language(Alphabet::digits(1, 3)), 3))); }

TEST(ToAdic, EvenNumbers) {
    Dfa adic = to_adic(up_dfa("up:2N", 2), 2);
    ASSERT_EQ(adic.alphabet(), Alphabet::digits(1, 2));
    for (std::uint64_t n = 0; n <= 10'000; ++n)
        ASSERT_EQ(adic.accepts(word_from_digits(adic.alphabet(), adic_digits(n, 2))), n % 2 == 0) << n;
}

TEST(ToAdic, ZeroOnly) {
    Dfa zero = finite_language(Alphabet::digits(0, 1), {Word{}});
    Dfa adic = to_adic(zero, 2);
    EXPECT_TRUE(equivalent(adic, finite_language(Alphabet::digits(1, 2), {Word{}})));
}

TEST(ToAdic, RandomLanguagesByValue) {
    std::mt19937 rng(77);
    for (int p : {2, 3})
        for (int trial = 0; trial < 15; ++trial) {
            Dfa m = random_dfa(rng, 1 + trial % 5, p);
            Dfa norm = zero_normalize(m);
            Dfa adic = to_adic(m, p);
            for (std::uint64_t n = 0; n < 400; ++n) {
                bool in = norm.accepts(word_from_digits(norm.alphabet(), ary_digits(n, p)));
                ASSERT_EQ(adic.accepts(word_from_digits(adic.alphabet(), adic_digits(n, p))), in) << n;
            }
        }
}

TEST(Pipeline, RoundTripIsNormalization) {
    for (int p : {2, 3})
        for (const Dfa& m : battery(p, 13, 30)) ASSERT_TRUE(equivalent(to_ary(to_adic(m, p), p), zero_normalize(m)));
}

TEST(Transfer, ReferenceSets) {
    auto even = transfer_check(parse_spec("up:2N"), 2);
    EXPECT_TRUE(even.ary_verdict.aperiodic && even.adic_verdict.aperiodic);
    auto six = transfer_check(parse_spec("up:6N"), 2);
    EXPECT_FALSE(six.ary_verdict.aperiodic || six.adic_verdict.aperiodic);
    auto pow2 = transfer_check(ExplicitDfa{NumerationSystem::positional(2), powers_of_two()}, 2);
    EXPECT_TRUE(pow2.ary_verdict.aperiodic && pow2.adic_verdict.aperiodic);
    EXPECT_TRUE(pow2.round_trip);
}

TEST(Transfer, RandomUltimatelyPeriodicSets) {
    std::mt19937 rng(5);
    for (int p : {2, 3})
        for (int trial = 0; trial < 10; ++trial) {
            UltimatelyPeriodic up = UltimatelyPeriodic::progression(rng() % 7, 1 + rng() % 8);
            if (trial % 2) {
                std::uint64_t x = 0;
                while (x < 64 && up.contains(x)) ++x;
                if (x < 64 && !up.exclude.count(x)) {
                    up.include.insert(x);
                    up.threshold = std::max(up.threshold, x + 1);
                }
            }
            ASSERT_NO_THROW(transfer_check(up, p)) << p << " " << trial;
        }
}

TEST(Lemmas, ReversalKeepsVerdict) {
    for (int p : {2, 3})
        for (const Dfa& d : battery(p, 17, 60))
            ASSERT_EQ(is_aperiodic(d).aperiodic, is_aperiodic(reverse(d)).aperiodic);
}

TEST(Lemmas, PadProductKeepsVerdict) {
    for (int p : {2, 3})
        for (const Dfa& d : battery(p, 19, 60))
            for (Side side : {Side::left, Side::right})
                ASSERT_EQ(is_aperiodic(d).aperiodic,
                          is_aperiodic(pad_product(d, Alphabet::digits(0, p), side)).aperiodic);
}

TEST(Lemmas, ProjectionOfPipelineLanguages) {
    // the pair languages the transfer builds: (Γ* ⊕ 0*ρ(X)) ∩ ν̂_p
    int aperiodic_pairs = 0;
    for (int p : {2, 3})
        for (const Dfa& d : battery(p, 29, 40)) {
            Dfa joint = intersect(pad_product(zero_normalize(d), Alphabet::digits(0, p), Side::right),
                                  normalization_transducer(p));
            if (!is_aperiodic(joint).aperiodic) continue;
            ++aperiodic_pairs;
            ASSERT_TRUE(is_aperiodic(project(joint, Side::left)).aperiodic);
            ASSERT_TRUE(is_aperiodic(project(joint, Side::right)).aperiodic);
        }
    EXPECT_GT(aperiodic_pairs, 10);
}

TEST(Lemmas, ProjectionOfArbitraryPairLanguagesCanFail) {
    // ((0,0)(0,1))⁺ is aperiodic, its left projection (00)⁺ is not
    const Alphabet pairs = Alphabet::product(Alphabet::digits(0, 0), Alphabet::digits(0, 1));
    std::vector<State> t{1, 3, 3, 2, 1, 3, 3, 3};
    Dfa alt(pairs, 4, 0, {false, false, true, false}, t);
    EXPECT_TRUE(alt.accepts(pair_word(pairs, {0, 0, 0, 0}, {0, 1, 0, 1})));
    EXPECT_TRUE(is_aperiodic(alt).aperiodic);
    Dfa left = project(alt, Side::left);
    EXPECT_FALSE(is_aperiodic(left).aperiodic);
}

} // namespace
} // namespace starfree
