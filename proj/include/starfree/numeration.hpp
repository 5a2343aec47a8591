#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "starfree/dfa.hpp"
#include "starfree/error.hpp"
#include "starfree/serialize.hpp"

namespace starfree {

using Natural = boost::multiprecision::cpp_int;

enum class SystemKind { positional, linear, bijective };

/// Basis sequence U_0 < U_1 < ... together with its digit conventions.
/// Positional base k and bijective base p use U_n = k^n (resp. p^n); linear
/// systems satisfy U_{n+k} = c_{k-1} U_{n+k-1} + ... + c_0 U_n.
///
/// The basis is cached lazily. Extension is guarded by a mutex so a system
/// may be shared between threads; copies share the cache.
class NumerationSystem {
public:
    static NumerationSystem positional(int k) {
        if (k < 2) throw Error(ErrorKind::invalid_system, "positional base must be >= 2");
        return NumerationSystem(SystemKind::positional, k, {k}, {1}, std::nullopt);
    }

    static NumerationSystem bijective(int p) {
        if (p < 2) throw Error(ErrorKind::invalid_system, "bijective base must be >= 2");
        return NumerationSystem(SystemKind::bijective, p, {p}, {1}, std::nullopt);
    }

    /// `coefficients` are c_{k-1}, ..., c_0 (highest lag last).
    static NumerationSystem linear(std::vector<long long> coefficients, std::vector<long long> initial,
                                   std::optional<Dfa> canonical = std::nullopt) {
        if (coefficients.empty()) throw Error(ErrorKind::invalid_system, "recurrence needs coefficients");
        if (coefficients.back() == 0) throw Error(ErrorKind::invalid_system, "c_0 must be non-zero");
        if (initial.size() != coefficients.size())
            throw Error(ErrorKind::invalid_system, "need exactly one initial value per coefficient");
        if (initial.front() != 1) throw Error(ErrorKind::invalid_system, "U_0 must be 1");
        std::vector<Natural> init(initial.begin(), initial.end());
        return NumerationSystem(SystemKind::linear, 0, std::move(coefficients), std::move(init),
                                std::move(canonical));
    }

    static NumerationSystem fibonacci() { return linear({1, 1}, {1, 2}); }

    SystemKind kind() const { return kind_; }
    bool is_greedy() const { return kind_ != SystemKind::bijective; }
    /// k for positional, p for bijective, 0 for linear systems.
    int radix() const { return radix_; }
    const std::vector<long long>& coefficients() const { return coefficients_; }
    const std::vector<Natural>& initial_values() const { return initial_; }
    const std::optional<Dfa>& supplied_canonical() const { return supplied_canonical_; }

    bool is_fibonacci() const {
        return kind_ == SystemKind::linear && coefficients_ == std::vector<long long>{1, 1} &&
               initial_ == std::vector<Natural>{1, 2};
    }

    /// Linear system that is really U_n = k^n.
    std::optional<int> integer_base() const {
        if (kind_ == SystemKind::positional) return radix_;
        if (kind_ == SystemKind::linear && coefficients_.size() == 1 && initial_.front() == 1)
            return static_cast<int>(coefficients_.front());
        return std::nullopt;
    }

    Natural basis(std::size_t i) const {
        std::lock_guard lock(cache_->mutex);
        extend_locked(i + 1);
        return cache_->values[i];
    }

    /// Extends the cache through U_n; call before sharing across threads.
    void pregenerate(std::size_t n) const {
        std::lock_guard lock(cache_->mutex);
        extend_locked(n + 1);
    }

    /// Largest greedy digit c (so A_U = {0..c}); p for bijective systems.
    int max_digit() const { return max_digit_; }

    Alphabet digit_alphabet() const {
        return kind_ == SystemKind::bijective ? Alphabet::digits(1, radix_) : Alphabet::digits(0, max_digit_);
    }

    std::string describe() const {
        std::ostringstream out;
        switch (kind_) {
        case SystemKind::positional: out << "base:" << radix_; break;
        case SystemKind::bijective: out << "bijective:" << radix_; break;
        case SystemKind::linear:
            if (is_fibonacci()) return "fibonacci";
            out << "linear:";
            for (std::size_t i = 0; i < coefficients_.size(); ++i) out << (i ? "," : "") << coefficients_[i];
            out << ":";
            for (std::size_t i = 0; i < initial_.size(); ++i) out << (i ? "," : "") << initial_[i];
            break;
        }
        return out.str();
    }

private:
    struct Cache {
        std::mutex mutex;
        std::vector<Natural> values;
    };

    NumerationSystem(SystemKind kind, int radix, std::vector<long long> coefficients, std::vector<Natural> initial,
                     std::optional<Dfa> canonical)
        : kind_(kind), radix_(radix), coefficients_(std::move(coefficients)), initial_(std::move(initial)),
          supplied_canonical_(std::move(canonical)), cache_(std::make_shared<Cache>()) {
        std::lock_guard lock(cache_->mutex);
        extend_locked(65);
        if (kind_ == SystemKind::bijective) {
            max_digit_ = radix_;
        } else {
            // greedy digits are bounded by floor((U_{n+1} - 1) / U_n)
            Natural c = 0;
            for (std::size_t n = 0; n + 1 < cache_->values.size(); ++n)
                c = std::max<Natural>(c, (cache_->values[n + 1] - 1) / cache_->values[n]);
            max_digit_ = static_cast<int>(c);
        }
    }

    void extend_locked(std::size_t count) const {
        auto& v = cache_->values;
        while (v.size() < count) {
            Natural next;
            if (v.size() < initial_.size()) {
                next = initial_[v.size()];
            } else {
                next = 0;
                const std::size_t k = coefficients_.size();
                for (std::size_t i = 0; i < k; ++i) next += Natural(coefficients_[i]) * v[v.size() - 1 - i];
            }
            if (!v.empty() && next <= v.back())
                throw Error(ErrorKind::invalid_system, "basis is not strictly increasing at index " +
                                                           std::to_string(v.size()));
            v.push_back(std::move(next));
        }
    }

    SystemKind kind_;
    int radix_;
    std::vector<long long> coefficients_;
    std::vector<Natural> initial_;
    std::optional<Dfa> supplied_canonical_;
    int max_digit_ = 0;
    std::shared_ptr<Cache> cache_;
};

/// Digits, most-significant first.
struct Representation {
    std::vector<int> digits;

    std::string to_string() const { return format_digits(digits); }
    Word word(const Alphabet& alphabet) const { return word_from_digits(alphabet, digits); }
    bool operator==(const Representation&) const = default;
};

inline void require_greedy(const NumerationSystem& u) {
    if (!u.is_greedy()) throw Error(ErrorKind::kind_mismatch, "operation needs a greedy (positional or linear) system");
}

/// ρ_U(n); ρ_U(0) is the empty word.
inline Representation greedy_repr(const NumerationSystem& u, const Natural& n) {
    require_greedy(u);
    if (n < 0) throw Error(ErrorKind::invalid_argument, "negative integer");
    Representation rep;
    if (n == 0) return rep;
    std::size_t top = 0;
    while (u.basis(top + 1) <= n) ++top;
    Natural rest = n;
    for (std::size_t i = top + 1; i-- > 0;) {
        Natural b = u.basis(i);
        Natural d = rest / b;
        rest -= d * b;
        rep.digits.push_back(static_cast<int>(d));
    }
    return rep;
}

/// π_p(w) = Σ w_i p^i for arbitrary integer digits.
inline Natural positional_value(int p, const std::vector<int>& digits) {
    Natural v = 0;
    for (int d : digits) v = v * p + d;
    return v;
}

/// Σ w_i U_i, position 0 being the rightmost letter. Canonical form is not
/// required but each digit must lie in the system's digit alphabet.
inline Natural value(const NumerationSystem& u, const std::vector<int>& digits) {
    const int lo = u.kind() == SystemKind::bijective ? 1 : 0;
    const int hi = u.max_digit();
    Natural v = 0;
    const std::size_t n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        int d = digits[n - 1 - i];
        if (d < lo || d > hi)
            throw Error(ErrorKind::digit_out_of_range, "digit " + std::to_string(d) + " outside {" +
                                                           std::to_string(lo) + ".." + std::to_string(hi) + "}");
        if (d) v += Natural(d) * u.basis(i);
    }
    return v;
}

inline Natural value(const NumerationSystem& u, const Representation& r) { return value(u, r.digits); }

/// Unique word over {1..p} with value n (p-adic digits).
inline Representation bijective_repr(int p, Natural n) {
    if (p < 2) throw Error(ErrorKind::invalid_argument, "bijective base must be >= 2");
    if (n < 0) throw Error(ErrorKind::invalid_argument, "negative integer");
    Representation rep;
    while (n > 0) {
        int d = static_cast<int>((n - 1) % p) + 1;
        rep.digits.push_back(d);
        n = (n - d) / p;
    }
    std::reverse(rep.digits.begin(), rep.digits.end());
    return rep;
}

/// V_U(x): the largest basis element with a non-zero greedy digit; V_U(0) = 1.
inline Natural leading_term(const NumerationSystem& u, const Natural& x) {
    auto rep = greedy_repr(u, x);
    if (rep.digits.empty()) return 1;
    return u.basis(rep.digits.size() - 1);
}

/// Index i with U_i = y, if y is a basis element.
inline std::optional<std::size_t> basis_index(const NumerationSystem& u, const Natural& y) {
    for (std::size_t i = 0;; ++i) {
        Natural b = u.basis(i);
        if (b == y) return i;
        if (b > y) return std::nullopt;
    }
}

/// ε_{j,U}(x, y) given ρ_U(x): y is a basis element whose greedy digit is j.
inline bool epsilon(const NumerationSystem& u, const Representation& rho_x, const Natural& y, int j) {
    auto i = basis_index(u, y);
    if (!i || *i >= rho_x.digits.size()) return false;
    return rho_x.digits[rho_x.digits.size() - 1 - *i] == j;
}

inline bool epsilon(const NumerationSystem& u, const Natural& x, const Natural& y, int j) {
    require_greedy(u);
    if (j < 1 || j > u.max_digit())
        throw Error(ErrorKind::invalid_argument, "coefficient j must lie in 1.." + std::to_string(u.max_digit()));
    return epsilon(u, greedy_repr(u, x), y, j);
}

// ---------------------------------------------------------------------------
// Automata attached to a system

namespace detail {

inline Dfa no_factor_11() {
    // 0: last letter not 1, 1: last letter 1, 2: sink
    return Dfa(Alphabet::digits(0, 1), 3, 0, {true, true, false}, {0, 1, 0, 2, 2, 2});
}

inline void validate_canonical(const NumerationSystem& u, const Dfa& dfa) {
    if (!(dfa.alphabet() == u.digit_alphabet()))
        throw Error(ErrorKind::canonical_form_invalid, "automaton alphabet differs from the digit alphabet");
    constexpr long horizon = 10'000;
    const auto counts = [&] {
        std::size_t len = greedy_repr(u, horizon).digits.size();
        return count_by_length(dfa, len);
    }();
    for (std::size_t len = 0; len < counts.size(); ++len) {
        Natural ul = u.basis(len);
        if (ul > horizon + 1) break;
        if (Natural(counts[len]) != ul)
            throw Error(ErrorKind::canonical_form_invalid,
                        "automaton accepts " + std::to_string(counts[len]) + " words of length " +
                            std::to_string(len) + ", expected U_" + std::to_string(len));
        const long limit = static_cast<long>(ul);
        for (long n = 0; n < limit; ++n) {
            auto rep = greedy_repr(u, n);
            std::vector<int> padded(len - rep.digits.size(), 0);
            padded.insert(padded.end(), rep.digits.begin(), rep.digits.end());
            if (!dfa.accepts(word_from_digits(dfa.alphabet(), padded)))
                throw Error(ErrorKind::canonical_form_invalid, "rejects padded representation of " + std::to_string(n));
        }
    }
    for (long n = 0; n <= horizon; ++n)
        if (!dfa.accepts(greedy_repr(u, n).word(dfa.alphabet())))
            throw Error(ErrorKind::canonical_form_invalid, "rejects representation of " + std::to_string(n));
}

} // namespace detail

/// Minimal automaton of 𝒩_U = 0*ρ_U(ℕ).
inline Dfa canonical_dfa(const NumerationSystem& u) {
    require_greedy(u);
    if (u.integer_base()) return universal_language(u.digit_alphabet());
    if (u.is_fibonacci()) return minimal(detail::no_factor_11());
    if (!u.supplied_canonical())
        throw Error(ErrorKind::canonical_form_unknown, "no canonical automaton known for " + u.describe());
    Dfa d = minimal(*u.supplied_canonical());
    detail::validate_canonical(u, d);
    return d;
}

/// Ultimately periodic profile of U_i mod m: values for i < preperiod+period,
/// position i >= preperiod+period folds to preperiod + (i - preperiod) mod period.
struct ResidueProfile {
    std::vector<long long> residues;
    std::size_t preperiod = 0;
    std::size_t period = 1;

    std::size_t phase_after(std::size_t phase) const {
        std::size_t next = phase + 1;
        if (next < residues.size()) return next;
        return preperiod + (next - preperiod) % period;
    }
};

inline ResidueProfile residue_profile(const NumerationSystem& u, long long m) {
    const std::size_t k = u.coefficients().size();
    auto mod = [m](const Natural& x) { return static_cast<long long>(((x % m) + m) % m); };
    std::vector<long long> window;
    for (std::size_t i = 0; i < k; ++i) window.push_back(mod(u.basis(i)));
    std::map<std::vector<long long>, std::size_t> seen;
    std::vector<long long> values;
    for (std::size_t i = 0;; ++i) {
        auto [it, fresh] = seen.emplace(window, i);
        if (!fresh) {
            ResidueProfile p;
            p.preperiod = it->second;
            p.period = i - it->second;
            p.residues = std::move(values);
            return p;
        }
        values.push_back(window.front());
        long long next = 0;
        for (std::size_t j = 0; j < k; ++j) {
            long long c = ((u.coefficients()[j] % m) + m) % m;
            next = (next + c * window[k - 1 - j]) % m;
        }
        window.erase(window.begin());
        window.push_back(next);
    }
}

/// {w ∈ 𝒩_U : value(w) ≡ r (mod m)}, most-significant digit first.
/// Built least-significant-first over (phase of U_i mod m, partial sum),
/// then reversed and intersected with the canonical automaton.
inline Dfa residue_dfa(const NumerationSystem& u, long long m, long long r) {
    require_greedy(u);
    if (m < 1 || r < 0 || r >= m) throw Error(ErrorKind::invalid_argument, "need 0 <= r < m");
    const ResidueProfile prof = residue_profile(u, m);
    const Alphabet sigma = u.digit_alphabet();
    const std::size_t phases = prof.residues.size();
    const std::size_t k = sigma.size();
    const std::size_t states = phases * static_cast<std::size_t>(m);
    auto id = [m](std::size_t phase, long long sum) { return static_cast<State>(phase * m + sum); };
    std::vector<State> table(states * k);
    std::vector<bool> accepting(states);
    for (std::size_t ph = 0; ph < phases; ++ph)
        for (long long s = 0; s < m; ++s) {
            accepting[id(ph, s)] = s == r;
            for (Letter a = 0; a < k; ++a) {
                long long d = sigma[a].value();
                long long s2 = (s + d % m * prof.residues[ph]) % m;
                table[id(ph, s) * k + a] = id(prof.phase_after(ph), s2);
            }
        }
    Dfa lsf(sigma, states, 0, std::move(accepting), std::move(table));
    return intersect(reverse(lsf), canonical_dfa(u));
}

// ---------------------------------------------------------------------------

struct PisotVerdict {
    bool is_pisot_like = false;
    double dominant_root = 0;
    std::vector<double> other_moduli;
    double tolerance = 1e-6;
    std::vector<std::complex<double>> roots;
};

/// Numeric check on x^k - c_{k-1} x^{k-1} - ... - c_0: one real root > 1,
/// every other root strictly inside the unit disc. Irreducibility is not
/// examined, so the verdict is advisory.
inline PisotVerdict pisot_check(const std::vector<long long>& coefficients, double tolerance = 1e-6,
                                int max_iterations = 10'000) {
    if (coefficients.empty()) throw Error(ErrorKind::invalid_argument, "polynomial degree must be >= 1");
    if (coefficients.back() == 0) throw Error(ErrorKind::invalid_system, "c_0 must be non-zero");
    const std::size_t k = coefficients.size();
    // monic polynomial, highest degree first: 1, -c_{k-1}, ..., -c_0
    std::vector<double> poly{1.0};
    for (long long c : coefficients) poly.push_back(-static_cast<double>(c));
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (double a : poly) acc = acc * z + a;
        return acc;
    };

    std::vector<std::complex<double>> roots(k);
    double bound = 1;
    for (long long c : coefficients) bound = std::max(bound, 1.0 + std::abs(static_cast<double>(c)));
    for (std::size_t i = 0; i < k; ++i) roots[i] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(i)) * (bound / 2);

    // Durand-Kerner simultaneous iteration
    bool converged = false;
    for (int it = 0; it < max_iterations && !converged; ++it) {
        double max_step = 0;
        for (std::size_t i = 0; i < k; ++i) {
            std::complex<double> denom = 1;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) < 1e-300) denom = 1e-12;
            std::complex<double> step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        double residual = 0;
        for (auto z : roots) residual = std::max(residual, std::abs(eval(z)) / std::max(1.0, std::pow(std::abs(z), static_cast<double>(k))));
        converged = residual < 1e-10 && max_step < 1e-9;
    }
    if (!converged) throw Error(ErrorKind::convergence_failure, "root finder did not converge");

    PisotVerdict v;
    v.tolerance = tolerance;
    v.roots = roots;
    std::size_t dominant = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (std::abs(roots[i]) > std::abs(roots[dominant])) dominant = i;
    v.dominant_root = roots[dominant].real();
    bool dominant_ok = std::abs(roots[dominant].imag()) < tolerance && v.dominant_root > 1 + tolerance;
    bool others_ok = true;
    for (std::size_t i = 0; i < k; ++i) {
        if (i == dominant) continue;
        double mod = std::abs(roots[i]);
        v.other_moduli.push_back(mod);
        others_ok &= mod < 1 - tolerance;
    }
    v.is_pisot_like = dominant_ok && others_ok;
    return v;
}

inline PisotVerdict pisot_check(const NumerationSystem& u, double tolerance = 1e-6) {
    if (u.kind() != SystemKind::linear) return pisot_check(std::vector<long long>{u.radix()}, tolerance);
    return pisot_check(u.coefficients(), tolerance);
}

// ---------------------------------------------------------------------------
// System configuration

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::invalid_argument, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// {"type":"base","k":4} | {"type":"linear","coeffs":[1,1],"initial":[1,2],
/// "canonical_dfa": optional path} | {"type":"bijective","p":2}
inline NumerationSystem system_from_json(const json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "base") return NumerationSystem::positional(j.at("k").get<int>());
        if (type == "bijective") return NumerationSystem::bijective(j.at("p").get<int>());
        if (type == "linear") {
            std::optional<Dfa> canon;
            if (j.contains("canonical_dfa") && !j.at("canonical_dfa").is_null())
                canon = dfa_from_json(json::parse(read_text_file(j.at("canonical_dfa").get<std::string>())));
            return NumerationSystem::linear(j.at("coeffs").get<std::vector<long long>>(),
                                            j.at("initial").get<std::vector<long long>>(), std::move(canon));
        }
        throw Error(ErrorKind::invalid_system, "unknown system type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::invalid_system, std::string("system JSON: ") + e.what());
    }
}

inline json system_to_json(const NumerationSystem& u) {
    switch (u.kind()) {
    case SystemKind::positional: return {{"type", "base"}, {"k", u.radix()}};
    case SystemKind::bijective: return {{"type", "bijective"}, {"p", u.radix()}};
    case SystemKind::linear: {
        std::vector<long long> init;
        for (const auto& x : u.initial_values()) init.push_back(static_cast<long long>(x));
        return {{"type", "linear"}, {"coeffs", u.coefficients()}, {"initial", init}};
    }
    }
    return {};
}

namespace detail {
inline std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoll(item));
    return out;
}
} // namespace detail

/// Shorthand: "base:K", "bijective:P", "fibonacci", "linear:C..:U..", or a
/// JSON object / path to a JSON file.
inline NumerationSystem parse_system(const std::string& text) {
    if (!text.empty() && text.front() == '{') return system_from_json(json::parse(text));
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (head == "base") return NumerationSystem::positional(std::stoi(rest));
        if (head == "bijective" || head == "adic") return NumerationSystem::bijective(std::stoi(rest));
        if (head == "fibonacci" || head == "fib") return NumerationSystem::fibonacci();
        if (head == "linear") {
            auto second = rest.find(':');
            if (second == std::string::npos) throw Error(ErrorKind::invalid_system, "linear:COEFFS:INITIAL expected");
            return NumerationSystem::linear(detail::parse_int_list(rest.substr(0, second)),
                                            detail::parse_int_list(rest.substr(second + 1)));
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::invalid_system, "cannot parse system '" + text + "'");
    }
    return system_from_json(json::parse(read_text_file(text)));
}

} // namespace starfree
