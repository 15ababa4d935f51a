#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lcu {

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood 2014).
/// The algorithm is fixed so that a seed produces the same stream on any
/// platform; seed 0 is a valid seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift rejection-free bound; bias < 2^-64, irrelevant here.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard normal via Box-Muller. Consumes two uniforms per call.
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

namespace detail {

// Correction term of Stirling's series, delta(k) = ln k! - ln Stirling(k).
inline double stirling_tail(double k) {
    static const double table[] = {
        0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
        0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
        0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
        0.00833056343336287};
    if (k <= 9.0) return table[static_cast<int>(k)];
    double kp1sq = (k + 1.0) * (k + 1.0);
    return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1.0);
}

// Inverse-CDF search; cost grows with n*p, used only when n*p is small.
inline std::int64_t binomial_inversion(SplitMix64& rng, std::int64_t n, double p) {
    const double q = 1.0 - p;
    const double s = p / q;
    const double a = static_cast<double>(n + 1) * s;
    double r = std::exp(static_cast<double>(n) * std::log1p(-p));  // q^n
    double u = rng.uniform();
    std::int64_t x = 0;
    while (u > r) {
        u -= r;
        ++x;
        if (x > n) return n;  // guards accumulated rounding
        r *= (a / static_cast<double>(x)) - s;
    }
    return x;
}

// Transformed-rejection sampler BTRS (Hormann 1993), valid for n*p >= 10.
inline std::int64_t binomial_btrs(SplitMix64& rng, std::int64_t n, double p) {
    const double nd = static_cast<double>(n);
    const double q = 1.0 - p;
    const double spq = std::sqrt(nd * p * q);
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = nd * p + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double r = p / q;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double m = std::floor((nd + 1.0) * p);
    for (;;) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        double us = 0.5 - std::abs(u);
        double k = std::floor((2.0 * a / us + b) * u + c);
        if (k < 0.0 || k > nd) continue;
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
        v = std::log(v * alpha / (a / (us * us) + b));
        double upper = (m + 0.5) * std::log((m + 1.0) / (r * (nd - m + 1.0))) +
                       (nd + 1.0) * std::log((nd - m + 1.0) / (nd - k + 1.0)) +
                       (k + 0.5) * std::log(r * (nd - k + 1.0) / (k + 1.0)) +
                       stirling_tail(m) + stirling_tail(nd - m) -
                       stirling_tail(k) - stirling_tail(nd - k);
        if (v <= upper) return static_cast<std::int64_t>(k);
    }
}

}  // namespace detail

/// Draw from Binomial(n, p).
inline std::int64_t binomial(SplitMix64& rng, std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: negative trial count");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(rng, n, 1.0 - p);
    if (static_cast<double>(n) * p < 10.0) return detail::binomial_inversion(rng, n, p);
    return detail::binomial_btrs(rng, n, p);
}

/// Split `n` trials over `weights` (nonnegative, positive sum) by repeated
/// conditional binomials; marginal of cell i is Binomial(n, w_i / sum w).
inline std::vector<std::int64_t> multinomial(SplitMix64& rng, std::int64_t n,
                                             const std::vector<double>& weights) {
    double total = 0.0;
    std::size_t last = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("multinomial: negative weight");
        if (weights[i] > 0.0) last = i;
        total += weights[i];
    }
    if (total <= 0.0 || last == weights.size())
        throw std::invalid_argument("multinomial: zero weight sum");
    std::vector<std::int64_t> out(weights.size(), 0);
    std::int64_t remaining = n;
    double wrem = total;
    for (std::size_t i = 0; i < last && remaining > 0; ++i) {
        double p = weights[i] / wrem;
        std::int64_t k = (p >= 1.0) ? remaining : binomial(rng, remaining, p);
        out[i] = k;
        remaining -= k;
        wrem -= weights[i];
        if (wrem <= 0.0) break;
    }
    out[last] += remaining;  // last positive-weight cell absorbs the rest
    return out;
}

}  // namespace lcu
