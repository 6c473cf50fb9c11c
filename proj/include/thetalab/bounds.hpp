#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "thetalab/errors.hpp"

namespace thetalab {

// Closed-form bound values for a parameter cell. Upper bounds carry their
// explicit constants; lower bounds are reported constant-free as shape
// functions (the underlying constants are existential). All logs are
// natural except log2_f, and everything is evaluated in extended precision.
struct BoundReport {
    double upper_balanced = 0;        // 2^{k+2} k^{k+1} d^{k/(k-1)} ln n
    double upper_general = 0;         // (2k/delta^k) d^{k/2} ln n
    double lower_balanced_form = 0;   // d^{k/(k-1)} / ln d * ln(n^{k-1}/d)
    double lower_even_form = 0;       // d^2 / ln d * ln(2n/(kd))
    double steiner_lower_form = 0;    // n^{k/(k-1)} / (ln n)^{1/(k-1)}
    double log2_f = 0;                // t * (1 + log2 binom(n, alpha))
};

inline double sampling_probability_balanced(int k, std::int64_t d) {
    return 1.0 / (2.0 * k * std::pow(static_cast<double>(d), 1.0 / (k - 1)));
}

inline double general_delta(int k) {
    return 1.0 / ((k - 1) * std::pow(2.0, k + 2));
}

inline double general_epsilon(int k) {
    return 1.0 / std::pow(2.0, k + 2);
}

inline double sampling_probability_general(int k, std::int64_t d) {
    return general_delta(k) / std::sqrt(static_cast<double>(d));
}

inline long double upper_balanced_value(int n, std::int64_t d, int k) {
    const long double c = std::pow(2.0L, k + 2) * std::pow(static_cast<long double>(k), k + 1);
    return c * std::pow(static_cast<long double>(d), static_cast<long double>(k) / (k - 1)) *
           std::log(static_cast<long double>(n));
}

inline long double upper_general_value(int n, std::int64_t d, int k) {
    const long double delta = static_cast<long double>(general_delta(k));
    const long double c = 2.0L * k / std::pow(delta, k);
    return c * std::pow(static_cast<long double>(d), static_cast<long double>(k) / 2.0L) *
           std::log(static_cast<long double>(n));
}

// Trial counts the randomized covering algorithms aim for.
inline std::uint64_t balanced_trial_count(int n, std::int64_t d, int k) {
    return static_cast<std::uint64_t>(std::ceil(upper_balanced_value(n, d, k)));
}

inline std::uint64_t general_trial_count(int n, std::int64_t d, int k) {
    return static_cast<std::uint64_t>(std::ceil(upper_general_value(n, d, k)));
}

inline double log2_binom(double n, double a) {
    if (a < 0 || a > n) return -std::numeric_limits<double>::infinity();
    const long double lg = std::lgamma(static_cast<long double>(n) + 1) -
                           std::lgamma(static_cast<long double>(a) + 1) -
                           std::lgamma(static_cast<long double>(n - a) + 1);
    return static_cast<double>(lg / std::log(2.0L));
}

inline BoundReport compute_bounds(int n, std::int64_t d, int k, double alpha, double t) {
    if (k < 2) throw InputError("compute_bounds: k must be >= 2");
    if (d < 2) throw InputError("compute_bounds: d must be >= 2");
    if (n <= d) throw InputError("compute_bounds: requires n > d");
    if (alpha < 0 || alpha > n) throw InputError("compute_bounds: alpha must lie in [0, n]");
    if (t < 0) throw InputError("compute_bounds: t must be non-negative");

    BoundReport r;
    const long double ld = static_cast<long double>(d);
    const long double ln_n = std::log(static_cast<long double>(n));
    const long double ln_d = std::log(ld);

    r.upper_balanced = static_cast<double>(upper_balanced_value(n, d, k));
    r.upper_general = static_cast<double>(upper_general_value(n, d, k));
    // ln(n^{k-1}/d) computed as (k-1) ln n - ln d to avoid overflow.
    r.lower_balanced_form = static_cast<double>(
        std::pow(ld, static_cast<long double>(k) / (k - 1)) / ln_d * ((k - 1) * ln_n - ln_d));
    r.lower_even_form = static_cast<double>(
        ld * ld / ln_d * std::log(2.0L * n / (static_cast<long double>(k) * ld)));
    r.steiner_lower_form = static_cast<double>(
        std::pow(static_cast<long double>(n), static_cast<long double>(k) / (k - 1)) /
        std::pow(ln_n, 1.0L / (k - 1)));
    r.log2_f = t * (1.0 + log2_binom(static_cast<double>(n), alpha));
    return r;
}

} // namespace thetalab
