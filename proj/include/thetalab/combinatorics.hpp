#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace thetalab {

// Saturating binomial coefficient. Values that would exceed the uint64 range
// saturate to max(); callers that need exact counts must stay below that.
inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t factor = n - k + i;
        if (result > kMax / factor) return kMax;
        result = result * factor / i;  // divisor i always divides the running product
    }
    return result;
}

// Visits every k-subset of {0,...,n-1} in lexicographic order. The callback
// receives the subset as a sorted vector that is reused between calls.
template <typename Fn>
void for_each_k_subset(int n, int k, Fn&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// Visits every k-subset of the given sorted pool (by value, not index).
template <typename Fn>
void for_each_k_subset_of(const std::vector<int>& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    std::vector<int> subset(static_cast<std::size_t>(std::max(k, 0)));
    for_each_k_subset(n, k, [&](const std::vector<int>& idx) {
        for (int i = 0; i < k; ++i)
            subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        fn(subset);
    });
}

// Lexicographic rank of a sorted k-subset of {0,...,n-1}, in [0, binom(n,k)).
inline std::uint64_t subset_rank(const std::vector<int>& subset, int n) {
    const int k = static_cast<int>(subset.size());
    std::uint64_t rank = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < subset[static_cast<std::size_t>(i)]; ++v)
            rank += binom(static_cast<std::uint64_t>(n - 1 - v),
                          static_cast<std::uint64_t>(k - 1 - i));
        prev = subset[static_cast<std::size_t>(i)];
    }
    return rank;
}

namespace detail {

// Little-endian base-2^32 unsigned integer used only for exact power
// comparisons; avoids floating-point boundary errors in balancedness and
// degree-threshold tests.
using BigUint = std::vector<std::uint32_t>;

inline BigUint big_from_u64(std::uint64_t v) {
    BigUint out;
    while (v != 0) {
        out.push_back(static_cast<std::uint32_t>(v & 0xFFFFFFFFULL));
        v >>= 32;
    }
    return out;
}

inline BigUint big_mul(const BigUint& a, const BigUint& b) {
    if (a.empty() || b.empty()) return {};
    BigUint out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t cur = static_cast<std::uint64_t>(a[i]) * b[j] + out[i + j] + carry;
            out[i + j] = static_cast<std::uint32_t>(cur & 0xFFFFFFFFULL);
            carry = cur >> 32;
        }
        out[i + b.size()] += static_cast<std::uint32_t>(carry);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

inline int big_cmp(const BigUint& a, const BigUint& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

inline BigUint big_pow(std::uint64_t base, unsigned exp) {
    BigUint result = big_from_u64(1);
    BigUint b = big_from_u64(base);
    while (exp != 0) {
        if (exp & 1U) result = big_mul(result, b);
        exp >>= 1U;
        if (exp != 0) b = big_mul(b, b);
    }
    return result;
}

} // namespace detail

// Exact comparison a^ea <= b^eb in integer arithmetic.
inline bool pow_leq(std::uint64_t a, unsigned ea, std::uint64_t b, unsigned eb) {
    return detail::big_cmp(detail::big_pow(a, ea), detail::big_pow(b, eb)) <= 0;
}

} // namespace thetalab
