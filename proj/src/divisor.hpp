#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zetalab {

// d_k(n): number of ordered factorisations of n into k positive factors.
// d_1 = 1, d_2 = divisor count, and d_k = d_{k-1} * 1 under Dirichlet
// convolution. Values for k <= 6 and n <= 1e8 stay far below 2^32.
struct DivisorTable {
    int k = 0;
    std::uint64_t limit = 0;          // table covers 1..limit
    std::vector<std::uint32_t> values; // values[n-1] = d_k(n)

    std::uint32_t operator()(std::uint64_t n) const {
        require(n >= 1 && n <= limit, ErrorCode::domain,
                "divisor table lookup out of range");
        return values[n - 1];
    }
};

// Iterated Dirichlet convolution sieve, O(N log N) per convolution step.
// Guards: 1 <= k <= 6, 1 <= N <= 1e8.
DivisorTable divisor_sieve(int k, std::uint64_t n_limit);

// d_k(n) for a single n by trial-division factorisation and
// d_k(p^a) = binom(a + k - 1, k - 1).
std::uint64_t divisor_count_single(int k, std::uint64_t n);

// Short prefix of S_k(sigma) through single factorisations; a magnitude
// estimate when no sieve table is at hand.
double series_prefix(int k, double sigma, std::uint64_t n_cut);

// Partial sum S_k(sigma; N) = sum_{n<=N} d_k(n)^2 n^{-2 sigma} (Kahan), with
// a tail majorant from d_k(n)^2 <= C n^{2 eps}, C = max_{n<=N} d_k(n)^2 /
// n^{2 eps}:
//
//   tail <= C * N^{1 - 2 sigma + 2 eps} / (2 sigma - 1 - 2 eps)
//
// The bound is finite only for sigma > 1/2 + eps; outside that it is
// reported as +inf. eps defaults to 0.1.
struct SeriesValue {
    int k = 0;
    double sigma = 0.0;
    std::uint64_t cutoff = 0;
    double epsilon = 0.0;
    double partial_sum = 0.0;
    double tail_bound = 0.0;
};
SeriesValue series_value(const DivisorTable& table, double sigma,
                         std::uint64_t cutoff, double epsilon = 0.1);

// Closed form of the squared Besicovitch distance between the Bohr
// developments on two lines:
//   sum_{n<=N} d_k(n)^2 (n^{-sigma_a} - n^{-sigma_b})^2
// plus a tail majorant at min(sigma_a, sigma_b).
struct CauchyClosedForm {
    double value = 0.0;
    double tail_bound = 0.0;
};
CauchyClosedForm cauchy_distance_closed_form(const DivisorTable& table, double sigma_a,
                                             double sigma_b, std::uint64_t cutoff,
                                             double epsilon = 0.1);

// Binary cache: magic "ZLDK", u32 version, u32 k, u64 limit, then limit
// little-endian u32 values. No timestamps, so files are reproducible.
void save_divisor_table(const DivisorTable& table, const std::string& path);
DivisorTable load_divisor_table(const std::string& path);

} // namespace zetalab
