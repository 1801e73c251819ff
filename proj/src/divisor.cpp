#include "divisor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace zetalab {
namespace {

constexpr std::uint64_t kMaxLimit = 100000000ull;
constexpr char kMagic[4] = {'Z', 'L', 'D', 'K'};
constexpr std::uint32_t kVersion = 1;

struct KahanDouble {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

double tail_majorant(const DivisorTable& table, double sigma, std::uint64_t cutoff,
                     double epsilon) {
    // C = max_{n<=cutoff} d_k(n)^2 / n^{2 eps}
    double c = 0.0;
    for (std::uint64_t n = 1; n <= cutoff; ++n) {
        const double v = static_cast<double>(table.values[n - 1]);
        c = std::max(c, v * v * std::pow(static_cast<double>(n), -2.0 * epsilon));
    }
    const double decay = 2.0 * sigma - 1.0 - 2.0 * epsilon;
    if (decay <= 0.0) return std::numeric_limits<double>::infinity();
    return c * std::pow(static_cast<double>(cutoff), -decay) / decay;
}

void check_series_args(const DivisorTable& table, double sigma, std::uint64_t cutoff,
                       double epsilon) {
    require(table.k >= 1 && table.limit >= 1 && table.values.size() == table.limit,
            ErrorCode::invalid_input, "malformed divisor table");
    require(cutoff >= 1 && cutoff <= table.limit, ErrorCode::domain,
            "series cutoff exceeds the divisor table");
    require(std::isfinite(sigma) && sigma > 0.55, ErrorCode::domain,
            "series requires sigma > 0.55");
    require(epsilon > 0.0 && epsilon < 0.5, ErrorCode::invalid_input,
            "epsilon must lie in (0, 0.5)");
}

} // namespace

DivisorTable divisor_sieve(int k, std::uint64_t n_limit) {
    require(k >= 1 && k <= 6, ErrorCode::domain, "divisor sieve supports k in [1, 6]");
    require(n_limit >= 1 && n_limit <= kMaxLimit, ErrorCode::resource,
            "divisor sieve limit must be in [1, 1e8]");

    DivisorTable table;
    table.k = k;
    table.limit = n_limit;
    table.values.assign(n_limit, 1u); // d_1
    if (k == 1) return table;

    // d_k(m) = sum_{d | m} d_{k-1}(d); within the k <= 6, n <= 1e8 guard the
    // values stay orders of magnitude below 2^32, so u32 adds cannot wrap.
    std::vector<std::uint32_t> next(n_limit);
    for (int step = 2; step <= k; ++step) {
        std::fill(next.begin(), next.end(), 0u);
        for (std::uint64_t d = 1; d <= n_limit; ++d) {
            const std::uint32_t vd = table.values[d - 1];
            for (std::uint64_t m = d; m <= n_limit; m += d) next[m - 1] += vd;
        }
        table.values.swap(next);
    }
    return table;
}

std::uint64_t divisor_count_single(int k, std::uint64_t n) {
    require(k >= 1 && k <= 6, ErrorCode::domain, "k must be in [1, 6]");
    require(n >= 1, ErrorCode::domain, "n must be >= 1");
    std::uint64_t out = 1;
    std::uint64_t rest = n;
    auto apply = [&](std::uint64_t a) {
        // binom(a + k - 1, k - 1)
        std::uint64_t b = 1;
        for (std::uint64_t i = 1; i + 1 <= static_cast<std::uint64_t>(k); ++i)
            b = b * (a + i) / i;
        out *= b;
    };
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        std::uint64_t a = 0;
        while (rest % p == 0) {
            rest /= p;
            ++a;
        }
        apply(a);
    }
    if (rest > 1) apply(1);
    return out;
}

double series_prefix(int k, double sigma, std::uint64_t n_cut) {
    require(n_cut >= 1 && n_cut <= 100000, ErrorCode::resource,
            "series prefix supports n_cut <= 1e5");
    double s = 0.0;
    for (std::uint64_t n = 1; n <= n_cut; ++n) {
        const double d = static_cast<double>(divisor_count_single(k, n));
        s += d * d * std::pow(static_cast<double>(n), -2.0 * sigma);
    }
    return s;
}

SeriesValue series_value(const DivisorTable& table, double sigma, std::uint64_t cutoff,
                         double epsilon) {
    check_series_args(table, sigma, cutoff, epsilon);
    KahanDouble acc;
    for (std::uint64_t n = 1; n <= cutoff; ++n) {
        const double v = static_cast<double>(table.values[n - 1]);
        acc.add(v * v * std::pow(static_cast<double>(n), -2.0 * sigma));
    }
    SeriesValue out;
    out.k = table.k;
    out.sigma = sigma;
    out.cutoff = cutoff;
    out.epsilon = epsilon;
    out.partial_sum = acc.sum;
    out.tail_bound = tail_majorant(table, sigma, cutoff, epsilon);
    return out;
}

CauchyClosedForm cauchy_distance_closed_form(const DivisorTable& table, double sigma_a,
                                             double sigma_b, std::uint64_t cutoff,
                                             double epsilon) {
    const double s_min = std::min(sigma_a, sigma_b);
    check_series_args(table, s_min, cutoff, epsilon);
    KahanDouble acc;
    for (std::uint64_t n = 1; n <= cutoff; ++n) {
        const double v = static_cast<double>(table.values[n - 1]);
        const double dn = static_cast<double>(n);
        const double gap = std::pow(dn, -sigma_a) - std::pow(dn, -sigma_b);
        acc.add(v * v * gap * gap);
    }
    // (x - y)^2 <= max(x, y)^2 = n^{-2 s_min} termwise
    return {acc.sum, tail_majorant(table, s_min, cutoff, epsilon)};
}

void save_divisor_table(const DivisorTable& table, const std::string& path) {
    static_assert(std::endian::native == std::endian::little,
                  "cache format assumes a little-endian host");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io, "cannot open " + path + " for writing");
    out.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    const std::uint32_t k = static_cast<std::uint32_t>(table.k);
    const std::uint64_t limit = table.limit;
    out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
    out.write(reinterpret_cast<const char*>(&k), sizeof k);
    out.write(reinterpret_cast<const char*>(&limit), sizeof limit);
    out.write(reinterpret_cast<const char*>(table.values.data()),
              static_cast<std::streamsize>(table.values.size() * sizeof(std::uint32_t)));
    require(out.good(), ErrorCode::io, "short write to " + path);
}

DivisorTable load_divisor_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorCode::io, "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    require(in.good() && std::memcmp(magic, kMagic, 4) == 0, ErrorCode::io,
            path + " is not a divisor table cache");
    std::uint32_t ver = 0, k = 0;
    std::uint64_t limit = 0;
    in.read(reinterpret_cast<char*>(&ver), sizeof ver);
    in.read(reinterpret_cast<char*>(&k), sizeof k);
    in.read(reinterpret_cast<char*>(&limit), sizeof limit);
    require(in.good() && ver == kVersion, ErrorCode::io,
            "unsupported divisor cache version in " + path);
    require(k >= 1 && k <= 6 && limit >= 1 && limit <= kMaxLimit, ErrorCode::io,
            "divisor cache header out of range in " + path);
    DivisorTable table;
    table.k = static_cast<int>(k);
    table.limit = limit;
    table.values.resize(limit);
    in.read(reinterpret_cast<char*>(table.values.data()),
            static_cast<std::streamsize>(limit * sizeof(std::uint32_t)));
    require(in.good(), ErrorCode::io, "truncated divisor cache " + path);
    return table;
}

} // namespace zetalab
