#ifndef RIGIDPTS_KERNELS_HPP
#define RIGIDPTS_KERNELS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <rigidpts/field.hpp>

namespace rigidpts
{

// Element of F_2(t) as bitmask polynomials num/den (bit i = coefficient of t^i).
struct f2_value {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
};

// Rational a/b with small integers.
struct small_rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

template <typename V>
struct point2 {
    V x, y;
};

struct sweep_stats {
    std::uint64_t triples = 0;
    std::uint64_t nonzero = 0;
    std::uint64_t violations = 0;
    // Largest valuation of a nonzero determinant seen.
    long max_val = 0;

    friend bool operator==(const sweep_stats &, const sweep_stats &) = default;
};

std::uint64_t clmul(std::uint64_t a, std::uint64_t b);

std::vector<f2_value> f2_values(long h);
std::vector<small_rational> small_values(std::uint32_t p, long H);

template <typename V>
std::vector<point2<V>> all_pairs(const std::vector<V> &vals)
{
    std::vector<point2<V>> out;
    out.reserve(vals.size() * vals.size());
    for (const auto &x : vals) {
        for (const auto &y : vals) {
            out.push_back({x, y});
        }
    }
    return out;
}

// Valuation of det [[1,1,1],[x1,x2,x3],[y1,y2,y3]]; none when it vanishes.
std::optional<long> det3_val(const point2<f2_value> &a, const point2<f2_value> &b, const point2<f2_value> &c);
std::optional<long> det3_val(const point2<small_rational> &a, const point2<small_rational> &b,
                             const point2<small_rational> &c, std::uint32_t p);

// All triples i < j < k; a violation is a nonzero determinant of valuation above the bound.
sweep_stats f2_sweep_serial(const std::vector<point2<f2_value>> &pts, long bound);
sweep_stats f2_sweep_parallel(const std::vector<point2<f2_value>> &pts, long bound, int workers = 0);
sweep_stats padic_sweep_serial(const std::vector<point2<small_rational>> &pts, std::uint32_t p, long bound);
sweep_stats padic_sweep_parallel(const std::vector<point2<small_rational>> &pts, std::uint32_t p, long bound,
                                 int workers = 0);

} // namespace rigidpts

#endif
