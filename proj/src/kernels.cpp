#include <rigidpts/kernels.hpp>

#include <algorithm>
#include <bit>

#include <omp.h>

#include <rigidpts/heights.hpp>

namespace rigidpts
{

std::uint64_t clmul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    while (b != 0) {
        r ^= a << std::countr_zero(b);
        b &= b - 1;
    }
    return r;
}

namespace
{

std::uint64_t to_mask(const fq_poly &a)
{
    std::uint64_t m = 0;
    for (long i = 0; i <= a.degree(); ++i) {
        if (a.coeff(static_cast<std::size_t>(i)) != 0u) {
            m |= std::uint64_t(1) << i;
        }
    }
    return m;
}

long v_p(std::int64_t a, std::uint32_t p)
{
    long v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

void record(sweep_stats &s, std::optional<long> v, long bound)
{
    ++s.triples;
    if (!v) {
        return;
    }
    if (s.nonzero == 0 || *v > s.max_val) {
        s.max_val = *v;
    }
    ++s.nonzero;
    if (*v > bound) {
        ++s.violations;
    }
}

void merge(sweep_stats &into, const sweep_stats &s)
{
    if (s.nonzero > 0 && (into.nonzero == 0 || s.max_val > into.max_val)) {
        into.max_val = s.max_val;
    }
    into.triples += s.triples;
    into.nonzero += s.nonzero;
    into.violations += s.violations;
}

template <typename P, typename F>
sweep_stats sweep_row(const std::vector<P> &pts, std::size_t i, long bound, F val)
{
    sweep_stats s;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
        for (std::size_t k = j + 1; k < pts.size(); ++k) {
            record(s, val(pts[i], pts[j], pts[k]), bound);
        }
    }
    return s;
}

template <typename P, typename F>
sweep_stats sweep_serial(const std::vector<P> &pts, long bound, F val)
{
    sweep_stats s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        merge(s, sweep_row(pts, i, bound, val));
    }
    return s;
}

template <typename P, typename F>
sweep_stats sweep_parallel(const std::vector<P> &pts, long bound, int workers, F val)
{
    std::vector<sweep_stats> rows(pts.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(pts.size()); ++i) {
        rows[static_cast<std::size_t>(i)] = sweep_row(pts, static_cast<std::size_t>(i), bound, val);
    }
    sweep_stats s;
    for (const auto &r : rows) {
        merge(s, r);
    }
    return s;
}

} // namespace

std::vector<f2_value> f2_values(long h)
{
    // Six factors of degree <= h must fit in 64 bits.
    if (h > 10) {
        throw std::invalid_argument("bitmask kernel supports h <= 10");
    }
    std::vector<f2_value> out;
    for (const auto &v : enum_heights(tadic(2), h)) {
        out.push_back({to_mask(v.num()), to_mask(v.den())});
    }
    return out;
}

std::vector<small_rational> small_values(std::uint32_t p, long H)
{
    if (H > 200) {
        throw std::invalid_argument("int64 kernel supports H <= 200");
    }
    std::vector<small_rational> out;
    for (const auto &v : enum_heights(padic(p), mpz_class(H))) {
        out.push_back({v.num().get_si(), v.den().get_si()});
    }
    return out;
}

std::optional<long> det3_val(const point2<f2_value> &a, const point2<f2_value> &b, const point2<f2_value> &c)
{
    // Over F_2 the determinant is x1(y2 + y3) + x2(y1 + y3) + x3(y1 + y2); clear all six denominators.
    const std::uint64_t bx[3] = {a.x.den, b.x.den, c.x.den};
    const std::uint64_t by[3] = {a.y.den, b.y.den, c.y.den};
    const std::uint64_t nx[3] = {a.x.num, b.x.num, c.x.num};
    const std::uint64_t ny[3] = {a.y.num, b.y.num, c.y.num};
    std::uint64_t acc = 0;
    // Sum over permutations (i, j, k) of sign * x_j y_k, with the remaining denominators multiplied in.
    static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto &pm : perm) {
        const int j = pm[1], k = pm[2], i = pm[0];
        std::uint64_t term = clmul(nx[j], ny[k]);
        term = clmul(term, clmul(bx[i], bx[k]));
        term = clmul(term, clmul(by[i], by[j]));
        acc ^= term;
    }
    if (acc == 0) {
        return std::nullopt;
    }
    // Denominators are prime to t.
    return std::countr_zero(acc);
}

std::optional<long> det3_val(const point2<small_rational> &a, const point2<small_rational> &b,
                             const point2<small_rational> &c, std::uint32_t p)
{
    const std::int64_t x1 = a.x.num * b.x.den * c.x.den, x2 = b.x.num * a.x.den * c.x.den,
                       x3 = c.x.num * a.x.den * b.x.den;
    const std::int64_t y1 = a.y.num * b.y.den * c.y.den, y2 = b.y.num * a.y.den * c.y.den,
                       y3 = c.y.num * a.y.den * b.y.den;
    const std::int64_t d = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1);
    if (d == 0) {
        return std::nullopt;
    }
    long v = v_p(d, p);
    const std::int64_t dens = a.x.den * b.x.den * c.x.den * a.y.den * b.y.den * c.y.den;
    return v - v_p(dens, p);
}

sweep_stats f2_sweep_serial(const std::vector<point2<f2_value>> &pts, long bound)
{
    return sweep_serial(pts, bound, [](const auto &a, const auto &b, const auto &c) { return det3_val(a, b, c); });
}

sweep_stats f2_sweep_parallel(const std::vector<point2<f2_value>> &pts, long bound, int workers)
{
    return sweep_parallel(pts, bound, workers,
                          [](const auto &a, const auto &b, const auto &c) { return det3_val(a, b, c); });
}

sweep_stats padic_sweep_serial(const std::vector<point2<small_rational>> &pts, std::uint32_t p, long bound)
{
    return sweep_serial(pts, bound, [p](const auto &a, const auto &b, const auto &c) { return det3_val(a, b, c, p); });
}

sweep_stats padic_sweep_parallel(const std::vector<point2<small_rational>> &pts, std::uint32_t p, long bound,
                                 int workers)
{
    return sweep_parallel(pts, bound, workers,
                          [p](const auto &a, const auto &b, const auto &c) { return det3_val(a, b, c, p); });
}

} // namespace rigidpts
