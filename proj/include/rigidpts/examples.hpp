#ifndef RIGIDPTS_EXAMPLES_HPP
#define RIGIDPTS_EXAMPLES_HPP

#include <rigidpts/local.hpp>
#include <rigidpts/presented.hpp>

namespace rigidpts
{

// g(x) = sum_{k <= T} pi^(k^2) x^k with the tail bound (T+1)^2, in the variable x_0 of n variables.
template <typename Fl>
power_series<Fl> lacunary_series(const Fl &fl, std::vector<mpq_class> delta, unsigned T, unsigned first = 0)
{
    power_series<Fl> g(fl, std::move(delta));
    for (unsigned k = first; k <= T; ++k) {
        exponent e(g.nvars(), 0);
        e[0] = k;
        g.add_term(e, fl.pi_pow(static_cast<long>(k) * k));
    }
    g.set_cutoff(T, valuation(static_cast<long>(T + 1) * (T + 1)));
    return g;
}

// The graph y = sum pi^(k^2) x^k in the unit polydisc.
template <typename Fl>
presented_algebra<Fl> lacunary_graph(const Fl &fl, unsigned T = 24)
{
    const std::vector<mpq_class> delta(2, 0);
    auto y = power_series<Fl>::variable(fl, delta, 1);
    y.set_cutoff(T, valuation(static_cast<long>(T + 1) * (T + 1)));
    return {fl, delta, {y - lacunary_series(fl, delta, T)}, std::nullopt};
}

// y^2 - g(x) with g = 1 + sum_{k >= 1} pi^(k^2) x^k and radii (1, 0).
template <typename Fl>
presented_algebra<Fl> lacunary_square(const Fl &fl, unsigned T = 24)
{
    const std::vector<mpq_class> delta{1, 0};
    auto y2 = power_series<Fl>(fl, delta);
    y2.add_term({0, 2}, fl.one());
    y2.set_cutoff(T, valuation(static_cast<long>(T + 1) * (T + 1) - static_cast<long>(T + 1)));
    auto g = lacunary_series(fl, delta, T, 1);
    g.add_term({0, 0}, fl.one());
    g.set_cutoff(T, valuation(static_cast<long>(T + 1) * (T + 1) - static_cast<long>(T + 1)));
    return {fl, delta, {y2 - g}, std::nullopt};
}

// y - x^2.
template <typename Fl>
presented_algebra<Fl> parabola(const Fl &fl)
{
    const std::vector<mpq_class> delta(2, 0);
    power_series<Fl> G(fl, delta);
    G.add_term({0, 1}, fl.one());
    G.add_term({2, 0}, -fl.one());
    return {fl, delta, {G}, std::nullopt};
}

// y^2 - x^3 - 1.
template <typename Fl>
presented_algebra<Fl> cubic_curve(const Fl &fl)
{
    const std::vector<mpq_class> delta(2, 0);
    power_series<Fl> G(fl, delta);
    G.add_term({0, 2}, fl.one());
    G.add_term({3, 0}, -fl.one());
    G.add_term({0, 0}, -fl.one());
    return {fl, delta, {G}, std::nullopt};
}

// sum_{k = first..T} pi^(k^2) x^k at a local point.
template <typename Fl>
local_num<Fl> lacunary_value(const Fl &fl, const local_num<Fl> &x, unsigned T, unsigned first = 0)
{
    const long prec = x.prec();
    local_num<Fl> acc(fl, prec);
    local_num<Fl> xp = local_num<Fl>::from_integer(fl, fl.one(), prec);
    for (unsigned k = 0; k <= T; ++k) {
        if (k >= first) {
            acc = acc + local_num<Fl>::from_integer(fl, fl.pi_pow(static_cast<long>(k) * k), prec) * xp;
        }
        xp = xp * x;
    }
    return acc;
}

// Square root of a unit congruent to a square r0^2 mod pi, by Newton iteration (odd residue characteristic).
template <typename Fl>
local_num<Fl> local_sqrt(const Fl &fl, const local_num<Fl> &a, const typename Fl::integer &r0)
{
    const long prec = a.prec();
    auto y = local_num<Fl>::from_integer(fl, r0, prec);
    const auto two = local_num<Fl>::from_integer(fl, fl.from_si(2), prec);
    for (long k = 1; k < 2 * prec + 2; k *= 2) {
        y = y - (y * y - a) * (two * y).inverse();
    }
    if (!(y * y - a).is_zero()) {
        throw std::domain_error("no square root");
    }
    return y;
}

} // namespace rigidpts

#endif
