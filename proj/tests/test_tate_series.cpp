#include <doctest.h>

#include <map>
#include <random>

#include <rigidpts/coord_change.hpp>
#include <rigidpts/presented.hpp>

using namespace rigidpts;

namespace
{

using ps2 = power_series<tadic>;
using psz = power_series<padic>;

const tadic F2(2);
const padic Q3(3);
const padic Q5(5);

fq_poly tpoly(std::initializer_list<fq_t> c)
{
    return fq_poly(F2.ff(), std::vector<fq_t>(c));
}

fq_poly rand_poly(std::mt19937_64 &rng, unsigned maxdeg)
{
    std::vector<fq_t> c(maxdeg + 1);
    for (auto &x : c) {
        x = static_cast<fq_t>(rng() & 1u);
    }
    return fq_poly(F2.ff(), c);
}

exponent rand_exp(std::mt19937_64 &rng, std::size_t n, unsigned T)
{
    exponent e(n, 0);
    unsigned budget = static_cast<unsigned>(rng() % (T + 1));
    for (unsigned i = 0; i < budget; ++i) {
        ++e[rng() % n];
    }
    return e;
}

template <typename Fl, typename Gen>
power_series<Fl> rand_series(const Fl &fl, std::mt19937_64 &rng, std::size_t n, unsigned T, Gen gen)
{
    auto F = power_series<Fl>::zero(fl, n);
    const unsigned terms = 1 + static_cast<unsigned>(rng() % 6);
    for (unsigned i = 0; i < terms; ++i) {
        F.add_term(rand_exp(rng, n, T), gen());
    }
    return F;
}

// Cauchy product by direct expansion, independent of the series class.
template <typename Int>
std::map<exponent, Int> expand(const std::map<exponent, Int> &a, const std::map<exponent, Int> &b, const Int &zero)
{
    std::map<exponent, Int> r;
    for (const auto &[ea, ca] : a) {
        for (const auto &[eb, cb] : b) {
            exponent e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
            }
            auto it = r.emplace(e, zero).first;
            it->second = it->second + ca * cb;
        }
    }
    return r;
}

template <typename Fl>
std::map<exponent, typename Fl::integer> plain(const power_series<Fl> &F)
{
    std::map<exponent, typename Fl::integer> r;
    for (const auto &[e, c] : F.terms()) {
        r.emplace(e, c.comps.front().second);
    }
    return r;
}

} // namespace

TEST_CASE("gauss_norm examples")
{
    auto F = ps2::zero(F2, 1);
    F.add_term({1}, tpoly({0, 1}));
    F.add_term({0}, tpoly({0, 0, 1}));
    CHECK(F.gauss_norm() == valuation(1));
    CHECK(ps2::zero(F2, 1).gauss_norm().is_inf());
    auto G = ps2::zero(F2, 1);
    G.add_term({1}, F2.one());
    G.add_term({0}, tpoly({0, 1}));
    CHECK(G.gauss_norm() == valuation(0));
}

TEST_CASE("multiply examples")
{
    const std::vector<mpq_class> z{0};
    auto x = ps2::variable(F2, z, 0);
    auto one = ps2::constant(F2, z, F2.one());
    auto t = ps2::constant(F2, z, tpoly({0, 1}));
    auto F = x * x + t * x + one;
    CHECK(F * one == F);
    const auto xz = psz::variable(Q5, z, 0);
    const auto five = psz::constant(Q5, z, 5);
    const auto prod = (xz + five) * (xz - five);
    auto expect = psz::zero(Q5, 1);
    expect.add_term({2}, 1);
    expect.add_term({0}, -25);
    CHECK(prod == expect);
}

TEST_CASE("Gauss norm is multiplicative over F_2[t] and Z")
{
    std::mt19937_64 rng(11);
    for (int it = 0; it < 500; ++it) {
        const std::size_t n = 1 + rng() % 3;
        auto gen = [&] {
            fq_poly c = rand_poly(rng, 5).shift_up(static_cast<unsigned>(rng() % 3));
            return c.is_zero() ? F2.one() : c;
        };
        const auto A = rand_series(F2, rng, n, 8, gen), B = rand_series(F2, rng, n, 8, gen);
        if (A.is_zero() || B.is_zero()) {
            continue;
        }
        const auto P = A * B;
        REQUIRE(P.gauss_norm() == A.gauss_norm() + B.gauss_norm());
        const auto oracle = expand(plain(A), plain(B), F2.zero());
        long mv = 1L << 30;
        for (const auto &[e, c] : oracle) {
            if (!c.is_zero()) {
                mv = std::min(mv, c.ord());
                REQUIRE(P.terms().at(e).comps.front().second == c);
            }
        }
        REQUIRE(P.gauss_norm() == valuation(mv));
    }
    for (int it = 0; it < 500; ++it) {
        const std::size_t n = 1 + rng() % 3;
        auto gen = [&] {
            mpz_class c = long(rng() % 61) - 30;
            return c == 0 ? mpz_class(9) : c;
        };
        const auto A = rand_series(Q3, rng, n, 8, gen), B = rand_series(Q3, rng, n, 8, gen);
        if (A.is_zero() || B.is_zero()) {
            continue;
        }
        const auto P = A * B;
        REQUIRE(P.gauss_norm() == A.gauss_norm() + B.gauss_norm());
        const auto oracle = expand(plain(A), plain(B), mpz_class(0));
        long mv = 1L << 30;
        for (const auto &[e, c] : oracle) {
            if (c != 0) {
                mpz_class r;
                mv = std::min<long>(mv, static_cast<long>(mpz_remove(r.get_mpz_t(), c.get_mpz_t(), mpz_class(3).get_mpz_t())));
            }
        }
        REQUIRE(P.gauss_norm() == valuation(mv));
    }
}

TEST_CASE("evaluate examples")
{
    // Sum_k t^(k^2) x^k truncated after k = 2; the omitted terms have valuation >= 9.
    auto F = ps2::zero(F2, 1);
    for (unsigned k = 0; k <= 2; ++k) {
        F.add_term({k}, F2.pi_pow(k * k));
    }
    F.set_cutoff(2, valuation(9));
    const auto x = local_num<tadic>::from_integer(F2, F2.pi_pow(1), 8);
    const auto v = F.evaluate(std::vector{x});
    CHECK(v.prec() >= 8);
    // Term-by-term oracle: t^(k^2 + k) for k^2 + k < 8.
    fq_poly oracle = F2.zero();
    for (unsigned k = 0; k * k + k < 8; ++k) {
        oracle += F2.pi_pow(k * k + k);
    }
    CHECK(v.rep(8) == oracle);
    CHECK(v.rep(8).to_string() == "t^6+t^2+1");

    const auto zero = local_num<tadic>(F2, 20);
    CHECK(F.evaluate(std::vector{zero}).rep(8) == F2.one());

    const std::vector<mpq_class> z{0};
    const auto X = psz::variable(Q5, z, 0);
    const auto half = local_embed(Q5, rational(1, 2), 10);
    CHECK(X.evaluate(std::vector{half}).congruent(half));

    const auto out = local_num<padic>::from_global(Q5, rational(1, 5), 10);
    CHECK_THROWS_AS(X.evaluate(std::vector{out}), out_of_disc);
    const auto Xr = psz::variable(Q5, {mpq_class(1)}, 0);
    CHECK_NOTHROW(Xr.evaluate(std::vector{out}));
}

TEST_CASE("rescale")
{
    std::mt19937_64 rng(5);
    auto F = ps2::zero(F2, 2);
    F.add_term({1, 0}, tpoly({1, 1}));
    F.add_term({0, 2}, F2.one());
    CHECK(F.rescale({0, 0}) == F);

    const auto x = ps2::variable(F2, {mpq_class(0)}, 0);
    const auto xs = x.rescale({mpq_class(1, 3)});
    CHECK(xs.root_index() == 3u);
    const auto &c = xs.terms().at({1});
    REQUIRE(c.comps.size() == 1u);
    CHECK(c.comps.front().first == 1u);
    CHECK(c.comps.front().second == F2.one());
    CHECK(xs.delta()[0] == mpq_class(1, 3));

    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + rng() % 3;
        auto G = rand_series(F2, rng, n, 6, [&] {
            auto p = rand_poly(rng, 4);
            return p.is_zero() ? F2.one() : p;
        });
        std::vector<mpq_class> eps(n), neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            eps[i] = mpq_class(long(rng() % 4), 1 + rng() % 3);
            eps[i].canonicalize();
            neg[i] = -eps[i];
        }
        const auto R = G.rescale(eps);
        REQUIRE(R.gauss_norm() >= G.gauss_norm());
        const auto back = R.rescale(neg);
        REQUIRE(ps2::congruent(back, G));
    }
    CHECK_THROWS_AS(x.rescale({mpq_class(-1)}), radius_violation);
}

TEST_CASE("coordinate changes")
{
    // Famous change on x1 x2^2 with M = 3: leading term y2^5.
    auto F = ps2::zero(F2, 2);
    F.add_term({1, 2}, F2.one());
    const auto G = apply_coord_change(F, coord_change<tadic>::famous(F2, 2, 3));
    CHECK(G.degree_in(1) == 5u);
    CHECK(G.terms().count({0, 5}) == 1u);
    CHECK(famous_exponent({1, 2}, 3) == 5u);
    CHECK(apply_coord_change(F, coord_change<tadic>::identity(F2, 2)) == F);

    std::mt19937_64 rng(3);
    const std::vector<mpq_class> z(3, 0);
    for (int it = 0; it < 50; ++it) {
        auto H = rand_series(Q5, rng, 3, 5, [&] { return mpz_class(long(rng() % 21) - 10); });
        for (unsigned M : {2u, 3u}) {
            const auto c = coord_change<padic>::famous(Q5, 3, M);
            const auto there = apply_coord_change(H, c);
            const auto back = apply_coord_change(there, c.inverse());
            REQUIRE(back == H);
        }
        // Triangular Z-rational map x1 = y1 + 2 y2 y3, x2 = y2 - y3^2, x3 = y3.
        auto y1 = psz::variable(Q5, z, 0), y2 = psz::variable(Q5, z, 1), y3 = psz::variable(Q5, z, 2);
        auto two = psz::constant(Q5, z, 2);
        auto c = coord_change<padic>::polynomial({y1 + two * y2 * y3, y2 - y3 * y3, y3},
                                                 {y1 - two * (y2 + y3 * y3) * y3, y2 + y3 * y3, y3});
        REQUIRE(apply_coord_change(apply_coord_change(H, c), c.inverse()) == H);
    }

    // Translation by p_1 sends p_1 to the origin.
    auto T = psz::zero(Q5, 2);
    T.add_term({2, 1}, 3);
    T.add_term({0, 1}, 7);
    T.add_term({1, 0}, -2);
    T.add_term({0, 0}, 1);
    const std::vector<coeff<padic>> s{coeff<padic>::from_integer(4), coeff<padic>::from_integer(-6)};
    const auto Tt = apply_coord_change(T, coord_change<padic>::translation(s));
    const long P = 20;
    const auto p1 = std::vector{local_num<padic>::from_integer(Q5, 4, P), local_num<padic>::from_integer(Q5, -6, P)};
    const auto origin = std::vector{local_num<padic>(Q5, P), local_num<padic>(Q5, P)};
    CHECK(Tt.evaluate(origin).congruent(T.evaluate(p1)));
    CHECK(apply_coord_change(Tt, coord_change<padic>::translation(s).inverse()) == T);
}

TEST_CASE("evaluation is a ring homomorphism and bounded by the Gauss norm")
{
    std::mt19937_64 rng(17);
    const long P = 30;
    for (int it = 0; it < 300; ++it) {
        const std::size_t n = 1 + rng() % 3;
        auto gen = [&] {
            auto p = rand_poly(rng, 4).shift_up(static_cast<unsigned>(rng() % 2));
            return p.is_zero() ? F2.one() : p;
        };
        const auto A = rand_series(F2, rng, n, 6, gen), B = rand_series(F2, rng, n, 6, gen);
        std::vector<local_num<tadic>> pt;
        for (std::size_t i = 0; i < n; ++i) {
            pt.push_back(local_num<tadic>::from_integer(F2, rand_poly(rng, 10), P));
        }
        const auto a = A.evaluate(pt), b = B.evaluate(pt);
        REQUIRE((A + B).evaluate(pt).congruent(a + b));
        REQUIRE((A * B).evaluate(pt).congruent(a * b));
        const auto g = A.gauss_norm();
        REQUIRE(valuation(a.val()) >= min(g, valuation(a.prec())));
    }
}

TEST_CASE("module_decompose")
{
    const std::vector<mpq_class> z{0, 0};
    const auto x = psz::variable(Q5, z, 0), y = psz::variable(Q5, z, 1);
    const auto one = psz::constant(Q5, z, 1);
    const auto five = psz::constant(Q5, z, 5);
    const auto h = one + five * x + psz::constant(Q5, z, 125) * x * x;
    const auto g = h * h;
    presented_algebra<padic> alg{Q5, z, {y * y - g}, std::nullopt};
    CHECK_THROWS_AS(module_decompose(y, alg, 20), no_witness);

    normalization_witness<padic> w;
    w.delta = z;
    w.eps = z;
    w.leaf_delta = z;
    w.steps.push_back({1, 2, y * y - g});
    w.retained = {0};
    w.E = 2;
    alg.witness = w;
    REQUIRE(monic_degree(y * y - g, 1) == std::optional<std::uint32_t>(2));

    const long P = 25;
    const auto yy = module_decompose(y * y, alg, P);
    REQUIRE(yy.size() == 2u);
    CHECK(psz::congruent(yy[0], g));
    CHECK(yy[1].is_zero());

    const auto fx = x * x * x + five;
    const auto dx = module_decompose(fx, alg, P);
    CHECK(psz::congruent(dx[0], fx));
    CHECK(dx[1].is_zero());

    // Evaluation consistency on points (x, +-h(x)) of the zero set.
    std::mt19937_64 rng(23);
    const auto f = y * (x + y * y + psz::constant(Q5, z, 3) * x * y);
    const auto dec = module_decompose(f, alg, P);
    for (int it = 0; it < 100; ++it) {
        const auto xv = local_num<padic>::from_integer(Q5, long(rng() % 100000) - 50000, P);
        auto yv = h.evaluate(std::vector{xv, local_num<padic>(Q5, P)});
        if (rng() & 1u) {
            yv = -yv;
        }
        const std::vector<local_num<padic>> pt{xv, yv};
        const auto lhs = dec[0].evaluate(pt) + dec[1].evaluate(pt) * yv;
        REQUIRE(lhs.congruent(f.evaluate(pt)));
    }
}

TEST_CASE("Weierstrass division with a non-trivial unit")
{
    const std::vector<mpq_class> z{0, 0};
    const auto x = ps2::variable(F2, z, 0), y = ps2::variable(F2, z, 1);
    const auto u = ps2::constant(F2, z, tpoly({1, 1}));
    const auto t = ps2::constant(F2, z, tpoly({0, 1}));
    const auto rel = u * y * y + x * y + t;
    REQUIRE(monic_degree(rel, 1) == std::optional<std::uint32_t>(2));
    CHECK(!monic_degree(rel + x * y * y, 1).has_value());
    const long P = 16;
    const auto f = y * y * y * y + x * y * y * y + t * x;
    const auto dr = weierstrass_divide(f, rel, 1, 2, P);
    CHECK(dr.remainder.degree_in(1) < 2u);
    auto recon = dr.quotient * rel + dr.remainder;
    recon.set_prec(valuation(P));
    auto ff = f;
    ff.set_prec(valuation(P));
    CHECK(ps2::congruent(recon, ff));
}
