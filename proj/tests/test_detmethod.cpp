#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <rigidpts/detmethod.hpp>
#include <rigidpts/examples.hpp>

using namespace rigidpts;

namespace
{

const tadic F2(2);
const tadic F3(3);
const padic Q5(5);

rational Q(long a, long b = 1)
{
    return rational(mpz_class(a), mpz_class(b));
}

// Minimal degree sum by listing every exponent vector E times and sorting.
std::uint64_t exponent_oracle(std::uint64_t mu, std::size_t d, std::uint32_t E)
{
    std::vector<std::uint64_t> degs;
    for (unsigned K = 0; degs.size() < mu; ++K) {
        std::vector<unsigned> e(d, 0);
        for (;;) {
            unsigned s = 0;
            for (auto v : e) {
                s += v;
            }
            if (s == K) {
                for (std::uint32_t c = 0; c < E; ++c) {
                    degs.push_back(K);
                }
            }
            std::size_t i = 0;
            while (i < d && e[i] == K) {
                e[i++] = 0;
            }
            if (i == d) {
                break;
            }
            ++e[i];
        }
    }
    std::sort(degs.begin(), degs.end());
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i < mu; ++i) {
        s += degs[i];
    }
    return s;
}

// Laplace expansion along the first row.
rational cofactor_det(const std::vector<std::vector<rational>> &A)
{
    const std::size_t n = A.size();
    if (n == 1) {
        return A[0][0];
    }
    rational s = Q(0);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<rational>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<rational> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j) {
                    row.push_back(A[i][k]);
                }
            }
            minor.push_back(row);
        }
        const auto c = A[0][j] * cofactor_det(minor);
        s = (j % 2 == 0) ? s + c : s - c;
    }
    return s;
}

std::vector<std::vector<rational>> random_points(std::mt19937 &rng, std::size_t count, std::size_t m, long H)
{
    std::uniform_int_distribution<long> num(-H, H), den(1, H);
    std::vector<std::vector<rational>> pts(count, std::vector<rational>(m));
    for (auto &p : pts) {
        for (auto &c : p) {
            c = Q(num(rng), den(rng));
        }
    }
    return pts;
}

local_num<tadic> random_local(const tadic &fl, std::mt19937 &rng, long prec)
{
    std::uniform_int_distribution<std::uint32_t> dig(0, fl.q() - 1);
    std::vector<fq_t> c(static_cast<std::size_t>(prec));
    for (auto &v : c) {
        v = dig(rng);
    }
    return local_num<tadic>::from_integer(fl, fq_poly(fl.ff(), c), prec);
}

// Oracle D: minimal degree with S * eps > (d + 2) D mu, computed from the brute exponent oracle.
unsigned degree_oracle(std::size_t d, const mpq_class &eps, std::uint32_t E)
{
    for (unsigned D = 1;; ++D) {
        const std::uint64_t mu = binomial(D + d + 1, d + 1).get_ui();
        if (mpq_class(static_cast<unsigned long>(exponent_oracle(mu, d, E))) * eps >
            mpq_class(static_cast<unsigned long>((d + 2) * D * mu))) {
            return D;
        }
    }
}

hypersurface<tadic> make_hyp(const std::vector<std::pair<exponent, ratfunc>> &terms)
{
    hypersurface<tadic> Qh;
    Qh.vars = {0, 1};
    for (const auto &[e, c] : terms) {
        Qh.monos.push_back(e);
        Qh.coeffs.push_back(c);
        Qh.degree = std::max<unsigned>(Qh.degree, static_cast<unsigned>(total_degree(e)));
    }
    return Qh;
}

} // namespace

TEST_CASE("monomials are ordered by degree and counted by binomials")
{
    for (std::size_t m = 1; m <= 3; ++m) {
        for (unsigned D = 0; D <= 5; ++D) {
            const auto ms = monomials(D, m);
            CHECK(ms.size() == monomial_count(D, m));
            CHECK(std::set<exponent>(ms.begin(), ms.end()).size() == ms.size());
            for (std::size_t i = 1; i < ms.size(); ++i) {
                CHECK(total_degree(ms[i - 1]) <= total_degree(ms[i]));
            }
        }
    }
    CHECK(monomial_count(1, 2) == 3u);
    CHECK(monomial_count(46, 2) == 1128u);
}

TEST_CASE("exact exponent")
{
    CHECK(exact_exponent(5, 1, 2) == 4u);
    CHECK(exact_exponent(4, 2, 1) == 4u);
    CHECK(exact_exponent(2, 1, 2) == 0u);
    CHECK(exact_exponent(1, 3, 1) == 0u);
    CHECK(exact_exponent(3, 1, 1) == 3u);
    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::uint32_t E = 1; E <= 4; ++E) {
            for (std::uint64_t mu = 1; mu <= 200; mu += (mu < 30 ? 1 : 7)) {
                CHECK(exact_exponent(mu, d, E) == exponent_oracle(mu, d, E));
            }
        }
    }
}

TEST_CASE("interpolation determinant")
{
    // Identical points give zero.
    std::vector<std::vector<rational>> same(3, {Q(1, 2), Q(3)});
    CHECK(interp_det(Q5, same, 1).is_zero());
    // One point, constant monomial.
    CHECK(interp_det(Q5, {{Q(7), Q(-2)}}, 0) == Q(1));
    CHECK_THROWS_AS(interp_det(Q5, same, 2), std::invalid_argument);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto pts = random_points(rng, 3, 2, 9);
        CHECK(interp_det(Q5, pts, 1) == cofactor_det(interp_matrix(Q5, pts, 1)));
        // 5 points in one variable: Vandermonde product.
        const auto xs = random_points(rng, 5, 1, 9);
        rational v = Q(1);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = i + 1; j < 5; ++j) {
                v = v * (xs[j][0] - xs[i][0]);
            }
        }
        CHECK(interp_det(Q5, xs, 4) == v);
        CHECK(cofactor_det(interp_matrix(Q5, xs, 4)) == v);
    }
}

TEST_CASE("Berkowitz agrees with Bareiss")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> dist(-40, 40);
    const long prec = 60;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
        std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(n));
        std::vector<std::vector<local_num<padic>>> L(n, std::vector<local_num<padic>>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                A[i][j] = dist(rng);
                L[i][j] = local_num<padic>::from_integer(Q5, A[i][j], prec);
            }
        }
        const auto exact = bareiss_det(A);
        const auto loc = berkowitz_det(L, local_num<padic>(Q5, prec), local_num<padic>::from_integer(Q5, 1, prec));
        CHECK((loc - local_num<padic>::from_integer(Q5, exact, prec)).is_zero());
    }
}

TEST_CASE("determinant lower bounds")
{
    CHECK(det_lower_bound_tadic(1, 1, 3, 1) == 9);
    CHECK(det_lower_bound_tadic(4, 2, 6, 1) == 144);
    // mu = 1: the determinant is 1.
    CHECK(det_lower_bound_padic(5, 0, 1, 1, 1, 5) == 0);
    // ceil(log_5 3!) = 2 and H^9 = 5^9.
    CHECK(det_lower_bound_padic(5, 1, 3, 1, 1, 5) == 11);
    CHECK(det_lower_bound_padic(5, 1, 3, 1, 2, 5) == 22);
    CHECK(ceil_log(1, 5) == 0u);
    CHECK(ceil_log(5, 5) == 1u);
    CHECK(ceil_log(6, 5) == 2u);
    CHECK(ceil_log(mpz_class("1000000000000000000000000000000"), 10) == 30u);
    CHECK(ceil_log(mpz_class("1000000000000000000000000000001"), 10) == 31u);

    // Nonzero determinants of small-height points never exceed the bound.
    const auto vals = enum_heights(Q5, mpz_class(2));
    std::vector<std::vector<rational>> pts;
    for (const auto &x : vals) {
        for (const auto &y : vals) {
            pts.push_back({x, y});
        }
    }
    const auto bound = det_lower_bound(Q5, mpz_class(2), 1, 3, 1);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    int nonzero = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const auto det = interp_det(Q5, {pts[pick(rng)], pts[pick(rng)], pts[pick(rng)]}, 1);
        if (const auto v = global_val(Q5, det)) {
            ++nonzero;
            CHECK(mpz_class(*v) <= bound);
        }
    }
    CHECK(nonzero > 1000);
}

TEST_CASE("degree choice")
{
    CHECK(choose_degree(1, mpq_class(1, 4), 1, 1, base_kind::tadic, 2) == 46u);
    CHECK(choose_degree(1, mpq_class(1, 2), 1, 1, base_kind::tadic, 2) == 22u);
    for (const mpq_class eps : {mpq_class(1, 8), mpq_class(1, 4), mpq_class(1, 3), mpq_class(1, 2), mpq_class(1)}) {
        for (std::uint32_t E = 1; E <= 2; ++E) {
            CHECK(choose_degree(1, eps, E, 1, base_kind::tadic, 2) == degree_oracle(1, eps, E));
        }
    }
    CHECK(choose_degree(2, mpq_class(2), 1, 1, base_kind::tadic, 2) == degree_oracle(2, mpq_class(2), 1));
    unsigned prev = 0;
    for (int k = 16; k >= 1; --k) {
        const unsigned D = choose_degree(1, mpq_class(1, k), 1, 1, base_kind::tadic, 2);
        if (prev != 0) {
            CHECK(D <= prev);
        }
        prev = D;
    }
    // The p-adic version also pays for log mu!.
    CHECK(choose_degree(1, mpq_class(1, 2), 1, 1, base_kind::padic, 5) >= 22u);
    CHECK_THROWS_AS(choose_degree(1, mpq_class(1, 1000), 1, 1, base_kind::tadic, 2, 50), no_solution);
    CHECK_THROWS_AS(choose_degree(1, mpq_class(0), 1, 1, base_kind::tadic, 2), std::invalid_argument);
}

TEST_CASE("subdivision depth and polylog degree")
{
    // m = ceil(h eps / 2) for eps = 1/2.
    for (long h = 0; h <= 12; ++h) {
        CHECK(subdivision_depth(height_bound(F2, h), mpq_class(1, 2), 1, 2) == (h + 3) / 4);
    }
    CHECK(subdivision_depth(mpz_class(625), mpq_class(1), 1, 5) == 2);
    for (long h = 1; h <= 6; ++h) {
        CHECK(polylog_degree(height_bound(F2, h), 1, 1, 1, base_kind::tadic, 2, mpq_class(1)) ==
              static_cast<unsigned>(12 * h - 2));
    }
}

TEST_CASE("hypersurface through points")
{
    // Collinear points: y = 2x + 1.
    const std::vector<std::vector<rational>> line{{Q(0), Q(1)}, {Q(1), Q(3)}, {Q(2), Q(5)}};
    const auto L = find_min_hypersurface(Q5, line, 3, {0, 1});
    REQUIRE(L);
    CHECK(L->degree == 1u);
    for (const auto &p : line) {
        CHECK(L->operator()(Q5, p).is_zero());
    }
    CHECK_FALSE(L->operator()(Q5, {Q(1), Q(1)}).is_zero());

    // Points on y = x^2: degree 2, proportional to y - x^2.
    std::vector<std::vector<rational>> par;
    for (long a = -3; a <= 3; ++a) {
        par.push_back({Q(a, 2), Q(a * a, 4)});
    }
    const auto P = find_min_hypersurface(Q5, par, 4, {0, 1});
    REQUIRE(P);
    CHECK(P->degree == 2u);
    CHECK_FALSE(find_hypersurface(Q5, par, 1, {0, 1}));
    const auto monos = P->monos;
    rational cy, cxx;
    for (std::size_t i = 0; i < monos.size(); ++i) {
        if (monos[i] == exponent{0, 1}) {
            cy = P->coeffs[i];
        } else if (monos[i] == exponent{2, 0}) {
            cxx = P->coeffs[i];
        } else {
            CHECK(P->coeffs[i].is_zero());
        }
    }
    CHECK_FALSE(cy.is_zero());
    CHECK(cxx == -cy);

    // Fewer points than monomials always admit a hypersurface.
    const auto U = find_hypersurface(Q5, {{Q(1, 3), Q(7)}, {Q(2), Q(-5, 4)}}, 1, {0, 1});
    REQUIRE(U);
    CHECK(U->operator()(Q5, {Q(1, 3), Q(7)}).is_zero());
}

TEST_CASE("determinant and hypersurface dichotomy")
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const unsigned D = 1 + static_cast<unsigned>(trial % 3);
        const auto mu = monomial_count(D, 2);
        // Small heights force many coincidences.
        auto pts = random_points(rng, mu, 2, trial % 2 == 0 ? 2 : 6);
        if (trial % 5 == 0) {
            for (auto &p : pts) {
                p[1] = p[0] * p[0];
            }
        }
        const bool det_zero = interp_det(Q5, pts, D).is_zero();
        const auto Qh = find_hypersurface(Q5, pts, D, {0, 1});
        CHECK(det_zero == Qh.has_value());
        if (Qh) {
            for (const auto &p : pts) {
                CHECK(Qh->operator()(Q5, p).is_zero());
            }
        }
    }
}

TEST_CASE("upper bound on clustered points of the graph")
{
    std::mt19937 rng(23);
    const long prec = 120;
    int conclusive = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned D = 1 + static_cast<unsigned>(trial % 2);
        const auto mu = monomial_count(D, 2);
        const long r = trial % 4;
        const auto centre = random_local(F2, rng, prec);
        std::vector<std::vector<local_num<tadic>>> fv, proj;
        for (std::uint64_t j = 0; j < mu; ++j) {
            const auto x = centre + local_num<tadic>::from_integer(F2, F2.pi_pow(r), prec) * random_local(F2, rng, prec);
            fv.push_back({x, lacunary_value(F2, x, 24)});
            proj.push_back({x});
        }
        const auto c = det_upper_check_local(F2, fv, proj, 0, 1, 1, D, prec);
        CHECK(c.holds);
        conclusive += c.conclusive ? 1 : 0;
    }
    CHECK(conclusive >= 35);
}

TEST_CASE("upper bound on the two-branch curve")
{
    std::mt19937 rng(29);
    const long prec = 80;
    for (int trial = 0; trial < 30; ++trial) {
        const unsigned D = 1 + static_cast<unsigned>(trial % 2);
        const auto mu = monomial_count(D, 2);
        std::vector<std::vector<local_num<tadic>>> fv, proj;
        for (std::uint64_t j = 0; j < mu; ++j) {
            const auto x = local_num<tadic>::from_integer(F3, F3.pi_pow(1), prec) * random_local(F3, rng, prec);
            const auto g = lacunary_value(F3, x, 24, 1) + local_num<tadic>::from_integer(F3, F3.one(), prec);
            const auto y = local_sqrt(F3, g, (j % 2 == 0) ? F3.one() : F3.from_si(-1));
            fv.push_back({x, y});
            proj.push_back({x});
        }
        const auto c = det_upper_check_local(F3, fv, proj, 0, 1, 2, D, prec);
        CHECK(c.holds);
    }
}

TEST_CASE("exact upper check on parabola points")
{
    std::vector<std::vector<rational>> fv, proj;
    for (long a = 0; a < 3; ++a) {
        const auto x = Q(1 + 25 * a);
        fv.push_back({x, x * x});
        proj.push_back({x});
    }
    const auto c = det_upper_check(Q5, fv, proj, 0, 1, 1, 1);
    CHECK(c.S == 3u);
    CHECK(c.holds);
    REQUIRE(c.val_det);
    CHECK(*c.val_det >= 6);
}

TEST_CASE("covering by hypersurfaces")
{
    enum_options eo;
    eo.workers = 1;
    for (long h = 1; h <= 3; ++h) {
        for (const auto &alg : {lacunary_graph(F2), parabola(F2)}) {
            const auto pts = points_on_set(alg, h, eo).points;
            cover_params cp;
            cp.workers = 1;
            const auto cov = cover_by_hypersurfaces(F2, pts, h, cp);
            CHECK(cov.branch == cover_branch::small_h);
            CHECK(cov.Dmax == 46u);
            std::vector<int> seen(pts.size(), 0);
            for (const auto &e : cov.entries) {
                CHECK(e.Q.degree <= cov.Dmax);
                CHECK(e.Q.degree >= 1u);
                for (auto i : e.members) {
                    ++seen[i];
                    CHECK(e.Q(F2, pts[i].f_values).is_zero());
                    CHECK(ball_of(pts[i], cov.depth, cp.ball_coords) == e.key);
                }
            }
            for (auto s : seen) {
                CHECK(s == 1);
            }
            cp.workers = 3;
            const auto par = cover_by_hypersurfaces(F2, pts, h, cp);
            REQUIRE(par.entries.size() == cov.entries.size());
            for (std::size_t i = 0; i < par.entries.size(); ++i) {
                CHECK(par.entries[i].Q.coeffs == cov.entries[i].Q.coeffs);
                CHECK(par.entries[i].members == cov.entries[i].members);
            }
        }
    }
    // Large heights switch to subdivision.
    const std::vector<mpq_class> delta(2, 0);
    presented_algebra<tadic> empty{F2, delta, {}, std::nullopt};
    const auto pts = points_on_set(empty, 1L, eo).points;
    cover_params cp;
    const auto cov = cover_by_hypersurfaces(F2, pts, 4L, cp);
    CHECK(cov.branch == cover_branch::large_h);
    CHECK(cov.depth == 1);
    CHECK(cov.Dmax == 46u);
}

TEST_CASE("polylogarithmic hypersurface")
{
    enum_options eo;
    eo.workers = 1;
    for (long h = 1; h <= 3; ++h) {
        const auto pts = points_on_set(parabola(F2), h, eo).points;
        cover_params cp;
        const auto r = polylog_hypersurface(F2, pts, h, cp);
        REQUIRE(r);
        CHECK(r->Q.degree <= r->bound);
        CHECK(r->C * h == r->bound);
        for (const auto &p : pts) {
            CHECK(r->Q(F2, p.f_values).is_zero());
        }
    }
}

TEST_CASE("algebraic flag")
{
    const auto one = F2.one();
    const auto t = [&](long k) { return ratfunc(F2.pi_pow(k)); };
    // y - x^2 on the parabola.
    const auto par = make_hyp({{{0, 1}, ratfunc(one)}, {{2, 0}, ratfunc(one)}});
    CHECK(algebraic_flag(par, parabola(F2), 30) == alg_verdict::contained);
    // x alone meets the parabola in finitely many points.
    const auto xh = make_hyp({{{1, 0}, ratfunc(one)}});
    CHECK(algebraic_flag(xh, parabola(F2), 30) == alg_verdict::finite_intersection);
    // Constant-coefficient curves meet the graph in finitely many points.
    const auto graph = lacunary_graph(F2);
    CHECK(algebraic_flag(make_hyp({{{0, 1}, ratfunc(one)}, {{0, 0}, ratfunc(one)}}), graph, 30) ==
          alg_verdict::finite_intersection);
    CHECK(algebraic_flag(make_hyp({{{0, 1}, ratfunc(one)}, {{1, 0}, ratfunc(one)}}), graph, 30) ==
          alg_verdict::finite_intersection);
    // A truncation of the series is detected once the precision passes 36.
    std::vector<std::pair<exponent, ratfunc>> trunc{{{0, 1}, ratfunc(one)}};
    for (unsigned k = 0; k <= 5; ++k) {
        trunc.push_back({{k, 0}, t(static_cast<long>(k * k))});
    }
    CHECK(algebraic_flag(make_hyp(trunc), graph, 30) == alg_verdict::contained);
    CHECK(algebraic_flag(make_hyp(trunc), graph, 40) == alg_verdict::finite_intersection);
}
