#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include <rigidpts/normalize.hpp>

using namespace rigidpts;

namespace
{

const tadic F2(2);
const tadic F3(3);
const padic Q5(5);

template <typename Fl>
struct term {
    exponent e;
    typename Fl::integer c;
};

template <typename Fl>
power_series<Fl> make(const Fl &fl, std::vector<mpq_class> delta, const std::vector<term<Fl>> &terms)
{
    power_series<Fl> F(fl, std::move(delta));
    for (const auto &t : terms) {
        F.add_term(t.e, t.c);
    }
    return F;
}

bool revlex_oracle(const exponent &a, const exponent &b)
{
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

// Weierstrass degree in variable k from the Newton polygon over the Gauss valuation of the other variables:
// the right end of the horizontal segment at minimal height.
template <typename Fl>
std::uint32_t newton_L(const power_series<Fl> &F, std::size_t k)
{
    std::map<std::uint32_t, long long> height;
    for (const auto &[e, c] : F.terms()) {
        const auto v = F.normalized_val_units(e, c);
        auto it = height.find(e[k]);
        if (it == height.end() || v < it->second) {
            height[e[k]] = v;
        }
    }
    long long m = std::numeric_limits<long long>::max();
    for (const auto &[j, v] : height) {
        m = std::min(m, v);
    }
    std::uint32_t L = 0;
    for (const auto &[j, v] : height) {
        if (v == m) {
            L = j;
        }
    }
    return L;
}

// Independent check of the three choose_M conditions.
bool m_ok(unsigned M, const exponent &nu0, std::size_t n, unsigned ch, const std::vector<mpq_class> &delta,
          const std::vector<mpq_class> &delta2)
{
    unsigned s = 0;
    for (auto v : nu0) {
        s += v;
    }
    if (ch != 0 && M % ch == 0) {
        return false;
    }
    mpz_class pw = 1;
    for (unsigned i = 0; i + 1 < M; ++i) {
        pw *= M;
    }
    if (!(M > s + 1 && pw > n * s)) {
        return false;
    }
    for (std::size_t k = 0; k < n; ++k) {
        mpz_class e = 1;
        for (std::size_t i = k + 1; i < n; ++i) {
            e *= M;
        }
        mpz_class den = 1;
        for (unsigned long i = 0; i < e.get_ui(); ++i) {
            den *= M;
        }
        if (!(delta2[k] < delta[k] - mpq_class(mpz_class(1), den))) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("revlex_less")
{
    CHECK(revlex_less({2, 1}, {1, 2}));
    CHECK(!revlex_less({3, 3}, {3, 3}));
    CHECK(!revlex_less({0, 3}, {5, 2}));
    std::mt19937_64 rng(1);
    for (int it = 0; it < 5000; ++it) {
        const std::size_t n = 1 + rng() % 4;
        exponent a(n), b(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng() % 3;
            b[i] = rng() % 3;
            c[i] = rng() % 3;
        }
        REQUIRE(revlex_less(a, b) == revlex_oracle(a, b));
        REQUIRE(!(revlex_less(a, b) && revlex_less(b, a)));
        REQUIRE((a == b || revlex_less(a, b) || revlex_less(b, a)));
        if (revlex_less(a, b) && revlex_less(b, c)) {
            REQUIRE(revlex_less(a, c));
        }
    }
}

TEST_CASE("content")
{
    const std::vector<mpq_class> z{0, 0};
    const auto t = F2.pi_pow(1);
    const auto F = make<tadic>(F2, z, {{{1, 0}, F2.pi_pow(2)}, {{0, 2}, t}});
    const auto cd = content(F);
    CHECK(cd.min_val == valuation(1));
    CHECK(cd.mcd == exponent{0, 2});
    const auto G = make<tadic>(F2, z, {{{0, 0}, F2.one()}, {{3, 1}, t}});
    CHECK(content(G).min_val == valuation(0));
    CHECK(content(G).mcd == exponent{0, 0});
    CHECK_THROWS_AS(content(power_series<tadic>::zero(F2, 2)), zero_series);

    // Ties: every set of up to three exponents with valuations in {0, 1}.
    std::vector<exponent> pool;
    for (std::uint32_t a = 0; a < 3; ++a) {
        for (std::uint32_t b = 0; b < 3; ++b) {
            pool.push_back({a, b});
        }
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            for (std::size_t k = j + 1; k < pool.size(); ++k) {
                for (unsigned mask = 0; mask < 8; ++mask) {
                    const std::vector<std::size_t> idx{i, j, k};
                    std::vector<term<tadic>> ts;
                    std::vector<exponent> minimal;
                    for (unsigned b = 0; b < 3; ++b) {
                        const bool unit = ((mask >> b) & 1u) != 0u;
                        ts.push_back({pool[idx[b]], unit ? F2.one() : t});
                        if (unit) {
                            minimal.push_back(pool[idx[b]]);
                        }
                    }
                    if (minimal.empty()) {
                        for (unsigned b = 0; b < 3; ++b) {
                            minimal.push_back(pool[idx[b]]);
                        }
                    }
                    exponent best = minimal.front();
                    for (const auto &e : minimal) {
                        bool smallest = true;
                        for (const auto &o : minimal) {
                            if (revlex_oracle(o, e)) {
                                smallest = false;
                            }
                        }
                        if (smallest) {
                            best = e;
                        }
                    }
                    REQUIRE(content(make<tadic>(F2, z, ts)).mcd == best);
                }
            }
        }
    }
}

TEST_CASE("content_divide")
{
    const std::vector<mpq_class> z{0, 0};
    const auto G = make<padic>(Q5, z, {{{1, 0}, 1}, {{0, 1}, 10}, {{2, 2}, 3}});
    const auto F = G.shifted(2);
    CHECK(content_divide(F) == G);
    CHECK(content_divide(G) == G);
    CHECK(content_divide(F).shifted(2) == F);
}

TEST_CASE("choose_M")
{
    const std::vector<mpq_class> one{1, 1}, half{mpq_class(1, 2), mpq_class(1, 2)};
    const unsigned M = choose_M({1, 2}, 2, 2, one, half);
    unsigned oracle = 2;
    while (!m_ok(oracle, {1, 2}, 2, 2, one, half)) {
        ++oracle;
    }
    CHECK(M == oracle);
    CHECK(M == 5u);
    CHECK(choose_M({0}, 1, 0, {mpq_class(1)}, {mpq_class(1, 4)}) == 2u);
    const auto eps = famous_eps(3, 2);
    CHECK(eps[0] == mpq_class(1, 27));
    CHECK(eps[1] == mpq_class(1, 3));
    CHECK(famous_root_index(3, 2) == 27u);
    CHECK(famous_root_index(6, 3) == 0u);
}

TEST_CASE("eps-vector properties")
{
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::vector<mpq_class> delta(n, 1), delta2(n, mpq_class(1, 2));
        std::vector<exponent> all;
        exponent e(n, 0);
        // All exponents with |e| <= 6.
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
            if (i == n) {
                all.push_back(e);
                return;
            }
            for (unsigned v = 0; v <= left; ++v) {
                e[i] = v;
                rec(i + 1, left - v);
            }
            e[i] = 0;
        };
        rec(0, 6);
        for (const auto &nu0 : all) {
            for (unsigned ch : {0u, 2u, 3u}) {
                const unsigned M = choose_M(nu0, n, ch, delta, delta2);
                REQUIRE(m_ok(M, nu0, n, ch, delta, delta2));
                for (unsigned m = 2; m < M; ++m) {
                    REQUIRE(!m_ok(m, nu0, n, ch, delta, delta2));
                }
                const auto eps = famous_eps(M, n);
                mpz_class N = eps[0].get_den();
                for (const auto &mu : all) {
                    if (!revlex_less(nu0, mu)) {
                        continue;
                    }
                    mpq_class diff = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        diff += eps[i] * (mpq_class(mu[i]) - mpq_class(nu0[i]));
                    }
                    REQUIRE(diff > 0);
                    const mpq_class scaled = diff * N;
                    REQUIRE(scaled.get_den() == 1);
                }
            }
        }
    }
}

TEST_CASE("normalize_step examples")
{
    const std::vector<mpq_class> z{0, 0};
    const std::vector<mpq_class> d2{mpq_class(1, 2), mpq_class(1, 2)};
    // Graph relation y - g(x).
    auto graph = make<tadic>(F2, z, {{{0, 1}, F2.one()}});
    for (unsigned k = 0; k <= 4; ++k) {
        graph.add_term({k, 0}, F2.pi_pow(k * k));
    }
    graph.set_cutoff(4, valuation(25));
    const auto r1 = normalize_step(graph, d2);
    CHECK(r1.witness.L() == 1u);
    CHECK(r1.witness.E == 1u);
    CHECK(!r1.witness.famous);
    CHECK(r1.witness.steps.front().var == 1u);

    const auto r2 = normalize_step(make<padic>(Q5, z, {{{0, 2}, 1}, {{1, 0}, -5}}), d2);
    CHECK(r2.witness.L() == 2u);
    CHECK(r2.witness.E == 2u);

    CHECK(famous_exponent({1, 2}, 3) == 5u);

    // x y is monic in neither variable; Step 2 with M = 4 gives L = 4 + 1.
    const std::vector<mpq_class> one{1, 1};
    const auto F = make<padic>(Q5, one, {{{1, 1}, 25}, {{0, 0}, mpz_class(5) * 5 * 5 * 5 * 5}});
    const auto r3 = normalize_step(F, d2);
    CHECK(r3.witness.famous);
    CHECK(r3.witness.M == 4u);
    CHECK(r3.witness.L() == 5u);
    CHECK(r3.witness.N == 256u);
    CHECK(newton_L(r3.transformed, 1) == 5u);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(d2[i] < r3.witness.leaf_delta[i]);
        CHECK(r3.witness.leaf_delta[i] < one[i]);
    }
}

TEST_CASE("full_normalize")
{
    const std::vector<mpq_class> z{0, 0};
    const std::vector<mpq_class> d2{0, 0};
    presented_algebra<padic> empty{Q5, z, {}, std::nullopt};
    const auto e = full_normalize(empty, d2);
    REQUIRE(e.witness);
    CHECK(e.witness->d() == 2u);
    CHECK(e.witness->E == 1u);

    auto graph = make<padic>(Q5, z, {{{0, 1}, 1}, {{1, 0}, -5}, {{2, 0}, 25}});
    const auto g = full_normalize(presented_algebra<padic>{Q5, z, {graph}, std::nullopt}, d2);
    CHECK(g.witness->d() == 1u);
    CHECK(g.witness->E == 1u);

    const auto sq = make<padic>(Q5, z, {{{0, 2}, 1}, {{0, 0}, -1}, {{1, 0}, -5}});
    const auto s = full_normalize(presented_algebra<padic>{Q5, z, {sq}, std::nullopt}, d2);
    CHECK(s.witness->d() == 1u);
    CHECK(s.witness->E == 2u);

    // Triangular pair: y1^2 - x y2 and y2 - x^2 in variables (x, y1, y2).
    const std::vector<mpq_class> z3{0, 0, 0};
    const auto a = make<padic>(Q5, z3, {{{0, 2, 0}, 1}, {{1, 0, 1}, -1}});
    const auto b = make<padic>(Q5, z3, {{{0, 0, 1}, 1}, {{2, 0, 0}, -1}});
    const auto tri = full_normalize(presented_algebra<padic>{Q5, z3, {b, a}, std::nullopt}, std::vector<mpq_class>(3, 0));
    REQUIRE(tri.witness);
    CHECK(tri.witness->d() == 1u);
    CHECK(tri.witness->E == 2u);
    REQUIRE(tri.witness->steps.size() == 2u);
    CHECK(tri.witness->steps[0].var == 1u);
    CHECK(tri.witness->steps[1].var == 2u);
    // y1^2 reduces to x^3.
    const auto y1 = power_series<padic>::variable(Q5, z3, 1);
    const auto dec = module_decompose(y1 * y1, tri, 20);
    auto x3 = power_series<padic>::zero(Q5, 3);
    x3.add_term({3, 0, 0}, 1);
    CHECK(power_series<padic>::congruent(dec[0], x3));
    CHECK(dec[1].is_zero());

    // Not triangular: x y1 and y1 y2 cannot be separated variable by variable.
    const auto c1 = make<padic>(Q5, z3, {{{1, 1, 0}, 1}});
    const auto c2 = make<padic>(Q5, z3, {{{0, 1, 1}, 1}});
    CHECK_THROWS_AS(full_normalize(presented_algebra<padic>{Q5, z3, {c1, c2}, std::nullopt}, std::vector<mpq_class>(3, 0)),
                    unsupported_presentation);
}

TEST_CASE("witness soundness and rank consistency")
{
    const std::vector<mpq_class> z{0, 0};
    const std::vector<mpq_class> one{1, 1};
    const std::vector<mpq_class> d2{mpq_class(1, 2), mpq_class(1, 2)};
    const auto t = [](const tadic &f, unsigned k) { return f.pi_pow(k); };
    std::vector<power_series<tadic>> rels{
        make<tadic>(F2, z, {{{0, 2}, F2.one()}, {{1, 1}, F2.one()}, {{0, 0}, t(F2, 1)}}),
        make<tadic>(F3, z, {{{0, 3}, F3.one()}, {{1, 1}, t(F3, 2)}, {{2, 0}, t(F3, 1)}}),
        make<tadic>(F2, one, {{{2, 1}, t(F2, 3)}, {{1, 2}, t(F2, 3)}, {{0, 0}, t(F2, 7)}}),
        make<tadic>(F3, z, {{{2, 0}, F3.one()}, {{0, 1}, t(F3, 1)}}),
    };
    for (const auto &F : rels) {
        const auto r = normalize_step(F, d2);
        const auto &w = r.witness;
        const auto k = w.steps.front().var;
        // Re-derive the leaf relation from the original generator.
        const auto leaf = content_divide(to_leaf(F, w));
        const auto L = monic_degree(leaf, k);
        REQUIRE(L.has_value());
        CHECK(*L == w.L());
        CHECK(newton_L(leaf, k) == w.L());
        CHECK(w.E == w.L());
        // y^E reduces to a combination of 1, ..., y^(E-1) in leaf coordinates.
        const auto &rel = w.steps.front().relation;
        auto yE = power_series<tadic>::zero(F.field(), 2);
        exponent e(2, 0);
        e[k] = w.E;
        yE.add_term(e, F.field().one());
        const long P = 12;
        const auto dr = weierstrass_divide(yE, rel, k, w.E, P);
        CHECK(dr.remainder.degree_in(k) < w.E);
        auto recon = dr.quotient * rel + dr.remainder;
        recon.set_prec(valuation(P));
        yE.set_prec(valuation(P));
        CHECK(power_series<tadic>::congruent(recon, yE));
        if (!w.famous) {
            presented_algebra<tadic> alg{F.field(), F.delta(), {F}, w};
            CHECK(module_decompose(yE, alg, P).size() == w.E);
        }
    }
}
