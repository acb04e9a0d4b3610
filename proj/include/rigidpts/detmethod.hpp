#ifndef RIGIDPTS_DETMETHOD_HPP
#define RIGIDPTS_DETMETHOD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include <rigidpts/enumeration.hpp>
#include <rigidpts/linalg.hpp>

namespace rigidpts
{

// All nu in N^m with |nu| <= D, by degree then reversed lex.
std::vector<exponent> monomials(unsigned D, std::size_t m);

mpz_class binomial(unsigned long n, unsigned long k);

// Number of monomials of degree <= D in m variables.
std::uint64_t monomial_count(unsigned D, std::size_t m);

// Minimal sum of degrees of mu monomials in d variables, each used at most E times.
std::uint64_t exact_exponent(std::uint64_t mu, std::size_t d, std::uint32_t E);

// Smallest k with base^k >= x (x >= 1).
unsigned long ceil_log(const mpz_class &x, std::uint32_t base);

// Valuation bound V_low for a nonzero interpolation determinant at height H.
mpz_class det_lower_bound_padic(const mpz_class &H, unsigned D, std::uint64_t mu, std::size_t d, unsigned sigma,
                                std::uint32_t p);
mpz_class det_lower_bound_tadic(long h, unsigned D, std::uint64_t mu, std::size_t d);

enum class base_kind { padic, tadic };

// Minimal D with S(mu(D), d, E) * eps * h > V_low(h, D) for every h >= 1.
unsigned choose_degree(std::size_t d, const mpq_class &eps, std::uint32_t E, unsigned sigma, base_kind kind,
                       std::uint32_t q, unsigned ceiling = 4096);

enum class cover_branch { large_h, small_h };

// Subdivision depth m = ceil(h eps / (2d)) with h = log_q H, computed exactly.
long subdivision_depth(const mpz_class &H, const mpq_class &eps, std::size_t d, std::uint32_t q);

// Minimal D with S(mu(D), d, E) * delta > V_low(h, D) at the given height.
unsigned polylog_degree(const mpz_class &H, std::size_t d, std::uint32_t E, unsigned sigma, base_kind kind,
                        std::uint32_t q, const mpq_class &delta, unsigned ceiling = 4096);

template <typename Fl>
constexpr base_kind kind_of()
{
    return Fl::kind == field_kind::padic ? base_kind::padic : base_kind::tadic;
}

inline mpz_class height_bound(const padic &, const mpz_class &H)
{
    return H;
}
inline mpz_class height_bound(const tadic &fl, long h)
{
    mpz_class H;
    mpz_ui_pow_ui(H.get_mpz_t(), fl.q(), static_cast<unsigned long>(h));
    return H;
}

template <typename Fl>
mpz_class det_lower_bound(const Fl &fl, const typename Fl::height_t &H, unsigned D, std::uint64_t mu, std::size_t d,
                          unsigned sigma = 1)
{
    if constexpr (Fl::kind == field_kind::padic) {
        return det_lower_bound_padic(H, D, mu, d, sigma, fl.p());
    } else {
        (void)fl;
        (void)sigma;
        return det_lower_bound_tadic(H, D, mu, d);
    }
}

// Exact valuation of a global value; none for zero.
template <typename Fl>
std::optional<long> global_val(const Fl &fl, const typename Fl::global &v)
{
    if (v.is_zero()) {
        return std::nullopt;
    }
    return fl.val(v.num()) - fl.val(v.den());
}

namespace detail
{

template <typename G>
G power(const G &x, std::uint32_t e, const G &one)
{
    G r = one;
    for (std::uint32_t k = 0; k < e; ++k) {
        r = r * x;
    }
    return r;
}

} // namespace detail

// Interpolation matrix: rows f^nu over the monomials, columns the points.
template <typename Fl>
std::vector<std::vector<typename Fl::global>> interp_matrix(const Fl &fl,
                                                            const std::vector<std::vector<typename Fl::global>> &fvals,
                                                            unsigned D)
{
    using global = typename Fl::global;
    const global one(fl.one());
    const std::size_t m = fvals.front().size();
    const auto monos = monomials(D, m);
    std::vector<std::vector<global>> M(monos.size(), std::vector<global>(fvals.size(), one));
    for (std::size_t j = 0; j < fvals.size(); ++j) {
        for (std::size_t i = 0; i < monos.size(); ++i) {
            global v = one;
            for (std::size_t k = 0; k < m; ++k) {
                v = v * detail::power(fvals[j][k], monos[i][k], one);
            }
            M[i][j] = v;
        }
    }
    return M;
}

// Exact interpolation determinant Delta^D at mu(D) points.
template <typename Fl>
typename Fl::global interp_det(const Fl &fl, const std::vector<std::vector<typename Fl::global>> &fvals, unsigned D)
{
    if (fvals.empty() || monomial_count(D, fvals.front().size()) != fvals.size()) {
        throw std::invalid_argument("interpolation determinant needs exactly mu(D) points");
    }
    return frac_det(interp_matrix(fl, fvals, D));
}

// Interpolation determinant from local values, by the division-free Berkowitz recursion.
template <typename Fl>
local_num<Fl> interp_det_local(const Fl &fl, const std::vector<std::vector<local_num<Fl>>> &fvals, unsigned D, long prec)
{
    const std::size_t m = fvals.front().size();
    const auto monos = monomials(D, m);
    if (monos.size() != fvals.size()) {
        throw std::invalid_argument("interpolation determinant needs exactly mu(D) points");
    }
    const auto one = local_num<Fl>::from_integer(fl, fl.one(), prec);
    const local_num<Fl> zero(fl, prec);
    std::vector<std::vector<local_num<Fl>>> M(monos.size(), std::vector<local_num<Fl>>(fvals.size(), one));
    for (std::size_t j = 0; j < fvals.size(); ++j) {
        for (std::size_t i = 0; i < monos.size(); ++i) {
            local_num<Fl> v = one;
            for (std::size_t k = 0; k < m; ++k) {
                if (monos[i][k] != 0u) {
                    v = v * fvals[j][k].pow(monos[i][k]);
                }
            }
            M[i][j] = v;
        }
    }
    return berkowitz_det(M, zero, one);
}

// Valuation of rho: delta plus the least valuation of a coordinate difference; none if all projections agree.
template <typename Fl>
std::optional<mpq_class> rho_val(const Fl &fl, const std::vector<std::vector<typename Fl::global>> &proj,
                                 const mpq_class &delta)
{
    std::optional<long> best;
    for (std::size_t a = 0; a < proj.size(); ++a) {
        for (std::size_t b = a + 1; b < proj.size(); ++b) {
            for (std::size_t i = 0; i < proj[a].size(); ++i) {
                const auto v = global_val(fl, proj[a][i] - proj[b][i]);
                if (v && (!best || *v < *best)) {
                    best = v;
                }
            }
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return delta + *best;
}

template <typename Fl>
std::optional<mpq_class> rho_val_local(const std::vector<std::vector<local_num<Fl>>> &proj, const mpq_class &delta)
{
    std::optional<long> best;
    for (std::size_t a = 0; a < proj.size(); ++a) {
        for (std::size_t b = a + 1; b < proj.size(); ++b) {
            for (std::size_t i = 0; i < proj[a].size(); ++i) {
                const auto diff = proj[a][i] - proj[b][i];
                const long v = diff.is_zero() ? diff.prec() : diff.val();
                if (!best || v < *best) {
                    best = v;
                }
            }
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return delta + *best;
}

struct upper_check {
    bool holds = true;
    // False when Delta vanishes only to a precision below the bound.
    bool conclusive = true;
    std::uint64_t S = 0;
    mpq_class bound = 0;
    std::optional<mpq_class> val_det;
};

// val(Delta^D) >= S(mu, d, E) val(rho) with exact arithmetic.
template <typename Fl>
upper_check det_upper_check(const Fl &fl, const std::vector<std::vector<typename Fl::global>> &fvals,
                            const std::vector<std::vector<typename Fl::global>> &proj, const mpq_class &delta,
                            std::size_t d, std::uint32_t E, unsigned D)
{
    upper_check r;
    r.S = exact_exponent(fvals.size(), d, E);
    const auto det = interp_det(fl, fvals, D);
    if (const auto v = global_val(fl, det)) {
        r.val_det = mpq_class(*v);
    }
    if (r.S == 0u || !r.val_det) {
        return r;
    }
    const auto rho = rho_val(fl, proj, delta);
    if (!rho) {
        r.holds = false;
        return r;
    }
    r.bound = *rho * r.S;
    r.holds = *r.val_det >= r.bound;
    return r;
}

template <typename Fl>
upper_check det_upper_check_local(const Fl &fl, const std::vector<std::vector<local_num<Fl>>> &fvals,
                                  const std::vector<std::vector<local_num<Fl>>> &proj, const mpq_class &delta,
                                  std::size_t d, std::uint32_t E, unsigned D, long prec)
{
    upper_check r;
    r.S = exact_exponent(fvals.size(), d, E);
    const auto det = interp_det_local(fl, fvals, D, prec);
    if (!det.is_zero()) {
        r.val_det = mpq_class(det.val());
    }
    if (r.S == 0u) {
        return r;
    }
    const auto rho = rho_val_local<Fl>(proj, delta);
    if (!rho) {
        r.conclusive = false;
        return r;
    }
    r.bound = *rho * r.S;
    if (!r.val_det) {
        r.conclusive = mpq_class(det.prec()) >= r.bound;
        return r;
    }
    r.holds = *r.val_det >= r.bound;
    return r;
}

// Polynomial Q in the distinguished functions f_I.
template <typename Fl>
struct hypersurface {
    using global = typename Fl::global;
    unsigned degree = 0;
    std::vector<std::size_t> vars;
    std::vector<exponent> monos;
    std::vector<global> coeffs;

    global operator()(const Fl &fl, const std::vector<global> &f) const
    {
        const global one(fl.one());
        global acc(fl.zero());
        for (std::size_t i = 0; i < monos.size(); ++i) {
            if (coeffs[i].is_zero()) {
                continue;
            }
            global v = coeffs[i];
            for (std::size_t k = 0; k < vars.size(); ++k) {
                v = v * detail::power(f[vars[k]], monos[i][k], one);
            }
            acc = acc + v;
        }
        return acc;
    }
    // Actual degree of the nonzero terms.
    unsigned true_degree() const
    {
        unsigned d = 0;
        for (std::size_t i = 0; i < monos.size(); ++i) {
            if (!coeffs[i].is_zero()) {
                d = std::max<unsigned>(d, static_cast<unsigned>(total_degree(monos[i])));
            }
        }
        return d;
    }
};

// Nonzero Q of degree <= D in f_I vanishing at every point; none iff the evaluation matrix has full column rank.
template <typename Fl>
std::optional<hypersurface<Fl>> find_hypersurface(const Fl &fl, const std::vector<std::vector<typename Fl::global>> &fvals,
                                                  unsigned D, const std::vector<std::size_t> &I)
{
    using global = typename Fl::global;
    const auto monos = monomials(D, I.size());
    const global one(fl.one());
    std::vector<std::vector<global>> M;
    M.reserve(fvals.size());
    for (const auto &f : fvals) {
        std::vector<global> row(monos.size(), one);
        for (std::size_t i = 0; i < monos.size(); ++i) {
            for (std::size_t k = 0; k < I.size(); ++k) {
                row[i] = row[i] * detail::power(f[I[k]], monos[i][k], one);
            }
        }
        M.push_back(std::move(row));
    }
    const auto v = kernel_vector(M, monos.size(), fl.one());
    if (!v) {
        return std::nullopt;
    }
    hypersurface<Fl> Q;
    Q.degree = D;
    Q.vars = I;
    Q.monos = monos;
    for (const auto &c : *v) {
        Q.coeffs.push_back(fl.make_global(c));
    }
    return Q;
}

// Lowest-degree hypersurface up to Dmax through all points.
template <typename Fl>
std::optional<hypersurface<Fl>> find_min_hypersurface(const Fl &fl,
                                                      const std::vector<std::vector<typename Fl::global>> &fvals,
                                                      unsigned Dmax, const std::vector<std::size_t> &I)
{
    for (unsigned D = 1; D <= Dmax; ++D) {
        if (auto Q = find_hypersurface(fl, fvals, D, I)) {
            Q->degree = Q->true_degree();
            return Q;
        }
    }
    return std::nullopt;
}

struct cover_params {
    std::size_t d = 1;
    // Coordinates defining the balls (the retained ones) and the d+1 distinguished functions.
    std::vector<std::size_t> ball_coords{0};
    std::vector<std::size_t> fvars{0, 1};
    mpq_class eps{1, 2};
    std::uint32_t E = 1;
    unsigned sigma = 1;
    // Radius of the retained coordinates; 0 means the unit polydisc covered by t-radius pieces.
    mpq_class delta = 0;
    int workers = 0;
};

template <typename Fl>
struct cover_entry {
    ball_key<Fl> key;
    hypersurface<Fl> Q;
    std::vector<std::size_t> members;
};

template <typename Fl>
struct covering {
    cover_branch branch = cover_branch::large_h;
    long depth = 0;
    unsigned Dmax = 0;
    std::vector<cover_entry<Fl>> entries;
    unsigned max_degree() const
    {
        unsigned m = 0;
        for (const auto &e : entries) {
            m = std::max(m, e.Q.degree);
        }
        return m;
    }
};

namespace detail
{

template <typename Fl>
struct ball_task {
    ball_key<Fl> key;
    std::vector<std::size_t> members;
};

template <typename Fl>
cover_entry<Fl> extract_ball(const Fl &fl, const std::vector<point_record<Fl>> &points, const ball_task<Fl> &t,
                             unsigned Dmax, const std::vector<std::size_t> &I)
{
    std::vector<std::vector<typename Fl::global>> fv;
    for (auto i : t.members) {
        fv.push_back(points[i].f_values);
    }
    auto Q = find_min_hypersurface(fl, fv, Dmax, I);
    if (!Q) {
        throw invariant_violation("no hypersurface of degree <= " + std::to_string(Dmax) + " through ball " +
                                  t.key.to_string());
    }
    return {t.key, std::move(*Q), t.members};
}

} // namespace detail

template <typename Fl>
std::vector<cover_entry<Fl>> extract_serial(const Fl &fl, const std::vector<point_record<Fl>> &points,
                                            const std::vector<detail::ball_task<Fl>> &tasks, unsigned Dmax,
                                            const std::vector<std::size_t> &I)
{
    std::vector<cover_entry<Fl>> out;
    for (const auto &t : tasks) {
        out.push_back(detail::extract_ball(fl, points, t, Dmax, I));
    }
    return out;
}

// OpenMP twin of extract_serial; output in task order.
template <typename Fl>
std::vector<cover_entry<Fl>> extract_parallel(const Fl &fl, const std::vector<point_record<Fl>> &points,
                                              const std::vector<detail::ball_task<Fl>> &tasks, unsigned Dmax,
                                              const std::vector<std::size_t> &I, int workers)
{
    std::vector<std::optional<cover_entry<Fl>>> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(tasks.size()); ++i) {
        try {
            slots[static_cast<std::size_t>(i)] =
                detail::extract_ball(fl, points, tasks[static_cast<std::size_t>(i)], Dmax, I);
        } catch (const std::exception &e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    std::vector<cover_entry<Fl>> out;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) {
            throw invariant_violation(errors[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

// Hypersurfaces covering the points, one per occupied residue ball.
template <typename Fl>
covering<Fl> cover_by_hypersurfaces(const Fl &fl, const std::vector<point_record<Fl>> &points,
                                    const typename Fl::height_t &H, const cover_params &cp)
{
    covering<Fl> cov;
    const mpz_class Hn = height_bound(fl, H);
    const mpq_class eps_ball = cp.eps / static_cast<unsigned long>(2 * cp.d);
    const long m = subdivision_depth(Hn, cp.eps, cp.d, fl.q());
    // Large-h when h eps / (2d) >= 1.
    const bool large = m >= 1 && [&] {
        mpz_class lhs, rhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), fl.q(), 2 * cp.d * cp.eps.get_den().get_ui());
        mpz_pow_ui(rhs.get_mpz_t(), Hn.get_mpz_t(), cp.eps.get_num().get_ui());
        return lhs <= rhs;
    }();
    const auto kind = kind_of<Fl>();
    if (large) {
        cov.branch = cover_branch::large_h;
        cov.depth = m;
        cov.Dmax = choose_degree(cp.d, eps_ball, cp.E, cp.sigma, kind, fl.q());
    } else if (sgn(cp.delta) > 0) {
        cov.branch = cover_branch::small_h;
        cov.depth = 0;
        cov.Dmax = choose_degree(cp.d, cp.delta * eps_ball, cp.E, cp.sigma, kind, fl.q());
    } else {
        // Unit polydisc: each t-radius piece has radius parameter 1.
        cov.branch = cover_branch::small_h;
        cov.depth = 1;
        cov.Dmax = choose_degree(cp.d, eps_ball, cp.E, cp.sigma, kind, fl.q());
    }
    std::vector<detail::ball_task<Fl>> tasks;
    if (cov.depth == 0) {
        detail::ball_task<Fl> t;
        t.key.depth = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            t.members.push_back(i);
        }
        if (!points.empty()) {
            tasks.push_back(std::move(t));
        }
    } else {
        std::map<ball_key<Fl>, std::vector<std::size_t>> parts;
        for (std::size_t i = 0; i < points.size(); ++i) {
            parts[ball_of(points[i], cov.depth, cp.ball_coords)].push_back(i);
        }
        for (auto &[k, v] : parts) {
            tasks.push_back({k, std::move(v)});
        }
    }
    cov.entries = cp.workers == 1 ? extract_serial(fl, points, tasks, cov.Dmax, cp.fvars)
                                  : extract_parallel(fl, points, tasks, cov.Dmax, cp.fvars, cp.workers);
    return cov;
}

// A single hypersurface through all points with degree <= the polylogarithmic bound.
template <typename Fl>
struct polylog_result {
    hypersurface<Fl> Q;
    unsigned bound = 0;
    // Degree bound per unit of h^d.
    mpq_class C = 0;
};

template <typename Fl>
std::optional<polylog_result<Fl>> polylog_hypersurface(const Fl &fl, const std::vector<point_record<Fl>> &points,
                                                       const typename Fl::height_t &H, const cover_params &cp)
{
    polylog_result<Fl> r;
    const mpz_class Hn = height_bound(fl, H);
    const mpq_class delta = sgn(cp.delta) > 0 ? cp.delta : mpq_class(1);
    unsigned per_piece = polylog_degree(Hn, cp.d, cp.E, cp.sigma, kind_of<Fl>(), fl.q(), delta);
    unsigned pieces = 1;
    if (sgn(cp.delta) == 0) {
        // A product over the occupied t-radius pieces has degree at most pieces * bound.
        std::map<ball_key<Fl>, int> occ;
        for (const auto &p : points) {
            occ[ball_of(p, 1, cp.ball_coords)] = 1;
        }
        pieces = std::max<unsigned>(1u, static_cast<unsigned>(occ.size()));
    }
    r.bound = per_piece * pieces;
    long hl = 1;
    if constexpr (Fl::kind == field_kind::tadic) {
        hl = std::max(1L, H);
    } else {
        hl = std::max(1L, static_cast<long>(ceil_log(Hn, fl.q())));
    }
    mpz_class hd = 1;
    for (std::size_t i = 0; i < cp.d; ++i) {
        hd *= hl;
    }
    r.C = mpq_class(r.bound, hd);
    r.C.canonicalize();
    std::vector<std::vector<typename Fl::global>> fv;
    for (const auto &p : points) {
        fv.push_back(p.f_values);
    }
    if (fv.empty()) {
        return std::nullopt;
    }
    auto Q = find_min_hypersurface(fl, fv, r.bound, cp.fvars);
    if (!Q) {
        throw invariant_violation("no hypersurface within the polylogarithmic degree bound");
    }
    r.Q = std::move(*Q);
    return r;
}

enum class alg_verdict { contained, finite_intersection };

// Q(f) reduced in the presented algebra to precision P; contained when the reduction vanishes.
template <typename Fl>
alg_verdict algebraic_flag(const hypersurface<Fl> &Q, const presented_algebra<Fl> &alg, long P)
{
    using integer = typename Fl::integer;
    const Fl &fl = alg.fl;
    const std::size_t n = alg.nvars();
    // Clear denominators, then raise by t^c so the integrality condition holds for the radii.
    integer l = fl.one();
    for (const auto &c : Q.coeffs) {
        l = ring_lcm(l, c.den());
    }
    mpq_class maxd = 0;
    for (const auto &nu : Q.monos) {
        mpq_class s = 0;
        for (std::size_t k = 0; k < Q.vars.size(); ++k) {
            s += alg.delta[Q.vars[k]] * nu[k];
        }
        maxd = std::max(maxd, s);
    }
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), maxd.get_num_mpz_t(), maxd.get_den_mpz_t());
    power_series<Fl> F(fl, alg.delta);
    for (std::size_t i = 0; i < Q.monos.size(); ++i) {
        if (Q.coeffs[i].is_zero()) {
            continue;
        }
        exponent e(n, 0);
        for (std::size_t k = 0; k < Q.vars.size(); ++k) {
            e[Q.vars[k]] += Q.monos[i][k];
        }
        F.add_term(e, fl.mul_pi(Q.coeffs[i].num() * ring::divexact(l, Q.coeffs[i].den()), c.get_si()));
    }
    if (F.is_zero()) {
        return alg_verdict::contained;
    }
    presented_algebra<Fl> a = alg;
    if (!a.witness) {
        std::vector<mpq_class> half(n);
        for (std::size_t i = 0; i < n; ++i) {
            half[i] = alg.delta[i] / 2;
        }
        a = full_normalize(alg, half);
    }
    if (a.witness->E == 0u) {
        return alg_verdict::contained;
    }
    const auto dec = decompose(F, a, P);
    for (const auto &g : dec.coeffs) {
        auto t = g;
        t.set_prec(valuation(P));
        if (!t.is_zero()) {
            return alg_verdict::finite_intersection;
        }
    }
    return alg_verdict::contained;
}

} // namespace rigidpts

#endif
