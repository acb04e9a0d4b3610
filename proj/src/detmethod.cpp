#include <rigidpts/detmethod.hpp>

namespace rigidpts
{

std::vector<exponent> monomials(unsigned D, std::size_t m)
{
    std::vector<exponent> out;
    exponent e(m, 0);
    // Odometer over the box [0, D]^m, keeping |e| <= D.
    for (;;) {
        if (total_degree(e) <= D) {
            out.push_back(e);
        }
        std::size_t i = 0;
        while (i < m) {
            if (e[i] < D) {
                ++e[i];
                break;
            }
            e[i] = 0;
            ++i;
        }
        if (i == m) {
            break;
        }
    }
    std::sort(out.begin(), out.end(), [](const exponent &a, const exponent &b) {
        const auto da = total_degree(a), db = total_degree(b);
        return da != db ? da < db : revlex_less(a, b);
    });
    return out;
}

mpz_class binomial(unsigned long n, unsigned long k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::uint64_t monomial_count(unsigned D, std::size_t m)
{
    return binomial(D + m, m).get_ui();
}

std::uint64_t exact_exponent(std::uint64_t mu, std::size_t d, std::uint32_t E)
{
    std::uint64_t left = mu, sum = 0;
    for (std::uint64_t k = 0; left > 0; ++k) {
        const mpz_class avail = binomial(k + d - 1, d - 1) * E;
        const std::uint64_t take = avail.fits_ulong_p() && avail.get_ui() < left ? avail.get_ui() : left;
        sum += k * take;
        left -= take;
    }
    return sum;
}

unsigned long ceil_log(const mpz_class &x, std::uint32_t base)
{
    if (x <= 1) {
        return 0;
    }
    unsigned long k = mpz_sizeinbase(x.get_mpz_t(), base);
    k = k > 1 ? k - 1 : 0;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), base, k);
    while (k > 0) {
        mpz_class lower = pw / base;
        if (lower >= x) {
            pw = lower;
            --k;
        } else {
            break;
        }
    }
    while (pw < x) {
        pw *= base;
        ++k;
    }
    return k;
}

mpz_class det_lower_bound_padic(const mpz_class &H, unsigned D, std::uint64_t mu, std::size_t d, unsigned sigma,
                                std::uint32_t p)
{
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), mu);
    mpz_class HH;
    mpz_pow_ui(HH.get_mpz_t(), H.get_mpz_t(), static_cast<unsigned long>((d + 2) * D * mu));
    return mpz_class(sigma) * (mpz_class(ceil_log(fact, p)) + mpz_class(ceil_log(HH, p)));
}

mpz_class det_lower_bound_tadic(long h, unsigned D, std::uint64_t mu, std::size_t d)
{
    return mpz_class(static_cast<unsigned long>(d + 2)) * D * mpz_class(static_cast<unsigned long>(mu)) * h;
}

namespace
{

// S(mu(D), d, E) * eps compared against V_low at h = 1 and in the coefficient of h.
bool degree_ok(std::size_t d, unsigned D, const mpq_class &eps, std::uint32_t E, unsigned sigma, base_kind kind,
               std::uint32_t q)
{
    const auto mu = monomial_count(D, d + 1);
    const mpq_class lhs = mpq_class(mpz_class(static_cast<unsigned long>(exact_exponent(mu, d, E)))) * eps;
    const mpz_class slope = mpz_class(static_cast<unsigned long>(d + 2)) * D * mpz_class(static_cast<unsigned long>(mu));
    if (kind == base_kind::tadic) {
        return lhs > slope;
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), mu);
    return lhs > sigma * (mpz_class(ceil_log(fact, q)) + slope);
}

} // namespace

unsigned choose_degree(std::size_t d, const mpq_class &eps, std::uint32_t E, unsigned sigma, base_kind kind,
                       std::uint32_t q, unsigned ceiling)
{
    if (sgn(eps) <= 0) {
        throw std::invalid_argument("epsilon must be positive");
    }
    for (unsigned D = 1; D <= ceiling; ++D) {
        if (degree_ok(d, D, eps, E, sigma, kind, q)) {
            return D;
        }
    }
    throw no_solution("no admissible degree below the search ceiling");
}

long subdivision_depth(const mpz_class &H, const mpq_class &eps, std::size_t d, std::uint32_t q)
{
    mpz_class rhs;
    mpz_pow_ui(rhs.get_mpz_t(), H.get_mpz_t(), eps.get_num().get_ui());
    for (long m = 0;; ++m) {
        mpz_class lhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), q, static_cast<unsigned long>(2 * d * m) * eps.get_den().get_ui());
        if (lhs >= rhs) {
            return m;
        }
    }
}

unsigned polylog_degree(const mpz_class &H, std::size_t d, std::uint32_t E, unsigned sigma, base_kind kind,
                        std::uint32_t q, const mpq_class &delta, unsigned ceiling)
{
    for (unsigned D = 1; D <= ceiling; ++D) {
        const auto mu = monomial_count(D, d + 1);
        const mpq_class lhs = mpq_class(mpz_class(static_cast<unsigned long>(exact_exponent(mu, d, E)))) * delta;
        const mpz_class rhs = kind == base_kind::tadic
                                  ? det_lower_bound_tadic(static_cast<long>(ceil_log(H, q)), D, mu, d)
                                  : det_lower_bound_padic(H, D, mu, d, sigma, q);
        if (lhs > rhs) {
            return D;
        }
    }
    throw no_solution("no admissible degree below the search ceiling");
}

} // namespace rigidpts
