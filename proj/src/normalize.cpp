#include <rigidpts/normalize.hpp>

namespace rigidpts
{

bool revlex_less(const exponent &nu, const exponent &mu)
{
    for (std::size_t k = nu.size(); k-- > 0;) {
        if (nu[k] != mu[k]) {
            return nu[k] < mu[k];
        }
    }
    return false;
}

namespace
{

mpz_class mpow(unsigned M, unsigned long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), M, e);
    return r;
}

// M^(M^(n-1-k)) for k = 0..n-1.
std::vector<mpz_class> eps_denominators(unsigned M, std::size_t n)
{
    std::vector<mpz_class> den(n);
    for (std::size_t k = 0; k < n; ++k) {
        const mpz_class e = mpow(M, static_cast<unsigned long>(n - 1 - k));
        den[k] = mpow(M, e.get_ui());
    }
    return den;
}

} // namespace

std::vector<mpq_class> famous_eps(unsigned M, std::size_t n)
{
    const auto den = eps_denominators(M, n);
    std::vector<mpq_class> eps(n);
    for (std::size_t k = 0; k < n; ++k) {
        eps[k] = mpq_class(mpz_class(1), den[k]);
    }
    return eps;
}

std::uint64_t famous_root_index(unsigned M, std::size_t n)
{
    const auto den = eps_denominators(M, n);
    return den.empty() || !den[0].fits_ulong_p() ? 0u : den[0].get_ui();
}

unsigned choose_M(const exponent &nu0, std::size_t n, std::uint32_t characteristic, const std::vector<mpq_class> &delta,
                  const std::vector<mpq_class> &delta2, unsigned ceiling)
{
    const std::uint64_t size = total_degree(nu0);
    for (unsigned M = 2; M <= ceiling; ++M) {
        if (characteristic != 0u && M % characteristic == 0u) {
            continue;
        }
        if (M <= size + 1) {
            continue;
        }
        if (mpow(M, M - 1) <= mpz_class(static_cast<unsigned long>(n * size))) {
            continue;
        }
        const auto eps = famous_eps(M, n);
        bool room = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(delta2[i] < delta[i] - eps[i])) {
                room = false;
            }
        }
        if (room) {
            return M;
        }
    }
    throw no_solution("no admissible M below the search ceiling");
}

} // namespace rigidpts
