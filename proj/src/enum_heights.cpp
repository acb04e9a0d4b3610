#include <rigidpts/heights.hpp>

#include <algorithm>
#include <tuple>

namespace rigidpts
{

std::vector<rational> enum_heights(const padic &fl, const mpz_class &H)
{
    std::vector<rational> out;
    const unsigned long p = fl.p();
    for (mpz_class k = 1; k <= H; ++k) {
        std::vector<rational> band;
        // b = k with |a| <= k, then |a| = k with b < k.
        if (mpz_fdiv_ui(k.get_mpz_t(), p) != 0u) {
            for (mpz_class a = -k; a <= k; ++a) {
                if (ring::gcd(a, k) == 1) {
                    band.emplace_back(a, k);
                }
            }
        }
        for (mpz_class b = 1; b < k; ++b) {
            if (mpz_fdiv_ui(b.get_mpz_t(), p) == 0u || ring::gcd(k, b) != 1) {
                continue;
            }
            band.emplace_back(-k, b);
            band.emplace_back(k, b);
        }
        std::sort(band.begin(), band.end(), [](const rational &x, const rational &y) {
            return std::tie(x.num(), x.den()) < std::tie(y.num(), y.den());
        });
        out.insert(out.end(), band.begin(), band.end());
    }
    return out;
}

std::vector<fq_poly> polys_up_to_degree(const finite_field &F, long d)
{
    std::vector<fq_poly> out;
    if (d < 0) {
        out.emplace_back(F);
        return out;
    }
    std::size_t count = 1;
    for (long i = 0; i <= d; ++i) {
        count *= F.q();
    }
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        std::vector<fq_t> c(static_cast<std::size_t>(d + 1));
        auto x = code;
        for (auto &ci : c) {
            ci = static_cast<fq_t>(x % F.q());
            x /= F.q();
        }
        out.emplace_back(F, std::move(c));
    }
    return out;
}

std::vector<ratfunc> enum_heights(const tadic &fl, long h)
{
    const auto &F = fl.ff();
    const auto polys = polys_up_to_degree(F, h);
    std::vector<std::tuple<long, fq_poly, fq_poly>> keyed;
    for (const auto &b : polys) {
        if (b.is_zero() || b.leading() != 1u || b.coeff(0) == 0u) {
            continue;
        }
        for (const auto &a : polys) {
            if (a.is_zero() ? !b.is_one() : !gcd(a, b).is_one()) {
                continue;
            }
            keyed.emplace_back(std::max({a.degree(), b.degree(), 0L}), a, b);
        }
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<ratfunc> out;
    out.reserve(keyed.size());
    for (auto &[m, a, b] : keyed) {
        out.emplace_back(a, b);
    }
    return out;
}

} // namespace rigidpts
