#include <rigidpts/local.hpp>

namespace rigidpts
{

std::optional<rational> rational_reconstruct(const local_num<padic> &x, const mpz_class &H)
{
    const padic &fl = x.field();
    const long N = x.prec();
    if (!reconstruction_guard(fl, N, H)) {
        throw insufficient_precision("p^N must exceed 2H^2 for reconstruction");
    }
    const mpz_class m = fl.pi_pow(N);
    mpz_class r0 = m, r1 = x.rep(N), s0 = 0, s1 = 1;
    while (r1 > H) {
        mpz_class qt;
        mpz_fdiv_q(qt.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        mpz_class r2 = r0 - qt * r1;
        mpz_class s2 = s0 - qt * s1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    mpz_class a = r1, b = s1;
    if (sgn(b) < 0) {
        a = -a;
        b = -b;
    }
    if (sgn(b) == 0 || b > H || ring::gcd(a, b) != 1) {
        return std::nullopt;
    }
    return rational(a, b);
}

std::optional<ratfunc> rational_reconstruct(const local_num<tadic> &x, long h)
{
    const tadic &fl = x.field();
    const long N = x.prec();
    if (!reconstruction_guard(fl, N, h)) {
        throw insufficient_precision("N must exceed 2 log_q H for reconstruction");
    }
    fq_poly r0 = fl.pi_pow(N), r1 = x.rep(N), s0 = fl.zero(), s1 = fl.one();
    while (r1.degree() > h) {
        fq_poly qt, rem;
        fq_poly::divmod(r0, r1, qt, rem);
        fq_poly s2 = s0 - qt * s1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (s1.is_zero() || s1.degree() > h || s1.coeff(0) == 0u) {
        return std::nullopt;
    }
    if (!r1.is_zero() && !gcd(r1, s1).is_one()) {
        return std::nullopt;
    }
    return ratfunc(r1, s1);
}

} // namespace rigidpts
