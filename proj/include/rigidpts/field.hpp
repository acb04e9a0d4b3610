#ifndef RIGIDPTS_FIELD_HPP
#define RIGIDPTS_FIELD_HPP

#include <cstdint>
#include <algorithm>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <rigidpts/errors.hpp>
#include <rigidpts/finite_field.hpp>
#include <rigidpts/fq_poly.hpp>
#include <rigidpts/frac.hpp>

namespace rigidpts
{

enum class field_kind { padic, tadic };

// Runtime description of the local field and its precision policy.
struct local_field_ctx {
    field_kind kind = field_kind::tadic;
    std::uint32_t p = 2;
    std::uint32_t q = 2;
    unsigned sigma = 1;
    unsigned ramification = 1;
    std::uint64_t root_index = 1;
    long work_prec = 16;
};

// Q_p with t identified with p. Integers are mpz_class, global values are rationals.
class padic
{
public:
    using integer = mpz_class;
    using global = rational;
    // Height bound as the natural number H.
    using height_t = mpz_class;
    static constexpr field_kind kind = field_kind::padic;

    padic() = default;
    explicit padic(std::uint32_t p) : m_p(p) {}

    std::uint32_t p() const { return m_p; }
    std::uint32_t q() const { return m_p; }
    // Characteristic of the valuation ring.
    std::uint32_t characteristic() const { return 0; }

    integer zero() const { return 0; }
    integer one() const { return 1; }
    integer from_si(long v) const { return v; }

    long val(const integer &a) const
    {
        if (sgn(a) == 0) {
            throw std::domain_error("valuation of zero");
        }
        return static_cast<long>(remove_count(a));
    }
    integer pi_pow(long k) const
    {
        integer r;
        mpz_ui_pow_ui(r.get_mpz_t(), m_p, static_cast<unsigned long>(k));
        return r;
    }
    integer mul_pi(const integer &a, long k) const { return a * pi_pow(k); }
    integer div_pi(const integer &a, long k) const
    {
        integer r;
        mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), pi_pow(k).get_mpz_t());
        return r;
    }
    integer mod_pi(const integer &a, long k) const
    {
        integer r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), pi_pow(k).get_mpz_t());
        return r;
    }
    integer inv_mod(const integer &u, long k) const
    {
        const integer m = pi_pow(k);
        integer r;
        if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0) {
            if (k == 0) {
                return 0;
            }
            throw std::domain_error("non-unit inversion");
        }
        return r;
    }
    std::uint32_t residue(const integer &a) const
    {
        return static_cast<std::uint32_t>(mpz_fdiv_ui(a.get_mpz_t(), m_p));
    }
    integer lift(std::uint32_t r) const { return r; }
    // Scalar from a base-p digit list of a residue-field element.
    integer scalar(const std::vector<std::uint32_t> &digits) const
    {
        integer r = 0;
        for (std::size_t i = digits.size(); i-- > 0;) {
            r = r * m_p + digits[i];
        }
        return r;
    }

    global make_global(const integer &a) const { return global(a); }
    height_t height(const global &v) const
    {
        mpz_class a = abs(v.num());
        return a > v.den() ? a : v.den();
    }
    bool height_le(const global &v, const height_t &H) const { return height(v) <= H; }
    std::string height_str(const height_t &H) const { return H.get_str(); }

    friend bool operator==(const padic &a, const padic &b) { return a.m_p == b.m_p; }

private:
    unsigned long remove_count(const integer &a) const
    {
        integer r;
        return mpz_remove(r.get_mpz_t(), a.get_mpz_t(), integer(m_p).get_mpz_t());
    }

    std::uint32_t m_p = 2;
};

// F_q((t)). Integers are F_q[t], global values are rational functions.
class tadic
{
public:
    using integer = fq_poly;
    using global = ratfunc;
    // Height bound as h = log_q H.
    using height_t = long;
    static constexpr field_kind kind = field_kind::tadic;

    tadic() = default;
    explicit tadic(std::uint32_t q) : m_F(&finite_field::get(q)) {}

    const finite_field &ff() const { return *m_F; }
    std::uint32_t p() const { return m_F->p(); }
    std::uint32_t q() const { return m_F->q(); }
    std::uint32_t characteristic() const { return m_F->p(); }

    integer zero() const { return fq_poly(*m_F); }
    integer one() const { return fq_poly::constant(*m_F, 1); }
    integer from_si(long v) const { return fq_poly::constant(*m_F, m_F->from_int(v)); }

    long val(const integer &a) const { return a.ord(); }
    integer pi_pow(long k) const { return fq_poly::monomial(*m_F, 1, static_cast<unsigned>(k)); }
    integer mul_pi(const integer &a, long k) const { return a.shift_up(static_cast<unsigned>(k)); }
    integer div_pi(const integer &a, long k) const { return a.shift_down(static_cast<unsigned>(k)); }
    integer mod_pi(const integer &a, long k) const { return a.truncate(static_cast<unsigned>(k < 0 ? 0 : k)); }
    integer inv_mod(const integer &u, long k) const
    {
        if (k <= 0) {
            return zero();
        }
        const auto u0 = u.coeff(0);
        if (u0 == 0u) {
            throw std::domain_error("non-unit inversion");
        }
        const auto inv0 = m_F->inv(u0);
        std::vector<fq_t> b(static_cast<std::size_t>(k), 0);
        b[0] = inv0;
        for (std::size_t n = 1; n < b.size(); ++n) {
            fq_t s = 0;
            const auto top = std::min<std::size_t>(n, static_cast<std::size_t>(u.degree() < 0 ? 0 : u.degree()));
            for (std::size_t i = 1; i <= top; ++i) {
                s = m_F->add(s, m_F->mul(u.coeff(i), b[n - i]));
            }
            b[n] = m_F->neg(m_F->mul(inv0, s));
        }
        return fq_poly(*m_F, std::move(b));
    }
    std::uint32_t residue(const integer &a) const { return a.coeff(0); }
    integer lift(std::uint32_t r) const { return fq_poly::constant(*m_F, r); }
    integer scalar(const std::vector<std::uint32_t> &digits) const
    {
        return fq_poly::constant(*m_F, m_F->from_digits(digits));
    }

    global make_global(const integer &a) const { return global(a); }
    height_t height(const global &v) const
    {
        return std::max(std::max(v.num().degree(), v.den().degree()), 0L);
    }
    bool height_le(const global &v, const height_t &h) const { return height(v) <= h; }
    std::string height_str(const height_t &h) const
    {
        mpz_class H;
        mpz_ui_pow_ui(H.get_mpz_t(), q(), static_cast<unsigned long>(h));
        return H.get_str();
    }

    friend bool operator==(const tadic &a, const tadic &b) { return a.m_F == b.m_F; }

private:
    const finite_field *m_F = nullptr;
};

// Heights as natural numbers.
inline mpz_class height_rat(const rational &v)
{
    return padic(2).height(v);
}

inline mpz_class height_ratfunc(const ratfunc &v, std::uint32_t q)
{
    mpz_class H;
    mpz_ui_pow_ui(H.get_mpz_t(), q, static_cast<unsigned long>(tadic(q).height(v)));
    return H;
}

} // namespace rigidpts

#endif
