#ifndef RIGIDPTS_FRAC_HPP
#define RIGIDPTS_FRAC_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

#include <rigidpts/fq_poly.hpp>

namespace rigidpts
{

// Uniform Euclidean-ring vocabulary over Z (mpz_class) and F_q[t] (fq_poly).
namespace ring
{

inline bool is_zero(const mpz_class &a)
{
    return sgn(a) == 0;
}
inline bool is_zero(const fq_poly &a)
{
    return a.is_zero();
}

inline mpz_class zero_like(const mpz_class &)
{
    return 0;
}
inline fq_poly zero_like(const fq_poly &a)
{
    return fq_poly(a.field());
}
inline mpz_class one_like(const mpz_class &)
{
    return 1;
}
inline fq_poly one_like(const fq_poly &a)
{
    return fq_poly::constant(a.field(), 1);
}

inline mpz_class gcd(const mpz_class &a, const mpz_class &b)
{
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}
inline fq_poly gcd(const fq_poly &a, const fq_poly &b)
{
    return rigidpts::gcd(a, b);
}

inline mpz_class divexact(const mpz_class &a, const mpz_class &b)
{
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}
inline fq_poly divexact(const fq_poly &a, const fq_poly &b)
{
    fq_poly q, r;
    fq_poly::divmod(a, b, q, r);
    if (!r.is_zero()) {
        throw std::logic_error("inexact polynomial division");
    }
    return q;
}

// Unit factor u with u*a canonical (positive, resp. monic); a must be nonzero.
inline mpz_class canonical_unit(const mpz_class &a)
{
    return sgn(a) < 0 ? -1 : 1;
}
inline fq_poly canonical_unit(const fq_poly &a)
{
    return fq_poly::constant(a.field(), a.field().inv(a.leading()));
}

inline std::string to_string(const mpz_class &a)
{
    return a.get_str();
}
inline std::string to_string(const fq_poly &a)
{
    return a.to_string();
}

} // namespace ring

// Reduced fraction over a Euclidean ring with canonical denominator.
template <typename R>
class frac
{
public:
    frac() = default;
    explicit frac(R num) : m_num(std::move(num)), m_den(ring::one_like(m_num)) {}
    frac(R num, R den) : m_num(std::move(num)), m_den(std::move(den))
    {
        reduce();
    }

    const R &num() const { return m_num; }
    const R &den() const { return m_den; }
    bool is_zero() const { return ring::is_zero(m_num); }

    frac operator-() const
    {
        frac r(*this);
        r.m_num = -r.m_num;
        return r;
    }
    friend frac operator+(const frac &a, const frac &b)
    {
        return frac(a.m_num * b.m_den + b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend frac operator-(const frac &a, const frac &b)
    {
        return frac(a.m_num * b.m_den - b.m_num * a.m_den, a.m_den * b.m_den);
    }
    friend frac operator*(const frac &a, const frac &b)
    {
        return frac(a.m_num * b.m_num, a.m_den * b.m_den);
    }
    friend frac operator/(const frac &a, const frac &b)
    {
        if (b.is_zero()) {
            throw std::domain_error("division by zero");
        }
        return frac(a.m_num * b.m_den, a.m_den * b.m_num);
    }
    frac &operator+=(const frac &o) { return *this = *this + o; }
    frac &operator-=(const frac &o) { return *this = *this - o; }
    frac &operator*=(const frac &o) { return *this = *this * o; }
    friend bool operator==(const frac &a, const frac &b) { return a.m_num == b.m_num && a.m_den == b.m_den; }
    friend bool operator!=(const frac &a, const frac &b) { return !(a == b); }

    std::string to_string() const
    {
        if (ring::is_zero(m_den - ring::one_like(m_den))) {
            return ring::to_string(m_num);
        }
        return ring::to_string(m_num) + "/" + ring::to_string(m_den);
    }

private:
    void reduce()
    {
        if (ring::is_zero(m_den)) {
            throw std::domain_error("zero denominator");
        }
        if (ring::is_zero(m_num)) {
            m_den = ring::one_like(m_den);
            return;
        }
        const R g = ring::gcd(m_num, m_den);
        m_num = ring::divexact(m_num, g);
        m_den = ring::divexact(m_den, g);
        const R u = ring::canonical_unit(m_den);
        m_num = m_num * u;
        m_den = m_den * u;
    }

    R m_num, m_den;
};

using rational = frac<mpz_class>;
using ratfunc = frac<fq_poly>;

} // namespace rigidpts

#endif
