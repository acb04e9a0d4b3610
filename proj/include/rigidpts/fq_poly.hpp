#ifndef RIGIDPTS_FQ_POLY_HPP
#define RIGIDPTS_FQ_POLY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <rigidpts/finite_field.hpp>

namespace rigidpts
{

// Dense univariate polynomial in t over GF(q). No trailing zero coefficients.
class fq_poly
{
public:
    fq_poly() = default;
    explicit fq_poly(const finite_field &F) : m_F(&F) {}
    fq_poly(const finite_field &F, std::vector<fq_t> coeffs);

    static fq_poly constant(const finite_field &F, fq_t c);
    static fq_poly monomial(const finite_field &F, fq_t c, unsigned k);

    const finite_field &field() const { return *m_F; }
    bool has_field() const { return m_F != nullptr; }
    const std::vector<fq_t> &coeffs() const { return m_c; }
    fq_t coeff(std::size_t k) const { return k < m_c.size() ? m_c[k] : 0u; }

    bool is_zero() const { return m_c.empty(); }
    bool is_one() const { return m_c.size() == 1u && m_c[0] == 1u; }
    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(m_c.size()) - 1; }
    fq_t leading() const { return m_c.empty() ? 0u : m_c.back(); }
    // t-adic order; requires nonzero.
    long ord() const;

    fq_poly operator-() const;
    fq_poly &operator+=(const fq_poly &);
    fq_poly &operator-=(const fq_poly &);
    fq_poly &operator*=(const fq_poly &);
    friend fq_poly operator+(fq_poly a, const fq_poly &b) { return a += b; }
    friend fq_poly operator-(fq_poly a, const fq_poly &b) { return a -= b; }
    friend fq_poly operator*(const fq_poly &a, const fq_poly &b);
    friend bool operator==(const fq_poly &a, const fq_poly &b) { return a.m_c == b.m_c; }
    friend bool operator!=(const fq_poly &a, const fq_poly &b) { return !(a == b); }

    fq_poly scale(fq_t c) const;
    // Multiply by t^k.
    fq_poly shift_up(unsigned k) const;
    // Exact division by t^k (drops the low coefficients).
    fq_poly shift_down(unsigned k) const;
    // Remainder modulo t^k.
    fq_poly truncate(unsigned k) const;
    fq_t eval(fq_t x) const;

    // Euclidean division; throws on zero divisor.
    static void divmod(const fq_poly &a, const fq_poly &b, fq_poly &q, fq_poly &r);
    fq_poly monic() const;

    // Ordering by degree, then coefficients from the top.
    friend bool operator<(const fq_poly &a, const fq_poly &b);

    std::string to_string() const;

private:
    void trim();

    const finite_field *m_F = nullptr;
    std::vector<fq_t> m_c;
};

fq_poly gcd(fq_poly a, fq_poly b);

} // namespace rigidpts

#endif
