#ifndef RIGIDPTS_FINITE_FIELD_HPP
#define RIGIDPTS_FINITE_FIELD_HPP

#include <cstdint>
#include <vector>

namespace rigidpts
{

using fq_t = std::uint32_t;

// GF(q), q = p^f. Elements are encoded as base-p digit vectors packed into an integer in [0, q).
// Prime fields use plain modular arithmetic, extension fields use log tables.
class finite_field
{
public:
    // Interned instance; throws std::invalid_argument unless q is a prime power <= 2^16.
    static const finite_field &get(std::uint32_t q);

    std::uint32_t q() const { return m_q; }
    std::uint32_t p() const { return m_p; }
    std::uint32_t degree() const { return m_f; }
    bool is_prime() const { return m_f == 1u; }

    fq_t add(fq_t a, fq_t b) const;
    fq_t sub(fq_t a, fq_t b) const;
    fq_t neg(fq_t a) const;
    fq_t mul(fq_t a, fq_t b) const;
    fq_t inv(fq_t a) const;
    fq_t div(fq_t a, fq_t b) const { return mul(a, inv(b)); }
    fq_t pow(fq_t a, std::uint64_t e) const;

    // Image of an integer in the prime subfield.
    fq_t from_int(long long n) const;
    std::vector<std::uint32_t> digits(fq_t a) const;
    fq_t from_digits(const std::vector<std::uint32_t> &d) const;

    finite_field(const finite_field &) = delete;
    finite_field &operator=(const finite_field &) = delete;

private:
    explicit finite_field(std::uint32_t q);

    std::uint32_t m_q, m_p, m_f;
    std::vector<std::uint32_t> m_log, m_exp;
};

} // namespace rigidpts

#endif
