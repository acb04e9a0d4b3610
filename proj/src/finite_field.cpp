#include <rigidpts/finite_field.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace rigidpts
{

namespace
{

bool is_prime_u32(std::uint32_t n)
{
    if (n < 2u) {
        return false;
    }
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0u) {
            return false;
        }
    }
    return true;
}

// Multiply two digit vectors (length f) modulo the monic polynomial `mod` (length f + 1).
std::vector<std::uint32_t> slow_mul(const std::vector<std::uint32_t> &a, const std::vector<std::uint32_t> &b,
                                    const std::vector<std::uint32_t> &mod, std::uint32_t p)
{
    const auto f = a.size();
    std::vector<std::uint64_t> prod(2 * f, 0);
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            prod[i + j] = (prod[i + j] + std::uint64_t(a[i]) * b[j]) % p;
        }
    }
    for (std::size_t k = 2 * f - 1; k >= f; --k) {
        const auto c = prod[k];
        if (c != 0u) {
            for (std::size_t j = 0; j <= f; ++j) {
                prod[k - f + j] = (prod[k - f + j] + (p - c) * mod[j]) % p;
            }
        }
        if (k == f) {
            break;
        }
    }
    return std::vector<std::uint32_t>(prod.begin(), prod.begin() + static_cast<long>(f));
}

} // namespace

finite_field::finite_field(std::uint32_t q) : m_q(q), m_p(0), m_f(0)
{
    if (q < 2u || q > (1u << 16)) {
        throw std::invalid_argument("field size out of range: " + std::to_string(q));
    }
    for (std::uint32_t d = 2; d <= q; ++d) {
        if (q % d == 0u) {
            m_p = d;
            break;
        }
    }
    std::uint32_t r = q;
    while (r % m_p == 0u) {
        r /= m_p;
        ++m_f;
    }
    if (r != 1u || !is_prime_u32(m_p)) {
        throw std::invalid_argument("not a prime power: " + std::to_string(q));
    }
    if (m_f == 1u) {
        return;
    }
    // Search monic moduli of degree f in encoding order; accept the first with a primitive element.
    std::vector<std::uint32_t> mod(m_f + 1);
    for (std::uint32_t code = 0; code < q; ++code) {
        auto d = digits(code);
        for (std::uint32_t i = 0; i < m_f; ++i) {
            mod[i] = d[i];
        }
        mod[m_f] = 1;
        if (mod[0] == 0u) {
            continue;
        }
        for (std::uint32_t g = m_p; g < q; ++g) {
            std::vector<std::uint32_t> exp_tab(q - 1);
            auto cur = digits(1);
            const auto gd = digits(g);
            bool ok = true;
            for (std::uint32_t k = 0; k < q - 1; ++k) {
                const auto enc = from_digits(cur);
                if (k > 0 && enc == 1u) {
                    ok = false;
                    break;
                }
                exp_tab[k] = enc;
                cur = slow_mul(cur, gd, mod, m_p);
            }
            if (ok && from_digits(cur) == 1u) {
                m_exp = std::move(exp_tab);
                m_log.assign(q, 0);
                for (std::uint32_t k = 0; k < q - 1; ++k) {
                    m_log[m_exp[k]] = k;
                }
                return;
            }
        }
    }
    throw std::logic_error("no primitive element found");
}

const finite_field &finite_field::get(std::uint32_t q)
{
    static std::mutex mtx;
    static std::map<std::uint32_t, std::unique_ptr<finite_field>> registry;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = registry.find(q);
    if (it == registry.end()) {
        it = registry.emplace(q, std::unique_ptr<finite_field>(new finite_field(q))).first;
    }
    return *it->second;
}

std::vector<std::uint32_t> finite_field::digits(fq_t a) const
{
    std::vector<std::uint32_t> d(m_f);
    for (std::uint32_t i = 0; i < m_f; ++i) {
        d[i] = a % m_p;
        a /= m_p;
    }
    return d;
}

fq_t finite_field::from_digits(const std::vector<std::uint32_t> &d) const
{
    fq_t r = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
        r = r * m_p + d[i] % m_p;
    }
    return r;
}

fq_t finite_field::add(fq_t a, fq_t b) const
{
    if (m_f == 1u) {
        const auto s = a + b;
        return s >= m_p ? s - m_p : s;
    }
    if (m_p == 2u) {
        return a ^ b;
    }
    fq_t r = 0, scale = 1;
    while (a != 0u || b != 0u) {
        r += ((a % m_p + b % m_p) % m_p) * scale;
        a /= m_p;
        b /= m_p;
        scale *= m_p;
    }
    return r;
}

fq_t finite_field::neg(fq_t a) const
{
    if (m_f == 1u) {
        return a == 0u ? 0u : m_p - a;
    }
    if (m_p == 2u) {
        return a;
    }
    fq_t r = 0, scale = 1;
    while (a != 0u) {
        r += ((m_p - a % m_p) % m_p) * scale;
        a /= m_p;
        scale *= m_p;
    }
    return r;
}

fq_t finite_field::sub(fq_t a, fq_t b) const
{
    return add(a, neg(b));
}

fq_t finite_field::mul(fq_t a, fq_t b) const
{
    if (m_f == 1u) {
        return static_cast<fq_t>((std::uint64_t(a) * b) % m_p);
    }
    if (a == 0u || b == 0u) {
        return 0;
    }
    return m_exp[(m_log[a] + m_log[b]) % (m_q - 1)];
}

fq_t finite_field::inv(fq_t a) const
{
    if (a == 0u) {
        throw std::domain_error("inverse of zero in finite field");
    }
    if (m_f == 1u) {
        return pow(a, m_p - 2);
    }
    return m_exp[(m_q - 1 - m_log[a]) % (m_q - 1)];
}

fq_t finite_field::pow(fq_t a, std::uint64_t e) const
{
    fq_t r = 1;
    while (e != 0u) {
        if (e & 1u) {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

fq_t finite_field::from_int(long long n) const
{
    long long r = n % static_cast<long long>(m_p);
    if (r < 0) {
        r += m_p;
    }
    return static_cast<fq_t>(r);
}

} // namespace rigidpts
