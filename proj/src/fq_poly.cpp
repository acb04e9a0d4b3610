#include <rigidpts/fq_poly.hpp>

#include <algorithm>
#include <stdexcept>

namespace rigidpts
{

fq_poly::fq_poly(const finite_field &F, std::vector<fq_t> coeffs) : m_F(&F), m_c(std::move(coeffs))
{
    for (auto &c : m_c) {
        c %= F.q();
    }
    trim();
}

fq_poly fq_poly::constant(const finite_field &F, fq_t c)
{
    return fq_poly(F, std::vector<fq_t>{c});
}

fq_poly fq_poly::monomial(const finite_field &F, fq_t c, unsigned k)
{
    std::vector<fq_t> v(k + 1, 0);
    v[k] = c;
    return fq_poly(F, std::move(v));
}

void fq_poly::trim()
{
    while (!m_c.empty() && m_c.back() == 0u) {
        m_c.pop_back();
    }
}

long fq_poly::ord() const
{
    if (m_c.empty()) {
        throw std::domain_error("order of the zero polynomial");
    }
    long k = 0;
    while (m_c[static_cast<std::size_t>(k)] == 0u) {
        ++k;
    }
    return k;
}

fq_poly fq_poly::operator-() const
{
    fq_poly r(*this);
    for (auto &c : r.m_c) {
        c = m_F->neg(c);
    }
    return r;
}

fq_poly &fq_poly::operator+=(const fq_poly &o)
{
    if (m_F == nullptr) {
        m_F = o.m_F;
    }
    if (o.m_c.size() > m_c.size()) {
        m_c.resize(o.m_c.size(), 0);
    }
    for (std::size_t i = 0; i < o.m_c.size(); ++i) {
        m_c[i] = m_F->add(m_c[i], o.m_c[i]);
    }
    trim();
    return *this;
}

fq_poly &fq_poly::operator-=(const fq_poly &o)
{
    if (m_F == nullptr) {
        m_F = o.m_F;
    }
    if (o.m_c.size() > m_c.size()) {
        m_c.resize(o.m_c.size(), 0);
    }
    for (std::size_t i = 0; i < o.m_c.size(); ++i) {
        m_c[i] = m_F->sub(m_c[i], o.m_c[i]);
    }
    trim();
    return *this;
}

fq_poly operator*(const fq_poly &a, const fq_poly &b)
{
    const finite_field *F = a.m_F != nullptr ? a.m_F : b.m_F;
    fq_poly r;
    r.m_F = F;
    if (a.m_c.empty() || b.m_c.empty()) {
        return r;
    }
    r.m_c.assign(a.m_c.size() + b.m_c.size() - 1, 0);
    if (F->is_prime()) {
        const std::uint64_t p = F->p();
        // Accumulate in 64 bits, reducing often enough to avoid overflow.
        std::vector<std::uint64_t> acc(r.m_c.size(), 0);
        const std::uint64_t limit = (~std::uint64_t(0)) / ((p - 1) * (p - 1) + 1) - 1;
        std::uint64_t pending = 0;
        for (std::size_t i = 0; i < a.m_c.size(); ++i) {
            const auto ai = a.m_c[i];
            if (ai == 0u) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_c.size(); ++j) {
                acc[i + j] += std::uint64_t(ai) * b.m_c[j];
            }
            if (++pending >= limit) {
                for (auto &x : acc) {
                    x %= p;
                }
                pending = 0;
            }
        }
        for (std::size_t k = 0; k < acc.size(); ++k) {
            r.m_c[k] = static_cast<fq_t>(acc[k] % p);
        }
    } else {
        for (std::size_t i = 0; i < a.m_c.size(); ++i) {
            if (a.m_c[i] == 0u) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_c.size(); ++j) {
                r.m_c[i + j] = F->add(r.m_c[i + j], F->mul(a.m_c[i], b.m_c[j]));
            }
        }
    }
    r.trim();
    return r;
}

fq_poly &fq_poly::operator*=(const fq_poly &o)
{
    *this = *this * o;
    return *this;
}

fq_poly fq_poly::scale(fq_t c) const
{
    fq_poly r(*this);
    for (auto &x : r.m_c) {
        x = m_F->mul(x, c);
    }
    r.trim();
    return r;
}

fq_poly fq_poly::shift_up(unsigned k) const
{
    fq_poly r(*this);
    if (!r.m_c.empty()) {
        r.m_c.insert(r.m_c.begin(), k, 0u);
    }
    return r;
}

fq_poly fq_poly::shift_down(unsigned k) const
{
    fq_poly r;
    r.m_F = m_F;
    if (k < m_c.size()) {
        r.m_c.assign(m_c.begin() + k, m_c.end());
    }
    return r;
}

fq_poly fq_poly::truncate(unsigned k) const
{
    fq_poly r(*this);
    if (r.m_c.size() > k) {
        r.m_c.resize(k);
        r.trim();
    }
    return r;
}

fq_t fq_poly::eval(fq_t x) const
{
    fq_t r = 0;
    for (std::size_t i = m_c.size(); i-- > 0;) {
        r = m_F->add(m_F->mul(r, x), m_c[i]);
    }
    return r;
}

void fq_poly::divmod(const fq_poly &a, const fq_poly &b, fq_poly &q, fq_poly &r)
{
    if (b.is_zero()) {
        throw std::domain_error("polynomial division by zero");
    }
    const finite_field &F = b.field();
    r = a;
    r.m_F = &F;
    q = fq_poly(F);
    if (a.degree() < b.degree()) {
        return;
    }
    const auto db = static_cast<std::size_t>(b.degree());
    const auto inv_lead = F.inv(b.leading());
    q.m_c.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, 0);
    for (std::size_t k = r.m_c.size(); k-- > db;) {
        const auto c = r.m_c[k];
        if (c == 0u) {
            continue;
        }
        const auto f = F.mul(c, inv_lead);
        q.m_c[k - db] = f;
        for (std::size_t j = 0; j <= db; ++j) {
            r.m_c[k - db + j] = F.sub(r.m_c[k - db + j], F.mul(f, b.m_c[j]));
        }
    }
    r.trim();
    q.trim();
}

fq_poly fq_poly::monic() const
{
    if (m_c.empty()) {
        return *this;
    }
    return scale(m_F->inv(leading()));
}

bool operator<(const fq_poly &a, const fq_poly &b)
{
    if (a.m_c.size() != b.m_c.size()) {
        return a.m_c.size() < b.m_c.size();
    }
    for (std::size_t i = a.m_c.size(); i-- > 0;) {
        if (a.m_c[i] != b.m_c[i]) {
            return a.m_c[i] < b.m_c[i];
        }
    }
    return false;
}

std::string fq_poly::to_string() const
{
    if (m_c.empty()) {
        return "0";
    }
    std::string s;
    for (std::size_t i = m_c.size(); i-- > 0;) {
        const auto c = m_c[i];
        if (c == 0u) {
            continue;
        }
        if (!s.empty()) {
            s += "+";
        }
        if (i == 0u) {
            s += std::to_string(c);
            continue;
        }
        if (c != 1u) {
            s += std::to_string(c) + "*";
        }
        s += "t";
        if (i > 1u) {
            s += "^" + std::to_string(i);
        }
    }
    return s;
}

fq_poly gcd(fq_poly a, fq_poly b)
{
    while (!b.is_zero()) {
        fq_poly q, r;
        fq_poly::divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

} // namespace rigidpts
