#ifndef RIGIDPTS_LOCAL_HPP
#define RIGIDPTS_LOCAL_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <rigidpts/errors.hpp>
#include <rigidpts/field.hpp>
#include <rigidpts/valuation.hpp>

namespace rigidpts
{

// Element of F (Q_p or F_q((t))) known modulo pi^prec: either pi^v * u with u a unit
// stored modulo pi^(prec - v), or zero to precision prec.
template <typename Fl>
class local_num
{
public:
    using integer = typename Fl::integer;
    using global = typename Fl::global;

    local_num() = default;
    // Zero to precision prec.
    local_num(const Fl &fl, long prec) : m_fl(fl), m_zero(true), m_val(prec), m_prec(prec), m_unit(fl.zero()) {}

    static local_num from_integer(const Fl &fl, const integer &a, long prec)
    {
        local_num r(fl, prec);
        if (ring::is_zero(a)) {
            return r;
        }
        const long v = fl.val(a);
        if (v >= prec) {
            return r;
        }
        r.m_zero = false;
        r.m_val = v;
        r.m_unit = fl.mod_pi(fl.div_pi(a, v), prec - v);
        return r;
    }

    // Any nonzero global value, including negative valuation.
    static local_num from_global(const Fl &fl, const global &x, long prec)
    {
        if (x.is_zero()) {
            return local_num(fl, prec);
        }
        const long va = fl.val(x.num());
        const long vb = fl.val(x.den());
        const long v = va - vb;
        local_num r(fl, prec);
        if (v >= prec) {
            return r;
        }
        const long rel = prec - v;
        r.m_zero = false;
        r.m_val = v;
        const integer a = fl.div_pi(x.num(), va);
        const integer b = fl.div_pi(x.den(), vb);
        r.m_unit = fl.mod_pi(a * fl.inv_mod(b, rel), rel);
        return r;
    }

    const Fl &field() const { return m_fl; }
    long prec() const { return m_prec; }
    bool is_zero() const { return m_zero; }
    // Valuation, or prec for an element that is zero to precision.
    long val() const { return m_val; }
    valuation exact_val() const { return m_zero ? valuation::infinity() : valuation(m_val); }
    const integer &unit() const { return m_unit; }

    // Representative in V of the class modulo pi^k (requires val >= 0 and k <= prec).
    integer rep(long k) const
    {
        if (m_zero || m_val >= k) {
            return m_fl.zero();
        }
        if (m_val < 0) {
            throw negative_valuation("representative of an element of negative valuation");
        }
        return m_fl.mod_pi(m_fl.mul_pi(m_unit, m_val), k);
    }

    local_num with_prec(long prec) const
    {
        if (prec >= m_prec) {
            return *this;
        }
        if (m_zero || m_val >= prec) {
            return local_num(m_fl, prec);
        }
        local_num r(*this);
        r.m_prec = prec;
        r.m_unit = m_fl.mod_pi(m_unit, prec - m_val);
        return r;
    }

    local_num operator-() const
    {
        local_num r(*this);
        if (!m_zero) {
            r.m_unit = m_fl.mod_pi(-m_unit, m_prec - m_val);
        }
        return r;
    }

    friend local_num operator+(const local_num &a, const local_num &b)
    {
        const long prec = std::min(a.m_prec, b.m_prec);
        if (a.m_zero) {
            return b.with_prec(prec);
        }
        if (b.m_zero) {
            return a.with_prec(prec);
        }
        const Fl &fl = a.m_fl;
        const long v = std::min(a.m_val, b.m_val);
        if (v >= prec) {
            return local_num(fl, prec);
        }
        integer s = fl.mul_pi(a.m_unit, a.m_val - v) + fl.mul_pi(b.m_unit, b.m_val - v);
        s = fl.mod_pi(s, prec - v);
        if (ring::is_zero(s)) {
            return local_num(fl, prec);
        }
        const long w = fl.val(s);
        local_num r(fl, prec);
        r.m_zero = false;
        r.m_val = v + w;
        r.m_unit = fl.div_pi(s, w);
        return r;
    }
    friend local_num operator-(const local_num &a, const local_num &b) { return a + (-b); }

    friend local_num operator*(const local_num &a, const local_num &b)
    {
        const Fl &fl = a.m_fl;
        if (a.m_zero || b.m_zero) {
            // a = O(pi^pa) times b known to pb: result is O(pi^(pa + val b)) when b is nonzero.
            long prec;
            if (a.m_zero && b.m_zero) {
                prec = a.m_prec + b.m_prec;
            } else if (a.m_zero) {
                prec = a.m_prec + b.m_val;
            } else {
                prec = b.m_prec + a.m_val;
            }
            return local_num(fl, prec);
        }
        const long v = a.m_val + b.m_val;
        const long rel = std::min(a.m_prec - a.m_val, b.m_prec - b.m_val);
        local_num r(fl, v + rel);
        r.m_zero = false;
        r.m_val = v;
        r.m_unit = fl.mod_pi(a.m_unit * b.m_unit, rel);
        return r;
    }
    local_num &operator+=(const local_num &o) { return *this = *this + o; }
    local_num &operator-=(const local_num &o) { return *this = *this - o; }
    local_num &operator*=(const local_num &o) { return *this = *this * o; }

    local_num inverse() const
    {
        if (m_zero) {
            throw std::domain_error("inverse of an element that is zero to precision");
        }
        const long rel = m_prec - m_val;
        local_num r(m_fl, rel - m_val);
        r.m_zero = false;
        r.m_val = -m_val;
        r.m_unit = m_fl.inv_mod(m_unit, rel);
        return r;
    }

    local_num pow(unsigned long e) const
    {
        if (e == 0u) {
            return local_num::from_integer(m_fl, m_fl.one(), std::max(m_prec, 1L));
        }
        local_num r = *this;
        local_num b = *this;
        --e;
        while (e != 0u) {
            if (e & 1u) {
                r = r * b;
            }
            e >>= 1;
            if (e != 0u) {
                b = b * b;
            }
        }
        return r;
    }

    // Multiply by pi^k (k may be negative).
    local_num shift(long k) const
    {
        local_num r(*this);
        r.m_prec += k;
        r.m_val += k;
        return r;
    }

    // Equality of the stored classes at common precision.
    bool congruent(const local_num &o) const
    {
        return (*this - o).is_zero();
    }

    std::string to_string() const
    {
        if (m_zero) {
            return "O(pi^" + std::to_string(m_prec) + ")";
        }
        return "pi^" + std::to_string(m_val) + "*(" + ring::to_string(m_unit) + ") + O(pi^" + std::to_string(m_prec)
               + ")";
    }

private:
    Fl m_fl;
    bool m_zero = true;
    long m_val = 0;
    long m_prec = 0;
    integer m_unit;
};

// Element of K = F(s), s^N = pi, stored as sum_j s^j x_j with x_j in F (j < N).
// Absolute precision is kept in units of 1/N.
template <typename Fl>
class local_elem
{
public:
    using num = local_num<Fl>;

    local_elem() = default;
    local_elem(const Fl &fl, std::uint64_t N, long long prec_units) : m_fl(fl), m_N(N), m_prec(prec_units) {}
    explicit local_elem(const num &x, std::uint64_t N = 1)
        : m_fl(x.field()), m_N(N), m_prec(static_cast<long long>(x.prec()) * static_cast<long long>(N))
    {
        if (!x.is_zero()) {
            m_comp.emplace_back(0, x);
        }
    }

    const Fl &field() const { return m_fl; }
    std::uint64_t root_index() const { return m_N; }
    long long prec_units() const { return m_prec; }
    valuation known_prec() const { return valuation::frac(m_prec, m_N); }
    const std::vector<std::pair<std::uint64_t, num>> &components() const { return m_comp; }
    bool is_zero() const { return m_comp.empty(); }

    // Valuation in units of 1/N, or prec for zero.
    long long val_units() const
    {
        long long v = m_prec;
        for (const auto &[j, x] : m_comp) {
            v = std::min(v, static_cast<long long>(x.val()) * static_cast<long long>(m_N) + static_cast<long long>(j));
        }
        return v;
    }
    valuation val() const { return is_zero() ? valuation::infinity() : valuation::frac(val_units(), m_N); }

    // s^j * x with x in F, added into this element.
    void add_component(std::uint64_t j, const num &x)
    {
        const auto cprec = comp_prec(j);
        auto it = std::lower_bound(m_comp.begin(), m_comp.end(), j,
                                   [](const auto &e, std::uint64_t k) { return e.first < k; });
        num cur = (it != m_comp.end() && it->first == j) ? it->second : num(m_fl, cprec);
        num s = (cur + x).with_prec(cprec);
        if (it != m_comp.end() && it->first == j) {
            if (s.is_zero()) {
                m_comp.erase(it);
            } else {
                it->second = s;
            }
        } else if (!s.is_zero()) {
            m_comp.insert(it, {j, s});
        }
    }

    local_elem lift_to(std::uint64_t N2) const
    {
        if (N2 == m_N) {
            return *this;
        }
        const auto k = N2 / m_N;
        local_elem r(m_fl, N2, m_prec * static_cast<long long>(k));
        for (const auto &[j, x] : m_comp) {
            r.m_comp.emplace_back(j * k, x);
        }
        return r;
    }

    local_elem with_prec_units(long long P) const
    {
        if (P >= m_prec) {
            return *this;
        }
        local_elem r(m_fl, m_N, P);
        for (const auto &[j, x] : m_comp) {
            r.add_component(j, x);
        }
        return r;
    }

    local_elem operator-() const
    {
        local_elem r(*this);
        for (auto &e : r.m_comp) {
            e.second = -e.second;
        }
        return r;
    }

    friend local_elem operator+(const local_elem &a0, const local_elem &b0)
    {
        const auto N = std::lcm(a0.m_N, b0.m_N);
        const auto a = a0.lift_to(N), b = b0.lift_to(N);
        local_elem r(a.m_fl, N, std::min(a.m_prec, b.m_prec));
        for (const auto &[j, x] : a.m_comp) {
            r.add_component(j, x);
        }
        for (const auto &[j, x] : b.m_comp) {
            r.add_component(j, x);
        }
        return r;
    }
    friend local_elem operator-(const local_elem &a, const local_elem &b) { return a + (-b); }

    friend local_elem operator*(const local_elem &a0, const local_elem &b0)
    {
        const auto N = std::lcm(a0.m_N, b0.m_N);
        const auto a = a0.lift_to(N), b = b0.lift_to(N);
        const long long P = std::min(a.m_prec + b.val_units(), b.m_prec + a.val_units());
        local_elem r(a.m_fl, N, P);
        const long big = std::numeric_limits<long>::max() / 8;
        for (const auto &[i, x] : a.m_comp) {
            for (const auto &[j, y] : b.m_comp) {
                auto k = i + j;
                num z = (x.with_prec(big) * y.with_prec(big));
                if (k >= N) {
                    k -= N;
                    z = z.shift(1);
                }
                r.add_component(k, z);
            }
        }
        return r;
    }
    local_elem &operator+=(const local_elem &o) { return *this = *this + o; }
    local_elem &operator*=(const local_elem &o) { return *this = *this * o; }

    // Unramified value when all components sit at j = 0.
    std::optional<num> to_num() const
    {
        if (m_prec % static_cast<long long>(m_N) != 0) {
            return std::nullopt;
        }
        num r(m_fl, static_cast<long>(m_prec / static_cast<long long>(m_N)));
        for (const auto &[j, x] : m_comp) {
            if (j != 0u) {
                return std::nullopt;
            }
            r = r + x;
        }
        return r.with_prec(static_cast<long>(m_prec / static_cast<long long>(m_N)));
    }

private:
    // Precision in F for the component at s^j: ceil((P - j) / N).
    long comp_prec(std::uint64_t j) const
    {
        const long long d = m_prec - static_cast<long long>(j);
        const long long N = static_cast<long long>(m_N);
        return static_cast<long>(d >= 0 ? (d + N - 1) / N : -((-d) / N));
    }

    Fl m_fl;
    std::uint64_t m_N = 1;
    long long m_prec = 0;
    std::vector<std::pair<std::uint64_t, num>> m_comp;
};

// Local image of a global value of non-negative valuation, to absolute precision prec.
template <typename Fl>
local_num<Fl> local_embed(const Fl &fl, const typename Fl::global &v, long prec)
{
    if (!v.is_zero() && fl.val(v.den()) > 0) {
        throw negative_valuation("denominator divisible by the uniformizer: " + v.to_string());
    }
    return local_num<Fl>::from_global(fl, v, prec);
}

// Precision guard for uniqueness of reconstruction at height bound H.
inline bool reconstruction_guard(const padic &fl, long N, const mpz_class &H)
{
    return fl.pi_pow(N) > 2 * H * H;
}
inline bool reconstruction_guard(const tadic &, long N, long h)
{
    return N > 2 * h;
}

// Smallest precision satisfying the guard.
inline long min_guard_precision(const padic &fl, const mpz_class &H)
{
    long N = 0;
    while (!reconstruction_guard(fl, N, H)) {
        ++N;
    }
    return N;
}
inline long min_guard_precision(const tadic &, long h)
{
    return 2 * h + 1;
}

std::optional<rational> rational_reconstruct(const local_num<padic> &x, const mpz_class &H);
std::optional<ratfunc> rational_reconstruct(const local_num<tadic> &x, long h);

} // namespace rigidpts

#endif
