#ifndef RIGIDPTS_POWER_SERIES_HPP
#define RIGIDPTS_POWER_SERIES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <rigidpts/errors.hpp>
#include <rigidpts/field.hpp>
#include <rigidpts/local.hpp>
#include <rigidpts/valuation.hpp>

namespace rigidpts
{

using exponent = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const exponent &nu)
{
    return std::accumulate(nu.begin(), nu.end(), std::uint64_t(0));
}

// Element of V[s], s^N = pi, as sparse components j -> a_j (0 <= j < N).
template <typename Fl>
struct coeff {
    using integer = typename Fl::integer;
    std::vector<std::pair<std::uint64_t, integer>> comps;

    bool is_zero() const { return comps.empty(); }

    static coeff from_integer(const integer &a, std::uint64_t j = 0)
    {
        coeff c;
        if (!ring::is_zero(a)) {
            c.comps.emplace_back(j, a);
        }
        return c;
    }

    // Valuation in units of 1/N; requires nonzero.
    long long val_units(const Fl &fl, std::uint64_t N) const
    {
        long long v = std::numeric_limits<long long>::max();
        for (const auto &[j, a] : comps) {
            v = std::min(v, static_cast<long long>(fl.val(a)) * static_cast<long long>(N) + static_cast<long long>(j));
        }
        return v;
    }

    void add(const Fl &fl, std::uint64_t j, const integer &a)
    {
        (void)fl;
        auto it = std::lower_bound(comps.begin(), comps.end(), j,
                                   [](const auto &e, std::uint64_t k) { return e.first < k; });
        if (it != comps.end() && it->first == j) {
            it->second = it->second + a;
            if (ring::is_zero(it->second)) {
                comps.erase(it);
            }
        } else if (!ring::is_zero(a)) {
            comps.insert(it, {j, a});
        }
    }

    coeff operator-() const
    {
        coeff r(*this);
        for (auto &e : r.comps) {
            e.second = -e.second;
        }
        return r;
    }

    static coeff sum(const Fl &fl, const coeff &a, const coeff &b)
    {
        coeff r = a;
        for (const auto &[j, x] : b.comps) {
            r.add(fl, j, x);
        }
        return r;
    }

    static coeff product(const Fl &fl, std::uint64_t N, const coeff &a, const coeff &b)
    {
        coeff r;
        for (const auto &[i, x] : a.comps) {
            for (const auto &[j, y] : b.comps) {
                auto k = i + j;
                integer z = x * y;
                if (k >= N) {
                    k -= N;
                    z = fl.mul_pi(z, 1);
                }
                r.add(fl, k, z);
            }
        }
        return r;
    }

    // Multiply by s^k (k of any sign); division must be exact.
    coeff shifted(const Fl &fl, std::uint64_t N, long long k) const
    {
        coeff r;
        const long long n = static_cast<long long>(N);
        for (const auto &[j, a] : comps) {
            const long long tot = static_cast<long long>(j) + k;
            long long qt = tot / n, rem = tot % n;
            if (rem < 0) {
                rem += n;
                --qt;
            }
            integer b = a;
            if (qt > 0) {
                b = fl.mul_pi(b, qt);
            } else if (qt < 0) {
                if (fl.val(b) < -qt) {
                    throw radius_violation("coefficient not divisible by the requested power of t");
                }
                b = fl.div_pi(b, -qt);
            }
            r.add(fl, static_cast<std::uint64_t>(rem), b);
        }
        return r;
    }

    // Re-express over s' with s = s'^k.
    coeff lifted(std::uint64_t k) const
    {
        coeff r(*this);
        for (auto &e : r.comps) {
            e.first *= k;
        }
        return r;
    }

    // Reduce modulo s^P (P in units of 1/N).
    coeff truncated(const Fl &fl, std::uint64_t N, long long P) const
    {
        coeff r;
        const long long n = static_cast<long long>(N);
        for (const auto &[j, a] : comps) {
            const long long d = P - static_cast<long long>(j);
            if (d <= 0) {
                continue;
            }
            const long e = static_cast<long>((d + n - 1) / n);
            auto b = fl.mod_pi(a, e);
            if (!ring::is_zero(b)) {
                r.comps.emplace_back(j, std::move(b));
            }
        }
        return r;
    }

    // Inverse of a unit modulo s^P (P in units of 1/N), by Newton iteration.
    static coeff inverse(const Fl &fl, std::uint64_t N, const coeff &u, long long P)
    {
        if (u.comps.empty() || u.comps.front().first != 0u || fl.val(u.comps.front().second) != 0) {
            throw std::domain_error("inverse of a non-unit coefficient");
        }
        const long e = static_cast<long>((P + static_cast<long long>(N) - 1) / static_cast<long long>(N));
        coeff x = from_integer(fl.inv_mod(u.comps.front().second, std::max(e, 1L)));
        if (u.comps.size() == 1u) {
            return x.truncated(fl, N, P);
        }
        const coeff two = from_integer(fl.from_si(2));
        for (long long prec = 1; prec < 2 * P + 2; prec *= 2) {
            const coeff ux = product(fl, N, u, x).truncated(fl, N, P);
            x = product(fl, N, x, sum(fl, two, -ux)).truncated(fl, N, P);
        }
        return x;
    }

    friend bool operator==(const coeff &a, const coeff &b) { return a.comps == b.comps; }
};

// Restricted power series in n variables with convergence condition delta:
// val(a_nu) >= delta . nu for every stored exponent. Coefficients live in V[t^(1/N)].
// Precision data is normalized by the condition: a stored a_nu is known modulo
// t^(prec + delta.nu), and omitted terms (|nu| > cutoff) satisfy val(a_nu) - delta.nu >= tail.
template <typename Fl>
class power_series
{
public:
    using integer = typename Fl::integer;
    using global = typename Fl::global;
    using coeff_t = coeff<Fl>;
    using term_map = std::map<exponent, coeff_t>;

    power_series() = default;
    power_series(const Fl &fl, std::vector<mpq_class> delta) : m_fl(fl), m_delta(std::move(delta))
    {
        for (auto &d : m_delta) {
            d.canonicalize();
            if (sgn(d) < 0) {
                throw radius_violation("negative radius parameter");
            }
            m_N = std::lcm(m_N, d.get_den().get_ui());
        }
    }

    static power_series zero(const Fl &fl, std::size_t n)
    {
        return power_series(fl, std::vector<mpq_class>(n, 0));
    }
    static power_series constant(const Fl &fl, std::vector<mpq_class> delta, const integer &c)
    {
        power_series r(fl, std::move(delta));
        r.add_term(exponent(r.nvars(), 0), c);
        return r;
    }
    static power_series variable(const Fl &fl, std::vector<mpq_class> delta, std::size_t i)
    {
        power_series r(fl, std::move(delta));
        exponent e(r.nvars(), 0);
        e[i] = 1;
        const auto k = r.delta_units(e);
        r.add_coeff(e, coeff_t::from_integer(fl.one()).shifted(fl, r.m_N, k));
        return r;
    }

    const Fl &field() const { return m_fl; }
    std::size_t nvars() const { return m_delta.size(); }
    const std::vector<mpq_class> &delta() const { return m_delta; }
    std::uint64_t root_index() const { return m_N; }
    const term_map &terms() const { return m_terms; }
    std::optional<std::uint32_t> cutoff() const { return m_cutoff; }
    const valuation &tail() const { return m_tail; }
    const valuation &prec() const { return m_prec; }
    bool is_zero() const { return m_terms.empty(); }
    bool is_polynomial() const { return !m_cutoff.has_value(); }

    void set_cutoff(std::uint32_t T, const valuation &tail)
    {
        m_cutoff = T;
        m_tail = tail;
        drop_above(T);
    }
    void set_prec(const valuation &p)
    {
        m_prec = p;
        apply_prec();
    }

    // Same coefficients read with another convergence condition.
    power_series with_radius(std::vector<mpq_class> delta) const
    {
        power_series r(m_fl, std::move(delta));
        r.lift_root_index(std::lcm(r.m_N, m_N));
        power_series src(*this);
        src.lift_root_index(r.m_N);
        r.m_terms = src.m_terms;
        r.m_cutoff = m_cutoff;
        r.m_prec = m_prec;
        r.m_tail = m_tail;
        if (m_cutoff) {
            for (std::size_t i = 0; i < nvars(); ++i) {
                if (r.m_delta[i] > m_delta[i]) {
                    throw radius_violation("cannot certify the tail under a larger radius");
                }
            }
        }
        r.check_invariant();
        return r;
    }

    // Raise the root index to a multiple of the current one.
    void lift_root_index(std::uint64_t N2)
    {
        if (N2 == m_N) {
            return;
        }
        if (N2 % m_N != 0u) {
            throw std::logic_error("root index must be a multiple");
        }
        const auto k = N2 / m_N;
        for (auto &[e, c] : m_terms) {
            c = c.lifted(k);
        }
        m_N = N2;
    }

    void add_coeff(const exponent &e, const coeff_t &c)
    {
        if (e.size() != nvars()) {
            throw std::invalid_argument("exponent length mismatch");
        }
        if (m_cutoff && total_degree(e) > *m_cutoff) {
            return;
        }
        auto it = m_terms.find(e);
        if (it == m_terms.end()) {
            if (!c.is_zero()) {
                m_terms.emplace(e, c);
            }
            return;
        }
        it->second = coeff_t::sum(m_fl, it->second, c);
        if (it->second.is_zero()) {
            m_terms.erase(it);
        }
    }
    void add_term(const exponent &e, const integer &a, std::uint64_t j = 0)
    {
        add_coeff(e, coeff_t::from_integer(a, j));
    }

    // N * delta . nu.
    long long delta_units(const exponent &e) const
    {
        mpq_class s = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            s += m_delta[i] * e[i];
        }
        s *= static_cast<unsigned long>(m_N);
        if (s.get_den() != 1) {
            throw std::logic_error("root index does not clear radius denominators");
        }
        return s.get_num().get_si();
    }

    // Normalized valuation val(a_nu) - delta.nu in units of 1/N.
    long long normalized_val_units(const exponent &e, const coeff_t &c) const
    {
        return c.val_units(m_fl, m_N) - delta_units(e);
    }

    valuation gauss_norm() const
    {
        if (m_terms.empty()) {
            return valuation::infinity();
        }
        long long v = std::numeric_limits<long long>::max();
        for (const auto &[e, c] : m_terms) {
            v = std::min(v, c.val_units(m_fl, m_N));
        }
        return valuation::frac(v, m_N);
    }

    // Gauss norm of the unit-normalized coefficients a_nu t^(-delta.nu).
    valuation normalized_gauss_norm() const
    {
        if (m_terms.empty()) {
            return valuation::infinity();
        }
        long long v = std::numeric_limits<long long>::max();
        for (const auto &[e, c] : m_terms) {
            v = std::min(v, normalized_val_units(e, c));
        }
        return valuation::frac(v, m_N);
    }

    // Throws radius_violation when a stored term violates the integrality condition.
    void check_invariant() const
    {
        for (const auto &[e, c] : m_terms) {
            if (normalized_val_units(e, c) < 0) {
                throw radius_violation("coefficient below the convergence condition");
            }
        }
    }

    power_series operator-() const
    {
        power_series r(*this);
        for (auto &[e, c] : r.m_terms) {
            c = -c;
        }
        return r;
    }

    friend power_series operator+(const power_series &a0, const power_series &b0)
    {
        power_series a(a0), b(b0);
        align(a, b);
        power_series r(a);
        r.m_prec = min(a.m_prec, b.m_prec);
        r.merge_truncation(b);
        for (const auto &[e, c] : b.m_terms) {
            r.add_coeff(e, c);
        }
        r.apply_prec();
        return r;
    }
    friend power_series operator-(const power_series &a, const power_series &b) { return a + (-b); }

    friend power_series operator*(const power_series &a0, const power_series &b0)
    {
        power_series a(a0), b(b0);
        align(a, b);
        power_series r(a.m_fl, a.m_delta);
        r.m_N = a.m_N;
        const auto ga = a.normalized_gauss_norm(), gb = b.normalized_gauss_norm();
        // Stored coefficients are exact up to the cutoff; precision loss mirrors local arithmetic.
        r.m_prec = min(a.m_prec + (gb.is_inf() ? valuation(0) : gb), b.m_prec + (ga.is_inf() ? valuation(0) : ga));
        if (a.m_cutoff || b.m_cutoff) {
            const std::uint32_t T = std::min(a.m_cutoff.value_or(UINT32_MAX), b.m_cutoff.value_or(UINT32_MAX));
            valuation tail = valuation::infinity();
            const valuation za = ga.is_inf() ? valuation(0) : ga, zb = gb.is_inf() ? valuation(0) : gb;
            tail = min(tail, za + zb);
            if (a.m_cutoff) {
                tail = min(tail, a.m_tail + zb);
            }
            if (b.m_cutoff) {
                tail = min(tail, b.m_tail + za);
            }
            if (a.m_cutoff && b.m_cutoff) {
                tail = min(tail, a.m_tail + b.m_tail);
            }
            r.m_cutoff = T;
            r.m_tail = tail;
        }
        const std::size_t n = a.nvars();
        for (const auto &[ea, ca] : a.m_terms) {
            const auto da = total_degree(ea);
            if (r.m_cutoff && da > *r.m_cutoff) {
                continue;
            }
            for (const auto &[eb, cb] : b.m_terms) {
                if (r.m_cutoff && da + total_degree(eb) > *r.m_cutoff) {
                    continue;
                }
                exponent e(n);
                for (std::size_t i = 0; i < n; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add_coeff(e, coeff_t::product(a.m_fl, a.m_N, ca, cb));
            }
        }
        r.apply_prec();
        return r;
    }
    power_series &operator+=(const power_series &o) { return *this = *this + o; }
    power_series &operator*=(const power_series &o) { return *this = *this * o; }

    power_series scaled(const coeff_t &c) const
    {
        power_series r(*this);
        r.m_terms.clear();
        for (const auto &[e, x] : m_terms) {
            r.add_coeff(e, coeff_t::product(m_fl, m_N, x, c));
        }
        return r;
    }

    // Multiply every coefficient by t^(k/N) (k of any sign; division must stay exact).
    power_series shifted(long long k) const
    {
        power_series r(*this);
        r.m_terms.clear();
        for (const auto &[e, x] : m_terms) {
            r.add_coeff(e, x.shifted(m_fl, m_N, k));
        }
        const auto dv = valuation::frac(k, m_N);
        if (!r.m_prec.is_inf()) {
            r.m_prec = r.m_prec + dv;
        }
        if (r.m_cutoff) {
            r.m_tail = r.m_tail + dv;
        }
        return r;
    }

    power_series truncated_degree(std::uint32_t T) const
    {
        power_series r(*this);
        if (r.m_cutoff && *r.m_cutoff <= T) {
            return r;
        }
        valuation dropped = r.m_cutoff ? r.m_tail : valuation::infinity();
        for (const auto &[e, c] : m_terms) {
            if (total_degree(e) > T) {
                dropped = min(dropped, valuation::frac(normalized_val_units(e, c), m_N));
            }
        }
        r.m_cutoff = T;
        r.m_tail = dropped;
        r.drop_above(T);
        return r;
    }

    // Degree in variable i over stored terms.
    std::uint32_t degree_in(std::size_t i) const
    {
        std::uint32_t d = 0;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, e[i]);
        }
        return d;
    }

    // F(x) with x in the polydisc val(x_i) >= -delta_i. Result precision is capped by t_prec and by
    // the tail certificate tail + (cutoff + 1) * min_i(delta_i + val x_i).
    local_elem<Fl> evaluate(const std::vector<local_elem<Fl>> &point) const
    {
        if (point.size() != nvars()) {
            throw std::invalid_argument("point dimension mismatch");
        }
        std::uint64_t N = m_N;
        for (const auto &x : point) {
            N = std::lcm(N, x.root_index());
        }
        std::vector<local_elem<Fl>> pt;
        mpq_class slack = -1;
        for (std::size_t i = 0; i < point.size(); ++i) {
            pt.push_back(point[i].lift_to(N));
            const auto v = pt.back().val_units();
            mpq_class m = m_delta[i] + mpq_class(static_cast<long>(v), static_cast<unsigned long>(N));
            m.canonicalize();
            if (m < 0) {
                throw out_of_disc("coordinate outside the polydisc of convergence");
            }
            if (slack < 0 || m < slack) {
                slack = m;
            }
        }
        // Cap on the result precision in units of 1/N.
        long long cap = std::numeric_limits<long long>::max() / 4;
        auto cap_with = [&](const valuation &v) {
            if (!v.is_inf()) {
                mpq_class u = v.value() * static_cast<unsigned long>(N);
                mpz_class fl;
                mpz_fdiv_q(fl.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
                cap = std::min<long long>(cap, fl.get_si());
            }
        };
        cap_with(m_prec);
        if (m_cutoff) {
            cap_with(m_tail + valuation(mpq_class(slack * (*m_cutoff + 1))));
        }
        // Working precision: nothing beyond the best coordinate precision is ever certified.
        const std::size_t n = nvars();
        long long W = 64 * static_cast<long long>(N), neg = 0;
        if (n > 0) {
            W = 0;
            for (std::size_t i = 0; i < n; ++i) {
                W = std::max(W, pt[i].prec_units() + 1);
                neg += static_cast<long long>(degree_in(i)) * std::max(0LL, -pt[i].val_units());
            }
        }
        W = std::min(W, cap);
        const long long WA = std::max(W, 0LL) + neg + static_cast<long long>(N);
        const long wnum = static_cast<long>(WA / static_cast<long long>(N) + 1);
        std::vector<std::vector<local_elem<Fl>>> powers(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = degree_in(i);
            powers[i].reserve(d + 1);
            powers[i].push_back(local_elem<Fl>(local_num<Fl>::from_integer(m_fl, m_fl.one(), wnum), N));
            for (std::uint32_t k = 1; k <= d; ++k) {
                powers[i].push_back((powers[i].back() * pt[i]).with_prec_units(WA));
            }
        }
        local_elem<Fl> acc(m_fl, N, cap);
        const auto kN = N / m_N;
        for (const auto &[e, c] : m_terms) {
            local_elem<Fl> a(m_fl, N, WA);
            for (const auto &[j, x] : c.comps) {
                a.add_component(j * kN, local_num<Fl>::from_integer(m_fl, x, wnum));
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (e[i] != 0u) {
                    a = a * powers[i][e[i]];
                }
            }
            acc = acc + a;
        }
        return acc.with_prec_units(cap);
    }

    // Fast path for N = 1 series at unramified points.
    local_num<Fl> evaluate(const std::vector<local_num<Fl>> &point) const
    {
        if (m_N != 1u) {
            std::vector<local_elem<Fl>> pe;
            for (const auto &x : point) {
                pe.emplace_back(x);
            }
            auto r = evaluate(pe).to_num();
            if (!r) {
                throw std::logic_error("ramified value at an unramified evaluation");
            }
            return *r;
        }
        if (point.size() != nvars()) {
            throw std::invalid_argument("point dimension mismatch");
        }
        mpq_class slack = -1;
        for (std::size_t i = 0; i < point.size(); ++i) {
            mpq_class m = m_delta[i] + point[i].val();
            if (m < 0) {
                throw out_of_disc("coordinate outside the polydisc of convergence");
            }
            if (slack < 0 || m < slack) {
                slack = m;
            }
        }
        long cap = std::numeric_limits<long>::max() / 4;
        auto cap_with = [&](const valuation &v) {
            if (!v.is_inf()) {
                mpz_class fl;
                mpz_fdiv_q(fl.get_mpz_t(), v.value().get_num_mpz_t(), v.value().get_den_mpz_t());
                cap = std::min<long long>(cap, fl.get_si());
            }
        };
        cap_with(m_prec);
        if (m_cutoff) {
            cap_with(m_tail + valuation(mpq_class(slack * (*m_cutoff + 1))));
        }
        const std::size_t n = nvars();
        long W = 64, neg = 0;
        if (n > 0) {
            W = 0;
            for (std::size_t i = 0; i < n; ++i) {
                W = std::max(W, point[i].prec() + 1);
                neg += static_cast<long>(degree_in(i)) * std::max(0L, -point[i].val());
            }
        }
        W = std::min(W, cap);
        const long WA = std::max(W, 0L) + neg + 1;
        std::vector<std::vector<local_num<Fl>>> powers(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = degree_in(i);
            powers[i].push_back(local_num<Fl>::from_integer(m_fl, m_fl.one(), WA));
            for (std::uint32_t k = 1; k <= d; ++k) {
                powers[i].push_back((powers[i].back() * point[i]).with_prec(WA));
            }
        }
        local_num<Fl> acc(m_fl, cap);
        for (const auto &[e, c] : m_terms) {
            local_num<Fl> a = local_num<Fl>::from_integer(m_fl, c.comps.front().second, WA);
            for (std::size_t i = 0; i < n; ++i) {
                if (e[i] != 0u) {
                    a = a * powers[i][e[i]];
                }
            }
            acc = acc + a;
        }
        return acc.with_prec(cap);
    }

    // F~(x~) = F(x) with x = t^eps x~: a~_nu = t^(eps.nu) a_nu, radius delta + eps.
    power_series rescale(const std::vector<mpq_class> &eps) const
    {
        if (eps.size() != nvars()) {
            throw std::invalid_argument("scaling vector length mismatch");
        }
        std::vector<mpq_class> nd(nvars());
        std::uint64_t N = m_N;
        for (std::size_t i = 0; i < nvars(); ++i) {
            nd[i] = m_delta[i] + eps[i];
            nd[i].canonicalize();
            if (sgn(nd[i]) < 0) {
                throw radius_violation("rescaling below radius zero");
            }
            mpq_class e = eps[i];
            e.canonicalize();
            N = std::lcm(N, e.get_den().get_ui());
        }
        power_series src(*this);
        src.lift_root_index(N);
        power_series r(m_fl, nd);
        r.lift_root_index(N);
        r.m_cutoff = m_cutoff;
        r.m_tail = m_tail;
        r.m_prec = m_prec;
        for (const auto &[e, c] : src.m_terms) {
            mpq_class s = 0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                s += eps[i] * e[i];
            }
            s *= static_cast<unsigned long>(N);
            r.add_coeff(e, c.shifted(m_fl, N, s.get_num().get_si()));
        }
        r.check_invariant();
        return r;
    }

    // Translation x_i -> x_i + s_i by constants of non-negative normalized valuation.
    power_series translate(const std::vector<coeff_t> &s) const
    {
        power_series r(m_fl, m_delta);
        r.lift_root_index(m_N);
        r.m_cutoff = m_cutoff;
        r.m_tail = m_tail;
        r.m_prec = m_cutoff ? min(m_prec, m_tail) : m_prec;
        const std::size_t n = nvars();
        for (const auto &[e, c] : m_terms) {
            // Expand prod_i (x_i + s_i)^(e_i) by the binomial theorem.
            std::vector<std::pair<exponent, coeff_t>> partial{{exponent(n, 0), c}};
            for (std::size_t i = 0; i < n; ++i) {
                if (e[i] == 0u) {
                    continue;
                }
                std::vector<coeff_t> spow{coeff_t::from_integer(m_fl.one())};
                for (std::uint32_t k = 1; k <= e[i]; ++k) {
                    spow.push_back(coeff_t::product(m_fl, m_N, spow.back(), s[i]));
                }
                std::vector<std::pair<exponent, coeff_t>> next;
                mpz_class binom = 1;
                for (std::uint32_t k = 0; k <= e[i]; ++k) {
                    // k = power of x_i kept.
                    if (k > 0) {
                        binom = binom * (e[i] - k + 1) / k;
                    }
                    const auto &sp = spow[e[i] - k];
                    if (sp.is_zero()) {
                        continue;
                    }
                    const auto bc = coeff_t::from_integer(integer_from_mpz(binom));
                    if (bc.is_zero()) {
                        continue;
                    }
                    const auto f = coeff_t::product(m_fl, m_N, sp, bc);
                    for (const auto &[pe, pc] : partial) {
                        exponent ne = pe;
                        ne[i] = k;
                        next.emplace_back(ne, coeff_t::product(m_fl, m_N, pc, f));
                    }
                }
                partial.swap(next);
            }
            for (const auto &[pe, pc] : partial) {
                r.add_coeff(pe, pc);
            }
        }
        r.apply_prec();
        return r;
    }

    // Substitution x_i = images[i](y); images are polynomials in the new coordinates.
    power_series substitute(const std::vector<power_series> &images) const
    {
        if (images.size() != nvars()) {
            throw std::invalid_argument("substitution arity mismatch");
        }
        const std::size_t m = images.front().nvars();
        std::uint64_t N = m_N;
        std::uint32_t growth = 1;
        for (const auto &img : images) {
            if (!img.is_polynomial()) {
                throw std::invalid_argument("substitution images must be polynomials");
            }
            N = std::lcm(N, img.root_index());
            std::uint32_t deg = 0;
            for (const auto &[e, c] : img.terms()) {
                deg = std::max<std::uint32_t>(deg, static_cast<std::uint32_t>(total_degree(e)));
            }
            growth = std::max(growth, deg);
        }
        power_series src(*this);
        src.lift_root_index(N);
        std::vector<power_series> im;
        for (auto img : images) {
            img.lift_root_index(N);
            im.push_back(std::move(img));
        }
        power_series r(m_fl, im.front().delta());
        r.lift_root_index(N);
        r.m_prec = m_prec;
        if (m_cutoff) {
            r.m_prec = min(r.m_prec, m_tail);
            r.m_cutoff = *m_cutoff * growth;
            r.m_tail = m_tail;
        }
        std::vector<std::vector<power_series>> powers(nvars());
        for (const auto &[e, c] : src.m_terms) {
            power_series term = power_series::constant(m_fl, im.front().delta(), m_fl.zero());
            term.lift_root_index(N);
            term.add_coeff(exponent(m, 0), c);
            for (std::size_t i = 0; i < nvars(); ++i) {
                if (e[i] == 0u) {
                    continue;
                }
                auto &pw = powers[i];
                if (pw.empty()) {
                    auto one = power_series::constant(m_fl, im.front().delta(), m_fl.one());
                    one.lift_root_index(N);
                    pw.push_back(one);
                }
                while (pw.size() <= e[i]) {
                    pw.push_back(pw.back() * im[i]);
                }
                term = term * pw[e[i]];
            }
            for (const auto &[te, tc] : term.m_terms) {
                r.add_coeff(te, tc);
            }
        }
        r.apply_prec();
        return r;
    }

    // Exact equality of stored data.
    friend bool operator==(const power_series &a, const power_series &b)
    {
        return a.m_delta == b.m_delta && a.m_N == b.m_N && a.m_terms == b.m_terms && a.m_cutoff == b.m_cutoff;
    }

    // Equality of coefficients modulo the common precision, after aligning root indices.
    static bool congruent(const power_series &a0, const power_series &b0)
    {
        auto d = a0 - b0;
        d.apply_prec();
        return d.is_zero();
    }

    std::string to_string() const
    {
        std::string s;
        for (const auto &[e, c] : m_terms) {
            if (!s.empty()) {
                s += " + ";
            }
            s += "(";
            bool first = true;
            for (const auto &[j, a] : c.comps) {
                if (!first) {
                    s += "+";
                }
                first = false;
                s += ring::to_string(a);
                if (j != 0u) {
                    s += "*s^" + std::to_string(j);
                }
            }
            s += ")";
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] != 0u) {
                    s += "*x" + std::to_string(i + 1) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
                }
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    integer integer_from_mpz(const mpz_class &z) const
    {
        if constexpr (std::is_same_v<integer, mpz_class>) {
            return z;
        } else {
            return m_fl.from_si(static_cast<long>(mpz_fdiv_ui(z.get_mpz_t(), m_fl.p())));
        }
    }

    static void align(power_series &a, power_series &b)
    {
        if (a.nvars() != b.nvars()) {
            throw std::invalid_argument("variable count mismatch");
        }
        if (a.m_delta != b.m_delta) {
            throw std::invalid_argument("radius mismatch");
        }
        const auto N = std::lcm(a.m_N, b.m_N);
        a.lift_root_index(N);
        b.lift_root_index(N);
    }

    void merge_truncation(const power_series &b)
    {
        if (!b.m_cutoff) {
            return;
        }
        if (!m_cutoff) {
            m_cutoff = b.m_cutoff;
            m_tail = b.m_tail;
        } else {
            m_tail = min(m_tail, b.m_tail);
            if (*b.m_cutoff < *m_cutoff) {
                m_cutoff = b.m_cutoff;
            }
        }
        drop_above(*m_cutoff);
    }

    void drop_above(std::uint32_t T)
    {
        for (auto it = m_terms.begin(); it != m_terms.end();) {
            if (total_degree(it->first) > T) {
                m_tail = min(m_tail, valuation::frac(normalized_val_units(it->first, it->second), m_N));
                it = m_terms.erase(it);
            } else {
                ++it;
            }
        }
    }

    void apply_prec()
    {
        if (m_prec.is_inf()) {
            return;
        }
        mpq_class u = m_prec.value() * static_cast<unsigned long>(m_N);
        mpz_class P;
        mpz_fdiv_q(P.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
        for (auto it = m_terms.begin(); it != m_terms.end();) {
            it->second = it->second.truncated(m_fl, m_N, P.get_si() + delta_units(it->first));
            if (it->second.is_zero()) {
                it = m_terms.erase(it);
            } else {
                ++it;
            }
        }
    }

    Fl m_fl;
    std::vector<mpq_class> m_delta;
    std::uint64_t m_N = 1;
    term_map m_terms;
    std::optional<std::uint32_t> m_cutoff;
    valuation m_tail = valuation::infinity();
    valuation m_prec = valuation::infinity();
};

} // namespace rigidpts

#endif
