#ifndef RIGIDPTS_VALUATION_HPP
#define RIGIDPTS_VALUATION_HPP

#include <string>

#include <gmpxx.h>

namespace rigidpts
{

// Rational valuation or +infinity (the valuation of zero). val(t) = 1.
class valuation
{
public:
    valuation() : m_inf(true) {}
    valuation(const mpq_class &v) : m_inf(false), m_v(v) { m_v.canonicalize(); }
    valuation(long v) : m_inf(false), m_v(v) {}
    static valuation infinity() { return valuation(); }
    static valuation frac(long num, unsigned long den)
    {
        mpq_class v(num, den);
        v.canonicalize();
        return valuation(v);
    }

    bool is_inf() const { return m_inf; }
    const mpq_class &value() const { return m_v; }

    friend valuation operator+(const valuation &a, const valuation &b)
    {
        if (a.m_inf || b.m_inf) {
            return valuation();
        }
        return valuation(mpq_class(a.m_v + b.m_v));
    }
    friend valuation operator*(const mpq_class &k, const valuation &a)
    {
        if (a.m_inf) {
            return a;
        }
        return valuation(mpq_class(k * a.m_v));
    }
    friend bool operator==(const valuation &a, const valuation &b)
    {
        return a.m_inf == b.m_inf && (a.m_inf || a.m_v == b.m_v);
    }
    friend bool operator!=(const valuation &a, const valuation &b) { return !(a == b); }
    friend bool operator<(const valuation &a, const valuation &b)
    {
        if (a.m_inf) {
            return false;
        }
        return b.m_inf || a.m_v < b.m_v;
    }
    friend bool operator<=(const valuation &a, const valuation &b) { return !(b < a); }
    friend bool operator>(const valuation &a, const valuation &b) { return b < a; }
    friend bool operator>=(const valuation &a, const valuation &b) { return !(a < b); }
    friend valuation min(const valuation &a, const valuation &b) { return b < a ? b : a; }

    std::string to_string() const { return m_inf ? std::string("inf") : m_v.get_str(); }

private:
    bool m_inf;
    mpq_class m_v;
};

} // namespace rigidpts

#endif
