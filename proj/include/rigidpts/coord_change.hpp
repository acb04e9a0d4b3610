#ifndef RIGIDPTS_COORD_CHANGE_HPP
#define RIGIDPTS_COORD_CHANGE_HPP

#include <string>
#include <vector>

#include <rigidpts/power_series.hpp>

namespace rigidpts
{

enum class change_kind { translation, polynomial_map, famous, scale };

// x = c(y). Polynomial maps list the images of the old coordinates in the new ones.
template <typename Fl>
struct coord_change {
    using series = power_series<Fl>;

    change_kind kind = change_kind::polynomial_map;
    std::vector<coeff<Fl>> shift;
    std::vector<series> images;
    std::vector<series> inverse_images;
    unsigned M = 0;
    std::vector<mpq_class> eps;

    static coord_change translation(std::vector<coeff<Fl>> s)
    {
        coord_change c;
        c.kind = change_kind::translation;
        c.shift = std::move(s);
        return c;
    }
    static coord_change polynomial(std::vector<series> im, std::vector<series> inv)
    {
        coord_change c;
        c.kind = change_kind::polynomial_map;
        c.images = std::move(im);
        c.inverse_images = std::move(inv);
        return c;
    }
    static coord_change identity(const Fl &fl, std::size_t n)
    {
        std::vector<series> im;
        const std::vector<mpq_class> z(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            im.push_back(series::variable(fl, z, i));
        }
        return polynomial(im, im);
    }
    // x_k = y_k + y_n^(M^(n-k)) for k < n, x_n = y_n.
    static coord_change famous(const Fl &fl, std::size_t n, unsigned M)
    {
        const std::vector<mpq_class> z(n, 0);
        std::vector<series> im, inv;
        for (std::size_t k = 0; k < n; ++k) {
            auto yk = series::variable(fl, z, k);
            if (k + 1 == n) {
                im.push_back(yk);
                inv.push_back(yk);
                continue;
            }
            exponent e(n, 0);
            std::uint64_t pw = 1;
            for (std::size_t j = k + 1; j < n; ++j) {
                pw *= M;
            }
            e[n - 1] = static_cast<std::uint32_t>(pw);
            auto mono = series::zero(fl, n);
            mono.add_term(e, fl.one());
            im.push_back(yk + mono);
            inv.push_back(yk - mono);
        }
        auto c = polynomial(im, inv);
        c.kind = change_kind::famous;
        c.M = M;
        return c;
    }
    static coord_change scale(std::vector<mpq_class> e)
    {
        coord_change c;
        c.kind = change_kind::scale;
        c.eps = std::move(e);
        return c;
    }

    coord_change inverse() const
    {
        coord_change c(*this);
        switch (kind) {
        case change_kind::translation:
            for (auto &s : c.shift) {
                s = -s;
            }
            break;
        case change_kind::scale:
            for (auto &e : c.eps) {
                e = -e;
            }
            break;
        default:
            std::swap(c.images, c.inverse_images);
            c.kind = change_kind::polynomial_map;
            break;
        }
        return c;
    }

    std::string describe() const
    {
        switch (kind) {
        case change_kind::translation:
            return "translation";
        case change_kind::scale: {
            std::string s = "scale(";
            for (std::size_t i = 0; i < eps.size(); ++i) {
                s += (i ? "," : "") + eps[i].get_str();
            }
            return s + ")";
        }
        case change_kind::famous:
            return "famous(M=" + std::to_string(M) + ")";
        default:
            return "polynomial";
        }
    }
};

template <typename Fl>
power_series<Fl> apply_coord_change(const power_series<Fl> &F, const coord_change<Fl> &c)
{
    switch (c.kind) {
    case change_kind::translation:
        return F.translate(c.shift);
    case change_kind::scale:
        return F.rescale(c.eps);
    default:
        for (const auto &d : F.delta()) {
            if (sgn(d) != 0) {
                throw radius_violation("polynomial coordinate changes act on the unit polydisc");
            }
        }
        return F.substitute(c.images);
    }
}

// L = M^(n-1) nu_1 + ... + nu_n.
inline std::uint64_t famous_exponent(const exponent &nu, unsigned M)
{
    std::uint64_t L = 0;
    for (const auto v : nu) {
        L = L * M + v;
    }
    return L;
}

} // namespace rigidpts

#endif
