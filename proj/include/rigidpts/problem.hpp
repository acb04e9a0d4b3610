#ifndef RIGIDPTS_PROBLEM_HPP
#define RIGIDPTS_PROBLEM_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include <rigidpts/field.hpp>
#include <rigidpts/presented.hpp>

namespace rigidpts
{

using json = nlohmann::json;

struct problem {
    std::string name;
    field_kind kind = field_kind::tadic;
    // p for Q_p, q for F_q((t)).
    std::uint32_t base = 2;
    unsigned sigma = 1;
    long prec_ceiling = 4096;
    std::size_t n = 1;
    std::vector<mpq_class> delta;
    json generators = json::array();
    std::string f = "coordinates";
    // Heights as natural numbers H.
    std::vector<mpz_class> heights;
    mpq_class eps{1, 2};
    std::string mode = "count";
};

mpq_class parse_rational_string(const std::string &s);
std::string rational_string(const mpq_class &v);

problem parse_problem(const json &j);
problem load_problem(const std::string &path);

// Comma-separated heights H; t-adic heights must be powers of q.
std::vector<mpz_class> parse_heights(const std::string &list);
// h = log_q H, requiring an exact power.
long exact_log(const mpz_class &H, std::uint32_t q);

fq_poly parse_fq_poly(const finite_field &F, const json &j);
json fq_poly_json(const fq_poly &a);
mpz_class parse_z_poly(std::uint32_t p, const json &j);

json global_json(const padic &fl, const rational &v);
json global_json(const tadic &fl, const ratfunc &v);
rational parse_global(const padic &fl, const json &j);
ratfunc parse_global(const tadic &fl, const json &j);

inline typename padic::integer parse_integer(const padic &fl, const json &j)
{
    return parse_z_poly(fl.p(), j);
}
inline typename tadic::integer parse_integer(const tadic &fl, const json &j)
{
    return parse_fq_poly(fl.ff(), j);
}

// One series literal term list {terms: [...], cutoff, tail_val} as a power series.
template <typename Fl>
power_series<Fl> parse_series(const Fl &fl, const std::vector<mpq_class> &delta, const json &g)
{
    power_series<Fl> F(fl, delta);
    const json &terms = g.is_array() ? g : g.at("terms");
    for (const auto &t : terms) {
        const auto ex = t.at("exponents").get<std::vector<std::uint32_t>>();
        if (ex.size() != delta.size()) {
            throw parse_error("exponent length does not match n");
        }
        const exponent e(ex.begin(), ex.end());
        auto a = parse_integer(fl, t.at("coeff"));
        std::uint64_t j = 0;
        if (t.contains("val_shift")) {
            const auto s = parse_rational_string(t.at("val_shift").get<std::string>());
            if (sgn(s) < 0) {
                throw parse_error("negative valuation shift");
            }
            const std::uint64_t N = std::lcm<std::uint64_t>(F.root_index(), s.get_den().get_ui());
            F.lift_root_index(N);
            j = mpq_class(s * static_cast<unsigned long>(N)).get_num().get_ui();
            a = fl.mul_pi(a, static_cast<long>(j / N));
            j %= N;
        }
        F.add_term(e, a, j);
    }
    if (!g.is_array() && g.contains("cutoff")) {
        const auto T = g.at("cutoff").get<std::uint32_t>();
        const auto tail = parse_rational_string(g.value("tail_val", std::string("0")));
        F.set_cutoff(T, valuation(tail));
    }
    return F;
}

template <typename Fl>
presented_algebra<Fl> build_algebra(const Fl &fl, const problem &pb)
{
    presented_algebra<Fl> alg{fl, pb.delta, {}, std::nullopt};
    for (const auto &g : pb.generators) {
        alg.generators.push_back(parse_series(fl, pb.delta, g));
    }
    return alg;
}

} // namespace rigidpts

#endif
