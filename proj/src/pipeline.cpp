#include <rigidpts/pipeline.hpp>

#include <iomanip>

namespace rigidpts
{

std::string run_row::key() const
{
    auto r = *this;
    r.wall_ms = 0;
    return csv_row(r);
}

mpz_class height_power_floor(const mpz_class &H, const mpq_class &eps)
{
    mpz_class a, r;
    mpz_pow_ui(a.get_mpz_t(), H.get_mpz_t(), eps.get_num().get_ui());
    mpz_root(r.get_mpz_t(), a.get_mpz_t(), eps.get_den().get_ui());
    return r;
}

std::string csv_header()
{
    return "H,h,points,ambiguous,branch,hypersurfaces,max_degree,dmax,contained,transcendental,envelope,within_envelope,prec,"
           "wall_ms";
}

std::string csv_row(const run_row &r)
{
    std::ostringstream s;
    s << r.H << ',' << r.h << ',' << r.points << ',' << r.ambiguous << ',' << r.branch << ',' << r.hypersurfaces << ',' << r.max_degree
      << ',' << r.dmax << ',' << r.contained << ',' << r.transcendental << ',' << r.envelope << ','
      << (r.within ? 1 : 0) << ',' << r.prec << ',' << std::fixed << std::setprecision(3) << r.wall_ms;
    return s.str();
}

json row_json(const run_row &r)
{
    return {{"H", r.H},
            {"h", r.h},
            {"points", r.points},
            {"ambiguous", r.ambiguous},
            {"branch", r.branch},
            {"hypersurfaces", r.hypersurfaces},
            {"max_degree", r.max_degree},
            {"dmax", r.dmax},
            {"contained", r.contained},
            {"transcendental", r.transcendental},
            {"envelope", r.envelope},
            {"within_envelope", r.within},
            {"prec", r.prec},
            {"wall_ms", r.wall_ms}};
}

std::string report_csv(const run_report &rep)
{
    std::string out = csv_header() + "\n";
    for (const auto &r : rep.rows) {
        out += csv_row(r) + "\n";
    }
    return out;
}

json report_json(const run_report &rep)
{
    json rows = json::array();
    for (const auto &r : rep.rows) {
        rows.push_back(row_json(r));
    }
    return {{"problem", rep.name}, {"epsilon", rep.eps}, {"rows", rows}};
}

} // namespace rigidpts
