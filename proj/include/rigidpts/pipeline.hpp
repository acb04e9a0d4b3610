#ifndef RIGIDPTS_PIPELINE_HPP
#define RIGIDPTS_PIPELINE_HPP

#include <chrono>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <rigidpts/detmethod.hpp>
#include <rigidpts/normalize.hpp>
#include <rigidpts/problem.hpp>

namespace rigidpts
{

struct run_options {
    int workers = 0;
    long prec_ceiling = 4096;
    mpq_class eps{1, 2};
    std::vector<mpz_class> heights;
    bool cover = true;
};

struct run_row {
    std::string H;
    long h = 0;
    std::size_t points = 0;
    std::size_t ambiguous = 0;
    std::string branch = "none";
    std::size_t hypersurfaces = 0;
    unsigned max_degree = 0;
    unsigned dmax = 0;
    std::size_t contained = 0;
    std::size_t transcendental = 0;
    // floor(H^eps).
    std::string envelope;
    bool within = true;
    long prec = 0;
    double wall_ms = 0;

    // Every column except the wall time.
    std::string key() const;
};

struct run_report {
    std::string name;
    std::string eps;
    std::vector<run_row> rows;
};

std::string csv_header();
std::string csv_row(const run_row &r);
json row_json(const run_row &r);
std::string report_csv(const run_report &rep);
json report_json(const run_report &rep);

// floor(H^eps), exactly.
mpz_class height_power_floor(const mpz_class &H, const mpq_class &eps);

template <typename Fl>
typename Fl::height_t to_height(const Fl &fl, const mpz_class &H)
{
    if constexpr (Fl::kind == field_kind::tadic) {
        return exact_log(H, fl.q());
    } else {
        (void)fl;
        return H;
    }
}

template <typename Fl>
json hypersurface_json(const Fl &fl, const hypersurface<Fl> &Q)
{
    json c = json::array();
    for (std::size_t i = 0; i < Q.monos.size(); ++i) {
        if (!Q.coeffs[i].is_zero()) {
            c.push_back({{"exp", std::vector<std::uint32_t>(Q.monos[i].begin(), Q.monos[i].end())},
                         {"value", global_json(fl, Q.coeffs[i])}});
        }
    }
    return {{"degree", Q.degree}, {"vars", Q.vars}, {"coeffs", c}};
}

template <typename Fl>
hypersurface<Fl> parse_hypersurface(const Fl &fl, const json &j)
{
    hypersurface<Fl> Q;
    Q.degree = j.at("degree").get<unsigned>();
    Q.vars = j.at("vars").get<std::vector<std::size_t>>();
    for (const auto &c : j.at("coeffs")) {
        const auto e = c.at("exp").get<std::vector<std::uint32_t>>();
        Q.monos.emplace_back(e.begin(), e.end());
        Q.coeffs.push_back(parse_global(fl, c.at("value")));
    }
    return Q;
}

template <typename Fl>
json points_json(const Fl &fl, const std::vector<point_record<Fl>> &pts)
{
    json out = json::array();
    for (const auto &p : pts) {
        json c = json::array();
        for (const auto &v : p.coords) {
            c.push_back(global_json(fl, v));
        }
        out.push_back({{"coords", c}, {"ambiguous", p.ambiguous}});
    }
    return out;
}

template <typename Fl>
json witness_json(const normalization_witness<Fl> &w)
{
    std::vector<std::string> eps, leaf;
    for (const auto &e : w.eps) {
        eps.push_back(rational_string(e));
    }
    for (const auto &e : w.leaf_delta) {
        leaf.push_back(rational_string(e));
    }
    json steps = json::array();
    for (const auto &s : w.steps) {
        steps.push_back({{"var", s.var}, {"L", s.L}, {"relation", s.relation.to_string()}});
    }
    return {{"M", w.M},
            {"N", w.N},
            {"eps", eps},
            {"change", w.change()},
            {"L", w.L()},
            {"E", w.E},
            {"d", w.d()},
            {"retained", w.retained},
            {"leaf_delta", leaf},
            {"unit_check", w.unit_check},
            {"steps", steps}};
}

// Per-height output of the counting pipeline.
template <typename Fl>
struct height_run {
    run_row row;
    enum_result<Fl> points;
    std::optional<covering<Fl>> cov;
    std::vector<alg_verdict> verdicts;
};

template <typename Fl>
class pipeline
{
public:
    pipeline(const Fl &fl, presented_algebra<Fl> alg, const problem &pb, run_options opt)
        : m_fl(fl), m_alg(std::move(alg)), m_pb(pb), m_opt(std::move(opt))
    {
        std::vector<mpq_class> half(m_alg.nvars());
        for (std::size_t i = 0; i < half.size(); ++i) {
            half[i] = m_alg.delta[i] / 2;
        }
        try {
            m_E = full_normalize(m_alg, half).witness->E;
        } catch (const unsupported_presentation &) {
            m_E = 1;
        }
    }

    const presented_algebra<Fl> &algebra() const { return m_alg; }
    std::uint32_t module_rank() const { return m_E; }

    height_run<Fl> run_height(const mpz_class &Hn) const
    {
        const auto t0 = std::chrono::steady_clock::now();
        height_run<Fl> out;
        auto &row = out.row;
        const auto H = to_height(m_fl, Hn);
        row.H = Hn.get_str();
        row.h = static_cast<long>(ceil_log(Hn, m_fl.q()));
        enum_options eo;
        eo.workers = m_opt.workers;
        eo.prec_ceiling = m_opt.prec_ceiling;
        out.points = points_on_set(m_alg, H, eo);
        const auto &pts = out.points.points;
        row.points = pts.size();
        row.prec = out.points.prec;
        for (const auto &p : pts) {
            row.ambiguous += p.ambiguous ? 1 : 0;
        }
        const auto env = height_power_floor(Hn, m_opt.eps);
        row.envelope = env.get_str();
        const auto cp = params(out.points.retained);
        std::set<std::size_t> excluded;
        if (m_opt.cover && !pts.empty() && cp.fvars.size() == cp.d + 1) {
            out.cov = cover_by_hypersurfaces(m_fl, pts, H, cp);
            row.branch = out.cov->branch == cover_branch::large_h ? "large_h" : "small_h";
            row.hypersurfaces = out.cov->entries.size();
            row.max_degree = out.cov->max_degree();
            row.dmax = out.cov->Dmax;
            for (const auto &e : out.cov->entries) {
                const auto v = algebraic_flag(e.Q, m_alg, out.points.prec);
                out.verdicts.push_back(v);
                if (v == alg_verdict::contained) {
                    ++row.contained;
                    excluded.insert(e.members.begin(), e.members.end());
                }
            }
            row.within = mpz_class(static_cast<unsigned long>(row.hypersurfaces)) <= env;
        }
        row.transcendental = pts.size() - excluded.size();
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    run_report run() const
    {
        run_report rep;
        rep.name = m_pb.name;
        rep.eps = rational_string(m_opt.eps);
        for (const auto &H : m_opt.heights) {
            rep.rows.push_back(run_height(H).row);
        }
        return rep;
    }

    cover_params params(const std::vector<std::size_t> &retained) const
    {
        cover_params cp;
        cp.d = retained.size();
        cp.ball_coords = retained;
        cp.fvars = retained;
        for (std::size_t i = 0; i < m_alg.nvars() && cp.fvars.size() < cp.d + 1; ++i) {
            if (std::find(retained.begin(), retained.end(), i) == retained.end()) {
                cp.fvars.push_back(i);
            }
        }
        std::sort(cp.fvars.begin(), cp.fvars.end());
        cp.eps = m_opt.eps;
        cp.E = m_E;
        cp.sigma = m_pb.sigma;
        cp.workers = m_opt.workers;
        if (!retained.empty()) {
            cp.delta = m_alg.delta[retained.front()];
            for (auto i : retained) {
                cp.delta = std::min(cp.delta, m_alg.delta[i]);
            }
        }
        return cp;
    }

private:
    Fl m_fl;
    presented_algebra<Fl> m_alg;
    problem m_pb;
    run_options m_opt;
    std::uint32_t m_E = 1;
};

} // namespace rigidpts

#endif
