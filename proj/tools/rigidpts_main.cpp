#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <rigidpts/pipeline.hpp>

using namespace rigidpts;

namespace
{

struct cli_args {
    std::string problem_path;
    std::string out_dir;
    std::string format = "csv";
    int workers = 0;
    long prec_ceiling = 0;
    std::string epsilon;
    std::string heights;
};

void emit(const cli_args &a, const std::string &stem, const std::string &csv, const json &js)
{
    const std::string body = a.format == "json" ? js.dump(2) + "\n" : csv;
    std::cout << body;
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        std::ofstream(std::filesystem::path(a.out_dir) / (stem + (a.format == "json" ? ".json" : ".csv"))) << body;
    }
}

void dump(const cli_args &a, const std::string &file, const std::string &text)
{
    if (a.out_dir.empty()) {
        return;
    }
    std::filesystem::create_directories(a.out_dir);
    std::ofstream(std::filesystem::path(a.out_dir) / file) << text;
}

template <typename Fl>
int run_mode(const std::string &mode, const Fl &fl, const problem &pb, const cli_args &a)
{
    run_options opt;
    opt.workers = a.workers;
    opt.prec_ceiling = a.prec_ceiling > 0 ? a.prec_ceiling : pb.prec_ceiling;
    opt.eps = a.epsilon.empty() ? pb.eps : parse_rational_string(a.epsilon);
    opt.heights = a.heights.empty() ? pb.heights : parse_heights(a.heights);
    if (sgn(opt.eps) <= 0) {
        throw parse_error("epsilon must be positive");
    }
    for (const auto &H : opt.heights) {
        (void)to_height(fl, H);
    }
    const auto alg = build_algebra(fl, pb);

    if (mode == "normalize") {
        std::vector<mpq_class> half(alg.nvars());
        for (std::size_t i = 0; i < half.size(); ++i) {
            half[i] = alg.delta[i] / 2;
        }
        const auto norm = full_normalize(alg, half);
        json w = witness_json(*norm.witness);
        json gens = json::array();
        for (const auto &g : alg.generators) {
            gens.push_back(g.to_string());
        }
        w["generators"] = gens;
        std::cout << w.dump(2) << "\n";
        dump(a, "witness.json", w.dump(2) + "\n");
        return 0;
    }

    if (mode == "count") {
        const pipeline<Fl> pl(fl, alg, pb, opt);
        const auto rep = pl.run();
        emit(a, "count", report_csv(rep), report_json(rep));
        return 0;
    }

    if (mode == "cover") {
        const pipeline<Fl> pl(fl, alg, pb, opt);
        run_report rep{pb.name, rational_string(opt.eps), {}};
        for (const auto &H : opt.heights) {
            const auto hr = pl.run_height(H);
            rep.rows.push_back(hr.row);
            json entries = json::array();
            std::string csv = "ball,degree,points,contained\n";
            if (hr.cov) {
                for (std::size_t i = 0; i < hr.cov->entries.size(); ++i) {
                    const auto &e = hr.cov->entries[i];
                    const bool contained = hr.verdicts[i] == alg_verdict::contained;
                    entries.push_back({{"ball", e.key.to_string()},
                                       {"hypersurface", hypersurface_json(fl, e.Q)},
                                       {"members", e.members},
                                       {"contained", contained}});
                    csv += e.key.to_string() + "," + std::to_string(e.Q.degree) + "," +
                           std::to_string(e.members.size()) + "," + (contained ? "1" : "0") + "\n";
                }
            }
            json cov = {{"H", H.get_str()},
                        {"branch", hr.cov && hr.cov->branch == cover_branch::large_h ? "large_h" : "small_h"},
                        {"depth", hr.cov ? hr.cov->depth : 0},
                        {"Dmax", hr.cov ? hr.cov->Dmax : 0u},
                        {"points", points_json(fl, hr.points.points)},
                        {"entries", entries}};
            dump(a, "cover_H" + H.get_str() + ".json", cov.dump(2) + "\n");
            dump(a, "cover_H" + H.get_str() + ".csv", csv);
        }
        emit(a, "cover", report_csv(rep), report_json(rep));
        return 0;
    }

    if (mode == "polylog") {
        const pipeline<Fl> pl(fl, alg, pb, opt);
        std::string csv = "H,h,points,bound,C,degree\n";
        json rows = json::array();
        for (const auto &Hn : opt.heights) {
            const auto H = to_height(fl, Hn);
            enum_options eo;
            eo.workers = opt.workers;
            eo.prec_ceiling = opt.prec_ceiling;
            const auto er = points_on_set(alg, H, eo);
            const auto cp = pl.params(er.retained);
            const long h = static_cast<long>(ceil_log(Hn, fl.q()));
            std::optional<polylog_result<Fl>> r;
            if (cp.fvars.size() == cp.d + 1) {
                r = polylog_hypersurface(fl, er.points, H, cp);
            }
            const std::string bound = r ? std::to_string(r->bound) : "";
            const std::string C = r ? rational_string(r->C) : "";
            const std::string deg = r ? std::to_string(r->Q.degree) : "";
            csv += Hn.get_str() + "," + std::to_string(h) + "," + std::to_string(er.points.size()) + "," + bound + "," +
                   C + "," + deg + "\n";
            rows.push_back({{"H", Hn.get_str()},
                            {"h", h},
                            {"points", er.points.size()},
                            {"bound", bound},
                            {"C", C},
                            {"degree", deg}});
            json dumpj = {{"H", Hn.get_str()}, {"points", points_json(fl, er.points)}};
            if (r) {
                dumpj["hypersurface"] = hypersurface_json(fl, r->Q);
            }
            dump(a, "polylog_H" + Hn.get_str() + ".json", dumpj.dump(2) + "\n");
        }
        emit(a, "polylog", csv, {{"problem", pb.name}, {"rows", rows}});
        return 0;
    }

    if (mode == "bench") {
        std::string csv = "H,h,points,serial_ms,parallel_ms,identical\n";
        json rows = json::array();
        auto serial = opt;
        serial.workers = 1;
        const pipeline<Fl> ps(fl, alg, pb, serial), pp(fl, alg, pb, opt);
        for (const auto &H : opt.heights) {
            const auto a1 = ps.run_height(H).row;
            const auto a2 = pp.run_height(H).row;
            const bool same = a1.key() == a2.key();
            std::ostringstream line;
            line << a1.H << ',' << a1.h << ',' << a1.points << ',' << std::fixed << std::setprecision(3) << a1.wall_ms
                 << ',' << a2.wall_ms << ',' << (same ? 1 : 0) << "\n";
            csv += line.str();
            rows.push_back({{"H", a1.H},
                            {"h", a1.h},
                            {"points", a1.points},
                            {"serial_ms", a1.wall_ms},
                            {"parallel_ms", a2.wall_ms},
                            {"identical", same}});
            if (!same) {
                throw invariant_violation("serial and parallel reports differ at H = " + a1.H);
            }
        }
        emit(a, "bench", csv, {{"problem", pb.name}, {"rows", rows}});
        return 0;
    }
    throw parse_error("unknown mode " + mode);
}

int dispatch(const std::string &mode, const cli_args &a)
{
    const auto pb = load_problem(a.problem_path);
    if (pb.kind == field_kind::padic) {
        return run_mode(mode, padic(pb.base), pb, a);
    }
    return run_mode(mode, tadic(pb.base), pb, a);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rational points of bounded height on non-archimedean analytic sets"};
    app.require_subcommand(1);
    cli_args a;
    for (const char *name : {"count", "cover", "polylog", "normalize", "bench"}) {
        auto *sub = app.add_subcommand(name);
        sub->add_option("--problem", a.problem_path, "problem file (JSON)")->required();
        sub->add_option("--out", a.out_dir, "output directory");
        sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", a.workers, "worker threads (1 = serial)");
        sub->add_option("--prec-ceiling", a.prec_ceiling, "maximum working precision");
        sub->add_option("--epsilon", a.epsilon, "exponent a/b");
        sub->add_option("--heights", a.heights, "comma-separated heights H");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string mode = app.get_subcommands().front()->get_name();
    try {
        return dispatch(mode, a);
    } catch (const precision_ceiling &e) {
        std::cerr << "precision ceiling: " << e.what() << "\n";
        return 2;
    } catch (const unsupported_presentation &e) {
        std::cerr << "unsupported presentation: " << e.what() << "\n";
        return 3;
    } catch (const no_solution &e) {
        std::cerr << "unsupported presentation: " << e.what() << "\n";
        return 3;
    } catch (const invariant_violation &e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const monic_check_failed &e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
