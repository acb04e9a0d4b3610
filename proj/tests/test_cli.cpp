#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <rigidpts/pipeline.hpp>

using namespace rigidpts;
namespace fs = std::filesystem;

namespace
{

struct run_out {
    int code = 0;
    std::string out;
};

std::string problem_file(const std::string &name)
{
    return std::string(RIGIDPTS_PROBLEMS) + "/" + name + ".json";
}

fs::path scratch(const std::string &name)
{
    auto p = fs::temp_directory_path() / ("rigidpts_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

run_out cli(const std::string &args)
{
    const char *exe = std::getenv("RIGIDPTS_CLI");
    REQUIRE(exe != nullptr);
    const auto tmp = fs::temp_directory_path() / "rigidpts_cli_stdout.txt";
    const std::string cmd = std::string(exe) + " " + args + " > " + tmp.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    run_out r;
    r.code = WEXITSTATUS(status);
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string &text)
{
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) {
            cells.push_back(c);
        }
        rows.push_back(cells);
    }
    return rows;
}

// Drop the trailing wall-time column.
std::string without_times(const std::string &text)
{
    std::string out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        out += line.substr(0, line.rfind(',')) + "\n";
    }
    return out;
}

json read_json(const fs::path &p)
{
    std::ifstream in(p);
    return json::parse(in);
}

template <typename Fl>
void check_round_trip(const Fl &fl, const json &cov)
{
    std::vector<std::vector<typename Fl::global>> pts;
    for (const auto &p : cov.at("points")) {
        std::vector<typename Fl::global> c;
        for (const auto &v : p.at("coords")) {
            c.push_back(parse_global(fl, v));
        }
        pts.push_back(c);
    }
    std::set<std::size_t> covered;
    for (const auto &e : cov.at("entries")) {
        const auto Q = parse_hypersurface(fl, e.at("hypersurface"));
        for (const auto i : e.at("members").get<std::vector<std::size_t>>()) {
            CHECK(Q(fl, pts.at(i)).is_zero());
            covered.insert(i);
        }
    }
    CHECK(covered.size() == pts.size());
}

} // namespace

TEST_CASE("empty ideal counts every point")
{
    const auto r = cli("count --problem " + problem_file("empty_q5"));
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1u);
    CHECK(rows[0][0] == "2");
    CHECK(rows[0][2] == "7");
    CHECK(rows[0][9] == "7");
}

TEST_CASE("unit ideal has no points")
{
    const auto r = cli("count --problem " + problem_file("unit_f2"));
    REQUIRE(r.code == 0);
    for (const auto &row : csv_rows(r.out)) {
        CHECK(row[2] == "0");
        CHECK(row[9] == "0");
    }
}

TEST_CASE("graph counts are monotone and covered")
{
    const auto r = cli("count --problem " + problem_file("graph_f2") + " --heights 2,4,8,16,32");
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5u);
    long prev = 0;
    for (const auto &row : rows) {
        const long n = std::stol(row[2]);
        CHECK(n >= prev);
        prev = n;
        // A single point lies on one hyperplane.
        CHECK(row[5] == "1");
        CHECK(row[6] == "1");
        CHECK(row[11] == "1");
    }
}

TEST_CASE("reports are reproducible across runs and worker counts")
{
    const auto a = cli("count --problem " + problem_file("parabola_f2") + " --workers 1");
    const auto b = cli("count --problem " + problem_file("parabola_f2") + " --workers 3");
    const auto c = cli("count --problem " + problem_file("parabola_f2") + " --workers 3");
    REQUIRE(a.code == 0);
    CHECK(without_times(a.out) == without_times(b.out));
    CHECK(without_times(b.out) == without_times(c.out));
    const auto bench = cli("bench --problem " + problem_file("parabola_f2") + " --workers 2 --heights 2,4,8");
    REQUIRE(bench.code == 0);
    for (const auto &row : csv_rows(bench.out)) {
        CHECK(row.back() == "1");
    }
}

TEST_CASE("hypersurface dumps round-trip to exact zeros")
{
    const auto dir = scratch("cover_f2");
    const auto r = cli("cover --problem " + problem_file("parabola_f2") + " --heights 4,16 --out " + dir.string());
    REQUIRE(r.code == 0);
    for (const char *H : {"4", "16"}) {
        const auto cov = read_json(dir / (std::string("cover_H") + H + ".json"));
        check_round_trip(tadic(2), cov);
    }
    CHECK(read_json(dir / "cover_H16.json").at("branch") == "large_h");
    CHECK(fs::exists(dir / "cover_H16.csv"));

    const auto dq = scratch("cover_q5");
    REQUIRE(cli("cover --problem " + problem_file("cubic_q5") + " --heights 3,10 --out " + dq.string()).code == 0);
    check_round_trip(padic(5), read_json(dq / "cover_H10.json"));

    const auto dj = scratch("cover_json");
    const auto rj = cli("cover --problem " + problem_file("graph_f2") + " --heights 2 --format json --out " + dj.string());
    REQUIRE(rj.code == 0);
    const auto rep = json::parse(rj.out);
    CHECK(rep.at("rows").size() == 1u);
    CHECK(rep.at("rows")[0].at("hypersurfaces") == 1);
    check_round_trip(tadic(2), read_json(dj / "cover_H2.json"));
}

TEST_CASE("covering never loses points")
{
    const auto dir = scratch("cover_all");
    REQUIRE(cli("cover --problem " + problem_file("cubic_q5") + " --heights 6 --out " + dir.string()).code == 0);
    const auto cov = read_json(dir / "cover_H6.json");
    std::size_t members = 0;
    for (const auto &e : cov.at("entries")) {
        members += e.at("members").size();
    }
    CHECK(members == cov.at("points").size());
    // Algebraic curves are recognised as contained.
    const auto par = csv_rows(cli("count --problem " + problem_file("parabola_f2") + " --heights 16").out);
    CHECK(par[0][8] == par[0][5]);
    CHECK(par[0][9] == "0");
}

TEST_CASE("polylog reports the constant")
{
    const auto r = cli("polylog --problem " + problem_file("graph_f2") + " --heights 2,4,8");
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3u);
    CHECK(rows[0][3] == "10");
    CHECK(rows[0][4] == "10");
    CHECK(rows[2][4] == "34/3");
}

TEST_CASE("normalization witnesses")
{
    const auto s = cli("normalize --problem " + problem_file("sqrt_relation_f2"));
    REQUIRE(s.code == 0);
    const auto w = json::parse(s.out);
    CHECK(w.at("E") == 2);
    CHECK(w.at("L") == 2);
    CHECK(w.at("unit_check") == true);
    const auto g = json::parse(cli("normalize --problem " + problem_file("graph_f2")).out);
    CHECK(g.at("E") == 1);
    CHECK(g.at("d") == 1);
    const auto e = json::parse(cli("normalize --problem " + problem_file("empty_q5")).out);
    CHECK(e.at("change") == "identity");
    CHECK(e.at("d") == 1);
}

TEST_CASE("exit codes")
{
    CHECK(cli("count --problem " + problem_file("graph_f2") + " --heights 16 --prec-ceiling 20").code == 2);
    const auto dir = scratch("bad");
    std::ofstream(dir / "series_f.json")
        << R"({"field":{"kind":"tadic","q":2},"n":2,"generators":[],"f":[{"terms":[]}],"experiment":{"heights":[2]}})";
    CHECK(cli("count --problem " + (dir / "series_f.json").string()).code == 3);
    std::ofstream(dir / "flat.json") << R"({"field":{"kind":"tadic","q":2},"n":2,"delta":["0","0"],
        "generators":[{"terms":[{"exponents":[1,1],"coeff":1},{"exponents":[0,0],"coeff":[[0],[1]]}]}]})";
    CHECK(cli("normalize --problem " + (dir / "flat.json").string()).code == 3);
    CHECK(cli("count --problem " + problem_file("graph_f2") + " --heights 5").code == 1);
    CHECK(cli("count --problem /nonexistent.json").code == 1);
}

TEST_CASE("series literal parsing")
{
    const tadic F2(2);
    const std::vector<mpq_class> delta(2, 0);
    const auto g = parse_series(F2, delta,
                                json::parse(R"({"terms":[{"exponents":[0,1],"coeff":1},
                                                 {"exponents":[2,0],"coeff":[[0],[1],[1]]},
                                                 {"exponents":[1,0],"coeff":1,"val_shift":"3/2"}],
                                       "cutoff":4,"tail_val":"5"})"));
    CHECK(g.root_index() == 2u);
    CHECK(g.cutoff() == std::optional<std::uint32_t>(4));
    CHECK(g.terms().size() == 3u);
    const padic Q5(5);
    CHECK(parse_z_poly(5, json::parse("[[1],[2]]")) == 11);
    CHECK(parse_z_poly(5, json::parse("\"123456789012345678901234567890\"")) ==
          mpz_class("123456789012345678901234567890"));
    CHECK(parse_global(Q5, json("-3/10")) == rational(mpz_class(-3), mpz_class(10)));
    const ratfunc v(fq_poly(F2.ff(), {1, 0, 1}), fq_poly(F2.ff(), {1, 1}));
    CHECK(parse_global(F2, global_json(F2, v)) == v);
    CHECK(exact_log(64, 2) == 6);
    CHECK_THROWS_AS(exact_log(48, 2), parse_error);
    CHECK(height_power_floor(64, mpq_class(1, 2)) == 8);
    CHECK(height_power_floor(32, mpq_class(1, 2)) == 5);
}
