#include <rigidpts/problem.hpp>

#include <fstream>
#include <sstream>

#include <rigidpts/detmethod.hpp>

namespace rigidpts
{

mpq_class parse_rational_string(const std::string &s)
{
    mpq_class v;
    if (v.set_str(s, 10) != 0) {
        throw parse_error("bad rational: " + s);
    }
    v.canonicalize();
    return v;
}

std::string rational_string(const mpq_class &v)
{
    return v.get_str();
}

long exact_log(const mpz_class &H, std::uint32_t q)
{
    const auto h = static_cast<long>(ceil_log(H, q));
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), q, static_cast<unsigned long>(h));
    if (pw != H) {
        throw parse_error("height " + H.get_str() + " is not a power of " + std::to_string(q));
    }
    return h;
}

std::vector<mpz_class> parse_heights(const std::string &list)
{
    std::vector<mpz_class> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        mpz_class H;
        if (H.set_str(item, 10) != 0 || H < 1) {
            throw parse_error("bad height: " + item);
        }
        out.push_back(H);
    }
    return out;
}

namespace
{

mpz_class json_int(const json &j)
{
    if (j.is_number_integer()) {
        return mpz_class(j.get<long>());
    }
    if (j.is_string()) {
        return mpz_class(j.get<std::string>());
    }
    throw parse_error("expected an integer");
}

} // namespace

fq_poly parse_fq_poly(const finite_field &F, const json &j)
{
    if (j.is_number_integer()) {
        return fq_poly::constant(F, F.from_int(j.get<long long>()));
    }
    std::vector<fq_t> c;
    for (const auto &e : j) {
        if (e.is_number_integer()) {
            c.push_back(F.from_int(e.get<long long>()));
        } else {
            c.push_back(F.from_digits(e.get<std::vector<std::uint32_t>>()));
        }
    }
    return fq_poly(F, std::move(c));
}

json fq_poly_json(const fq_poly &a)
{
    json out = json::array();
    for (const auto c : a.coeffs()) {
        out.push_back(a.field().digits(c));
    }
    return out;
}

mpz_class parse_z_poly(std::uint32_t p, const json &j)
{
    if (!j.is_array()) {
        return json_int(j);
    }
    mpz_class r = 0, pw = 1;
    for (const auto &e : j) {
        const json &c = e.is_array() ? e.at(0) : e;
        r += json_int(c) * pw;
        pw *= p;
    }
    return r;
}

json global_json(const padic &, const rational &v)
{
    return v.to_string();
}

json global_json(const tadic &, const ratfunc &v)
{
    return {{"num", fq_poly_json(v.num())}, {"den", fq_poly_json(v.den())}};
}

rational parse_global(const padic &, const json &j)
{
    const auto v = parse_rational_string(j.get<std::string>());
    return rational(v.get_num(), v.get_den());
}

ratfunc parse_global(const tadic &fl, const json &j)
{
    return ratfunc(parse_fq_poly(fl.ff(), j.at("num")), parse_fq_poly(fl.ff(), j.at("den")));
}

problem parse_problem(const json &j)
{
    problem pb;
    pb.name = j.value("name", std::string("problem"));
    const auto &fb = j.at("field");
    const auto kind = fb.at("kind").get<std::string>();
    if (kind == "padic") {
        pb.kind = field_kind::padic;
        pb.base = fb.at("p").get<std::uint32_t>();
    } else if (kind == "tadic") {
        pb.kind = field_kind::tadic;
        pb.base = fb.at("q").get<std::uint32_t>();
    } else {
        throw parse_error("unknown field kind " + kind);
    }
    pb.sigma = fb.value("sigma", 1u);
    pb.prec_ceiling = fb.value("prec_ceiling", 4096L);
    pb.n = j.at("n").get<std::size_t>();
    if (j.contains("delta")) {
        for (const auto &d : j.at("delta")) {
            pb.delta.push_back(d.is_string() ? parse_rational_string(d.get<std::string>()) : mpq_class(d.get<long>()));
        }
    } else {
        pb.delta.assign(pb.n, 0);
    }
    if (pb.delta.size() != pb.n) {
        throw parse_error("delta length does not match n");
    }
    pb.generators = j.value("generators", json::array());
    if (j.contains("f")) {
        if (!j.at("f").is_string()) {
            throw unsupported_presentation("only f = \"coordinates\" is supported");
        }
        pb.f = j.at("f").get<std::string>();
        if (pb.f != "coordinates") {
            throw unsupported_presentation("only f = \"coordinates\" is supported");
        }
    }
    if (j.contains("experiment")) {
        const auto &ex = j.at("experiment");
        if (ex.contains("heights")) {
            for (const auto &h : ex.at("heights")) {
                pb.heights.push_back(json_int(h));
            }
        } else if (ex.contains("h_range")) {
            const auto r = ex.at("h_range").get<std::vector<long>>();
            for (long h = r.at(0); h <= r.at(1); ++h) {
                mpz_class H;
                mpz_ui_pow_ui(H.get_mpz_t(), pb.base, static_cast<unsigned long>(h));
                pb.heights.push_back(H);
            }
        }
        if (ex.contains("epsilon")) {
            pb.eps = parse_rational_string(ex.at("epsilon").get<std::string>());
        }
        pb.mode = ex.value("mode", pb.mode);
    }
    return pb;
}

problem load_problem(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open " + path);
    }
    try {
        return parse_problem(json::parse(in));
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace rigidpts
