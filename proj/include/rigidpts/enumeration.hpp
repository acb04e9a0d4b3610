#ifndef RIGIDPTS_ENUMERATION_HPP
#define RIGIDPTS_ENUMERATION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <omp.h>

#include <rigidpts/heights.hpp>
#include <rigidpts/normalize.hpp>

namespace rigidpts
{

template <typename Fl>
struct point_record {
    using global = typename Fl::global;
    std::vector<global> coords;
    std::vector<local_num<Fl>> local;
    // Values of the distinguished functions (the coordinates).
    std::vector<global> f_values;
    typename Fl::height_t height{};
    // Membership certified only to precision.
    bool ambiguous = false;
    // Positions of the coordinates in enumeration order.
    std::vector<std::size_t> order;

    friend bool operator<(const point_record &a, const point_record &b) { return a.order < b.order; }
    friend bool operator==(const point_record &a, const point_record &b) { return a.coords == b.coords; }
};

// Residues mod pi^depth of selected coordinates.
template <typename Fl>
struct ball_key {
    long depth = 1;
    std::vector<typename Fl::integer> residues;

    friend bool operator<(const ball_key &a, const ball_key &b)
    {
        if (a.depth != b.depth) {
            return a.depth < b.depth;
        }
        return a.residues < b.residues;
    }
    friend bool operator==(const ball_key &a, const ball_key &b)
    {
        return a.depth == b.depth && a.residues == b.residues;
    }
    std::string to_string() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < residues.size(); ++i) {
            s += (i ? "," : "") + ring::to_string(residues[i]);
        }
        return s + "]";
    }
};

// Coordinates x = shift + pi^scale * z; the presented generators are written in z.
template <typename Fl>
struct chart {
    std::vector<typename Fl::integer> shift;
    long scale = 0;
};

struct enum_options {
    // 0 selects the default policy.
    long prec = 0;
    long prec_ceiling = 4096;
    long verify_guard = 8;
    // 0: OpenMP default, 1: serial.
    int workers = 0;
};

template <typename Fl>
struct enum_result {
    std::vector<point_record<Fl>> points;
    long prec = 0;
    std::size_t ambiguous = 0;
    std::size_t raises = 0;
    std::vector<std::size_t> retained;
};

inline long default_precision(const padic &fl, const mpz_class &H)
{
    return min_guard_precision(fl, H) + 8;
}
inline long default_precision(const tadic &, long h)
{
    return 2 * h + 8;
}

// Exact value of a polynomial with exact coefficients at a global point; none for truncated or ramified input.
template <typename Fl>
std::optional<typename Fl::global> evaluate_exact(const power_series<Fl> &G, const std::vector<typename Fl::global> &x)
{
    using global = typename Fl::global;
    if (!G.is_polynomial() || !G.prec().is_inf() || G.root_index() != 1u) {
        return std::nullopt;
    }
    const Fl &fl = G.field();
    global acc(fl.zero());
    for (const auto &[e, c] : G.terms()) {
        global term = fl.make_global(c.comps.front().second);
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) {
                term *= x[i];
            }
        }
        acc += term;
    }
    return acc;
}

template <typename Fl>
std::vector<typename Fl::global> value_list(const Fl &fl, const typename Fl::height_t &H)
{
    return enum_heights(fl, H);
}

// The q^n residue translation vectors covering the unit polydisc by discs of radius |t|.
template <typename Fl>
std::vector<std::vector<typename Fl::integer>> unit_cover_shifts(const Fl &fl, std::size_t n)
{
    const std::uint32_t q = fl.q();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= q;
    }
    std::vector<std::vector<typename Fl::integer>> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<typename Fl::integer> s(n);
        std::size_t r = idx;
        for (std::size_t i = n; i-- > 0;) {
            s[i] = fl.lift(static_cast<std::uint32_t>(r % q));
            r /= q;
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Generators transported to the piece x = s + t z; radii grow by one.
template <typename Fl>
presented_algebra<Fl> shifted_piece(const presented_algebra<Fl> &alg, const std::vector<typename Fl::integer> &s)
{
    presented_algebra<Fl> out;
    out.fl = alg.fl;
    const std::size_t n = alg.nvars();
    std::vector<coeff<Fl>> cs;
    for (const auto &v : s) {
        cs.push_back(coeff<Fl>::from_integer(v));
    }
    const std::vector<mpq_class> one(n, 1);
    for (const auto &g : alg.generators) {
        out.generators.push_back(g.translate(cs).rescale(one));
    }
    out.delta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.delta[i] = alg.delta[i] + 1;
    }
    return out;
}

namespace detail
{

template <typename Fl>
long long floor_units(const valuation &v, std::uint64_t N)
{
    mpq_class u = v.value() * static_cast<unsigned long>(N);
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
    return f.get_si();
}

// Polynomial in the eliminated variables after substituting the retained values.
template <typename Fl>
struct partial_poly {
    std::uint64_t N = 1;
    long long cap = 0;
    std::vector<std::pair<exponent, local_elem<Fl>>> terms;
};

template <typename Fl>
partial_poly<Fl> specialize(const power_series<Fl> &G, const std::vector<std::size_t> &retained,
                            const std::vector<std::size_t> &elim, const std::vector<local_num<Fl>> &z, long W)
{
    const Fl &fl = G.field();
    partial_poly<Fl> out;
    out.N = G.root_index();
    const auto N = out.N;
    long long cap = static_cast<long long>(W) * static_cast<long long>(N);
    if (!G.prec().is_inf()) {
        cap = std::min(cap, floor_units<Fl>(G.prec(), N));
    }
    if (G.cutoff()) {
        mpq_class slack = -1;
        for (std::size_t i = 0; i < G.nvars(); ++i) {
            mpq_class m = G.delta()[i];
            if (std::find(retained.begin(), retained.end(), i) != retained.end() && !z[i].is_zero()) {
                m += z[i].val();
            } else if (std::find(retained.begin(), retained.end(), i) != retained.end()) {
                m += z[i].prec();
            }
            if (slack < 0 || m < slack) {
                slack = m;
            }
        }
        cap = std::min(cap, floor_units<Fl>(G.tail() + valuation(mpq_class(slack * (*G.cutoff() + 1))), N));
    }
    out.cap = cap;
    const long wnum = W + 2;
    std::map<exponent, local_elem<Fl>> acc;
    for (const auto &[e, c] : G.terms()) {
        local_elem<Fl> a(fl, N, static_cast<long long>(wnum) * static_cast<long long>(N));
        for (const auto &[j, x] : c.comps) {
            a.add_component(j, local_num<Fl>::from_integer(fl, x, wnum));
        }
        for (auto i : retained) {
            if (e[i] != 0u) {
                a = a * local_elem<Fl>(z[i].pow(e[i]), N);
            }
        }
        exponent key(elim.size());
        for (std::size_t k = 0; k < elim.size(); ++k) {
            key[k] = e[elim[k]];
        }
        auto it = acc.find(key);
        if (it == acc.end()) {
            acc.emplace(key, a);
        } else {
            it->second = it->second + a;
        }
    }
    for (auto &[e, v] : acc) {
        out.terms.emplace_back(e, v.with_prec_units(cap));
    }
    return out;
}

// True when the specialized generator vanishes to precision k at y (each y_i known mod pi^k).
template <typename Fl>
bool vanishes_to(const partial_poly<Fl> &P, const std::vector<local_num<Fl>> &y, long k)
{
    const long long need = static_cast<long long>(k) * static_cast<long long>(P.N);
    if (P.cap < need) {
        throw precision_ceiling("generator precision below the working precision");
    }
    if (P.terms.empty()) {
        return true;
    }
    const Fl &fl = y.empty() ? P.terms.front().second.field() : y.front().field();
    local_elem<Fl> acc(fl, P.N, need);
    for (const auto &[e, c] : P.terms) {
        local_elem<Fl> a = c.with_prec_units(need);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] != 0u) {
                a = a * local_elem<Fl>(y[i].pow(e[i]), P.N);
            }
        }
        acc = acc + a;
    }
    return acc.with_prec_units(need).is_zero();
}

template <typename Fl>
struct sweep_context {
    using global = typename Fl::global;
    using integer = typename Fl::integer;
    Fl fl;
    typename Fl::height_t H{};
    std::vector<power_series<Fl>> gens;
    std::vector<std::size_t> retained, elim;
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<global> values;
    std::unordered_map<std::string, std::size_t> index_of;
    chart<Fl> ch;
    long P = 0, guard = 8;
    std::size_t n = 0;
};

template <typename Fl>
struct sweep_out {
    std::vector<point_record<Fl>> points;
    std::size_t near_misses = 0;
};

template <typename Fl>
typename Fl::global chart_z(const sweep_context<Fl> &cx, std::size_t i, const typename Fl::global &x)
{
    using global = typename Fl::global;
    if (cx.ch.scale == 0 && cx.ch.shift.empty()) {
        return x;
    }
    global s = cx.ch.shift.empty() ? global(cx.fl.zero()) : cx.fl.make_global(cx.ch.shift[i]);
    return (x - s) / cx.fl.make_global(cx.fl.pi_pow(cx.ch.scale));
}

template <typename Fl>
local_num<Fl> chart_local(const sweep_context<Fl> &cx, std::size_t i, const typename Fl::global &x, long prec)
{
    auto lx = local_embed(cx.fl, x, prec + cx.ch.scale);
    if (!cx.ch.shift.empty()) {
        lx = lx - local_num<Fl>::from_integer(cx.fl, cx.ch.shift[i], prec + cx.ch.scale);
    }
    return lx.shift(-cx.ch.scale);
}

// Membership work for one tuple of retained values.
template <typename Fl>
void process_tuple(const sweep_context<Fl> &cx, const std::vector<std::size_t> &tuple, sweep_out<Fl> &out)
{
    using global = typename Fl::global;
    using integer = typename Fl::integer;
    const Fl &fl = cx.fl;
    const long Pv = cx.P + cx.guard;
    std::vector<local_num<Fl>> z(cx.n, local_num<Fl>(fl, Pv));
    for (std::size_t k = 0; k < cx.retained.size(); ++k) {
        const auto i = cx.retained[k];
        z[i] = chart_local(cx, i, cx.values[tuple[k]], Pv);
    }
    std::vector<partial_poly<Fl>> polys;
    polys.reserve(cx.gens.size());
    for (const auto &g : cx.gens) {
        polys.push_back(specialize(g, cx.retained, cx.elim, z, Pv));
    }
    const std::size_t m = cx.elim.size();
    const std::uint32_t q = fl.q();
    std::size_t branch = 1;
    for (std::size_t k = 0; k < m; ++k) {
        branch *= q;
    }

    auto accept = [&](const std::vector<integer> &res) {
        std::vector<global> x(cx.n);
        std::vector<std::size_t> order(cx.n);
        for (std::size_t k = 0; k < cx.retained.size(); ++k) {
            x[cx.retained[k]] = cx.values[tuple[k]];
            order[cx.retained[k]] = tuple[k];
        }
        for (std::size_t k = 0; k < m; ++k) {
            const auto i = cx.elim[k];
            integer rep = fl.mul_pi(res[k], cx.ch.scale);
            if (!cx.ch.shift.empty()) {
                rep = rep + cx.ch.shift[i];
            }
            const auto loc = local_num<Fl>::from_integer(fl, rep, cx.P + cx.ch.scale);
            const auto rec = rational_reconstruct(loc, cx.H);
            if (!rec) {
                return;
            }
            const auto it = cx.index_of.find(rec->to_string());
            if (it == cx.index_of.end()) {
                return;
            }
            x[i] = *rec;
            order[i] = it->second;
        }
        std::vector<global> zg(cx.n);
        std::vector<local_num<Fl>> zl(cx.n);
        for (std::size_t i = 0; i < cx.n; ++i) {
            zg[i] = chart_z(cx, i, x[i]);
            zl[i] = chart_local(cx, i, x[i], Pv);
        }
        bool ambiguous = false;
        for (const auto &g : cx.gens) {
            if (const auto ex = evaluate_exact(g, zg)) {
                if (!ex->is_zero()) {
                    return;
                }
                continue;
            }
            std::vector<local_elem<Fl>> ze;
            for (const auto &c : zl) {
                ze.emplace_back(c);
            }
            const auto v = g.evaluate(ze);
            if (v.prec_units() < static_cast<long long>(Pv) * static_cast<long long>(v.root_index())) {
                throw precision_ceiling("generator precision below the verification precision");
            }
            if (!v.is_zero()) {
                ++out.near_misses;
                return;
            }
            ambiguous = true;
        }
        point_record<Fl> rec;
        rec.coords = x;
        rec.f_values = x;
        rec.order = order;
        rec.ambiguous = ambiguous;
        rec.height = fl.height(x.front());
        for (std::size_t i = 0; i < cx.n; ++i) {
            rec.height = std::max(rec.height, fl.height(x[i]));
            rec.local.push_back(local_embed(fl, x[i], cx.P));
        }
        out.points.push_back(std::move(rec));
    };

    // Residue tree on the eliminated coordinates: extend one pi-adic digit per level.
    std::vector<integer> res(m, fl.zero());
    std::vector<local_num<Fl>> y(m);
    auto passes = [&](const std::vector<integer> &r, long k) {
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = local_num<Fl>::from_integer(fl, r[j], k);
        }
        for (const auto &p : polys) {
            if (!vanishes_to(p, y, k)) {
                return false;
            }
        }
        return true;
    };
    if (!passes(res, 0) || (m == 0 && !passes(res, cx.P))) {
        return;
    }
    if (m == 0) {
        accept(res);
        return;
    }
    std::vector<std::pair<std::vector<integer>, long>> stack{{res, 0}};
    while (!stack.empty()) {
        auto [r, k] = std::move(stack.back());
        stack.pop_back();
        if (k == cx.P) {
            accept(r);
            continue;
        }
        const integer pk = fl.pi_pow(k);
        for (std::size_t b = branch; b-- > 0;) {
            std::vector<integer> child = r;
            std::size_t code = b;
            for (std::size_t j = 0; j < m; ++j) {
                const auto digit = static_cast<std::uint32_t>(code % q);
                code /= q;
                if (digit != 0u) {
                    child[j] = child[j] + fl.lift(digit) * pk;
                }
            }
            if (passes(child, k + 1)) {
                stack.emplace_back(std::move(child), k + 1);
            }
        }
    }
}

template <typename Fl>
std::size_t tuple_count(const sweep_context<Fl> &cx)
{
    std::size_t total = 1;
    for (const auto &c : cx.candidates) {
        total *= c.size();
    }
    return total;
}

template <typename Fl>
std::vector<std::size_t> tuple_at(const sweep_context<Fl> &cx, std::size_t idx)
{
    std::vector<std::size_t> t(cx.candidates.size());
    for (std::size_t k = cx.candidates.size(); k-- > 0;) {
        const auto sz = cx.candidates[k].size();
        t[k] = cx.candidates[k][idx % sz];
        idx /= sz;
    }
    return t;
}

} // namespace detail

// Serial membership sweep over all retained tuples.
template <typename Fl>
detail::sweep_out<Fl> membership_sweep_serial(const detail::sweep_context<Fl> &cx)
{
    detail::sweep_out<Fl> out;
    const auto total = detail::tuple_count(cx);
    for (std::size_t idx = 0; idx < total; ++idx) {
        detail::process_tuple(cx, detail::tuple_at(cx, idx), out);
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

// OpenMP twin of membership_sweep_serial; identical output.
template <typename Fl>
detail::sweep_out<Fl> membership_sweep_parallel(const detail::sweep_context<Fl> &cx, int workers)
{
    const auto total = detail::tuple_count(cx);
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    std::vector<detail::sweep_out<Fl>> parts(static_cast<std::size_t>(threads));
    std::vector<std::string> errors(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 8)
        for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
            if (!errors[tid].empty()) {
                continue;
            }
            try {
                detail::process_tuple(cx, detail::tuple_at(cx, static_cast<std::size_t>(idx)), parts[tid]);
            } catch (const precision_ceiling &e) {
                errors[tid] = e.what();
            }
        }
    }
    detail::sweep_out<Fl> out;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        if (!errors[t].empty()) {
            throw precision_ceiling(errors[t]);
        }
        out.near_misses += parts[t].near_misses;
        for (auto &p : parts[t].points) {
            out.points.push_back(std::move(p));
        }
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

namespace detail
{

// Retained coordinates from the witness; falls back to all but the last coordinate.
template <typename Fl>
std::vector<std::size_t> retained_coordinates(const presented_algebra<Fl> &alg)
{
    const std::size_t n = alg.nvars();
    std::vector<power_series<Fl>> gens;
    for (const auto &g : alg.generators) {
        if (!g.is_zero()) {
            gens.push_back(g);
        }
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i;
    }
    if (gens.empty()) {
        return all;
    }
    std::optional<normalization_witness<Fl>> w = alg.witness;
    if (!w) {
        try {
            std::vector<mpq_class> half(n);
            for (std::size_t i = 0; i < n; ++i) {
                half[i] = alg.delta[i] / 2;
            }
            w = full_normalize(alg, half).witness;
        } catch (const error &) {
            w.reset();
        }
    }
    if (w) {
        return w->retained;
    }
    all.pop_back();
    return all;
}

} // namespace detail

// All points of height <= H in the unit polydisc on the zero set of the generators.
template <typename Fl>
enum_result<Fl> points_on_set(const presented_algebra<Fl> &alg, const typename Fl::height_t &H,
                              const enum_options &opt = {}, const chart<Fl> &ch = {})
{
    enum_result<Fl> res;
    const Fl &fl = alg.fl;
    const std::size_t n = alg.nvars();
    if (alg.witness && alg.witness->E == 0u) {
        res.prec = opt.prec > 0 ? opt.prec : default_precision(fl, H);
        return res;
    }
    detail::sweep_context<Fl> cx;
    cx.fl = fl;
    cx.H = H;
    cx.n = n;
    cx.ch = ch;
    cx.guard = opt.verify_guard;
    for (const auto &g : alg.generators) {
        if (!g.is_zero()) {
            cx.gens.push_back(g);
        }
    }
    for (const auto &g : cx.gens) {
        if (detail::is_unit_relation(content_divide(to_unit_coordinates(g)))) {
            res.prec = opt.prec > 0 ? opt.prec : default_precision(fl, H);
            return res;
        }
    }
    cx.retained = detail::retained_coordinates(alg);
    res.retained = cx.retained;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(cx.retained.begin(), cx.retained.end(), i) == cx.retained.end()) {
            cx.elim.push_back(i);
        }
    }
    cx.values = value_list(fl, H);
    for (std::size_t k = 0; k < cx.values.size(); ++k) {
        cx.index_of.emplace(cx.values[k].to_string(), k);
    }
    for (auto i : cx.retained) {
        std::vector<std::size_t> c;
        for (std::size_t k = 0; k < cx.values.size(); ++k) {
            if (ch.scale > 0) {
                const auto r = local_embed(fl, cx.values[k], ch.scale).rep(ch.scale);
                if (!ring::is_zero(fl.mod_pi(r - ch.shift[i], ch.scale))) {
                    continue;
                }
            }
            c.push_back(k);
        }
        cx.candidates.push_back(std::move(c));
    }
    long P = opt.prec > 0 ? opt.prec : default_precision(fl, H);
    for (;;) {
        if (P > opt.prec_ceiling) {
            throw precision_ceiling("working precision " + std::to_string(P) + " exceeds the ceiling " +
                                    std::to_string(opt.prec_ceiling));
        }
        cx.P = P;
        auto out = opt.workers == 1 ? membership_sweep_serial(cx) : membership_sweep_parallel(cx, opt.workers);
        if (out.near_misses == 0u) {
            res.points = std::move(out.points);
            res.prec = P;
            break;
        }
        P *= 2;
        ++res.raises;
    }
    for (const auto &p : res.points) {
        res.ambiguous += p.ambiguous ? 1u : 0u;
    }
    return res;
}

// Union of the q^n shifted pieces, each counted through its own t-radius chart.
template <typename Fl>
enum_result<Fl> points_by_pieces(const presented_algebra<Fl> &alg, const typename Fl::height_t &H,
                                 const enum_options &opt = {})
{
    enum_result<Fl> res;
    res.prec = 0;
    for (const auto &s : unit_cover_shifts(alg.fl, alg.nvars())) {
        auto piece = shifted_piece(alg, s);
        auto r = points_on_set(piece, H, opt, chart<Fl>{s, 1});
        res.prec = std::max(res.prec, r.prec);
        res.raises += r.raises;
        res.ambiguous += r.ambiguous;
        for (auto &p : r.points) {
            res.points.push_back(std::move(p));
        }
    }
    std::sort(res.points.begin(), res.points.end());
    return res;
}

template <typename Fl>
ball_key<Fl> ball_of(const point_record<Fl> &p, long m, const std::vector<std::size_t> &coords)
{
    ball_key<Fl> k;
    k.depth = m;
    for (auto i : coords) {
        if (p.local[i].prec() < m) {
            throw insufficient_precision("local coordinate known below the subdivision depth");
        }
        k.residues.push_back(p.local[i].rep(m));
    }
    return k;
}

// Partition by residues of the selected coordinates mod pi^m.
template <typename Fl>
std::map<ball_key<Fl>, std::vector<point_record<Fl>>> ball_split(const std::vector<point_record<Fl>> &points, long m,
                                                                  const std::vector<std::size_t> &coords)
{
    if (m < 1) {
        throw std::invalid_argument("subdivision depth must be positive");
    }
    std::map<ball_key<Fl>, std::vector<point_record<Fl>>> parts;
    for (const auto &p : points) {
        parts[ball_of(p, m, coords)].push_back(p);
    }
    return parts;
}

} // namespace rigidpts

#endif
