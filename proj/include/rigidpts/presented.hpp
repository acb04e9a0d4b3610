#ifndef RIGIDPTS_PRESENTED_HPP
#define RIGIDPTS_PRESENTED_HPP

#include <optional>
#include <string>
#include <vector>

#include <rigidpts/coord_change.hpp>
#include <rigidpts/power_series.hpp>

namespace rigidpts
{

// One eliminated variable with its monic relation in leaf coordinates.
template <typename Fl>
struct elimination {
    std::size_t var = 0;
    std::uint32_t L = 0;
    power_series<Fl> relation;
};

template <typename Fl>
struct normalization_witness {
    std::uint64_t N = 1;
    unsigned M = 0;
    bool famous = false;
    // Input radii, cumulative scaling vector and the resulting leaf radii delta - eps.
    std::vector<mpq_class> delta;
    std::vector<mpq_class> eps;
    std::vector<mpq_class> leaf_delta;
    exponent nu0;
    std::vector<elimination<Fl>> steps;
    std::vector<std::size_t> retained;
    std::uint32_t E = 1;
    unsigned iterations = 0;
    bool unit_check = false;

    std::size_t d() const { return retained.size(); }
    std::uint32_t L() const { return steps.empty() ? 0u : steps.front().L; }
    std::string change() const
    {
        if (!famous) {
            return steps.empty() ? "identity" : "identity (already monic)";
        }
        return "scale then famous(M=" + std::to_string(M) + ")";
    }
};

template <typename Fl>
struct presented_algebra {
    Fl fl;
    std::vector<mpq_class> delta;
    std::vector<power_series<Fl>> generators;
    std::optional<normalization_witness<Fl>> witness;

    std::size_t nvars() const { return delta.size(); }
};

// Unit-normalized coordinates X = t^delta x: coefficients a_nu t^(-delta.nu) on the unit polydisc.
template <typename Fl>
power_series<Fl> to_unit_coordinates(const power_series<Fl> &f)
{
    std::vector<mpq_class> neg(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) {
        neg[i] = -f.delta()[i];
    }
    return f.rescale(neg);
}

// Transport f to the leaf coordinates recorded by the witness.
template <typename Fl>
power_series<Fl> to_leaf(const power_series<Fl> &f, const normalization_witness<Fl> &w)
{
    auto g = to_unit_coordinates(f);
    if (!w.famous) {
        return g;
    }
    const std::vector<mpq_class> zero(g.nvars(), 0);
    g = g.rescale(w.eps).with_radius(zero);
    return apply_coord_change(g, coord_change<Fl>::famous(g.field(), g.nvars(), w.M));
}

// Degree L in variable k when f mod t^(1/N) has unit part u*x_k^L + (terms of lower x_k-degree).
template <typename Fl>
std::optional<std::uint32_t> monic_degree(const power_series<Fl> &f, std::size_t k)
{
    std::optional<std::uint32_t> L;
    bool clash = false;
    for (const auto &[e, c] : f.terms()) {
        if (f.normalized_val_units(e, c) != 0) {
            continue;
        }
        if (!L || e[k] > *L) {
            L = e[k];
            clash = false;
        }
        if (e[k] == *L) {
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (i != k && e[i] != 0u) {
                    clash = true;
                }
            }
        }
    }
    if (!L || clash) {
        return std::nullopt;
    }
    return L;
}

template <typename Fl>
struct division_result {
    power_series<Fl> quotient;
    power_series<Fl> remainder;
};

// Weierstrass division f = q*rel + r with deg_{x_k} r < L, modulo t^P. rel must satisfy monic_degree(rel, k) == L
// on the unit polydisc.
template <typename Fl>
division_result<Fl> weierstrass_divide(const power_series<Fl> &f0, const power_series<Fl> &rel0, std::size_t k,
                                       std::uint32_t L, long P)
{
    const auto &fl = f0.field();
    auto f = f0;
    auto rel = rel0;
    const auto N = std::lcm(f.root_index(), rel.root_index());
    f.lift_root_index(N);
    rel.lift_root_index(N);
    if (f.prec() > valuation(P)) {
        f.set_prec(valuation(P));
    }
    exponent lead(f.nvars(), 0);
    lead[k] = L;
    auto it = rel.terms().find(lead);
    if (it == rel.terms().end() || rel.normalized_val_units(lead, it->second) != 0) {
        throw monic_check_failed("relation has no unit leading coefficient");
    }
    const long long PU = static_cast<long long>(P) * static_cast<long long>(N);
    const auto uinv = coeff<Fl>::inverse(fl, N, it->second, PU);
    auto q = power_series<Fl>::zero(fl, f.nvars());
    q = q.with_radius(f.delta());
    q.lift_root_index(N);
    std::size_t guard = 0;
    for (;;) {
        // Highest-priority term: smallest valuation, then highest x_k-degree.
        const exponent *pick = nullptr;
        long long best = 0;
        for (const auto &[e, c] : f.terms()) {
            if (e[k] < L) {
                continue;
            }
            const auto v = f.normalized_val_units(e, c);
            if (!pick || v < best || (v == best && e[k] > (*pick)[k])) {
                pick = &e;
                best = v;
            }
        }
        if (!pick) {
            break;
        }
        if (++guard > 200000u) {
            throw insufficient_precision("Weierstrass division did not terminate");
        }
        exponent shift = *pick;
        shift[k] -= L;
        const auto c = coeff<Fl>::product(fl, N, f.terms().at(*pick), uinv).truncated(fl, N, PU);
        auto mono = power_series<Fl>::zero(fl, f.nvars()).with_radius(f.delta());
        mono.lift_root_index(N);
        mono.add_coeff(shift, c);
        q = q + mono;
        auto sub = mono * rel;
        if (sub.prec() > valuation(P)) {
            sub.set_prec(valuation(P));
        }
        f = f - sub;
    }
    return {q, f};
}

template <typename Fl>
struct decomposition {
    // Coefficients of the generator monomials, in mixed radix over the elimination steps.
    std::vector<power_series<Fl>> coeffs;
    std::vector<power_series<Fl>> quotients;
    power_series<Fl> leaf;
};

template <typename Fl>
decomposition<Fl> decompose(const power_series<Fl> &f, const presented_algebra<Fl> &alg, long P)
{
    if (!alg.witness) {
        throw no_witness("algebra carries no normalization witness");
    }
    const auto &w = *alg.witness;
    decomposition<Fl> out;
    out.leaf = to_leaf(f, w);
    auto r = out.leaf;
    for (const auto &st : w.steps) {
        auto dr = weierstrass_divide(r, st.relation, st.var, st.L, P);
        out.quotients.push_back(dr.quotient);
        r = dr.remainder;
    }
    std::size_t E = 1;
    for (const auto &st : w.steps) {
        E *= st.L;
    }
    auto base = power_series<Fl>::zero(r.field(), r.nvars()).with_radius(r.delta());
    base.lift_root_index(r.root_index());
    if (r.cutoff()) {
        base.set_cutoff(*r.cutoff(), r.tail());
    }
    base.set_prec(r.prec());
    out.coeffs.assign(E, base);
    for (const auto &[e, c] : r.terms()) {
        std::size_t idx = 0, radix = 1;
        exponent re = e;
        for (const auto &st : w.steps) {
            idx += radix * e[st.var];
            radix *= st.L;
            re[st.var] = 0;
        }
        out.coeffs[idx].add_coeff(re, c);
    }
    return out;
}

// Coefficients f_1..f_E of f on the generator set, in leaf coordinates.
template <typename Fl>
std::vector<power_series<Fl>> module_decompose(const power_series<Fl> &f, const presented_algebra<Fl> &alg, long P)
{
    return decompose(f, alg, P).coeffs;
}

} // namespace rigidpts

#endif
