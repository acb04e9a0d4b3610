#ifndef RIGIDPTS_NORMALIZE_HPP
#define RIGIDPTS_NORMALIZE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <rigidpts/presented.hpp>

namespace rigidpts
{

// nu < mu iff nu != mu and nu_k < mu_k at the last index k where they differ.
bool revlex_less(const exponent &nu, const exponent &mu);

// Scaling vector (1/M^(M^(n-1)), ..., 1/M^M, 1/M).
std::vector<mpq_class> famous_eps(unsigned M, std::size_t n);

// Root index M^(M^(n-1)), or 0 on overflow.
std::uint64_t famous_root_index(unsigned M, std::size_t n);

// Minimal M with char | M false, M > |nu0| + 1, M^(M-1) > n|nu0| and delta2 < delta - eps componentwise.
unsigned choose_M(const exponent &nu0, std::size_t n, std::uint32_t characteristic, const std::vector<mpq_class> &delta,
                  const std::vector<mpq_class> &delta2, unsigned ceiling = 64);

template <typename Fl>
struct content_data {
    std::vector<std::pair<exponent, coeff<Fl>>> generators;
    exponent mcd;
    valuation min_val;
};

// Content of the unit-normalized coefficients c_nu = a_nu t^(-delta.nu).
template <typename Fl>
content_data<Fl> content(const power_series<Fl> &F)
{
    if (F.is_zero()) {
        throw zero_series("content of the zero series");
    }
    content_data<Fl> cd;
    long long best = std::numeric_limits<long long>::max();
    for (const auto &[e, c] : F.terms()) {
        best = std::min(best, F.normalized_val_units(e, c));
    }
    for (const auto &[e, c] : F.terms()) {
        if (F.normalized_val_units(e, c) == best) {
            cd.generators.emplace_back(e, c);
        }
    }
    std::sort(cd.generators.begin(), cd.generators.end(),
              [](const auto &a, const auto &b) { return revlex_less(a.first, b.first); });
    cd.mcd = cd.generators.front().first;
    cd.min_val = valuation::frac(static_cast<long>(best), F.root_index());
    return cd;
}

template <typename Fl>
power_series<Fl> content_divide(const power_series<Fl> &F)
{
    const auto cd = content(F);
    const mpq_class u = cd.min_val.value() * static_cast<unsigned long>(F.root_index());
    return F.shifted(-u.get_num().get_si());
}

template <typename Fl>
struct normalize_result {
    normalization_witness<Fl> witness;
    // Content-divided relation in leaf coordinates.
    power_series<Fl> transformed;
};

namespace detail
{

template <typename Fl>
bool involves(const power_series<Fl> &F, std::size_t k)
{
    for (const auto &[e, c] : F.terms()) {
        if (e[k] != 0u) {
            return true;
        }
    }
    return false;
}

// True when the unit part is a nonzero constant: the relation generates the unit ideal.
template <typename Fl>
bool is_unit_relation(const power_series<Fl> &G)
{
    bool has_const = false;
    for (const auto &[e, c] : G.terms()) {
        if (G.normalized_val_units(e, c) != 0) {
            continue;
        }
        if (total_degree(e) != 0u) {
            return false;
        }
        has_const = true;
    }
    return has_const;
}

template <typename Fl>
normalization_witness<Fl> identity_witness(const std::vector<mpq_class> &delta)
{
    normalization_witness<Fl> w;
    w.delta = delta;
    w.eps.assign(delta.size(), 0);
    w.leaf_delta = delta;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        w.retained.push_back(i);
    }
    w.unit_check = true;
    return w;
}

inline void equalize_retained(std::vector<mpq_class> &leaf, const std::vector<std::size_t> &retained)
{
    if (retained.empty()) {
        return;
    }
    mpq_class m = leaf[retained.front()];
    for (auto i : retained) {
        m = std::min(m, leaf[i]);
    }
    for (auto i : retained) {
        leaf[i] = m;
    }
}

} // namespace detail

// One inductive step on a single relation: content division, then either the monic fast path or
// M-selection, eps-scaling and the famous coordinate change.
template <typename Fl>
normalize_result<Fl> normalize_step(const power_series<Fl> &F, const std::vector<mpq_class> &delta2,
                                    unsigned max_iterations = 8)
{
    const std::size_t n = F.nvars();
    auto G = content_divide(to_unit_coordinates(F));
    normalize_result<Fl> out;
    auto &w = out.witness;
    w = detail::identity_witness<Fl>(F.delta());
    w.retained.clear();

    if (detail::is_unit_relation(G)) {
        // Unit ideal: the quotient is zero.
        w.steps.push_back({n - 1, 0, G});
        for (std::size_t i = 0; i + 1 < n; ++i) {
            w.retained.push_back(i);
        }
        w.E = 0;
        w.N = G.root_index();
        out.transformed = G;
        return out;
    }
    for (std::size_t k = n; k-- > 0;) {
        const auto L = monic_degree(G, k);
        if (L && *L >= 1u) {
            w.steps.push_back({k, *L, G});
            for (std::size_t i = 0; i < n; ++i) {
                if (i != k) {
                    w.retained.push_back(i);
                }
            }
            w.E = *L;
            w.N = G.root_index();
            detail::equalize_retained(w.leaf_delta, w.retained);
            out.transformed = G;
            return out;
        }
    }

    // Step 2.
    std::vector<mpq_class> cur_delta = F.delta();
    std::vector<mpq_class> eps_total(n, 0);
    const std::vector<mpq_class> zero(n, 0);
    unsigned M = 0;
    exponent nu0;
    for (unsigned it = 0;; ++it) {
        if (it >= max_iterations) {
            throw unsupported_presentation("normalization did not stabilize within the iteration cap");
        }
        nu0 = content(G).mcd;
        M = choose_M(nu0, n, F.field().characteristic(), cur_delta, delta2);
        if (famous_root_index(M, n) == 0u) {
            throw unsupported_presentation("root index M^(M^(n-1)) exceeds 64 bits");
        }
        const auto eps = famous_eps(M, n);
        G = content_divide(G.rescale(eps).with_radius(zero));
        for (std::size_t i = 0; i < n; ++i) {
            eps_total[i] += eps[i];
            cur_delta[i] -= eps[i];
        }
        w.iterations = it + 1;
        if (content(G).mcd == nu0) {
            break;
        }
    }
    const auto L = famous_exponent(nu0, M);
    if (L > std::numeric_limits<std::uint32_t>::max()) {
        throw unsupported_presentation("Weierstrass exponent too large");
    }
    auto H = apply_coord_change(G, coord_change<Fl>::famous(F.field(), n, M));
    const auto got = monic_degree(H, n - 1);
    if (!got || *got != L) {
        throw monic_check_failed("famous change did not produce a monic leading term of degree " + std::to_string(L));
    }
    w.famous = true;
    w.M = M;
    w.nu0 = nu0;
    w.eps = eps_total;
    w.N = H.root_index();
    w.steps.push_back({n - 1, static_cast<std::uint32_t>(L), H});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w.retained.push_back(i);
    }
    w.E = static_cast<std::uint32_t>(L);
    w.leaf_delta = cur_delta;
    detail::equalize_retained(w.leaf_delta, w.retained);
    w.unit_check = true;
    out.transformed = H;
    return out;
}

// Normalization of a presented algebra: zero ideal, a single relation, or a triangular system where every
// relation is monic in its own variable.
template <typename Fl>
presented_algebra<Fl> full_normalize(const presented_algebra<Fl> &alg, const std::vector<mpq_class> &delta2)
{
    presented_algebra<Fl> out = alg;
    std::vector<power_series<Fl>> gens;
    for (const auto &g : alg.generators) {
        if (!g.is_zero()) {
            gens.push_back(g);
        }
    }
    if (gens.empty()) {
        out.witness = detail::identity_witness<Fl>(alg.delta);
        return out;
    }
    if (gens.size() == 1u) {
        out.witness = normalize_step(gens.front(), delta2).witness;
        return out;
    }
    const std::size_t n = alg.nvars();
    std::vector<power_series<Fl>> unit;
    for (const auto &g : gens) {
        unit.push_back(content_divide(to_unit_coordinates(g)));
        if (detail::is_unit_relation(unit.back())) {
            auto w = normalize_step(g, delta2).witness;
            out.witness = w;
            return out;
        }
    }
    // Assign variables greedily, highest index first.
    std::vector<std::size_t> var(unit.size());
    std::vector<std::uint32_t> deg(unit.size());
    std::vector<bool> used(n, false);
    for (std::size_t g = 0; g < unit.size(); ++g) {
        bool found = false;
        for (std::size_t k = n; k-- > 0;) {
            if (used[k]) {
                continue;
            }
            const auto L = monic_degree(unit[g], k);
            if (L && *L >= 1u) {
                var[g] = k;
                deg[g] = *L;
                used[k] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw unsupported_presentation("generator system is not monic variable by variable");
        }
    }
    // Step order: a relation may only involve variables eliminated by later steps.
    std::vector<std::size_t> order;
    std::vector<bool> placed(unit.size(), false);
    while (order.size() < unit.size()) {
        bool progress = false;
        for (std::size_t g = 0; g < unit.size(); ++g) {
            if (placed[g]) {
                continue;
            }
            bool ok = true;
            for (std::size_t h = 0; h < unit.size(); ++h) {
                if (h != g && !placed[h] && detail::involves(unit[h], var[g])) {
                    ok = false;
                }
            }
            if (ok) {
                order.push_back(g);
                placed[g] = true;
                progress = true;
            }
        }
        if (!progress) {
            throw unsupported_presentation("generator system is not triangular");
        }
    }
    auto w = detail::identity_witness<Fl>(alg.delta);
    w.retained.clear();
    w.E = 1;
    for (auto g : order) {
        w.steps.push_back({var[g], deg[g], unit[g]});
        w.E *= deg[g];
        w.N = std::lcm(w.N, unit[g].root_index());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!used[i]) {
            w.retained.push_back(i);
        }
    }
    detail::equalize_retained(w.leaf_delta, w.retained);
    out.witness = w;
    return out;
}

} // namespace rigidpts

#endif
