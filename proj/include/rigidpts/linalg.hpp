#ifndef RIGIDPTS_LINALG_HPP
#define RIGIDPTS_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <rigidpts/frac.hpp>

namespace rigidpts
{

template <typename R>
R ring_lcm(const R &a, const R &b)
{
    if (ring::is_zero(a) || ring::is_zero(b)) {
        return ring::zero_like(a);
    }
    return ring::divexact(a * b, ring::gcd(a, b));
}

// Fraction-free determinant of a square matrix over R, in place.
template <typename R>
R bareiss_det(std::vector<std::vector<R>> A)
{
    const std::size_t n = A.size();
    if (n == 0) {
        throw std::invalid_argument("empty matrix");
    }
    R prev = ring::one_like(A[0][0]);
    bool neg = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (ring::is_zero(A[k][k])) {
            std::size_t r = k + 1;
            while (r < n && ring::is_zero(A[r][k])) {
                ++r;
            }
            if (r == n) {
                return ring::zero_like(prev);
            }
            std::swap(A[k], A[r]);
            neg = !neg;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                A[i][j] = ring::divexact(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev);
            }
        }
        prev = A[k][k];
    }
    R d = A[n - 1][n - 1];
    return neg ? -d : d;
}

// Determinant over the fraction field: columns are cleared of denominators first.
template <typename R>
frac<R> frac_det(const std::vector<std::vector<frac<R>>> &M)
{
    const std::size_t n = M.size();
    std::vector<std::vector<R>> A(n, std::vector<R>(n));
    R scale = ring::one_like(M[0][0].den());
    for (std::size_t j = 0; j < n; ++j) {
        R l = ring::one_like(scale);
        for (std::size_t i = 0; i < n; ++i) {
            l = ring_lcm(l, M[i][j].den());
        }
        for (std::size_t i = 0; i < n; ++i) {
            A[i][j] = M[i][j].num() * ring::divexact(l, M[i][j].den());
        }
        scale = scale * l;
    }
    return frac<R>(bareiss_det(std::move(A)), scale);
}

// Division-free determinant (Berkowitz) over any commutative ring with + - *.
template <typename T>
T berkowitz_det(const std::vector<std::vector<T>> &A, const T &zero, const T &one)
{
    const std::size_t n = A.size();
    // Characteristic polynomial coefficients, built up over leading principal submatrices.
    std::vector<T> c{one, -A[0][0]};
    for (std::size_t r = 1; r < n; ++r) {
        // Toeplitz column for the (r+1)x(r+1) leading block.
        std::vector<T> col;
        col.push_back(one);
        col.push_back(-A[r][r]);
        std::vector<T> v(r);
        for (std::size_t i = 0; i < r; ++i) {
            v[i] = A[i][r];
        }
        for (std::size_t k = 0; k + 1 < r + 1; ++k) {
            T s = zero;
            for (std::size_t i = 0; i < r; ++i) {
                s = s + A[r][i] * v[i];
            }
            col.push_back(-s);
            std::vector<T> w(r, zero);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < r; ++j) {
                    w[i] = w[i] + A[i][j] * v[j];
                }
            }
            v = std::move(w);
        }
        std::vector<T> nc(r + 2, zero);
        for (std::size_t i = 0; i < r + 2; ++i) {
            for (std::size_t j = 0; j <= i && j < c.size(); ++j) {
                if (i - j < col.size()) {
                    nc[i] = nc[i] + col[i - j] * c[j];
                }
            }
        }
        c = std::move(nc);
    }
    T d = c[n];
    return (n % 2 == 1) ? -d : d;
}

// Nonzero kernel vector of a matrix over frac<R> (rows x cols), or none for full column rank.
// The vector is scaled to coprime ring entries with canonical last nonzero entry.
template <typename R>
std::optional<std::vector<R>> kernel_vector(const std::vector<std::vector<frac<R>>> &M, std::size_t cols,
                                            const R &one)
{
    const R zero = ring::zero_like(one);
    std::vector<std::vector<R>> A;
    A.reserve(M.size());
    for (const auto &row : M) {
        R l = one;
        for (const auto &x : row) {
            l = ring_lcm(l, x.den());
        }
        std::vector<R> r(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            r[j] = row[j].num() * ring::divexact(l, row[j].den());
        }
        A.push_back(std::move(r));
    }
    // Fraction-free row echelon form.
    std::vector<std::size_t> pivots;
    R prev = one;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < A.size(); ++col) {
        std::size_t p = row;
        while (p < A.size() && ring::is_zero(A[p][col])) {
            ++p;
        }
        if (p == A.size()) {
            continue;
        }
        std::swap(A[row], A[p]);
        for (std::size_t i = row + 1; i < A.size(); ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                A[i][j] = ring::divexact(A[i][j] * A[row][col] - A[i][col] * A[row][j], prev);
            }
            A[i][col] = zero;
        }
        prev = A[row][col];
        pivots.push_back(col);
        ++row;
    }
    if (pivots.size() == cols) {
        return std::nullopt;
    }
    std::size_t free_col = 0;
    for (std::size_t j = 0, k = 0; j < cols; ++j) {
        if (k < pivots.size() && pivots[k] == j) {
            ++k;
            continue;
        }
        free_col = j;
        break;
    }
    std::vector<frac<R>> x(cols, frac<R>(zero));
    x[free_col] = frac<R>(one);
    for (std::size_t r = pivots.size(); r-- > 0;) {
        const auto pc = pivots[r];
        if (pc > free_col) {
            continue;
        }
        frac<R> s(zero);
        for (std::size_t j = pc + 1; j < cols; ++j) {
            if (!ring::is_zero(A[r][j]) && !x[j].is_zero()) {
                s += frac<R>(A[r][j]) * x[j];
            }
        }
        x[pc] = -s / frac<R>(A[r][pc]);
    }
    R l = one;
    for (const auto &v : x) {
        l = ring_lcm(l, v.den());
    }
    std::vector<R> out(cols);
    R g = zero;
    for (std::size_t j = 0; j < cols; ++j) {
        out[j] = x[j].num() * ring::divexact(l, x[j].den());
        g = ring::gcd(g, out[j]);
    }
    std::size_t last = cols;
    for (std::size_t j = cols; j-- > 0;) {
        if (!ring::is_zero(out[j])) {
            last = j;
            break;
        }
    }
    const R u = ring::canonical_unit(out[last]);
    const R gc = g * ring::canonical_unit(g);
    for (auto &v : out) {
        v = ring::divexact(v, gc) * u;
    }
    return out;
}

} // namespace rigidpts

#endif
