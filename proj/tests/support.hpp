#ifndef GAMMAFILT_TEST_SUPPORT_HPP
#define GAMMAFILT_TEST_SUPPORT_HPP

// Independent oracles and random generators shared by the test binaries.

#include <algorithm>
#include <random>
#include <vector>

#include "gammafilt/exactlin.hpp"

namespace testsupport {

using gammafilt::IntMatrix;
using gammafilt::Integer;
using gammafilt::IntVector;

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound)
{
    std::uniform_int_distribution<long> d(-bound, bound);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = d(rng);
    return m;
}

/// Product of random elementary matrices: determinant +-1 by construction.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 12)
{
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2)
        return u;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<long> mult(-3, 3);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) {
            for (std::size_t c = 0; c < n; ++c)
                u(i, c) = -u(i, c);
            continue;
        }
        const long k = mult(rng);
        for (std::size_t c = 0; c < n; ++c)
            u(i, c) += k * u(j, c);
    }
    return u;
}

/// Fraction-free Gaussian elimination (Bareiss).
inline Integer determinant(IntMatrix a)
{
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0)
                ++r;
            if (r == n)
                return 0;
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a(k, c), a(r, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    if (k > n)
        return;
    for (;;) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

/// Invariant factors of Z^cols / rowspan(m) from determinantal divisors
/// D_k = gcd of k x k minors: d_k = D_k / D_{k-1}.
inline std::vector<Integer> smith_by_minors(const IntMatrix& m)
{
    const std::size_t rmax = std::min(m.rows(), m.cols());
    std::vector<Integer> dd{1};
    for (std::size_t k = 1; k <= rmax; ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        combinations(m.rows(), k, rs);
        combinations(m.cols(), k, cs);
        Integer g = 0;
        for (const auto& r : rs)
            for (const auto& c : cs) {
                IntMatrix sub(k, k);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        sub(i, j) = m(r[i], c[j]);
                Integer d = determinant(sub);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            }
        if (g == 0)
            break;
        dd.push_back(g);
    }
    std::vector<Integer> out;
    for (std::size_t k = 1; k < dd.size(); ++k) {
        Integer q = dd[k] / dd[k - 1];
        if (q != 1)
            out.push_back(q);
    }
    for (std::size_t k = dd.size() - 1; k < m.cols(); ++k)
        out.push_back(0);
    return out;
}

} // namespace testsupport

#endif
