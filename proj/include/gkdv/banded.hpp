#ifndef GKDV_BANDED_HPP
#define GKDV_BANDED_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

// Fornberg's algorithm: weights w_i such that sum_i w_i f(x_i) approximates
// the m-th derivative of f at z, exact on polynomials of degree <= x.size()-1.
inline std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
    const int n = static_cast<int>(x.size());
    if (n < m + 1) throw ConfigError("fd_weights: not enough nodes for requested derivative");
    std::vector<double> c(static_cast<std::size_t>(n) * static_cast<std::size_t>(m + 1), 0.0);
    auto C = [&](int i, int k) -> double& { return c[static_cast<std::size_t>(i) * (m + 1) + k]; };
    double c1 = 1.0;
    double c4 = x[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = C(i, m);
    return w;
}

// Square banded matrix, column entries j in [i-kl, i+ku] for row i.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku),
          a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(kl + ku + 1), 0.0) {}

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

    bool in_band(int i, int j) const { return j >= i - kl_ && j <= i + ku_; }

    double& at(int i, int j) {
        if (!in_band(i, j)) throw ShapeError("BandedMatrix::at outside band");
        return a_[idx(i, j)];
    }
    double get(int i, int j) const { return in_band(i, j) ? a_[idx(i, j)] : 0.0; }

    void clear_row(int i) {
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) a_[idx(i, j)] = 0.0;
    }

    void apply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
            throw ShapeError("BandedMatrix::apply size mismatch");
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            const int jlo = std::max(0, i - kl_);
            const int jhi = std::min(n_ - 1, i + ku_);
            const double* row = &a_[idx(i, jlo)];
            for (int j = jlo; j <= jhi; ++j) acc += row[j - jlo] * x[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = acc;
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(static_cast<std::size_t>(n_));
        apply(x, y);
        return y;
    }

private:
    // Row-major band storage: row i holds columns i-kl .. i+ku contiguously.
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * (kl_ + ku_ + 1) + static_cast<std::size_t>(j - (i - kl_));
    }

    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> a_;
};

// LU factorization of a banded matrix with partial pivoting confined to the
// band. Row interchanges widen the upper bandwidth to kl+ku.
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& A)
        : n_(A.size()), kl_(A.lower_bandwidth()), ku_(A.lower_bandwidth() + A.upper_bandwidth()),
          f_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(kl_ + ku_ + 1), 0.0),
          piv_(static_cast<std::size_t>(n_)),
          mult_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(kl_), 0.0) {
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - A.lower_bandwidth());
                 j <= std::min(n_ - 1, i + A.upper_bandwidth()); ++j)
                f_[idx(i, j)] = A.get(i, j);
        factor();
    }

    // Solves A x = b.
    std::vector<double> solve(std::span<const double> b) const {
        if (static_cast<int>(b.size()) != n_) throw ShapeError("BandedLU::solve size mismatch");
        std::vector<double> x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

    void solve_in_place(std::vector<double>& x) const {
        // forward: apply recorded permutations and eliminations
        for (int k = 0; k < n_ - 1; ++k) {
            const int p = piv_[static_cast<std::size_t>(k)];
            if (p != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
            const int ilast = std::min(n_ - 1, k + kl_);
            for (int i = k + 1; i <= ilast; ++i)
                x[static_cast<std::size_t>(i)] -=
                    mult_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] * x[static_cast<std::size_t>(k)];
        }
        // back substitution
        for (int i = n_ - 1; i >= 0; --i) {
            double acc = x[static_cast<std::size_t>(i)];
            const int jhi = std::min(n_ - 1, i + ku_);
            for (int j = i + 1; j <= jhi; ++j) acc -= f_[idx(i, j)] * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] = acc / f_[idx(i, i)];
        }
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * (kl_ + ku_ + 1) + static_cast<std::size_t>(j - (i - kl_));
    }

    void factor() {
        for (int k = 0; k < n_ - 1; ++k) {
            const int ilast = std::min(n_ - 1, k + kl_);
            int p = k;
            double pmax = std::fabs(f_[idx(k, k)]);
            for (int i = k + 1; i <= ilast; ++i) {
                const double v = std::fabs(f_[idx(i, k)]);
                if (v > pmax) {
                    pmax = v;
                    p = i;
                }
            }
            if (pmax == 0.0) throw LinearAlgebraError("BandedLU: singular pivot", k);
            piv_[static_cast<std::size_t>(k)] = p;
            const int jhi = std::min(n_ - 1, k + ku_);
            if (p != k)
                for (int j = k; j <= jhi; ++j) std::swap(f_[idx(k, j)], f_[idx(p, j)]);
            for (int i = k + 1; i <= ilast; ++i) {
                const double l = f_[idx(i, k)] / f_[idx(k, k)];
                mult_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] = l;
                f_[idx(i, k)] = 0.0;
                for (int j = k + 1; j <= jhi; ++j) f_[idx(i, j)] -= l * f_[idx(k, j)];
            }
        }
        piv_[static_cast<std::size_t>(n_ - 1)] = n_ - 1;
        if (f_[idx(n_ - 1, n_ - 1)] == 0.0)
            throw LinearAlgebraError("BandedLU: singular pivot", n_ - 1);
    }

    int n_, kl_, ku_;
    std::vector<double> f_;
    std::vector<int> piv_;
    std::vector<double> mult_;
};

} // namespace gkdv

#endif
