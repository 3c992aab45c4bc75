#pragma once

// Dense symmetric linear algebra for the small Galerkin systems: Cholesky
// factorisation, Householder tridiagonalisation and implicit QL.  Everything
// is templated on the scalar so the angular solver can run in long double.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spectral_hardy::linalg {

/// Row-major square matrix.
template <typename Real>
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, Real fill = Real(0)) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    Real& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<Real> data_;
};

template <typename Real>
struct SymmetricEigen {
    std::vector<Real> values;  // ascending
    Matrix<Real> vectors;      // column k belongs to values[k]
};

/// Lower-triangular Cholesky factor L with A = L L^T.  Returns false if A is
/// not numerically positive definite.
template <typename Real>
bool cholesky(const Matrix<Real>& a, Matrix<Real>& l) {
    const std::size_t n = a.size();
    l = Matrix<Real>(n);
    for (std::size_t j = 0; j < n; ++j) {
        Real d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > Real(0))) return false;
        const Real ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Real v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return true;
}

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form
// (tred2).  On exit z holds the accumulated orthogonal transform, d the
// diagonal and e the sub-diagonal in e[1..n-1].
template <typename Real>
void tridiagonalize(Matrix<Real>& z, std::vector<Real>& d, std::vector<Real>& e) {
    const std::size_t n = z.size();
    d.assign(n, Real(0));
    e.assign(n, Real(0));
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t l = i - 1;
        Real h = 0;
        if (l > 0) {
            Real scale = 0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == Real(0)) {
                e[i] = z(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                Real f = z(i, l);
                const Real g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0;
                for (std::size_t j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    Real gg = 0;
                    for (std::size_t k = 0; k <= j; ++k) gg += z(j, k) * z(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) gg += z(k, j) * z(i, k);
                    e[j] = gg / h;
                    f += e[j] * z(i, j);
                }
                const Real hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    const Real ff = z(i, j);
                    const Real gg = e[j] - hh * ff;
                    e[j] = gg;
                    for (std::size_t k = 0; k <= j; ++k) z(j, k) -= ff * e[k] + gg * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0;
    e[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != Real(0)) {
            for (std::size_t j = 0; j < i; ++j) {
                Real g = 0;
                for (std::size_t k = 0; k < i; ++k) g += z(i, k) * z(k, j);
                for (std::size_t k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1;
        for (std::size_t j = 0; j < i; ++j) z(j, i) = z(i, j) = 0;
    }
}

}  // namespace detail

/// Implicit QL on a symmetric tridiagonal matrix (diagonal d, sub-diagonal
/// e[1..n-1]).  z must hold the transform to accumulate into (identity for a
/// bare tridiagonal problem).  Eigenpairs are returned sorted ascending.
template <typename Real>
SymmetricEigen<Real> tridiagonal_eigen(std::vector<Real> d, std::vector<Real> e, Matrix<Real> z) {
    const std::size_t n = d.size();
    if (n == 0) return {};
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const Real dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<Real>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw std::runtime_error("tridiagonal_eigen: no convergence");
                Real g = (d[l + 1] - d[l]) / (Real(2) * e[l]);
                Real r = std::hypot(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                Real s = 1, c = 1, p = 0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    Real f = s * e[i];
                    const Real b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == Real(0)) {
                        d[i + 1] -= p;
                        e[m] = 0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + Real(2) * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0;
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    SymmetricEigen<Real> out;
    out.values.resize(n);
    out.vectors = Matrix<Real>(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = z(i, order[k]);
    }
    return out;
}

/// Full eigen-decomposition of a dense symmetric matrix.
template <typename Real>
SymmetricEigen<Real> symmetric_eigen(Matrix<Real> a) {
    if (a.size() == 0) return {};
    std::vector<Real> d, e;
    detail::tridiagonalize(a, d, e);
    return tridiagonal_eigen(std::move(d), std::move(e), std::move(a));
}

/// Generalised problem A x = lambda B x with B symmetric positive definite,
/// reduced to standard form through the Cholesky factor of B.  Eigenvectors
/// are B-orthonormal.  Throws std::domain_error if B is not positive definite.
template <typename Real>
SymmetricEigen<Real> generalized_symmetric_eigen(const Matrix<Real>& a, const Matrix<Real>& b) {
    const std::size_t n = a.size();
    Matrix<Real> l;
    if (!cholesky(b, l)) throw std::domain_error("generalized_symmetric_eigen: mass matrix not positive definite");

    // C = L^{-1} A L^{-T}; first Y = L^{-1} A, then C = Y L^{-T} (i.e. solve L C^T = Y^T).
    Matrix<Real> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Real v = a(i, j);
            for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * y(k, j);
            y(i, j) = v / l(i, i);
        }
    }
    Matrix<Real> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Real v = y(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= c(i, k) * l(j, k);
            c(i, j) = v / l(j, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i) = Real(0.5) * (c(i, j) + c(j, i));

    auto eig = symmetric_eigen(std::move(c));
    // back-substitute x = L^{-T} y
    Matrix<Real> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t ii = n; ii-- > 0;) {
            Real v = eig.vectors(ii, k);
            for (std::size_t j = ii + 1; j < n; ++j) v -= l(j, ii) * x(j, k);
            x(ii, k) = v / l(ii, ii);
        }
    }
    eig.vectors = std::move(x);
    return eig;
}

}  // namespace spectral_hardy::linalg
