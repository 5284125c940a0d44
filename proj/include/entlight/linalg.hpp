#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "errors.hpp"

namespace entlight {

using complexd = std::complex<double>;

// Dense square complex matrix, row-major.  Small dimensions only (the
// library works with 2^N x 2^N blocks, N <= 12), so everything is kept
// simple and contiguous.
class ComplexMatrix {
public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
        if (dim < 0) throw invalid_params("matrix dimension must be non-negative");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    complexd& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const complexd& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    complexd trace() const {
        complexd t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& z : a_) s = std::max(s, std::abs(z));
        return s;
    }

    // Largest |A(i,j) - conj(A(j,i))| over all pairs.
    double hermiticity_defect() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                s = std::max(s, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return s;
    }

    bool is_hermitian(double tol = 1e-10) const {
        return hermiticity_defect() <= tol * std::max(1.0, max_abs());
    }

private:
    int dim_;
    std::vector<complexd> a_;
};

inline ComplexMatrix principal_submatrix(const ComplexMatrix& a, std::span<const int> indices) {
    const int r = static_cast<int>(indices.size());
    for (int i = 0; i < r; ++i) {
        if (indices[i] < 0 || indices[i] >= a.dim())
            throw invalid_params("submatrix index out of range");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw invalid_params("submatrix indices must be strictly increasing");
    }
    ComplexMatrix s(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            s(i, j) = a(indices[i], indices[j]);
    return s;
}

struct EigenSystem {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // column k pairs with values[k]
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& a, double tol = 1e-10) {
    if (!a.is_hermitian(tol))
        throw non_hermitian("matrix is not Hermitian within tolerance");
}

// Symmetrize exactly so the rotations below can assume A(j,i) == conj(A(i,j)).
inline ComplexMatrix hermitized(const ComplexMatrix& a) {
    ComplexMatrix h(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        h(i, i) = complexd(a(i, i).real(), 0.0);
        for (int j = i + 1; j < a.dim(); ++j) {
            const complexd v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

inline double off_diagonal_norm_sq(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i + 1; j < a.dim(); ++j)
            s += 2.0 * std::norm(a(i, j));
    return s;
}

// One complex Jacobi rotation in the (p, q) plane, annihilating A(p, q).
// G has G_pp = G_qq = c, G_pq = s*e^{i phi}, G_qp = -s*e^{-i phi} where
// e^{i phi} is the phase of A(p, q); A <- G' A G, V <- V G.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
    const complexd apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const complexd phase = apq / r;

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    const double t = 1.0 / (std::abs(tau) + std::hypot(1.0, tau)) * (tau >= 0.0 ? 1.0 : -1.0);
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.dim();
    for (int j = 0; j < n; ++j) {
        if (j == p || j == q) continue;
        const complexd ajp = a(j, p);
        const complexd ajq = a(j, q);
        a(j, p) = c * ajp - s * std::conj(phase) * ajq;
        a(j, q) = s * phase * ajp + c * ajq;
        a(p, j) = std::conj(a(j, p));
        a(q, j) = std::conj(a(j, q));
    }
    a(p, p) = app * c * c - 2.0 * c * s * r + aqq * s * s;
    a(q, q) = app * s * s + 2.0 * c * s * r + aqq * c * c;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (int j = 0; j < v.dim(); ++j) {
        const complexd vjp = v(j, p);
        const complexd vjq = v(j, q);
        v(j, p) = c * vjp - s * std::conj(phase) * vjq;
        v(j, q) = s * phase * vjp + c * vjq;
    }
}

// Multiply eigenvector column k by a unit phase so its first component of
// non-negligible magnitude becomes real and positive.  Makes the output a
// pure function of the input matrix.
inline void canonicalize_column_phase(ComplexMatrix& v, int k) {
    const int n = v.dim();
    for (int i = 0; i < n; ++i) {
        const double m = std::abs(v(i, k));
        if (m > 1e-8) {
            const complexd u = std::conj(v(i, k)) / m;
            for (int j = 0; j < n; ++j) v(j, k) *= u;
            return;
        }
    }
}

} // namespace detail

// Full eigensystem of a Hermitian matrix by cyclic complex Jacobi sweeps.
// Eigenvalues ascending; eigenvector columns phase-canonicalized, so equal
// inputs produce bit-equal outputs.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix& input, double hermitian_tol = 1e-10) {
    detail::require_hermitian(input, hermitian_tol);
    const int n = input.dim();
    ComplexMatrix a = detail::hermitized(input);
    ComplexMatrix v = ComplexMatrix::identity(n);

    if (n > 1) {
        const double fro = std::max(a.frobenius_norm(), 1e-300);
        const double stop = (1e-14 * fro) * (1e-14 * fro);
        for (int sweep = 0; sweep < 60; ++sweep) {
            if (detail::off_diagonal_norm_sq(a) <= stop) break;
            for (int p = 0; p < n - 1; ++p)
                for (int q = p + 1; q < n; ++q)
                    detail::jacobi_rotate(a, v, p, q);
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (int j = 0; j < n; ++j) es.vectors(j, k) = v(j, order[k]);
        detail::canonicalize_column_phase(es.vectors, k);
    }
    return es;
}

namespace detail {

// Householder reduction of a Hermitian matrix to a real symmetric
// tridiagonal (d, e), eigenvalues only; w is destroyed.  Subdiagonal phases
// are dropped at the end: a tridiagonal matrix is unitarily equivalent, via
// a diagonal phase matrix, to the one with |e_k| on the subdiagonal.
inline void tridiagonalize(ComplexMatrix& w, std::vector<double>& d, std::vector<double>& e,
                           std::vector<complexd>& u, std::vector<complexd>& p) {
    const int n = w.dim();
    d.assign(n, 0.0);
    e.assign(n > 1 ? n - 1 : 0, 0.0);
    u.assign(n, 0.0);
    p.assign(n, 0.0);

    for (int k = 0; k + 2 < n; ++k) {
        double below = 0.0; // column norm strictly below the subdiagonal
        for (int i = k + 2; i < n; ++i) below += std::norm(w(i, k));
        const complexd alpha = w(k + 1, k);
        const double amod = std::abs(alpha);
        if (below == 0.0) {
            e[k] = amod; // already tridiagonal at this column
            d[k] = w(k, k).real();
            continue;
        }
        const double sigma = std::sqrt(below + amod * amod);
        const complexd phase = amod > 0.0 ? alpha / amod : complexd(1.0, 0.0);

        // u = x + phase*sigma*e1 on rows k+1..n-1; reflector H = I - c u u^*
        for (int i = k + 1; i < n; ++i) u[i] = w(i, k);
        u[k + 1] += phase * sigma;
        const double cden = sigma * (sigma + amod); // = |u|^2 / 2
        const double c = 1.0 / cden;

        double udotp = 0.0;
        for (int i = k + 1; i < n; ++i) {
            complexd acc = 0.0;
            for (int j = k + 1; j < n; ++j) acc += w(i, j) * u[j];
            p[i] = c * acc;
            udotp += (std::conj(u[i]) * p[i]).real();
        }
        const double kk = 0.5 * c * udotp;
        for (int i = k + 1; i < n; ++i) p[i] -= kk * u[i]; // now w-vector
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w(i, j) -= p[i] * std::conj(u[j]) + u[i] * std::conj(p[j]);

        e[k] = sigma;
        d[k] = w(k, k).real();
    }
    if (n >= 2) {
        e[n - 2] = std::abs(w(n - 1, n - 2));
        d[n - 2] = w(n - 2, n - 2).real();
    }
    if (n >= 1) d[n - 1] = w(n - 1, n - 1).real();
}

// QL with implicit shifts on a real symmetric tridiagonal; eigenvalues only.
inline void tridiagonal_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    if (n < 2) return;
    e.push_back(0.0); // sentinel
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw error("tridiagonal QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i;
                bool underflow = false;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
    std::sort(d.begin(), d.end());
}

// Reusable buffers for repeated eigenvalue-only solves.
struct EigenWorkspace {
    std::vector<double> d, e;
    std::vector<complexd> u, p;
};

// Largest eigenvalue of an exactly Hermitian matrix; destroys w.  Closed
// forms for dim 1 and 2 keep the subset-search inner loop cheap.
inline double largest_eigenvalue_inplace(ComplexMatrix& w, EigenWorkspace& ws) {
    const int n = w.dim();
    if (n == 1) return w(0, 0).real();
    if (n == 2) {
        const double h = 0.5 * (w(0, 0).real() + w(1, 1).real());
        const double g = 0.5 * (w(0, 0).real() - w(1, 1).real());
        return h + std::hypot(g, std::abs(w(0, 1)));
    }
    tridiagonalize(w, ws.d, ws.e, ws.u, ws.p);
    tridiagonal_eigenvalues(ws.d, ws.e);
    return ws.d.back();
}

} // namespace detail

// Eigenvalues only, ascending.  Householder + QL: ~15x fewer flops than the
// Jacobi path, which matters in the subset search where this sits in the
// innermost loop.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& input, double hermitian_tol = 1e-10) {
    detail::require_hermitian(input, hermitian_tol);
    ComplexMatrix w = detail::hermitized(input);
    detail::EigenWorkspace ws;
    detail::tridiagonalize(w, ws.d, ws.e, ws.u, ws.p);
    detail::tridiagonal_eigenvalues(ws.d, ws.e);
    return ws.d;
}

// Largest eigenvalue of a Hermitian matrix (hermitized copy first, so small
// asymmetry from rounding is tolerated).
inline double largest_eigenvalue(const ComplexMatrix& a) {
    if (a.dim() == 0) throw invalid_params("empty matrix has no eigenvalues");
    ComplexMatrix w = detail::hermitized(a);
    detail::EigenWorkspace ws;
    return detail::largest_eigenvalue_inplace(w, ws);
}

} // namespace entlight
