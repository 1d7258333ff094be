// Copyright 2026 The gioq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gioq {

using cplx = std::complex<double>;

/// Dense complex square matrix, row-major. The single numeric carrier for
/// states, observables and correlation matrices; semantic wrappers live in
/// channels.hpp.
struct ComplexMatrix {
    int dim = 0;
    std::vector<cplx> entries;  // dim*dim, row-major

    ComplexMatrix() = default;
    explicit ComplexMatrix(int d) : dim(d), entries(static_cast<size_t>(d) * d) {
        if (d <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }

    cplx& operator()(int i, int j) { return entries[static_cast<size_t>(i) * dim + j]; }
    const cplx& operator()(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }

    bool all_finite() const {
        for (const cplx& z : entries)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline ComplexMatrix identity_matrix(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

/// The all-ones matrix J, the identity element of the Schur product.
inline ComplexMatrix ones_matrix(int d) {
    ComplexMatrix m(d);
    std::fill(m.entries.begin(), m.entries.end(), cplx(1.0, 0.0));
    return m;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix r(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
    ComplexMatrix r(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < a.dim; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline cplx trace(const ComplexMatrix& a) {
    cplx t{};
    for (int i = 0; i < a.dim; ++i) t += a(i, i);
    return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& z : a.entries) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t k = 0; k < a.entries.size(); ++k) m = std::max(m, std::abs(a.entries[k] - b.entries[k]));
    return m;
}

/// Largest entrywise deviation from Hermitian symmetry.
inline double hermiticity_defect(const ComplexMatrix& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim; ++i)
        for (int j = i; j < a.dim; ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = 1e-9) {
    return hermiticity_defect(a) <= tol;
}

/// (a + a^dag)/2. Exact on already-Hermitian input.
inline ComplexMatrix symmetrize(const ComplexMatrix& a) {
    ComplexMatrix r(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return r;
}

/// Entrywise (Schur/Hadamard) product.
inline ComplexMatrix schur_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("schur_product: dimension mismatch");
    ComplexMatrix r(a.dim);
    for (size_t k = 0; k < a.entries.size(); ++k) r.entries[k] = a.entries[k] * b.entries[k];
    return r;
}

/// Entrywise complex conjugate.
inline ComplexMatrix conj_entrywise(const ComplexMatrix& a) {
    ComplexMatrix r(a.dim);
    for (size_t k = 0; k < a.entries.size(); ++k) r.entries[k] = std::conj(a.entries[k]);
    return r;
}

struct EigenDecomposition {
    std::vector<double> eigenvalues;     // ascending
    ComplexMatrix eigenvectors;          // orthonormal columns, paired with eigenvalues
};

namespace detail {

// Hermiticity gate shared by the eigensolver entry points.
inline ComplexMatrix require_hermitian(const ComplexMatrix& a, const char* who) {
    if (!a.all_finite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
    if (!is_hermitian(a)) throw std::invalid_argument(std::string(who) + ": input is not Hermitian within 1e-9");
    return symmetrize(a);
}

inline double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Each sweep visits every off-diagonal pair; convergence is declared when
/// the off-diagonal Frobenius norm drops below 1e-12 (relative to scale),
/// with a hard cap of 100 sweeps. Eigenvalues come back sorted ascending.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& input) {
    ComplexMatrix a = detail::require_hermitian(input, "eig_hermitian");
    const int n = a.dim;
    ComplexMatrix v = identity_matrix(n);

    const double scale = std::max(1.0, frobenius_norm(a));
    const double stop = 1e-12 * scale;
    const double skip = stop / (2.0 * n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (detail::offdiag_norm(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= skip) continue;

                // 2x2 rotation annihilating a(p,q). Phase g folds the complex
                // pivot into a real Jacobi angle; t picked as the smaller root
                // for stability.
                const cplx g = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sg = s * g;
                const cplx sgc = s * std::conj(g);

                // rows/columns p,q of a  (a <- R^dag a R)
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cplx arp = a(r, p);
                    const cplx arq = a(r, q);
                    a(r, p) = c * arp - sgc * arq;
                    a(r, q) = sg * arp + c * arq;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                const double cross = 2.0 * c * s * mag;
                a(p, p) = app * c * c - cross + aqq * s * s;
                a(q, q) = app * s * s + cross + aqq * c * c;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (int r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p);
                    const cplx vrq = v(r, q);
                    v(r, p) = c * vrp - sgc * vrq;
                    v(r, q) = sg * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const ComplexMatrix& a) {
    return eig_hermitian(a).eigenvalues.front();
}

}  // namespace gioq
