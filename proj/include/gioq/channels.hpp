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

#include "gioq/sdp.hpp"

namespace gioq {

/// d x d density operator: Hermitian, PSD, unit trace.
///
/// Ingestion symmetrizes, clips eigenvalues in [-1e-9, 0) to zero and
/// renormalizes the trace, so states surviving a JSON round-trip validate
/// cleanly. Anything further from the set is rejected.
struct DensityMatrix {
    ComplexMatrix mat;

    int dim() const { return mat.dim; }

    static DensityMatrix from(const ComplexMatrix& m) {
        if (!m.all_finite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
        if (!is_hermitian(m)) throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-9");
        ComplexMatrix h = symmetrize(m);
        const double tr = trace(h).real();
        if (std::abs(tr - 1.0) > 1e-9) throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-9");

        EigenDecomposition eig = eig_hermitian(h);
        if (eig.eigenvalues.front() < -1e-9)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond 1e-9");
        if (eig.eigenvalues.front() < 0.0) {
            // clip the round-off tail and rebuild
            ComplexMatrix r(h.dim);
            for (int k = 0; k < h.dim; ++k) {
                const double lk = std::max(0.0, eig.eigenvalues[k]);
                if (lk == 0.0) continue;
                for (int i = 0; i < h.dim; ++i)
                    for (int j = 0; j < h.dim; ++j)
                        r(i, j) += lk * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
            }
            h = symmetrize(r);
        }
        const double tr2 = trace(h).real();
        if (tr2 != 1.0)
            for (cplx& z : h.entries) z /= tr2;
        return DensityMatrix{std::move(h)};
    }
};

/// Correlation matrix tau of a Schur channel rho -> tau o rho: Hermitian,
/// PSD, unit diagonal. The canonical representation of a channel that fixes
/// every incoherent state.
struct SchurChannel {
    ComplexMatrix tau;

    int dim() const { return tau.dim; }

    static SchurChannel from(const ComplexMatrix& t, double psd_tol = 1e-9) {
        if (!t.all_finite()) throw std::invalid_argument("SchurChannel: non-finite entries");
        if (!is_hermitian(t)) throw std::invalid_argument("SchurChannel: not Hermitian within 1e-9");
        for (int i = 0; i < t.dim; ++i)
            if (std::abs(t(i, i) - cplx(1.0, 0.0)) > 1e-9)
                throw std::invalid_argument("SchurChannel: diagonal entry differs from 1 beyond 1e-9");
        if (min_eigenvalue(t) < -psd_tol)
            throw std::invalid_argument("SchurChannel: correlation matrix is not PSD");
        return SchurChannel{symmetrize(t)};
    }
};

struct KrausSet {
    std::vector<ComplexMatrix> operators;
};

enum class ChannelClass { GIO, DIO, MIO, CPTP };

inline const char* to_string(ChannelClass c) {
    switch (c) {
        case ChannelClass::GIO: return "gio";
        case ChannelClass::DIO: return "dio";
        case ChannelClass::MIO: return "mio";
        case ChannelClass::CPTP: return "cptp";
    }
    return "unknown";
}

/// Linear equality constraints on the Choi matrix of a channel in the given
/// class, in the convention J = sum_ij |i><j| (x) Phi(|i><j|).
///
/// Always includes trace preservation. GIO pins every diagonal block to the
/// matching basis projector; MIO zeroes the off-diagonal of each diagonal
/// block; DIO is MIO plus vanishing diagonals of every off-diagonal block.
inline std::vector<LinearConstraint> class_constraints(ChannelClass cls, int d) {
    if (d < 2) throw std::invalid_argument("class_constraints: d must be at least 2");
    const int n = d * d;
    std::vector<LinearConstraint> cons;

    // trace preservation: tr Phi(|i><j|) = delta_ij
    for (int i = 0; i < d; ++i) {
        ComplexMatrix a(n);
        for (int t = 0; t < d; ++t) a(i * d + t, i * d + t) = 1.0;
        cons.push_back({std::move(a), 1.0});
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            ComplexMatrix are(n), aim(n);
            for (int t = 0; t < d; ++t) {
                are(i * d + t, j * d + t) = 1.0;
                are(j * d + t, i * d + t) = 1.0;
                aim(i * d + t, j * d + t) = cplx(0.0, 1.0);
                aim(j * d + t, i * d + t) = cplx(0.0, -1.0);
            }
            cons.push_back({std::move(are), 0.0});
            cons.push_back({std::move(aim), 0.0});
        }

    auto pin_block_entry = [&](int bi, int bj, int r, int c, cplx value) {
        const int row = bi * d + r;
        const int col = bj * d + c;
        if (row == col) {
            cons.push_back(pin_diagonal_entry(n, row, value.real()));
        } else {
            auto [cre, cim] = pin_offdiag_entry(n, row, col, value);
            cons.push_back(std::move(cre));
            cons.push_back(std::move(cim));
        }
    };

    switch (cls) {
        case ChannelClass::CPTP:
            break;
        case ChannelClass::GIO:
            // Phi(|i><i|) = |i><i|
            for (int i = 0; i < d; ++i)
                for (int r = 0; r < d; ++r)
                    for (int c = r; c < d; ++c)
                        pin_block_entry(i, i, r, c, (r == c && r == i) ? cplx(1.0, 0.0) : cplx{});
            break;
        case ChannelClass::DIO:
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    for (int r = 0; r < d; ++r) pin_block_entry(i, j, r, r, cplx{});
            [[fallthrough]];
        case ChannelClass::MIO:
            // off-diagonal of Phi(|i><i|) vanishes
            for (int i = 0; i < d; ++i)
                for (int r = 0; r < d; ++r)
                    for (int c = r + 1; c < d; ++c) pin_block_entry(i, i, r, c, cplx{});
            break;
    }
    return cons;
}

/// Choi matrix with a channel-class tag. Validation checks PSD, trace
/// preservation and the class constraints; tol is widened for matrices
/// assembled from solver output, whose accuracy is set by the solver.
struct ChoiMatrix {
    int dim = 0;  // system size d; mat is d^2 x d^2
    ComplexMatrix mat;
    ChannelClass class_tag = ChannelClass::CPTP;

    static ChoiMatrix from(int d, const ComplexMatrix& m, ChannelClass cls, double tol = 1e-9) {
        if (m.dim != d * d) throw std::invalid_argument("ChoiMatrix: matrix must be d^2 x d^2");
        if (!m.all_finite()) throw std::invalid_argument("ChoiMatrix: non-finite entries");
        if (!is_hermitian(m, tol)) throw std::invalid_argument("ChoiMatrix: not Hermitian");
        ComplexMatrix h = symmetrize(m);
        if (min_eigenvalue(h) < -tol) throw std::invalid_argument("ChoiMatrix: not PSD");
        for (const auto& c : class_constraints(cls, d)) {
            cplx t{};
            for (int i = 0; i < h.dim; ++i)
                for (int j = 0; j < h.dim; ++j) t += c.a(i, j) * h(j, i);
            if (std::abs(t.real() - c.rhs) > tol)
                throw std::invalid_argument(std::string("ChoiMatrix: ") + to_string(cls) + " class constraint violated");
        }
        return ChoiMatrix{d, std::move(h), cls};
    }
};

/// Convex mixture of diagonal-unitary rotations of the maximally coherent
/// state: weights p_k plus one phase vector theta^k per component.
struct OmegaElement {
    std::vector<double> weights;
    std::vector<std::vector<double>> phases;
};

inline DensityMatrix apply_schur(const SchurChannel& ch, const DensityMatrix& rho) {
    if (ch.dim() != rho.dim()) throw std::invalid_argument("apply_schur: dimension mismatch");
    ComplexMatrix out = schur_product(ch.tau, rho.mat);
    for (int i = 0; i < out.dim; ++i) out(i, i) = rho.mat(i, i);  // diagonal exactly preserved
    return DensityMatrix{std::move(out)};
}

/// Diagonal Kraus operators of a Schur channel: tau = sum_k v_k v_k^dag
/// gives K_k = diag(sqrt(lambda_k) v_k). Eigenvalues below 1e-12 are
/// dropped.
inline KrausSet kraus_from_schur(const SchurChannel& ch) {
    EigenDecomposition eig = eig_hermitian(ch.tau);
    KrausSet ks;
    const int d = ch.dim();
    for (int k = d - 1; k >= 0; --k) {
        const double lk = eig.eigenvalues[k];
        if (lk <= 1e-12) continue;
        const double s = std::sqrt(lk);
        ComplexMatrix op(d);
        for (int i = 0; i < d; ++i) op(i, i) = s * eig.eigenvectors(i, k);
        ks.operators.push_back(std::move(op));
    }
    return ks;
}

/// Correlation matrix of a channel given by diagonal Kraus operators:
/// tau_ij = sum_k (K_k)_ii conj((K_k)_jj).
inline SchurChannel schur_from_kraus(const KrausSet& ks) {
    if (ks.operators.empty()) throw std::invalid_argument("schur_from_kraus: empty Kraus set");
    const int d = ks.operators.front().dim;
    for (const auto& op : ks.operators) {
        if (op.dim != d) throw std::invalid_argument("schur_from_kraus: dimension mismatch");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j && std::abs(op(i, j)) > 1e-12)
                    throw std::invalid_argument("schur_from_kraus: non-diagonal Kraus operator");
    }
    ComplexMatrix tau(d);
    for (const auto& op : ks.operators)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) tau(i, j) += op(i, i) * std::conj(op(j, j));
    return SchurChannel::from(tau, 1e-8);
}

inline SchurChannel compose_schur(const SchurChannel& a, const SchurChannel& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("compose_schur: dimension mismatch");
    return SchurChannel{schur_product(a.tau, b.tau)};
}

/// Outcomes of a selective (Kraus-resolved) application: probabilities and
/// normalized post-measurement states. Branches with probability at or
/// below 1e-12 are dropped.
inline std::vector<std::pair<double, DensityMatrix>> selective_apply(const KrausSet& ks, const DensityMatrix& rho) {
    std::vector<std::pair<double, DensityMatrix>> out;
    for (const auto& k : ks.operators) {
        if (k.dim != rho.dim()) throw std::invalid_argument("selective_apply: dimension mismatch");
        ComplexMatrix m = matmul(matmul(k, rho.mat), adjoint(k));
        const double p = trace(m).real();
        if (p <= 1e-12) continue;
        for (cplx& z : m.entries) z /= p;
        out.emplace_back(p, DensityMatrix{symmetrize(m)});
    }
    return out;
}

/// Full dephasing: project onto the diagonal.
inline DensityMatrix dephase(const DensityMatrix& rho) {
    ComplexMatrix out(rho.dim());
    for (int i = 0; i < rho.dim(); ++i) out(i, i) = rho.mat(i, i).real();
    return DensityMatrix{std::move(out)};
}

/// Apply a channel through its Choi matrix: Phi(rho) = sum_ij rho_ij B_ij,
/// where B_ij is the (i,j) block of J. Output accuracy tracks the input's:
/// trace and positivity carry over within the Choi matrix's own residuals.
inline DensityMatrix apply_choi(const ChoiMatrix& J, const DensityMatrix& rho) {
    const int d = J.dim;
    if (d != rho.dim()) throw std::invalid_argument("apply_choi: dimension mismatch");
    ComplexMatrix out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const cplx rij = rho.mat(i, j);
            if (rij == cplx{}) continue;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) out(a, b) += rij * J.mat(i * d + a, j * d + b);
        }
    return DensityMatrix{symmetrize(out)};
}

/// Choi matrix of a Schur channel: B_ij = tau_ij |i><j|.
inline ChoiMatrix choi_from_schur(const SchurChannel& ch, ChannelClass tag = ChannelClass::GIO) {
    const int d = ch.dim();
    ComplexMatrix J(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) J(i * d + i, j * d + j) = ch.tau(i, j);
    return ChoiMatrix{d, std::move(J), tag};
}

/// |psi+><psi+| with every entry 1/d.
inline DensityMatrix maximally_coherent(int d) {
    if (d < 2) throw std::invalid_argument("maximally_coherent: d must be at least 2");
    ComplexMatrix m = ones_matrix(d);
    for (cplx& z : m.entries) z /= static_cast<double>(d);
    return DensityMatrix{std::move(m)};
}

/// M = sum_k p_k U_k |psi+><psi+| U_k^dag with U_k = diag(e^{i theta^k}).
/// Entrywise: M_ij = (1/d) sum_k p_k e^{i(theta^k_i - theta^k_j)}.
inline ComplexMatrix omega_materialize(const OmegaElement& w, int d) {
    if (w.weights.empty() || w.weights.size() != w.phases.size())
        throw std::invalid_argument("omega_materialize: weights and phases must pair up");
    double sum = 0.0;
    for (double p : w.weights) {
        if (p < 0.0) throw std::invalid_argument("omega_materialize: negative weight");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("omega_materialize: weights must sum to 1 within 1e-12");
    for (const auto& th : w.phases)
        if (static_cast<int>(th.size()) != d) throw std::invalid_argument("omega_materialize: phase vector length != d");

    ComplexMatrix m(d);
    for (size_t k = 0; k < w.weights.size(); ++k) {
        const double pk = w.weights[k];
        const auto& th = w.phases[k];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m(i, j) += pk * std::polar(1.0 / d, th[i] - th[j]);
    }
    return symmetrize(m);
}

/// One-parameter family p |psi+><psi+| + (1-p)/d I.
inline DensityMatrix rho_p(int d, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("rho_p: p must lie in [0, 1]");
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = (i == j) ? cplx(p / d + (1.0 - p) / d, 0.0) : cplx(p / d, 0.0);
    return DensityMatrix{std::move(m)};
}

}  // namespace gioq
