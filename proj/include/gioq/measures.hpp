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

#include "gioq/channels.hpp"

namespace gioq {

/// Raised when the SDP backend fails to certify a solution.
struct SolverFailure : std::runtime_error {
    SolverStatus status;
    explicit SolverFailure(SolverStatus s)
        : std::runtime_error(std::string("SDP solver failed: ") + to_string(s)), status(s) {}
};

struct MeasureReport {
    double value = 0.0;
    std::optional<SchurChannel> schur_witness;
    std::optional<ChoiMatrix> choi_witness;
    SolverStatus solver_status = SolverStatus::Optimal;
    double primal_residual = 0.0;
    double dual_gap = 0.0;
    int iterations = 0;
};

/// Observables indexing the C_M family: Hermitian, PSD, every diagonal
/// entry 1/d. Anything else is rejected rather than projected.
inline void require_omega_observable(const ComplexMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("observable: non-finite entries");
    if (!is_hermitian(m)) throw std::invalid_argument("observable: not Hermitian within 1e-9");
    const double inv_d = 1.0 / m.dim;
    for (int i = 0; i < m.dim; ++i)
        if (std::abs(m(i, i) - cplx(inv_d, 0.0)) > 1e-9)
            throw std::invalid_argument("observable: diagonal entry differs from 1/d beyond 1e-9");
    if (min_eigenvalue(m) < -1e-9) throw std::invalid_argument("observable: not PSD");
}

/// l1-norm of coherence: sum of |rho_ij| over i != j.
inline double c_l1(const DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j)
            if (i != j) s += std::abs(rho.mat(i, j));
    return s;
}

namespace detail {

inline void require_optimal(const SdpSolution& sol) {
    if (sol.status != SolverStatus::Optimal) throw SolverFailure(sol.status);
}

}  // namespace detail

/// Robustness of coherence: the least s with rho <= (1+s) delta for some
/// incoherent delta. With D = (1+s) delta this is min tr(Y) over Y >= 0
/// whose off-diagonal is pinned to -rho's, a d x d SDP that never touches a
/// dense free variable.
inline MeasureReport c_roc(const DensityMatrix& rho, const SolverSettings& settings = {}) {
    const int d = rho.dim();
    SdpProblem p;
    p.dim = d;
    p.sense = Sense::Minimize;
    p.objective = identity_matrix(d);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto [cre, cim] = pin_offdiag_entry(d, i, j, -rho.mat(i, j));
            p.constraints.push_back(std::move(cre));
            p.constraints.push_back(std::move(cim));
        }
    if (p.constraints.empty()) {
        // d = 1 or fully incoherent pinning set; still well-defined
        return MeasureReport{0.0, std::nullopt, std::nullopt, SolverStatus::Optimal, 0.0, 0.0, 0};
    }
    SdpSolution sol = solve(p, settings);
    detail::require_optimal(sol);
    MeasureReport rep;
    rep.value = std::max(0.0, sol.value);
    rep.solver_status = sol.status;
    rep.primal_residual = sol.primal_residual;
    rep.dual_gap = sol.dual_gap;
    rep.iterations = sol.iterations;
    return rep;
}

/// C_M over genuinely incoherent operations, as the correlation-matrix SDP
///   max sum_{i != j} tau_ij rho_ij M_ji   s.t.  tau >= 0, tau_ii = 1.
/// The optimal tau is returned as the witness Schur channel; the value
/// equals max_Phi tr(Phi(rho) M) - 1/d.
inline MeasureReport cm_gio(const DensityMatrix& rho, const ComplexMatrix& M, const SolverSettings& settings = {}) {
    if (M.dim != rho.dim()) throw std::invalid_argument("cm_gio: dimension mismatch");
    require_omega_observable(M);
    const int d = rho.dim();

    // tr(tau C) = sum_ij tau_ij rho_ij M_ji  for C_ij = rho_ji M_ij
    SdpProblem p;
    p.dim = d;
    p.sense = Sense::Maximize;
    p.objective = ComplexMatrix(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p.objective(i, j) = rho.mat(j, i) * M(i, j);
    p.objective = symmetrize(p.objective);
    for (int i = 0; i < d; ++i) p.constraints.push_back(pin_diagonal_entry(d, i, 1.0));

    SdpSolution sol = solve(p, settings);
    detail::require_optimal(sol);

    MeasureReport rep;
    rep.value = sol.value - 1.0 / d;
    rep.solver_status = sol.status;
    rep.primal_residual = sol.primal_residual;
    rep.dual_gap = sol.dual_gap;
    rep.iterations = sol.iterations;
    const double witness_tol = std::max(1e-9, 10.0 * (sol.primal_residual + settings.tol));
    rep.schur_witness = SchurChannel::from(sol.x, witness_tol);
    return rep;
}

/// C_M over a channel class in {GIO, DIO, MIO}: the Choi SDP
///   max <J, rho^T (x) M> - 1/d   s.t.  J >= 0, class constraints.
inline MeasureReport cm_class(const DensityMatrix& rho, const ComplexMatrix& M, ChannelClass cls,
                              const SolverSettings& settings = {}) {
    if (cls == ChannelClass::CPTP) throw std::invalid_argument("cm_class: class must be GIO, DIO or MIO");
    if (M.dim != rho.dim()) throw std::invalid_argument("cm_class: dimension mismatch");
    require_omega_observable(M);
    const int d = rho.dim();
    const int n = d * d;

    SdpProblem p;
    p.dim = n;
    p.sense = Sense::Maximize;
    p.objective = ComplexMatrix(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    p.objective(i * d + a, j * d + b) = rho.mat(j, i) * M(a, b);  // rho^T (x) M
    p.constraints = class_constraints(cls, d);

    SdpSolution sol = solve(p, settings);
    detail::require_optimal(sol);

    MeasureReport rep;
    rep.value = sol.value - 1.0 / d;
    rep.solver_status = sol.status;
    rep.primal_residual = sol.primal_residual;
    rep.dual_gap = sol.dual_gap;
    rep.iterations = sol.iterations;
    const double witness_tol = std::max(1e-9, 10.0 * (sol.primal_residual + settings.tol));
    rep.choi_witness = ChoiMatrix::from(d, sol.x, cls, witness_tol);
    return rep;
}

/// Joint bound check for one (rho, M) pair:
///   C_l1/(d-1) * min|M_ij|  <=  C_M  <=  C_l1 * max|M_ij|
///   0 <= C_M <= C_ROC / d, with equality at M = |psi+><psi+|.
/// Inequalities carry slack 1e-7; the two-solver equality branch uses 1e-5
/// to leave the backends headroom.
struct BoundsReport {
    double c_l1_value = 0.0;
    double lower = 0.0;       // C_l1/(d-1) * min |M_ij|
    double c_m = 0.0;
    double upper = 0.0;       // C_l1 * max |M_ij|
    double roc_over_d = 0.0;
    bool lower_ok = false;
    bool upper_ok = false;
    bool nonneg_ok = false;
    bool roc_ok = false;
    bool is_psi_plus = false;
    bool equality_ok = true;  // only meaningful when is_psi_plus
    bool all_ok() const { return lower_ok && upper_ok && nonneg_ok && roc_ok && (!is_psi_plus || equality_ok); }
};

inline BoundsReport verify_bounds(const DensityMatrix& rho, const ComplexMatrix& M, const SolverSettings& settings = {}) {
    require_omega_observable(M);
    const int d = rho.dim();
    const double slack = 1e-7;

    BoundsReport r;
    r.c_l1_value = c_l1(rho);
    double mmin = std::numeric_limits<double>::infinity(), mmax = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) {
                mmin = std::min(mmin, std::abs(M(i, j)));
                mmax = std::max(mmax, std::abs(M(i, j)));
            }
    r.lower = r.c_l1_value / (d - 1) * mmin;
    r.upper = r.c_l1_value * mmax;
    r.c_m = cm_gio(rho, M, settings).value;
    r.roc_over_d = c_roc(rho, settings).value / d;

    r.lower_ok = r.lower <= r.c_m + slack;
    r.upper_ok = r.c_m <= r.upper + slack;
    r.nonneg_ok = r.c_m >= -slack;
    r.roc_ok = r.c_m <= r.roc_over_d + slack;

    r.is_psi_plus = true;
    for (int i = 0; i < d && r.is_psi_plus; ++i)
        for (int j = 0; j < d && r.is_psi_plus; ++j)
            if (std::abs(M(i, j) - cplx(1.0 / d, 0.0)) > 1e-9) r.is_psi_plus = false;
    if (r.is_psi_plus) r.equality_ok = std::abs(r.c_m - r.roc_over_d) <= 1e-5;
    return r;
}

}  // namespace gioq
