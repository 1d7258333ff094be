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

#include <cstdint>
#include <optional>
#include <tuple>

#include "gioq/matrix.hpp"

namespace gioq {

enum class SolverStatus { Optimal, Infeasible, MaxIterations };

inline const char* to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Optimal: return "optimal";
        case SolverStatus::Infeasible: return "infeasible";
        case SolverStatus::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

/// One linear equality constraint Re<a, X> = rhs, with <a, X> = tr(a X)
/// (real for Hermitian a, X).
struct LinearConstraint {
    ComplexMatrix a;
    double rhs = 0.0;
};

enum class Sense { Maximize, Minimize };

/// Standard-form Hermitian SDP: optimize Re<objective, X> subject to
/// Re<a_k, X> = rhs_k and X >= 0.
struct SdpProblem {
    int dim = 0;
    ComplexMatrix objective;
    std::vector<LinearConstraint> constraints;
    Sense sense = Sense::Maximize;
};

struct SolverSettings {
    double tol = 1e-8;
    int max_iter = 50000;
    uint64_t seed = 0;  // reserved for callers that randomize around the solver
};

struct SdpSolution {
    ComplexMatrix x;
    double value = 0.0;
    SolverStatus status = SolverStatus::MaxIterations;
    double primal_residual = 0.0;
    double dual_gap = 0.0;
    int iterations = 0;
};

// Constraint matrices that pin a single Hermitian entry. For off-diagonal
// positions the pair (real, imag) below satisfies tr(A_re X) = 2 Re X_rc and
// tr(A_im X) = 2 Im X_rc.
inline LinearConstraint pin_diagonal_entry(int dim, int r, double value) {
    ComplexMatrix a(dim);
    a(r, r) = 1.0;
    return {std::move(a), value};
}

inline std::pair<LinearConstraint, LinearConstraint> pin_offdiag_entry(int dim, int r, int c, cplx value) {
    ComplexMatrix are(dim), aim(dim);
    are(r, c) = 1.0;
    are(c, r) = 1.0;
    aim(r, c) = cplx(0.0, 1.0);
    aim(c, r) = cplx(0.0, -1.0);
    return {{std::move(are), 2.0 * value.real()}, {std::move(aim), 2.0 * value.imag()}};
}

namespace detail {

// ---- real symmetric workhorse used inside the solver ----------------------
//
// The complex variable is handled through the standard real embedding
//   emb(A) = [[Re A, -Im A], [Im A, Re A]],
// which is symmetric for Hermitian A and PSD iff A is. Inner products pick
// up a factor 2:  tr(A X) = (1/2) <emb(A), emb(X)>_F.  All b_k and the
// objective are scaled by that factor on entry and the factor is undone when
// reporting values.

struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // n*n row-major, symmetric

    SymMatrix() = default;
    explicit SymMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

inline double dot(const SymMatrix& x, const SymMatrix& y) {
    double s = 0.0;
    for (size_t k = 0; k < x.a.size(); ++k) s += x.a[k] * y.a[k];
    return s;
}

inline double norm(const SymMatrix& x) { return std::sqrt(dot(x, x)); }

inline SymMatrix embed(const ComplexMatrix& m) {
    const int n = m.dim;
    SymMatrix e(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = m(i, j).real();
            const double im = m(i, j).imag();
            e.at(i, j) = re;
            e.at(i + n, j + n) = re;
            e.at(i, j + n) = -im;
            e.at(i + n, j) = im;
        }
    return e;
}

inline ComplexMatrix deembed(const SymMatrix& e) {
    const int n = e.n / 2;
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = 0.5 * (e.at(i, j) + e.at(i + n, j + n));
            const double im = 0.5 * (e.at(i + n, j) - e.at(i, j + n));
            m(i, j) = cplx(re, im);
        }
    return m;
}

// Jacobi eigendecomposition for real symmetric matrices; the in-loop PSD
// projector. Mirrors the complex solver in matrix.hpp.
inline void sym_eig(const SymMatrix& input, std::vector<double>& lambda, std::vector<double>& vecs) {
    const int n = input.n;
    std::vector<double> a(input.a);
    vecs.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[static_cast<size_t>(i) * n + i] = 1.0;

    double fro = 0.0;
    for (double x : a) fro += x * x;
    const double scale = std::max(1.0, std::sqrt(fro));
    const double stop = 1e-12 * scale;
    const double skip = stop / (2.0 * n);

    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * at(i, j) * at(i, j);
        if (std::sqrt(off) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= skip) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = at(r, p);
                    const double arq = at(r, q);
                    at(r, p) = c * arp - s * arq;
                    at(r, q) = s * arp + c * arq;
                    at(p, r) = at(r, p);
                    at(q, r) = at(r, q);
                }
                const double cross = 2.0 * c * s * apq;
                at(p, p) = app * c * c - cross + aqq * s * s;
                at(q, q) = app * s * s + cross + aqq * c * c;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    double* vr = &vecs[static_cast<size_t>(r) * n];
                    const double vrp = vr[p];
                    const double vrq = vr[q];
                    vr[p] = c * vrp - s * vrq;
                    vr[q] = s * vrp + c * vrq;
                }
            }
        }
    }
    lambda.resize(n);
    for (int i = 0; i < n; ++i) lambda[i] = at(i, i);
}

// Projection onto the PSD cone followed by re-imposition of the embedding
// block structure, so iterates stay exactly in the embedded subspace.
inline void project_psd_embedded(SymMatrix& y, std::vector<double>& lambda, std::vector<double>& vecs) {
    const int n = y.n;
    sym_eig(y, lambda, vecs);
    std::fill(y.a.begin(), y.a.end(), 0.0);
    for (int k = 0; k < n; ++k) {
        if (lambda[k] <= 0.0) continue;
        const double lk = lambda[k];
        for (int i = 0; i < n; ++i) {
            const double w = lk * vecs[static_cast<size_t>(i) * n + k];
            if (w == 0.0) continue;
            for (int j = 0; j < n; ++j) y.at(i, j) += w * vecs[static_cast<size_t>(j) * n + k];
        }
    }
    const int h = n / 2;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            const double re = 0.5 * (y.at(i, j) + y.at(i + h, j + h));
            const double im = 0.5 * (y.at(i + h, j) - y.at(i, j + h));
            y.at(i, j) = re;
            y.at(i + h, j + h) = re;
            y.at(i, j + h) = -im;
            y.at(i + h, j) = im;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (y.at(i, j) + y.at(j, i));
            y.at(i, j) = v;
            y.at(j, i) = v;
        }
}

// Moore-Penrose pseudo-inverse of a (PSD) Gram matrix via eigendecomposition;
// tolerant of linearly dependent constraint lists.
struct GramSolver {
    int m = 0;
    std::vector<double> pinv;  // m*m

    explicit GramSolver(const std::vector<double>& gram, int size) : m(size), pinv(static_cast<size_t>(size) * size, 0.0) {
        SymMatrix g(size);
        g.a = gram;
        std::vector<double> lam, vec;
        sym_eig(g, lam, vec);
        double lmax = 0.0;
        for (double l : lam) lmax = std::max(lmax, std::abs(l));
        const double cutoff = std::max(lmax * 1e-12, 1e-300);
        for (int k = 0; k < m; ++k) {
            if (lam[k] <= cutoff) continue;
            const double inv = 1.0 / lam[k];
            for (int i = 0; i < m; ++i) {
                const double w = inv * vec[static_cast<size_t>(i) * m + k];
                if (w == 0.0) continue;
                for (int j = 0; j < m; ++j) pinv[static_cast<size_t>(i) * m + j] += w * vec[static_cast<size_t>(j) * m + k];
            }
        }
    }

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        out.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            const double* row = &pinv[static_cast<size_t>(i) * m];
            for (int j = 0; j < m; ++j) s += row[j] * in[j];
            out[i] = s;
        }
    }
};

}  // namespace detail

/// Solve a small dense Hermitian SDP by operator splitting (ADMM): alternate
/// a least-squares projection onto the affine constraint set with a
/// projection onto the PSD cone, with over-relaxation and residual-balanced
/// penalty updates. Dual multipliers come out of the affine projection and
/// give the reported duality gap. Deterministic: no randomized state.
inline SdpSolution solve(const SdpProblem& p, const SolverSettings& settings = {}) {
    using detail::SymMatrix;
    if (p.dim <= 0) throw std::invalid_argument("solve: dim must be positive");
    if (settings.tol <= 0.0 || settings.max_iter <= 0) throw std::invalid_argument("solve: invalid settings");
    if (!is_hermitian(p.objective) || p.objective.dim != p.dim)
        throw std::invalid_argument("solve: objective must be Hermitian of size dim");
    for (const auto& c : p.constraints)
        if (!is_hermitian(c.a) || c.a.dim != p.dim)
            throw std::invalid_argument("solve: constraint matrix must be Hermitian of size dim");

    const int n = 2 * p.dim;
    const double sign = (p.sense == Sense::Maximize) ? 1.0 : -1.0;

    // Embed and normalize. Constraints of zero norm are either trivial or
    // inconsistent on their own.
    SymMatrix cobj = detail::embed(symmetrize(p.objective));
    const double cnorm = std::max(1.0, detail::norm(cobj));
    for (double& v : cobj.a) v *= sign / cnorm;

    std::vector<SymMatrix> as;
    std::vector<double> bs;
    for (const auto& c : p.constraints) {
        SymMatrix e = detail::embed(symmetrize(c.a));
        const double an = detail::norm(e);
        if (an < 1e-300) {
            if (std::abs(c.rhs) > settings.tol)
                return {ComplexMatrix(p.dim), 0.0, SolverStatus::Infeasible, std::abs(c.rhs), 0.0, 0};
            continue;
        }
        for (double& v : e.a) v /= an;
        as.push_back(std::move(e));
        bs.push_back(2.0 * c.rhs / an);  // factor 2 from the embedding
    }
    const int m = static_cast<int>(as.size());

    std::vector<double> gram(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const double g = detail::dot(as[i], as[j]);
            gram[static_cast<size_t>(i) * m + j] = g;
            gram[static_cast<size_t>(j) * m + i] = g;
        }
    detail::GramSolver gsolver(gram, m);

    std::vector<double> resid(m), w(m), y(m);
    auto affine_project = [&](SymMatrix& v) {
        for (int k = 0; k < m; ++k) resid[k] = detail::dot(as[k], v) - bs[k];
        gsolver.apply(resid, w);
        for (int k = 0; k < m; ++k) {
            if (w[k] == 0.0) continue;
            const double wk = w[k];
            const double* src = as[k].a.data();
            double* dst = v.a.data();
            for (size_t t = 0; t < v.a.size(); ++t) dst[t] -= wk * src[t];
        }
    };

    // Consistency of the affine system: project the origin and check the
    // remaining residual. Inconsistent pins mean no Hermitian X at all.
    double bnorm = 0.0;
    for (double b : bs) bnorm = std::max(bnorm, std::abs(b));
    {
        SymMatrix probe(n);
        affine_project(probe);
        double rr = 0.0;
        for (int k = 0; k < m; ++k) rr = std::max(rr, std::abs(detail::dot(as[k], probe) - bs[k]));
        if (rr > 1e-8 * std::max(1.0, bnorm))
            return {ComplexMatrix(p.dim), 0.0, SolverStatus::Infeasible, rr, 0.0, 0};
    }

    SymMatrix x(n), z(n), u(n), zprev(n), tmp(n);
    std::vector<double> lam, vec;
    affine_project(z);
    detail::project_psd_embedded(z, lam, vec);

    // The iterate moves through the feasible set at speed ~ |P0 C| / rho per
    // iteration, where P0 projects onto the directions the constraints leave
    // free. Starting rho at that norm keeps the transit short whether the
    // effective objective is O(1) or nearly degenerate.
    double rho = 1.0;
    {
        SymMatrix cfree = cobj;
        for (int k = 0; k < m; ++k) resid[k] = detail::dot(as[k], cfree);
        gsolver.apply(resid, w);
        for (int k = 0; k < m; ++k) {
            if (w[k] == 0.0) continue;
            for (size_t t = 0; t < cfree.a.size(); ++t) cfree.a[t] -= w[k] * as[k].a[t];
        }
        rho = std::clamp(detail::norm(cfree), 1e-5, 1e2);
    }
    const double alpha = 1.6;
    const double tol = settings.tol;
    SolverStatus status = SolverStatus::MaxIterations;
    int it = 0;
    double primal_res = 0.0, dual_gap = 0.0;

    struct StepStats {
        double rp, sd, xs, zs, us;
    };
    // One full splitting iteration on (z, u): affine projection with the
    // objective shift, over-relaxation, PSD projection, dual update.
    auto admm_step = [&](SymMatrix& zc, SymMatrix& uc) -> StepStats {
        for (size_t t = 0; t < x.a.size(); ++t) x.a[t] = zc.a[t] - uc.a[t] + cobj.a[t] / rho;
        affine_project(x);
        for (int k = 0; k < m; ++k) y[k] = rho * w[k];  // dual estimate of this step

        zprev = zc;
        for (size_t t = 0; t < zc.a.size(); ++t) {
            const double xh = alpha * x.a[t] + (1.0 - alpha) * zprev.a[t];
            tmp.a[t] = xh;
            zc.a[t] = xh + uc.a[t];
        }
        detail::project_psd_embedded(zc, lam, vec);
        for (size_t t = 0; t < uc.a.size(); ++t) uc.a[t] += tmp.a[t] - zc.a[t];

        StepStats s{0.0, 0.0, 0.0, 0.0, 0.0};
        for (size_t t = 0; t < x.a.size(); ++t) {
            const double d1 = x.a[t] - zc.a[t];
            const double d2 = zc.a[t] - zprev.a[t];
            s.rp += d1 * d1;
            s.sd += d2 * d2;
            s.xs += x.a[t] * x.a[t];
            s.zs += zc.a[t] * zc.a[t];
            s.us += uc.a[t] * uc.a[t];
        }
        s.rp = std::sqrt(s.rp);
        s.sd = rho * std::sqrt(s.sd);
        s.us = rho * std::sqrt(s.us);
        return s;
    };

    // Anderson acceleration over the stacked iterate v = [z; u], applied to
    // the splitting map every few iterations and only kept when the
    // candidate's own fixed-point residual beats the plain one (safeguard).
    // History restarts whenever rho changes, since that changes the map.
    constexpr int kAaMemory = 8;
    constexpr int kAaPeriod = 8;
    const size_t vn = 2 * z.a.size();
    std::vector<std::vector<double>> aa_v, aa_g;
    std::vector<double> vprev(vn), gcur(vn), vacc(vn);
    SymMatrix z_try(n), u_try(n);
    auto stack_state = [&](const SymMatrix& a, const SymMatrix& b, std::vector<double>& out) {
        std::copy(a.a.begin(), a.a.end(), out.begin());
        std::copy(b.a.begin(), b.a.end(), out.begin() + a.a.size());
    };

    // Penalty adaptation runs on an exponential backoff: each rescaling of u
    // perturbs the fixed point, so unbounded rebalancing can keep the
    // iteration from ever settling. Backing off guarantees the tail of the
    // run sees a frozen, provably convergent map.
    int next_adapt = 10;

    // Infeasibility shows up as a stalled primal residual with a converged
    // z-sequence and a dual variable that keeps marching off linearly.
    // Checkpoint the pair (rp, ||rho u||) and fire on that signature.
    std::vector<std::pair<double, double>> checkpoints;

    for (it = 1; it <= settings.max_iter; ++it) {
        stack_state(z, u, vprev);
        StepStats s = admm_step(z, u);

        double gnorm = 0.0;
        {
            size_t off = 0;
            for (size_t t = 0; t < z.a.size(); ++t, ++off) {
                gcur[off] = z.a[t] - vprev[off];
                gnorm += gcur[off] * gcur[off];
            }
            for (size_t t = 0; t < u.a.size(); ++t, ++off) {
                gcur[off] = u.a[t] - vprev[off];
                gnorm += gcur[off] * gcur[off];
            }
            gnorm = std::sqrt(gnorm);
        }
        aa_v.push_back(vprev);
        aa_g.push_back(gcur);
        if (static_cast<int>(aa_v.size()) > kAaMemory) {
            aa_v.erase(aa_v.begin());
            aa_g.erase(aa_g.begin());
        }

        if (it % kAaPeriod == 0 && aa_v.size() >= 3) {
            const int h = static_cast<int>(aa_v.size()) - 1;
            std::vector<double> ls(static_cast<size_t>(h) * h), rhs(h);
            double diagmax = 0.0;
            for (int i = 0; i < h; ++i) {
                for (int j = i; j < h; ++j) {
                    double acc = 0.0;
                    for (size_t t = 0; t < vn; ++t)
                        acc += (aa_g[i + 1][t] - aa_g[i][t]) * (aa_g[j + 1][t] - aa_g[j][t]);
                    ls[static_cast<size_t>(i) * h + j] = acc;
                    ls[static_cast<size_t>(j) * h + i] = acc;
                }
                double acc = 0.0;
                for (size_t t = 0; t < vn; ++t) acc += (aa_g[i + 1][t] - aa_g[i][t]) * gcur[t];
                rhs[i] = acc;
                diagmax = std::max(diagmax, ls[static_cast<size_t>(i) * h + i]);
            }
            for (int i = 0; i < h; ++i) ls[static_cast<size_t>(i) * h + i] += 1e-10 * std::max(diagmax, 1e-30);
            detail::GramSolver aa_ls(ls, h);
            std::vector<double> gamma;
            aa_ls.apply(rhs, gamma);

            // type-II combination of map outputs T(v_j) = v_j + g_j
            for (size_t t = 0; t < vn; ++t) vacc[t] = vprev[t] + gcur[t];
            for (int j = 0; j < h; ++j) {
                if (gamma[j] == 0.0) continue;
                for (size_t t = 0; t < vn; ++t)
                    vacc[t] -= gamma[j] * ((aa_v[j + 1][t] + aa_g[j + 1][t]) - (aa_v[j][t] + aa_g[j][t]));
            }
            std::copy(vacc.begin(), vacc.begin() + z.a.size(), z_try.a.begin());
            std::copy(vacc.begin() + z.a.size(), vacc.end(), u_try.a.begin());
            const StepStats s_try = admm_step(z_try, u_try);

            double gtry = 0.0;
            {
                size_t off = 0;
                for (size_t t = 0; t < z_try.a.size(); ++t, ++off) {
                    const double d = z_try.a[t] - vacc[off];
                    gtry += d * d;
                }
                for (size_t t = 0; t < u_try.a.size(); ++t, ++off) {
                    const double d = u_try.a[t] - vacc[off];
                    gtry += d * d;
                }
                gtry = std::sqrt(gtry);
            }
            if (gtry < 0.9 * gnorm) {
                z = z_try;
                u = u_try;
                s = s_try;
                aa_v.clear();
                aa_g.clear();
            } else {
                // discard: recompute the step at the plain point so x, y and
                // the stats match the state we keep
                s = admm_step(z, u);
            }
        }

        const double eps_pri = tol * std::max({1.0, std::sqrt(s.xs), std::sqrt(s.zs)});
        const double eps_dua = tol * std::max(1.0, s.us);

        if (s.rp <= eps_pri && s.sd <= eps_dua) {
            const double primal = detail::dot(cobj, x);
            double dual = 0.0;
            for (int k = 0; k < m; ++k) dual += bs[k] * y[k];
            dual_gap = dual - primal;
            primal_res = s.rp;
            if (std::abs(dual_gap) <= 1e3 * tol * std::max(1.0, std::abs(primal))) {
                status = SolverStatus::Optimal;
                break;
            }
        }

        // Residual balancing: steer rho toward the point where the relative
        // primal and dual residuals match. This pulls the penalty away from
        // flat regions where both residuals decay in lockstep at a uselessly
        // slow rate.
        if (it == next_adapt) {
            next_adapt += std::max(10, next_adapt / 2);
            const double rrp = s.rp / std::max(1.0, std::max(std::sqrt(s.xs), std::sqrt(s.zs)));
            const double rsd = s.sd / std::max(1.0, s.us);
            if (rsd > 1e-300) {
                const double ratio = rrp / rsd;
                double factor = 1.0;
                if (ratio > 1.2)
                    factor = std::min(2.0, std::sqrt(ratio));
                else if (ratio < 1.0 / 1.2)
                    factor = std::max(0.5, std::sqrt(ratio));
                if (factor != 1.0) {
                    const double next = std::clamp(rho * factor, 1e-6, 1e6);
                    if (next != rho) {
                        for (double& v : u.a) v *= rho / next;
                        rho = next;
                        aa_v.clear();
                        aa_g.clear();
                    }
                }
            }
        }
        if (it % 100 == 0) {
            checkpoints.emplace_back(s.rp, s.us);
            if (checkpoints.size() > 6) checkpoints.erase(checkpoints.begin());
            const bool runaway = s.us > 1e10 * std::max(1.0, bnorm);
            bool marching = false;
            if (checkpoints.size() == 6) {
                const auto& [rp_then, us_then] = checkpoints.front();
                marching = s.sd <= 10.0 * tol * std::max(1.0, s.us) &&     // dual side settled
                           s.rp > 1e3 * eps_pri && s.rp > 0.5 * rp_then &&  // primal residual stuck
                           s.us - us_then > 0.05 * std::max(1.0, bnorm);    // dual still diverging
            }
            if (runaway || marching) {
                status = SolverStatus::Infeasible;
                break;
            }
        }
    }

    SdpSolution sol;
    sol.x = detail::deembed(x);
    sol.status = status;
    sol.iterations = std::min(it, settings.max_iter);
    sol.primal_residual = primal_res / std::sqrt(2.0);  // back to complex units

    // Report the objective in original (complex, unscaled) units.
    double value = 0.0;
    {
        const ComplexMatrix xs_c = symmetrize(sol.x);
        const ComplexMatrix cs = symmetrize(p.objective);
        cplx t{};
        for (int i = 0; i < p.dim; ++i)
            for (int j = 0; j < p.dim; ++j) t += cs(i, j) * xs_c(j, i);
        value = t.real();
    }
    sol.value = value;
    sol.dual_gap = dual_gap * cnorm / 2.0;  // undo objective scaling and the embedding factor
    if (status == SolverStatus::Infeasible) sol.value = 0.0;
    return sol;
}

enum class FeasibilityVerdict { Feasible, Infeasible };

struct FeasibilityResult {
    FeasibilityVerdict verdict = FeasibilityVerdict::Infeasible;
    ComplexMatrix completion;  // best correlation-matrix completion found
    double margin = 0.0;       // max over completions of the smallest eigenvalue
    SolverStatus solver_status = SolverStatus::Optimal;
    int iterations = 0;
};

/// PSD completion of a partially specified correlation matrix: maximize t
/// such that X - t I >= 0 with X_ii = 1 and the given off-diagonal entries
/// pinned. Solved through the substitution Y = X - t I, which turns the
/// margin into an ordinary trace-like objective (minimize the common
/// diagonal of Y). Feasible iff the optimal t >= -tol; the margin is
/// reported either way, and boundary cases count as feasible since the
/// underlying conditions are closed.
inline FeasibilityResult feasibility(const std::vector<std::tuple<int, int, cplx>>& fixed, int dim,
                                     const SolverSettings& settings = {}) {
    if (dim < 1) throw std::invalid_argument("feasibility: dim must be positive");

    // Collect pins; (i,j) and (j,i) must agree up to conjugation.
    std::vector<std::optional<cplx>> pin(static_cast<size_t>(dim) * dim);
    bool diag_seen = false;
    for (const auto& [i, j, val] : fixed) {
        if (i < 0 || j < 0 || i >= dim || j >= dim) throw std::invalid_argument("feasibility: index out of range");
        if (i == j) {
            if (std::abs(val - cplx(1.0, 0.0)) > 1e-9)
                throw std::invalid_argument("feasibility: diagonal entries must be pinned to 1");
            diag_seen = true;
            continue;
        }
        const int r = std::min(i, j), c = std::max(i, j);
        const cplx v = (i < j) ? val : std::conj(val);
        auto& slot = pin[static_cast<size_t>(r) * dim + c];
        if (slot && std::abs(*slot - v) > 1e-9)
            throw std::invalid_argument("feasibility: inconsistent fixed pattern at (" + std::to_string(r) + "," +
                                        std::to_string(c) + ")");
        slot = v;
    }
    (void)diag_seen;  // diagonal is pinned implicitly either way

    // Fully specified pattern: the completion is unique, so the margin is
    // just its smallest eigenvalue (identical to the SDP optimum).
    bool any_free = false;
    for (int i = 0; i < dim && !any_free; ++i)
        for (int j = i + 1; j < dim && !any_free; ++j)
            if (!pin[static_cast<size_t>(i) * dim + j]) any_free = true;

    FeasibilityResult out;
    if (!any_free) {
        ComplexMatrix x = identity_matrix(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                const cplx v = *pin[static_cast<size_t>(i) * dim + j];
                x(i, j) = v;
                x(j, i) = std::conj(v);
            }
        out.completion = x;
        out.margin = (dim == 1) ? 1.0 : min_eigenvalue(x);
        out.verdict = (out.margin >= -settings.tol) ? FeasibilityVerdict::Feasible : FeasibilityVerdict::Infeasible;
        return out;
    }

    SdpProblem p;
    p.dim = dim;
    p.sense = Sense::Minimize;
    p.objective = ComplexMatrix(dim);
    p.objective(0, 0) = 1.0;  // minimize Y_00 = 1 - t
    for (int k = 1; k < dim; ++k) {
        ComplexMatrix a(dim);
        a(k, k) = 1.0;
        a(0, 0) = -1.0;
        p.constraints.push_back({std::move(a), 0.0});
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const auto& slot = pin[static_cast<size_t>(i) * dim + j];
            if (!slot) continue;
            auto [cre, cim] = pin_offdiag_entry(dim, i, j, *slot);
            p.constraints.push_back(std::move(cre));
            p.constraints.push_back(std::move(cim));
        }

    SdpSolution sol = solve(p, settings);
    out.solver_status = sol.status;
    out.iterations = sol.iterations;
    if (sol.status == SolverStatus::Infeasible) {
        out.verdict = FeasibilityVerdict::Infeasible;
        out.margin = -1.0;
        return out;
    }

    // X = Y + t I: off-diagonal entries carry over from Y unchanged, the
    // diagonal lands back on 1; re-pin the fixed entries exactly.
    const double t = 1.0 - sol.x(0, 0).real();
    ComplexMatrix x = sol.x;
    for (int i = 0; i < dim; ++i) x(i, i) = 1.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const auto& slot = pin[static_cast<size_t>(i) * dim + j];
            if (slot) {
                x(i, j) = *slot;
                x(j, i) = std::conj(*slot);
            } else {
                x(j, i) = std::conj(x(i, j));
            }
        }
    out.completion = std::move(x);
    out.margin = t;
    out.verdict = (t >= -settings.tol) ? FeasibilityVerdict::Feasible : FeasibilityVerdict::Infeasible;
    return out;
}

}  // namespace gioq
