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

#include <future>
#include <random>
#include <thread>

#include "gioq/measures.hpp"

namespace gioq {

enum class FailReason { None, DiagonalMismatch, ForcedEntryTooLarge, ZeroToNonzero, CompletionInfeasible };

inline const char* to_string(FailReason r) {
    switch (r) {
        case FailReason::None: return "none";
        case FailReason::DiagonalMismatch: return "diagonal-mismatch";
        case FailReason::ForcedEntryTooLarge: return "forced-entry-too-large";
        case FailReason::ZeroToNonzero: return "zero-to-nonzero";
        case FailReason::CompletionInfeasible: return "completion-infeasible";
    }
    return "unknown";
}

struct Verdict {
    bool convertible = false;
    FailReason reason = FailReason::None;
    int fail_i = -1, fail_j = -1;  // offending position, when a reason names one
    double margin = 0.0;
    std::optional<SchurChannel> schur_witness;
    std::optional<ChoiMatrix> choi_witness;
};

namespace detail {

constexpr double kForcedEntryThreshold = 1e-10;  // |rho_ij| above this forces tau_ij
constexpr double kDiagTol = 1e-8;
constexpr double kWitnessTol = 1e-7;

inline double offdiag_action_defect(const SchurChannel& tau, const DensityMatrix& rho, const DensityMatrix& sigma) {
    double m = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j) {
            if (i == j) continue;
            m = std::max(m, std::abs(tau.tau(i, j) * rho.mat(i, j) - sigma.mat(i, j)));
        }
    return m;
}

// One conversion attempt for a given choice of which entries count as
// forced. Returns nullopt when the attempt fails for a reason that the
// straddle retry might fix (never for a hard ZeroToNonzero on a clearly
// nonzero target).
inline Verdict gio_attempt(const DensityMatrix& rho, const DensityMatrix& sigma, bool require_equal_diagonal,
                           double force_threshold, const SolverSettings& settings) {
    const int d = rho.dim();
    Verdict v;

    if (require_equal_diagonal) {
        for (int i = 0; i < d; ++i) {
            if (std::abs(rho.mat(i, i) - sigma.mat(i, i)) > kDiagTol) {
                v.reason = FailReason::DiagonalMismatch;
                v.fail_i = v.fail_j = i;
                return v;
            }
        }
    }

    std::vector<std::tuple<int, int, cplx>> fixed;
    for (int i = 0; i < d; ++i) fixed.emplace_back(i, i, cplx(1.0, 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const cplx rij = rho.mat(i, j);
            const cplx sij = sigma.mat(i, j);
            if (std::abs(rij) > force_threshold) {
                cplx t = sij / rij;
                const double mag = std::abs(t);
                if (mag > 1.0 + 1e-8) {
                    v.reason = FailReason::ForcedEntryTooLarge;
                    v.fail_i = i;
                    v.fail_j = j;
                    return v;
                }
                if (mag > 1.0) t /= mag;  // boundary case, snap onto the disc
                fixed.emplace_back(i, j, t);
            } else if (std::abs(sij) > kForcedEntryThreshold) {
                v.reason = FailReason::ZeroToNonzero;
                v.fail_i = i;
                v.fail_j = j;
                return v;
            }
        }

    FeasibilityResult feas = feasibility(fixed, d, settings);
    v.margin = feas.margin;
    if (feas.verdict != FeasibilityVerdict::Feasible) {
        v.reason = FailReason::CompletionInfeasible;
        return v;
    }

    SchurChannel tau = SchurChannel::from(feas.completion, std::max(1e-9, 2.0 * settings.tol));
    const double defect = require_equal_diagonal
                              ? max_abs_diff(apply_schur(tau, rho).mat, sigma.mat)
                              : offdiag_action_defect(tau, rho, sigma);
    if (defect > kWitnessTol) {
        v.reason = FailReason::CompletionInfeasible;  // sound over complete
        return v;
    }
    v.convertible = true;
    v.reason = FailReason::None;
    v.schur_witness = std::move(tau);
    return v;
}

// Straddle handling around the forced-entry threshold: when a first pass
// fails and some |rho_ij| sit within a decade of the threshold, retry with
// those entries treated as free. Keeps the accepted set closed under the
// numerical boundary without ever skipping the witness check.
inline Verdict gio_decide(const DensityMatrix& rho, const DensityMatrix& sigma, bool require_equal_diagonal,
                          const SolverSettings& settings) {
    // identical states ride the identity channel, whatever the zero pattern
    if (max_abs_diff(rho.mat, sigma.mat) <= 1e-12) {
        Verdict v;
        v.convertible = true;
        v.margin = 0.0;  // the all-ones completion sits on the PSD boundary
        v.schur_witness = SchurChannel{ones_matrix(rho.dim())};
        return v;
    }

    Verdict first = gio_attempt(rho, sigma, require_equal_diagonal, kForcedEntryThreshold, settings);
    if (first.convertible || first.reason == FailReason::DiagonalMismatch) return first;

    bool straddlers = false;
    for (int i = 0; i < rho.dim() && !straddlers; ++i)
        for (int j = i + 1; j < rho.dim() && !straddlers; ++j) {
            const double m = std::abs(rho.mat(i, j));
            if (m > kForcedEntryThreshold && m <= 10.0 * kForcedEntryThreshold &&
                std::abs(sigma.mat(i, j)) <= kWitnessTol)
                straddlers = true;
        }
    if (!straddlers) return first;

    Verdict second = gio_attempt(rho, sigma, require_equal_diagonal, 10.0 * kForcedEntryThreshold, settings);
    return second.convertible ? second : first;
}

}  // namespace detail

/// Decide rho -> sigma under genuinely incoherent operations. Convertible
/// exactly when the diagonals agree, every forced ratio sigma_ij/rho_ij
/// stays in the closed unit disc, no zero entry of rho must map to a
/// nonzero entry of sigma, and the partially pinned correlation matrix
/// admits a PSD completion. A Convertible verdict always carries a Schur
/// witness whose action has been re-checked against sigma.
inline Verdict decide_gio(const DensityMatrix& rho, const DensityMatrix& sigma, const SolverSettings& settings = {}) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("decide_gio: dimension mismatch");
    return detail::gio_decide(rho, sigma, /*require_equal_diagonal=*/true, settings);
}

/// The channel sending |psi><psi| (psi_i = sqrt(rho_ii)) to rho:
/// tau0_ij = rho_ij / sqrt(rho_ii rho_jj) wherever both diagonals are
/// positive; rows and columns of vanishing diagonal entries are zeroed off
/// the diagonal. PSD by congruence with rho, and the Schur action
/// reproduces rho entrywise.
inline SchurChannel construct_mcs_gio(const DensityMatrix& rho) {
    const int d = rho.dim();
    ComplexMatrix tau(d);
    std::vector<double> diag(d);
    for (int i = 0; i < d; ++i) diag[i] = std::max(0.0, rho.mat(i, i).real());

    for (int i = 0; i < d; ++i) {
        tau(i, i) = 1.0;
        for (int j = i + 1; j < d; ++j) {
            if (diag[i] <= 1e-12 || diag[j] <= 1e-12) continue;  // zeroed row/column
            const cplx t = rho.mat(i, j) / std::sqrt(diag[i] * diag[j]);
            tau(i, j) = t;
            tau(j, i) = std::conj(t);
        }
    }
    return SchurChannel::from(tau);
}

/// x majorized by y: sorted-descending prefix sums of x never exceed those
/// of y (within 1e-9).
inline bool majorizes(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("majorizes: length mismatch");
    auto check = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double t : v) {
            if (t < -1e-12 || !std::isfinite(t)) throw std::invalid_argument("majorizes: not a probability vector");
            s += t;
        }
        if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("majorizes: entries must sum to 1");
    };
    check(x);
    check(y);
    std::vector<double> xs(x), ys(y);
    std::sort(xs.begin(), xs.end(), std::greater<>());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    double px = 0.0, py = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
        px += xs[k];
        py += ys[k];
        if (px > py + 1e-9) return false;
    }
    return true;
}

struct PureToMixedSio {
    bool predicate = false;   // (|psi_i|^2) majorized by diag(sigma)
    SchurChannel gio_part;    // maps |eta><eta| (eta_i = sqrt(sigma_ii)) to sigma
};

/// Majorization test for pure-to-mixed conversion under strictly incoherent
/// operations, together with the genuinely-incoherent tail of the pipeline.
/// The pure-to-pure front half is intentionally not constructed here.
inline PureToMixedSio decide_pure_to_mixed_sio(const std::vector<cplx>& psi, const DensityMatrix& sigma) {
    if (static_cast<int>(psi.size()) != sigma.dim())
        throw std::invalid_argument("decide_pure_to_mixed_sio: dimension mismatch");
    double norm2 = 0.0;
    for (const cplx& z : psi) norm2 += std::norm(z);
    if (std::abs(norm2 - 1.0) > 1e-9) throw std::invalid_argument("decide_pure_to_mixed_sio: |psi> not normalized");

    std::vector<double> probs(psi.size()), diag(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) {
        probs[i] = std::norm(psi[i]);
        diag[i] = std::max(0.0, sigma.mat(static_cast<int>(i), static_cast<int>(i)).real());
    }
    return PureToMixedSio{majorizes(probs, diag), construct_mcs_gio(sigma)};
}

struct WitnessSearchResult {
    OmegaElement omega;
    double gap = 0.0;  // cm_gio(sigma, M) - cm_gio(rho, M), solver-certified
};

namespace detail {

struct OmegaParams {
    int d = 0;
    int components = 0;

    int size() const { return components - 1 + components * (d - 1); }

    OmegaElement build(const std::vector<double>& x) const {
        OmegaElement w;
        w.weights.resize(components);
        double maxl = 0.0;
        std::vector<double> logits(components, 0.0);
        for (int k = 1; k < components; ++k) {
            logits[k] = x[k - 1];
            maxl = std::max(maxl, logits[k]);
        }
        double z = 0.0;
        for (int k = 0; k < components; ++k) z += std::exp(logits[k] - maxl);
        for (int k = 0; k < components; ++k) w.weights[k] = std::exp(logits[k] - maxl) / z;
        int idx = components - 1;
        w.phases.assign(components, std::vector<double>(d, 0.0));
        for (int k = 0; k < components; ++k)
            for (int i = 1; i < d; ++i) w.phases[k][i] = x[idx++];
        return w;
    }
};

// Nelder-Mead maximization, capped by evaluation budget. Good enough for
// the handful of smooth low-dimensional phase landscapes searched here.
template <typename F>
std::pair<std::vector<double>, double> nelder_mead_max(F&& f, std::vector<double> x0, double step, int max_evals) {
    const int n = static_cast<int>(x0.size());
    struct Pt {
        std::vector<double> x;
        double f;
    };
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return -f(x);  // minimize -f
    };

    std::vector<Pt> s;
    s.push_back({x0, eval(x0)});
    for (int i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += step;
        s.push_back({std::move(x), 0.0});
        s.back().f = eval(s.back().x);
    }

    while (evals < max_evals) {
        std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.f < b.f; });
        if (std::abs(s.back().f - s.front().f) < 1e-9) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) centroid[k] += s[i].x[k];
        }
        for (double& c : centroid) c /= n;

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (int k = 0; k < n; ++k) x[k] = centroid[k] + coef * (centroid[k] - s[n].x[k]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < s[0].f) {
            std::vector<double> xe = blend(2.0);
            const double fe = eval(xe);
            if (fe < fr)
                s[n] = {std::move(xe), fe};
            else
                s[n] = {std::move(xr), fr};
        } else if (fr < s[n - 1].f) {
            s[n] = {std::move(xr), fr};
        } else {
            std::vector<double> xc = blend(-0.5);
            const double fc = eval(xc);
            if (fc < s[n].f) {
                s[n] = {std::move(xc), fc};
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < n; ++k) s[i].x[k] = s[0].x[k] + 0.5 * (s[i].x[k] - s[0].x[k]);
                    s[i].f = eval(s[i].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.f < b.f; });
    return {s.front().x, -s.front().f};
}

}  // namespace detail

/// Best-effort falsification of rho -> sigma: maximize
///   g(M) = C_M(sigma) - C_M(rho)
/// over Omega elements with d mixture components by multi-start
/// Nelder-Mead on weights and phases. A returned witness has been
/// re-certified at full solver tolerance and proves NotConvertible; an
/// empty result proves nothing. Restarts run in parallel batches merged in
/// restart order, so results are reproducible for a fixed seed.
inline std::optional<WitnessSearchResult> search_witness_measure(const DensityMatrix& rho, const DensityMatrix& sigma,
                                                                 int budget, uint64_t seed,
                                                                 const SolverSettings& settings = {}) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("search_witness_measure: dimension mismatch");
    for (int i = 0; i < rho.dim(); ++i)
        if (std::abs(rho.mat(i, i) - sigma.mat(i, i)) > detail::kDiagTol)
            throw std::invalid_argument("search_witness_measure: diagonals differ (trivially not convertible)");
    if (budget <= 0) return std::nullopt;

    const int d = rho.dim();
    const detail::OmegaParams params{d, d};
    const int np = params.size();
    const int evals_per_restart = 30 + 15 * np;

    SolverSettings loose = settings;
    loose.tol = std::max(settings.tol, 1e-6);

    auto gap_at = [&](const std::vector<double>& x, const SolverSettings& s) {
        const ComplexMatrix M = omega_materialize(params.build(x), d);
        return cm_gio(sigma, M, s).value - cm_gio(rho, M, s).value;
    };

    auto run_restart = [&](int r) -> std::pair<std::vector<double>, double> {
        std::vector<double> x0(np, 0.0);
        if (r > 0) {
            std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * static_cast<uint64_t>(r));
            std::normal_distribution<double> logit(0.0, 1.0);
            std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
            for (int k = 0; k < d - 1; ++k) x0[k] = logit(rng);
            for (int k = d - 1; k < np; ++k) x0[k] = angle(rng);
        }
        return detail::nelder_mead_max([&](const std::vector<double>& x) { return gap_at(x, loose); }, std::move(x0),
                                       0.7, evals_per_restart);
    };

    const int workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> best_x;
    double best_gap = -std::numeric_limits<double>::infinity();

    for (int start = 0; start < budget; start += workers) {
        const int end = std::min(budget, start + workers);
        std::vector<std::future<std::pair<std::vector<double>, double>>> futs;
        for (int r = start; r < end; ++r)
            futs.push_back(std::async(std::launch::async, run_restart, r));
        for (auto& f : futs) {
            auto [x, g] = f.get();
            if (g > best_gap) {
                best_gap = g;
                best_x = std::move(x);
            }
        }
        if (best_gap > 1e-6) {
            const double certified = gap_at(best_x, settings);
            if (certified > 1e-6) return WitnessSearchResult{params.build(best_x), certified};
        }
    }
    if (best_gap > 1e-6) {
        const double certified = gap_at(best_x, settings);
        if (certified > 1e-6) return WitnessSearchResult{params.build(best_x), certified};
    }
    return std::nullopt;
}

/// Decide whether the off-diagonal part of sigma is reachable from rho in
/// the given class. GIO reduces to the correlation-matrix completion with
/// the diagonal-equality test dropped; DIO/MIO solve a Choi feasibility SDP
/// with the class constraints plus entrywise matching of Phi(rho)'s
/// off-diagonal to sigma's, maximizing the PSD margin of J.
inline Verdict decide_offdiag(const DensityMatrix& rho, const DensityMatrix& sigma, ChannelClass cls,
                              const SolverSettings& settings = {}) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("decide_offdiag: dimension mismatch");
    if (cls == ChannelClass::CPTP) throw std::invalid_argument("decide_offdiag: class must be GIO, DIO or MIO");
    const int d = rho.dim();

    if (cls == ChannelClass::GIO) return detail::gio_decide(rho, sigma, /*require_equal_diagonal=*/false, settings);

    const int n = d * d;
    std::vector<LinearConstraint> cons = class_constraints(cls, d);
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            // Phi(rho)_ab = tr(G_ab J) with G_ab = sum_ij rho_ij |j b><i a|
            ComplexMatrix g(n);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) g(j * d + b, i * d + a) += rho.mat(i, j);
            ComplexMatrix gre(n), gim(n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    const cplx grc = g(r, c);
                    const cplx gcr = std::conj(g(c, r));
                    gre(r, c) = 0.5 * (grc + gcr);
                    gim(r, c) = cplx(0.0, -0.5) * (grc - gcr);
                }
            cons.push_back({std::move(gre), sigma.mat(a, b).real()});
            cons.push_back({std::move(gim), sigma.mat(a, b).imag()});
        }

    // Margin form via Y = J - t I: trace preservation fixes tr J = d, so
    // t = (d - tr Y)/d^2 and each constraint shifts accordingly; maximizing
    // t is minimizing tr Y.
    SdpProblem p;
    p.dim = n;
    p.sense = Sense::Minimize;
    p.objective = identity_matrix(n);
    for (auto& c : cons) {
        const double tra = trace(c.a).real();
        if (tra != 0.0) {
            for (int i = 0; i < n; ++i) c.a(i, i) -= tra / (n);
            c.rhs -= tra * static_cast<double>(d) / n;
        }
        p.constraints.push_back(std::move(c));
    }

    Verdict v;
    SdpSolution sol = solve(p, settings);
    if (sol.status == SolverStatus::Infeasible) {
        v.reason = FailReason::CompletionInfeasible;
        v.margin = -1.0;
        return v;
    }
    if (sol.status == SolverStatus::MaxIterations) throw SolverFailure(sol.status);

    const double t = (d - trace(sol.x).real()) / n;
    v.margin = t;
    if (t < -settings.tol) {
        v.reason = FailReason::CompletionInfeasible;
        return v;
    }

    ComplexMatrix J = sol.x;
    for (int i = 0; i < n; ++i) J(i, i) += t;
    const double witness_tol = std::max(1e-9, 10.0 * (sol.primal_residual + settings.tol));
    ChoiMatrix choi = ChoiMatrix::from(d, J, cls, witness_tol);

    const DensityMatrix mapped = apply_choi(choi, rho);
    double defect = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (a != b) defect = std::max(defect, std::abs(mapped.mat(a, b) - sigma.mat(a, b)));
    if (defect > detail::kWitnessTol) {
        v.reason = FailReason::CompletionInfeasible;
        return v;
    }
    v.convertible = true;
    v.choi_witness = std::move(choi);
    return v;
}

/// The pair (C_M(M), C_M(M*)) for a materialized Omega element, the probe
/// behind the conjugation asymmetry of the GIO measure family.
inline std::pair<MeasureReport, MeasureReport> conjugate_gap(const OmegaElement& w, int d,
                                                             const SolverSettings& settings = {}) {
    const ComplexMatrix M = omega_materialize(w, d);
    const DensityMatrix as_state = DensityMatrix::from(M);
    const DensityMatrix conj_state = DensityMatrix::from(conj_entrywise(M));
    return {cm_gio(as_state, M, settings), cm_gio(conj_state, M, settings)};
}

}  // namespace gioq
