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

// gioq command-line front end.
//
// Exit codes: 0 success (or convertible), 1 not convertible, 2 input error,
// 3 solver error.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "gioq/gioq.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
    double tol = 1e-8;
    int max_iter = 50000;
    uint64_t seed = 0;
    int samples = 0;
    bool json_only = false;

    gioq::SolverSettings settings() const { return {tol, max_iter, seed}; }
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--tol", f.tol, "solver tolerance")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "solver iteration cap")->capture_default_str();
    cmd->add_option("--seed", f.seed, "seed for randomized searches/sampling")->capture_default_str();
    cmd->add_option("--samples", f.samples, "number of random Omega observables sampled for consistency reports")
        ->capture_default_str();
    cmd->add_flag("--json", f.json_only, "suppress the human summary; print only the JSON report");
}

std::string joined_command(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

json solver_block(const gioq::MeasureReport& r) {
    return {{"status", gioq::to_string(r.solver_status)},
            {"iterations", r.iterations},
            {"primal_residual", r.primal_residual},
            {"dual_gap", r.dual_gap}};
}

void emit(const json& report, const CommonFlags& flags, const std::string& summary) {
    if (!flags.json_only) std::cerr << summary << "\n";
    std::cout << report.dump(2) << "\n";
}

gioq::OmegaElement sample_omega(std::mt19937_64& rng, int d) {
    gioq::OmegaElement w;
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double sum = 0.0;
    w.weights.resize(d);
    for (double& p : w.weights) {
        p = expo(rng);
        sum += p;
    }
    for (double& p : w.weights) p /= sum;
    w.phases.assign(d, std::vector<double>(d, 0.0));
    for (auto& th : w.phases)
        for (int i = 1; i < d; ++i) th[i] = angle(rng);
    return w;
}

int run_measure(const std::string& kind, const std::string& state_spec, const std::string& observable_spec,
                const std::string& class_name, const CommonFlags& flags, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const gioq::ResolvedMatrix state = gioq::resolve_matrix_spec(state_spec);
    const gioq::DensityMatrix rho = gioq::DensityMatrix::from(state.mat);

    json report;
    report["command"] = command;
    report["inputs"] = {{"state", state.digest}};
    json results;
    json witness;
    std::string summary;

    if (kind == "l1") {
        const double v = gioq::c_l1(rho);
        results["c_l1"] = v;
        summary = "C_l1 = " + std::to_string(v);
    } else if (kind == "roc") {
        const gioq::MeasureReport r = gioq::c_roc(rho, flags.settings());
        results["c_roc"] = r.value;
        report["solver"] = solver_block(r);
        summary = "C_ROC = " + std::to_string(r.value);
    } else if (kind == "cm" || kind == "cm-class") {
        if (observable_spec.empty()) throw std::invalid_argument("measure " + kind + " requires --observable");
        const gioq::ResolvedMatrix obs = gioq::resolve_matrix_spec(observable_spec, rho.dim());
        report["inputs"]["observable"] = obs.digest;
        if (kind == "cm") {
            const gioq::MeasureReport r = gioq::cm_gio(rho, obs.mat, flags.settings());
            results["c_m_gio"] = r.value;
            report["solver"] = solver_block(r);
            if (r.schur_witness) witness["schur_tau"] = gioq::matrix_to_json(r.schur_witness->tau);
            summary = "C_M over GIO = " + std::to_string(r.value);
        } else {
            gioq::ChannelClass cls;
            if (class_name == "gio")
                cls = gioq::ChannelClass::GIO;
            else if (class_name == "dio")
                cls = gioq::ChannelClass::DIO;
            else if (class_name == "mio")
                cls = gioq::ChannelClass::MIO;
            else
                throw std::invalid_argument("measure cm-class requires --class gio|dio|mio");
            const gioq::MeasureReport r = gioq::cm_class(rho, obs.mat, cls, flags.settings());
            results["c_m_class"] = r.value;
            results["class"] = class_name;
            report["solver"] = solver_block(r);
            if (r.choi_witness) witness["choi"] = gioq::matrix_to_json(r.choi_witness->mat);
            summary = "C_M over " + class_name + " = " + std::to_string(r.value);
        }
    } else {
        throw std::invalid_argument("unknown measure kind '" + kind + "' (expected l1|roc|cm|cm-class)");
    }

    report["results"] = std::move(results);
    if (!witness.empty()) report["witness"] = std::move(witness);
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(report, flags, summary);
    return 0;
}

int run_convert(const std::string& mode, const std::string& rho_spec, const std::string& sigma_spec,
                const std::string& class_name, const CommonFlags& flags, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const gioq::ResolvedMatrix rdoc = gioq::resolve_matrix_spec(rho_spec);
    const gioq::ResolvedMatrix sdoc = gioq::resolve_matrix_spec(sigma_spec, rdoc.mat.dim);
    const gioq::DensityMatrix rho = gioq::DensityMatrix::from(rdoc.mat);
    const gioq::DensityMatrix sigma = gioq::DensityMatrix::from(sdoc.mat);

    gioq::ChannelClass cls = gioq::ChannelClass::GIO;
    if (class_name == "dio")
        cls = gioq::ChannelClass::DIO;
    else if (class_name == "mio")
        cls = gioq::ChannelClass::MIO;
    else if (class_name != "gio")
        throw std::invalid_argument("convert: --class must be gio|dio|mio");

    gioq::Verdict v;
    if (mode == "gio") {
        v = gioq::decide_gio(rho, sigma, flags.settings());
    } else if (mode == "offdiag") {
        v = gioq::decide_offdiag(rho, sigma, cls, flags.settings());
    } else {
        throw std::invalid_argument("unknown convert mode '" + mode + "' (expected gio|offdiag)");
    }

    json report;
    report["command"] = command;
    report["inputs"] = {{"rho", rdoc.digest}, {"sigma", sdoc.digest}};
    json results;
    results["convertible"] = v.convertible;
    results["reason"] = gioq::to_string(v.reason);
    if (v.fail_i >= 0) results["position"] = {v.fail_i, v.fail_j};
    results["margin"] = v.margin;
    results["mode"] = mode;
    if (mode == "offdiag") results["class"] = class_name;

    if (flags.samples > 0) {
        // Monotonicity cross-check over sampled Omega observables: for an
        // accepted pair, C_M(rho) - C_M(sigma) stays nonnegative up to
        // solver noise for every M.
        std::mt19937_64 rng(flags.seed);
        double min_margin = std::numeric_limits<double>::infinity();
        for (int s = 0; s < flags.samples; ++s) {
            const gioq::ComplexMatrix M = gioq::omega_materialize(sample_omega(rng, rho.dim()), rho.dim());
            const double margin = gioq::cm_gio(rho, M, flags.settings()).value -
                                  gioq::cm_gio(sigma, M, flags.settings()).value;
            min_margin = std::min(min_margin, margin);
        }
        results["omega_samples"] = flags.samples;
        results["min_measure_margin"] = min_margin;
    }

    json witness;
    if (v.schur_witness) witness["schur_tau"] = gioq::matrix_to_json(v.schur_witness->tau);
    if (v.choi_witness) witness["choi"] = gioq::matrix_to_json(v.choi_witness->mat);

    report["results"] = std::move(results);
    if (!witness.empty()) report["witness"] = std::move(witness);
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(report, flags,
         std::string(v.convertible ? "convertible" : "not convertible") + " (" + gioq::to_string(v.reason) + ")");
    return v.convertible ? 0 : 1;
}

int run_construct(const std::string& target_spec, const CommonFlags& flags, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const gioq::ResolvedMatrix tdoc = gioq::resolve_matrix_spec(target_spec);
    const gioq::DensityMatrix target = gioq::DensityMatrix::from(tdoc.mat);
    const gioq::SchurChannel tau0 = gioq::construct_mcs_gio(target);

    const int d = target.dim();
    gioq::ComplexMatrix psi_proj(d);
    std::vector<double> amps(d);
    for (int i = 0; i < d; ++i) amps[i] = std::sqrt(std::max(0.0, target.mat(i, i).real()));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) psi_proj(i, j) = amps[i] * amps[j];
    const gioq::DensityMatrix mapped = gioq::apply_schur(tau0, gioq::DensityMatrix{psi_proj});
    const double residual = gioq::max_abs_diff(mapped.mat, target.mat);

    json report;
    report["command"] = command;
    report["inputs"] = {{"target", tdoc.digest}};
    json amplitudes = json::array();
    for (double a : amps) amplitudes.push_back(a);
    report["results"] = {{"psi_amplitudes", std::move(amplitudes)},
                         {"action_residual", residual},
                         {"tau0_min_eigenvalue", gioq::min_eigenvalue(tau0.tau)}};
    report["witness"] = {{"schur_tau", gioq::matrix_to_json(tau0.tau)}};
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(report, flags, "construction residual " + std::to_string(residual));
    return 0;
}

int run_paper_example(const CommonFlags& flags, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const int d = 3;
    const double theta = std::atan2(4.0, 3.0);  // (3+4i)/5 on the unit circle
    gioq::OmegaElement w;
    w.weights = {1.0 / 3.0, 2.0 / 3.0};
    w.phases = {{0.0, theta, 0.0}, {0.0, 0.0, theta}};

    const gioq::ComplexMatrix M = gioq::omega_materialize(w, d);
    const auto [direct, conjugated] = gioq::conjugate_gap(w, d, flags.settings());
    const double gap = direct.value - conjugated.value;
    const bool strict = gap > 1e-6;

    json report;
    report["command"] = command;
    report["inputs"] = json::object();
    report["results"] = {
        {"c_m", direct.value},
        {"c_m_conjugate", conjugated.value},
        {"gap", gap},
        {"strict_inequality", strict},
        {"m_diagonal", M(0, 0).real()},
        {"diagonal_note",
         "diagonal entries of the materialized observable equal 1/3; unit trace forces this "
         "normalization even where these entries are sometimes quoted as 1"},
    };
    report["witness"] = {{"observable", gioq::matrix_to_json(M)}};
    report["solver"] = solver_block(direct);
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(report, flags,
         "C_M = " + std::to_string(direct.value) + ", conjugate = " + std::to_string(conjugated.value) +
             ", gap = " + std::to_string(gap) + (strict ? " (strict)" : " (NOT strict)"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherence measures and state conversion under genuinely incoherent operations"};
    app.require_subcommand(1);

    std::string kind, state_spec, observable_spec, class_name = "gio";
    std::string mode, rho_spec, sigma_spec, target_spec;
    CommonFlags mf, cf, kf, pf;

    CLI::App* measure = app.add_subcommand("measure", "evaluate a coherence measure on a state");
    measure->add_option("kind", kind, "l1|roc|cm|cm-class")->required();
    measure->add_option("state", state_spec, "state file or named state")->required();
    measure->add_option("--observable", observable_spec, "observable file or named state (cm, cm-class)");
    measure->add_option("--class", class_name, "channel class for cm-class: gio|dio|mio");
    add_common_flags(measure, mf);

    CLI::App* convert = app.add_subcommand("convert", "decide state convertibility");
    convert->add_option("mode", mode, "gio|offdiag")->required();
    convert->add_option("rho", rho_spec, "source state file or named state")->required();
    convert->add_option("sigma", sigma_spec, "target state file or named state")->required();
    convert->add_option("--class", class_name, "channel class for offdiag: gio|dio|mio");
    add_common_flags(convert, cf);

    CLI::App* construct = app.add_subcommand("construct", "build the channel mapping the matched pure state to a target");
    construct->add_option("target", target_spec, "target state file or named state")->required();
    add_common_flags(construct, kf);

    CLI::App* paper = app.add_subcommand("paper-example", "run the built-in conjugation-gap example");
    add_common_flags(paper, pf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = joined_command(argc, argv);
    try {
        if (measure->parsed()) return run_measure(kind, state_spec, observable_spec, class_name, mf, command);
        if (convert->parsed()) return run_convert(mode, rho_spec, sigma_spec, class_name, cf, command);
        if (construct->parsed()) return run_construct(target_spec, kf, command);
        if (paper->parsed()) return run_paper_example(pf, command);
    } catch (const gioq::SolverFailure& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
