#include "qduality/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>

#include "qduality/csv.hpp"

namespace qduality {

DensityMatrix initial_state(const OpenSystemModel& m) {
    return gibbs_state(build_hamiltonian(m, 0.0).global, m.temperature.beta_at(0.0));
}

ExperimentResult run_experiment(const RunConfig& cfg, const RunOptions& options) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const OpenSystemModel model = cfg.model();

    ExperimentResult result;
    if (options.keep_states) result.trajectory = Trajectory{{}, {}, model};
    LedgerAccumulator ledger(model);
    evolve(model, cfg.integrator(), initial_state(model), [&](double t, const DensityMatrix& rho) {
        ledger.observe(t, rho);
        if (result.trajectory) {
            result.trajectory->times.push_back(t);
            result.trajectory->states.push_back(rho);
        }
    });
    result.trace = std::move(ledger).finish();
    result.report = duality_report(result.trace);
    if (options.write_csv && !cfg.output_path.empty()) write_csv_file(cfg.output_path, result.trace);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

double final_energy(const RunConfig& cfg) {
    cfg.validate();
    const OpenSystemModel model = cfg.model();
    std::optional<DensityMatrix> last;
    evolve(model, cfg.integrator(), initial_state(model), [&](double, const DensityMatrix& rho) { last = rho; });
    return expectation(build_hamiltonian(model, model.protocol.tau).global, *last);
}

CheckResult check_at_most(std::string name, double measured, double threshold) {
    return {std::move(name), measured, "<=", threshold, measured <= threshold};
}
CheckResult check_at_least(std::string name, double measured, double threshold) {
    return {std::move(name), measured, ">=", threshold, measured >= threshold};
}
CheckResult check_below(std::string name, double measured, double threshold) {
    return {std::move(name), measured, "<", threshold, measured < threshold};
}
CheckResult check_above(std::string name, double measured, double threshold) {
    return {std::move(name), measured, ">", threshold, measured > threshold};
}

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::vector<CheckResult> trace_checks(const RunConfig& cfg, const ThermoTrace& trace, const LedgerTolerances& tol) {
    std::vector<CheckResult> out;
    const auto& samples = trace.samples;
    const bool constant_t = trace.model.temperature.is_constant();
    const DualityReport rep = duality_report(trace, tol);
    const double slack = tol.inequality_slack;

    if (constant_t) {
        out.push_back(check_at_most("sum_rule_residual_max", rep.sum_rule_residual_max, tol.identity));
    } else {
        out.push_back(check_at_most("generalized_sum_rule_residual_max", rep.generalized_sum_rule_residual_max,
                                    tol.identity));
    }
    out.push_back(check_at_most("sum_rule_dissipator_route_max",
                                max_abs(dissipator_route_sum_rule_residual(trace)), tol.identity));
    out.push_back(check_at_most("cross_route_heat_max", rep.cross_route_heat_max, tol.identity));
    out.push_back(check_at_most("trace_drift_max", rep.trace_error_max, 1e-9));
    out.push_back(check_at_least("mutual_information_min", rep.mutual_information_min, -tol.mutual_information));
    out.push_back(check_at_most("initial_mutual_information", samples.front().I_g, tol.mutual_information));

    if (constant_t) {
        out.push_back(check_at_least("bound_margin_min", rep.bound_margin_min, -slack));
        out.push_back(check_at_least("correlation_bound_margin_min", rep.correlation_bound_margin_min, -slack));
        out.push_back(check_at_least("landauer_margin_min", rep.landauer_margin_min, -slack));
        out.push_back(check_at_least("local_landauer_margin_min", rep.local_landauer_margin_min, -slack));
        if (trace.model.n_qubits == 2)
            out.push_back(check_at_least("local_second_law_margin_min", rep.local_second_law_margin_min, -slack));
    }

    if (trace.model.interaction == InteractionKind::None) {
        double gap = 0;
        for (const auto& s : samples) gap = std::max(gap, std::abs(s.Q_g - s.Q_l));
        out.push_back(check_at_most("no_interaction_cost_gap_max", gap, 1e-6));
    }

    if (trace.model.gamma == 0.0) {
        double heat = 0, entropy = 0;
        for (const auto& s : samples) {
            heat = std::max(heat, std::abs(s.Q_g));
            entropy = std::max(entropy, std::abs(s.S_g - samples.front().S_g));
        }
        out.push_back(check_at_most("closed_heat_abs_max", heat, 1e-8));
        out.push_back(check_at_most("closed_entropy_drift_max", entropy, 1e-8));
    }

    const PresetExpectations expect = cfg.preset ? preset_expectations(*cfg.preset) : PresetExpectations{};
    if (expect.cost_contrast_sign > 0) out.push_back(check_above("cost_contrast_final", rep.cost_contrast_final, 0));
    if (expect.cost_contrast_sign < 0) out.push_back(check_below("cost_contrast_final", rep.cost_contrast_final, 0));
    if (expect.correlation_growth) out.push_back(check_above("delta_Ig_final", rep.delta_Ig_final, 0));
    if (expect.monotone_heat) {
        double worst = 0;
        for (std::size_t k = 1; k < samples.size(); ++k) worst = std::min(worst, samples[k].Q_g - samples[k - 1].Q_g);
        out.push_back(check_at_least("heat_monotonicity_worst_step", worst, -slack));
    }
    if (expect.contrast_terms) {
        double f_min = INFINITY, w_min = INFINITY, f_max = -INFINITY, w_max = -INFINITY;
        for (std::size_t k = 1; k < samples.size(); ++k) {
            f_min = std::min(f_min, samples[k].F_delta);
            w_min = std::min(w_min, samples[k].W_delta);
            f_max = std::max(f_max, samples[k].F_delta);
            w_max = std::max(w_max, samples[k].W_delta);
        }
        out.push_back(check_above("F_delta_min_after_start", f_min, 0));
        out.push_back(check_above("W_delta_min_after_start", w_min, 0));
        out.push_back(check_at_most("W_delta_to_F_delta_peak_ratio", w_max / f_max, 0.1));
    }
    return out;
}

VerifyReport verify(const RunConfig& cfg, const LedgerTolerances& tol) {
    cfg.validate();
    if (cfg.record_every != 1) throw ConfigError("record_every", "verify requires record_every = 1");

    RunConfig halved = cfg;
    halved.dt = cfg.dt / 2;
    halved.output_path.clear();
    auto halved_energy = std::async(std::launch::async, [halved] { return final_energy(halved); });

    RunConfig main_cfg = cfg;
    main_cfg.output_path.clear();
    const ExperimentResult main = run_experiment(main_cfg);

    VerifyReport report;
    report.checks = trace_checks(cfg, main.trace, tol);
    report.checks.push_back(
        check_at_most("step_halving_energy_change", std::abs(main.trace.final().E_g - halved_energy.get()), 1e-8));
    return report;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    const auto flags = out.flags();
    for (const auto& c : checks) {
        out << std::left << std::setw(static_cast<int>(width)) << c.name << "  measured=" << std::scientific
            << std::setprecision(6) << std::setw(14) << std::right << c.measured << "  " << c.relation << ' '
            << std::setprecision(1) << c.threshold << "  " << (c.passed ? "PASS" : "FAIL") << '\n'
            << std::left;
    }
    out.flags(flags);
}

}  // namespace qduality
