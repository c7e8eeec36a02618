// experiment.hpp - end-to-end runs and the verification check list

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qduality/config.hpp"
#include "qduality/dynamics.hpp"
#include "qduality/ledger.hpp"

namespace qduality {

struct RunOptions {
    bool keep_states = false;  // also return the full Trajectory
    bool write_csv = true;     // write cfg.output_path when it is set
};

struct ExperimentResult {
    std::optional<Trajectory> trajectory;
    ThermoTrace trace;
    DualityReport report;
    double wall_seconds = 0;
};

/// Thermal start at beta(0), evolve, build the ledger, write the CSV.
/// Deterministic given the configuration.
ExperimentResult run_experiment(const RunConfig& cfg, const RunOptions& options = {});

DensityMatrix initial_state(const OpenSystemModel& m);

/// E_g(tau) only; used for step-halving comparisons.
double final_energy(const RunConfig& cfg);

struct CheckResult {
    std::string name;
    double measured;
    std::string relation;  // "<=", ">=", "<", ">"
    double threshold;
    bool passed;
};

CheckResult check_at_most(std::string name, double measured, double threshold);
CheckResult check_at_least(std::string name, double measured, double threshold);
CheckResult check_below(std::string name, double measured, double threshold);
CheckResult check_above(std::string name, double measured, double threshold);

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

/// Every check applicable to this configuration (and its preset's
/// expectations), computed from an existing trace.
std::vector<CheckResult> trace_checks(const RunConfig& cfg, const ThermoTrace& trace,
                                      const LedgerTolerances& tol = {});

/// Runs the configuration plus a half-step companion and evaluates all checks.
/// Rejects record_every != 1 with ConfigError.
VerifyReport verify(const RunConfig& cfg, const LedgerTolerances& tol = {});

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace qduality
