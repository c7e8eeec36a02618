// ledger.hpp - thermodynamic bookkeeping along a trajectory
//
// Energies are instantaneous expectation values, work is the cumulative
// trapezoid of Tr[rho dH/dt] on the recording grid, and heat follows from
// the first law (Q = W - dE). Every Delta-quantity is measured against the
// t = 0 sample. Free energies use the instantaneous bath temperature, which
// reduces to the usual F = E - T S for a constant schedule.

#pragma once

#include <limits>
#include <vector>

#include "qduality/dynamics.hpp"
#include "qduality/linalg.hpp"
#include "qduality/model.hpp"

namespace qduality {

/// Central tolerance policy for ledger checks.
struct LedgerTolerances {
    double identity = 1e-5;            // quadrature-limited equalities
    double inequality_slack = 1e-8;    // rounding-limited inequalities
    double mutual_information = 1e-9;  // I_g >= -this
};

struct ThermoSample {
    double t = 0;
    double T_now = 0;

    double E_g = 0;
    double E_I = 0;
    std::vector<double> E_i;

    double W_g = 0;
    double W_I = 0;  // work done through the coupling drive
    std::vector<double> W_i;

    double Q_g = 0;
    double Q_l = 0;
    std::vector<double> Q_i;
    double Q_g_dissipator = 0;  // integral of the dissipator heat rate

    double S_g = 0;
    std::vector<double> S_i;
    double I_g = 0;

    double F_g = 0;
    std::vector<double> F_i;

    double Wdis_g = 0;
    double Wdis_l = 0;
    double Wdis_delta = 0;
    double F_delta = 0;
    double W_delta = 0;

    double trace_error = 0;
};

struct ThermoTrace {
    std::vector<ThermoSample> samples;
    OpenSystemModel model;

    const ThermoSample& initial() const { return samples.front(); }
    const ThermoSample& final() const { return samples.back(); }
};

/// Streaming ledger: feed recorded states in time order, then take the trace.
/// Lets long runs skip storing every density matrix.
class LedgerAccumulator {
public:
    explicit LedgerAccumulator(OpenSystemModel model);

    void observe(double t, const DensityMatrix& rho);
    const std::vector<ThermoSample>& samples() const noexcept { return samples_; }
    ThermoTrace finish() &&;

private:
    struct Rates {
        double global = 0;
        double interaction = 0;
        std::vector<double> local;
        double heat = 0;
    };

    LindbladGenerator gen_;
    std::vector<ThermoSample> samples_;
    Rates previous_;
};

ThermoTrace compute_ledger(const Trajectory& traj);

/// Q_g - Q_l - T dI_g - Wdis_delta. Requires a constant temperature.
std::vector<double> sum_rule_residual(const ThermoTrace& trace);
/// Q_g - Q_l - [T(t) I_g(t) - T(0) I_g(0)] - Wdis_delta with T(t)-dependent free energies.
std::vector<double> generalized_sum_rule_residual(const ThermoTrace& trace);
/// Same identity with the heat taken from the integrated dissipator flux.
std::vector<double> dissipator_route_sum_rule_residual(const ThermoTrace& trace);

/// Q_g - Q_l + Wdis_g + dE_I (lower bound on the cost contrast).
std::vector<double> bound_check(const ThermoTrace& trace);
/// Wdis_l - T dI_g - dE_I. Two qubits, constant temperature.
std::vector<double> local_second_law_margin(const ThermoTrace& trace);
/// Q_g + T dS_g. Constant temperature.
std::vector<double> landauer_margin(const ThermoTrace& trace);
/// Q_l + T sum_i dS_i + Wdis_delta. Constant temperature.
std::vector<double> local_landauer_margin(const ThermoTrace& trace);
/// T dI_g - (Wdis_l - 2 Wdis_g - dE_I).
std::vector<double> correlation_bound_margin(const ThermoTrace& trace);
/// |Q_g(first law) - Q_g(dissipator)| per sample.
std::vector<double> cross_route_heat_gap(const ThermoTrace& trace);

struct DualityReport {
    static constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

    double sum_rule_residual_max = kNotApplicable;
    double generalized_sum_rule_residual_max = kNotApplicable;
    double bound_margin_min = kNotApplicable;
    double cost_contrast_final = kNotApplicable;
    double delta_Ig_final = kNotApplicable;
    double landauer_margin_min = kNotApplicable;
    double local_landauer_margin_min = kNotApplicable;
    double local_second_law_margin_min = kNotApplicable;
    double correlation_bound_margin_min = kNotApplicable;
    bool correlation_bound_holds = false;
    double cross_route_heat_max = kNotApplicable;
    double mutual_information_min = kNotApplicable;
    double trace_error_max = kNotApplicable;
};

/// Fields that need a constant temperature (or N = 2) stay NaN otherwise.
DualityReport duality_report(const ThermoTrace& trace, const LedgerTolerances& tol = {});

}  // namespace qduality
