#include "qduality/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qduality {

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double trapezoid(double dt, double a, double b) { return 0.5 * dt * (a + b); }

}  // namespace

LedgerAccumulator::LedgerAccumulator(OpenSystemModel model) : gen_(std::move(model)) {}

void LedgerAccumulator::observe(double t, const DensityMatrix& rho) {
    const auto& model = gen_.model();
    const int n = model.n_qubits;
    if (rho.dim() != model.dim()) throw std::invalid_argument("ledger: state dimension mismatch");
    if (samples_.empty() && t != 0.0) throw std::invalid_argument("ledger: first sample must be at t = 0");
    if (!samples_.empty() && !(t > samples_.back().t)) {
        std::ostringstream os;
        os << "ledger: sample times must increase strictly (got " << t << " after " << samples_.back().t << ")";
        throw std::invalid_argument(os.str());
    }

    const auto h = build_hamiltonian(model, gen_.operators(), t);
    const auto dh = build_hamiltonian_derivative(model, gen_.operators(), t);

    ThermoSample s;
    s.t = t;
    s.T_now = model.temperature.at(t);
    s.trace_error = rho.trace_error();
    s.E_g = expectation(h.global, rho);
    s.E_I = expectation(h.interaction, rho);
    s.S_g = von_neumann_entropy(rho);

    Rates rates;
    rates.global = expectation(dh.global, rho);
    rates.interaction = expectation(dh.interaction, rho);
    rates.heat = gen_.heat_rate(rho.op(), t);
    rates.local.resize(n);
    s.E_i.resize(n);
    s.S_i.resize(n);
    for (int i = 0; i < n; ++i) {
        const DensityMatrix marginal = partial_trace_to_site(rho, i + 1, n);
        s.E_i[i] = expectation(h.locals[i], marginal);
        s.S_i[i] = von_neumann_entropy(marginal);
        rates.local[i] = expectation(dh.locals[i], marginal);
    }
    s.I_g = sum(s.S_i) - s.S_g;

    s.W_i.assign(n, 0.0);
    if (!samples_.empty()) {
        const ThermoSample& prev = samples_.back();
        const double dt = t - prev.t;
        s.W_g = prev.W_g + trapezoid(dt, previous_.global, rates.global);
        s.W_I = prev.W_I + trapezoid(dt, previous_.interaction, rates.interaction);
        s.Q_g_dissipator = prev.Q_g_dissipator + trapezoid(dt, previous_.heat, rates.heat);
        for (int i = 0; i < n; ++i) s.W_i[i] = prev.W_i[i] + trapezoid(dt, previous_.local[i], rates.local[i]);
    }
    previous_ = std::move(rates);

    const ThermoSample& base = samples_.empty() ? s : samples_.front();
    s.F_g = s.E_g - s.T_now * s.S_g;
    s.F_i.resize(n);
    s.Q_i.resize(n);
    double sum_dF_i = 0.0;
    s.Wdis_l = 0.0;
    for (int i = 0; i < n; ++i) {
        s.F_i[i] = s.E_i[i] - s.T_now * s.S_i[i];
        s.Q_i[i] = s.W_i[i] - (s.E_i[i] - base.E_i[i]);
        const double dF = s.F_i[i] - base.F_i[i];
        sum_dF_i += dF;
        s.Wdis_l += s.W_i[i] - dF;
    }
    s.Q_g = s.W_g - (s.E_g - base.E_g);
    s.Q_l = sum(s.Q_i);
    const double dF_g = s.F_g - base.F_g;
    s.Wdis_g = s.W_g - dF_g;
    s.Wdis_delta = s.Wdis_g - s.Wdis_l;
    s.F_delta = dF_g - sum_dF_i;
    s.W_delta = s.W_g - sum(s.W_i);

    samples_.push_back(std::move(s));
}

ThermoTrace LedgerAccumulator::finish() && {
    if (samples_.empty()) throw std::logic_error("ledger: no samples recorded");
    return {std::move(samples_), gen_.model()};
}

ThermoTrace compute_ledger(const Trajectory& traj) {
    if (traj.times.size() != traj.states.size())
        throw std::invalid_argument("ledger: times and states differ in length");
    LedgerAccumulator acc(traj.model);
    for (std::size_t k = 0; k < traj.times.size(); ++k) acc.observe(traj.times[k], traj.states[k]);
    return std::move(acc).finish();
}

namespace {

void require_constant_temperature(const ThermoTrace& trace, const char* what) {
    if (!trace.model.temperature.is_constant())
        throw std::invalid_argument(std::string(what) + " requires a constant temperature");
}

// T(t) I(t) - T(0) I(0); collapses to T dI when the two temperatures agree.
double correlation_heat(const ThermoSample& s, const ThermoSample& base) {
    if (s.T_now == base.T_now) return s.T_now * (s.I_g - base.I_g);
    return s.T_now * s.I_g - base.T_now * base.I_g;
}

template <typename F>
std::vector<double> per_sample(const ThermoTrace& trace, F&& f) {
    std::vector<double> out;
    out.reserve(trace.samples.size());
    const ThermoSample& base = trace.initial();
    for (const auto& s : trace.samples) out.push_back(f(s, base));
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

std::vector<double> generalized_sum_rule_residual(const ThermoTrace& trace) {
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Q_g - s.Q_l - correlation_heat(s, base) - s.Wdis_delta;
    });
}

std::vector<double> sum_rule_residual(const ThermoTrace& trace) {
    require_constant_temperature(trace, "sum_rule_residual");
    return generalized_sum_rule_residual(trace);
}

std::vector<double> dissipator_route_sum_rule_residual(const ThermoTrace& trace) {
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Q_g_dissipator - s.Q_l - correlation_heat(s, base) - s.Wdis_delta;
    });
}

std::vector<double> bound_check(const ThermoTrace& trace) {
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Q_g - s.Q_l + s.Wdis_g + (s.E_I - base.E_I);
    });
}

std::vector<double> local_second_law_margin(const ThermoTrace& trace) {
    if (trace.model.n_qubits != 2)
        throw std::invalid_argument("local_second_law_margin is defined for two qubits only");
    require_constant_temperature(trace, "local_second_law_margin");
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Wdis_l - s.T_now * (s.I_g - base.I_g) - (s.E_I - base.E_I);
    });
}

std::vector<double> landauer_margin(const ThermoTrace& trace) {
    require_constant_temperature(trace, "landauer_margin");
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Q_g + s.T_now * (s.S_g - base.S_g);
    });
}

std::vector<double> local_landauer_margin(const ThermoTrace& trace) {
    require_constant_temperature(trace, "local_landauer_margin");
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return s.Q_l + s.T_now * (sum(s.S_i) - sum(base.S_i)) + s.Wdis_delta;
    });
}

std::vector<double> correlation_bound_margin(const ThermoTrace& trace) {
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample& base) {
        return correlation_heat(s, base) - (s.Wdis_l - 2.0 * s.Wdis_g - (s.E_I - base.E_I));
    });
}

std::vector<double> cross_route_heat_gap(const ThermoTrace& trace) {
    return per_sample(trace, [](const ThermoSample& s, const ThermoSample&) {
        return std::abs(s.Q_g - s.Q_g_dissipator);
    });
}

DualityReport duality_report(const ThermoTrace& trace, const LedgerTolerances& tol) {
    DualityReport r;
    const bool constant_t = trace.model.temperature.is_constant();
    const ThermoSample& first = trace.initial();
    const ThermoSample& last = trace.final();

    r.generalized_sum_rule_residual_max = max_abs(generalized_sum_rule_residual(trace));
    r.bound_margin_min = min_of(bound_check(trace));
    r.cost_contrast_final = last.Q_g - last.Q_l;
    r.delta_Ig_final = last.I_g - first.I_g;
    r.correlation_bound_margin_min = min_of(correlation_bound_margin(trace));
    r.correlation_bound_holds = r.correlation_bound_margin_min >= -tol.inequality_slack;
    r.cross_route_heat_max = max_abs(cross_route_heat_gap(trace));

    double i_min = first.I_g;
    double trace_max = 0.0;
    for (const auto& s : trace.samples) {
        i_min = std::min(i_min, s.I_g);
        trace_max = std::max(trace_max, s.trace_error);
    }
    r.mutual_information_min = i_min;
    r.trace_error_max = trace_max;

    if (constant_t) {
        r.sum_rule_residual_max = max_abs(sum_rule_residual(trace));
        r.landauer_margin_min = min_of(landauer_margin(trace));
        r.local_landauer_margin_min = min_of(local_landauer_margin(trace));
        if (trace.model.n_qubits == 2) r.local_second_law_margin_min = min_of(local_second_law_margin(trace));
    }
    return r;
}

}  // namespace qduality
