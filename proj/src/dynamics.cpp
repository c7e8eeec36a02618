#include "qduality/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace qduality {

long IntegratorConfig::steps_for(double tau) const {
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    const double ratio = tau / dt;
    const double steps = std::round(ratio);
    if (steps < 1 || std::abs(ratio - steps) > 1e-9 * steps) {
        std::ostringstream os;
        os << "tau / dt = " << ratio << " is not an integer";
        throw std::invalid_argument(os.str());
    }
    return static_cast<long>(steps);
}

namespace {

std::string at_time(double t, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << "integration failed at t = " << t << ": " << what;
    return os.str();
}

}  // namespace

IntegrationError::IntegrationError(double t, const std::string& what)
    : std::runtime_error(at_time(t, what)), time_(t) {}

LindbladGenerator::LindbladGenerator(OpenSystemModel model)
    : model_(std::move(model)), ops_(model_.n_qubits, model_.interaction) {
    model_.validate();
    emission_generator_ = ops_.collective_raising * ops_.collective_lowering;
    absorption_generator_ = ops_.collective_lowering * ops_.collective_raising;
}

Operator LindbladGenerator::hamiltonian(double t) const {
    return build_hamiltonian(model_, ops_, t).global;
}

Operator LindbladGenerator::dissipator(const Operator& rho, double t) const {
    const Index d = rho.rows();
    if (model_.gamma == 0.0) return Operator::Zero(d, d);
    const auto [a1, a2] = jump_amplitudes(model_, t);
    const double r1 = model_.gamma * a1 * a1;
    const double r2 = model_.gamma * a2 * a2;
    const auto& lo = ops_.collective_lowering;
    const auto& hi = ops_.collective_raising;

    Operator anti(d, d);
    anti.noalias() = (r1 * emission_generator_ + r2 * absorption_generator_) * rho;
    Operator tmp(d, d), out(d, d);
    tmp.noalias() = lo * rho;
    out.noalias() = r1 * tmp * hi;
    tmp.noalias() = hi * rho;
    out.noalias() += r2 * tmp * lo;
    out -= 0.5 * (anti + anti.adjoint());
    return out;
}

Operator LindbladGenerator::rhs(const Operator& rho, double t) const {
    const Index d = rho.rows();
    if (d != model_.dim()) throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    const Operator h = hamiltonian(t);
    // G rho + (G rho)^dagger with G = -iH - (1/2) sum r_mu L^dagger L covers the
    // commutator and both anticommutators.
    Operator g = std::complex<double>(0, -1) * h;
    if (model_.gamma != 0.0) {
        const auto [a1, a2] = jump_amplitudes(model_, t);
        const double r1 = model_.gamma * a1 * a1;
        const double r2 = model_.gamma * a2 * a2;
        g -= 0.5 * (r1 * emission_generator_ + r2 * absorption_generator_);
        Operator gr(d, d);
        gr.noalias() = g * rho;
        Operator out = gr + gr.adjoint();
        Operator tmp(d, d);
        tmp.noalias() = ops_.collective_lowering * rho;
        out.noalias() += r1 * tmp * ops_.collective_raising;
        tmp.noalias() = ops_.collective_raising * rho;
        out.noalias() += r2 * tmp * ops_.collective_lowering;
        return out;
    }
    Operator gr(d, d);
    gr.noalias() = g * rho;
    return gr + gr.adjoint();
}

double LindbladGenerator::heat_rate(const Operator& rho, double t) const {
    if (model_.gamma == 0.0) return 0.0;
    const Operator h = hamiltonian(t);
    const Operator dis = dissipator(rho, t);
    return -h.transpose().cwiseProduct(dis).sum().real();
}

Operator lindblad_rhs(const OpenSystemModel& m, const DensityMatrix& rho, double t) {
    return LindbladGenerator(m).rhs(rho.op(), t);
}

DensityMatrix rk4_step(const LindbladGenerator& gen, const DensityMatrix& rho, double t, double dt,
                       const IntegratorConfig& config) {
    const double tau = gen.model().protocol.tau;
    if (t + dt > tau + 1e-12 * std::max(1.0, tau))
        throw std::out_of_range("rk4_step: step overruns tau");
    const Operator& y = rho.op();
    const double half = 0.5 * dt;
    const Operator k1 = gen.rhs(y, t);
    const Operator k2 = gen.rhs(y + half * k1, t + half);
    const Operator k3 = gen.rhs(y + half * k2, t + half);
    const Operator k4 = gen.rhs(y + dt * k3, t + dt);
    Operator next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next = (next + next.adjoint()).eval() * 0.5;

    StateTolerances tol;
    tol.trace = config.trace_tolerance;
    tol.positivity = config.positivity_tolerance;
    try {
        return DensityMatrix(std::move(next), tol);
    } catch (const InvariantViolation& e) {
        throw IntegrationError(t + dt, e.what());
    }
}

DensityMatrix rk4_step(const OpenSystemModel& m, const DensityMatrix& rho, double t, double dt,
                       const IntegratorConfig& config) {
    return rk4_step(LindbladGenerator(m), rho, t, dt, config);
}

void evolve(const OpenSystemModel& m, const IntegratorConfig& config, const DensityMatrix& rho0,
            const StateObserver& observe) {
    const LindbladGenerator gen(m);
    if (rho0.dim() != m.dim()) throw std::invalid_argument("evolve: initial state has wrong dimension");
    const double tau = m.protocol.tau;
    const long steps = config.steps_for(tau);

    DensityMatrix rho = rho0;
    observe(0.0, rho);
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        const double t_next = k + 1 == steps ? tau : static_cast<double>(k + 1) * config.dt;
        rho = rk4_step(gen, rho, t, t_next - t, config);
        if ((k + 1) % config.record_every == 0 || k + 1 == steps) observe(t_next, rho);
    }
}

Trajectory evolve(const OpenSystemModel& m, const IntegratorConfig& config, const DensityMatrix& rho0) {
    Trajectory traj{{}, {}, m};
    evolve(m, config, rho0, [&](double t, const DensityMatrix& rho) {
        traj.times.push_back(t);
        traj.states.push_back(rho);
    });
    return traj;
}

double dissipator_heat_rate(const OpenSystemModel& m, const DensityMatrix& rho, double t) {
    return LindbladGenerator(m).heat_rate(rho.op(), t);
}

}  // namespace qduality
