#include "qduality/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qduality {

namespace {

constexpr double kPi = std::numbers::pi;

double time_slack(double tau) { return 1e-12 * std::max(1.0, tau); }

double checked_time(double tau, double t, const char* what) {
    const double slack = time_slack(tau);
    if (!(t >= -slack && t <= tau + slack)) {
        std::ostringstream os;
        os << what << ": t = " << t << " outside [0, " << tau << "]";
        throw std::out_of_range(os.str());
    }
    return std::clamp(t, 0.0, tau);
}

}  // namespace

ProtocolSample protocol_at(const ControlProtocol& p, double t) {
    if (!(p.tau > 0)) throw std::invalid_argument("protocol_at: tau must be positive");
    t = checked_time(p.tau, t, "protocol_at");
    const bool frozen = p.frozen_at.has_value();
    if (frozen) t = checked_time(p.tau, *p.frozen_at, "protocol_at(frozen_at)");

    const double w = kPi / (2.0 * p.tau);
    const double s = std::sin(w * t);
    const double theta = (kPi / 2.0) * (t / p.tau - 1.0);
    ProtocolSample out{};
    out.eps = p.eps0 + (p.eps_tau - p.eps0) * s * s;
    out.theta = theta;
    out.lam = p.lambda0 * std::cos(theta);
    if (!frozen) {
        out.d_eps = (p.eps_tau - p.eps0) * w * std::sin(2.0 * w * t);
        out.d_theta = w;
        out.d_lam = -p.lambda0 * std::sin(theta) * w;
    }
    return out;
}

std::string to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::XX: return "xx";
        case InteractionKind::ZZ: return "zz";
        case InteractionKind::None: return "none";
    }
    return "?";
}

InteractionKind interaction_from_string(const std::string& name) {
    if (name == "xx") return InteractionKind::XX;
    if (name == "zz") return InteractionKind::ZZ;
    if (name == "none") return InteractionKind::None;
    throw std::invalid_argument("unknown interaction '" + name + "' (expected xx, zz or none)");
}

TemperatureSchedule TemperatureSchedule::constant(double temperature) {
    if (!(temperature > 0) || !std::isfinite(temperature))
        throw std::invalid_argument("temperature must be positive and finite");
    std::ostringstream os;
    os << "constant(" << temperature << ")";
    return TemperatureSchedule([temperature](double) { return temperature; }, true, os.str());
}

TemperatureSchedule TemperatureSchedule::sinusoidal(double base, double amplitude, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("sinusoidal temperature: tau must be positive");
    if (!(base - std::abs(amplitude) > 0))
        throw std::invalid_argument("sinusoidal temperature: base - |amplitude| must be positive");
    if (amplitude == 0.0) return constant(base);
    std::ostringstream os;
    os << "sine(" << base << ", " << amplitude << ")";
    return TemperatureSchedule(
        [base, amplitude, tau](double t) { return base + amplitude * std::sin(kPi * t / tau); }, false,
        os.str());
}

TemperatureSchedule TemperatureSchedule::custom(std::function<double(double)> fn, std::string description) {
    if (!fn) throw std::invalid_argument("custom temperature: empty function");
    return TemperatureSchedule(std::move(fn), false, std::move(description));
}

double TemperatureSchedule::at(double t) const {
    const double value = fn_(t);
    if (!(value > 0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "temperature schedule " << description_ << " is not positive at t = " << t;
        throw std::domain_error(os.str());
    }
    return value;
}

void OpenSystemModel::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("n_qubits must lie in [1, " + std::to_string(kMaxQubits) + "]");
    if (!(gamma >= 0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 0");
    if (!(protocol.tau > 0) || !std::isfinite(protocol.tau))
        throw std::invalid_argument("tau must be positive");
    if (!(protocol.eps0 > 0) || !(protocol.eps_tau > 0))
        throw std::invalid_argument("eps0 and eps_tau must be positive");
    if (!std::isfinite(protocol.lambda0)) throw std::invalid_argument("lambda0 must be finite");
}

RegisterOperators::RegisterOperators(int n, InteractionKind kind) : n_qubits(n) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("RegisterOperators: bad qubit count");
    const Index dim = Index{1} << n;
    sum_z = Operator::Zero(dim, dim);
    sum_x = Operator::Zero(dim, dim);
    coupling = Operator::Zero(dim, dim);
    collective_lowering = Operator::Zero(dim, dim);
    for (int site = 1; site <= n; ++site) {
        z.push_back(embed_site(pauli::z(), site, n));
        x.push_back(embed_site(pauli::x(), site, n));
        sum_z += z.back();
        sum_x += x.back();
        collective_lowering += embed_site(pauli::lowering(), site, n);
    }
    collective_raising = collective_lowering.adjoint();
    if (kind != InteractionKind::None) {
        const auto& a = kind == InteractionKind::XX ? x : z;
        for (int i = 0; i + 1 < n; ++i) coupling += a[i] * a[i + 1];
    }
}

namespace {

Operator local_field(double eps, double theta) {
    return (eps / 2.0) * (std::cos(theta) * pauli::z() + std::sin(theta) * pauli::x());
}

// d/dt of (eps/2)[cos(theta) Z + sin(theta) X].
Operator local_field_rate(const ProtocolSample& s) {
    const double cz = 0.5 * (s.d_eps * std::cos(s.theta) - s.eps * std::sin(s.theta) * s.d_theta);
    const double cx = 0.5 * (s.d_eps * std::sin(s.theta) + s.eps * std::cos(s.theta) * s.d_theta);
    return cz * pauli::z() + cx * pauli::x();
}

HamiltonianParts assemble(const RegisterOperators& ops, const Operator& local, double coupling_scale) {
    HamiltonianParts parts;
    parts.locals.assign(ops.n_qubits, local);
    // local is real-linear in Z and X, so reuse the embedded sums.
    const double cz = local(0, 0).real();
    const double cx = local(0, 1).real();
    parts.interaction = coupling_scale * ops.coupling;
    parts.global = cz * ops.sum_z + cx * ops.sum_x + parts.interaction;
    return parts;
}

}  // namespace

HamiltonianParts build_hamiltonian(const OpenSystemModel& m, const RegisterOperators& ops, double t) {
    const auto s = protocol_at(m.protocol, t);
    return assemble(ops, local_field(s.eps, s.theta), s.lam);
}

HamiltonianParts build_hamiltonian(const OpenSystemModel& m, double t) {
    return build_hamiltonian(m, RegisterOperators(m.n_qubits, m.interaction), t);
}

HamiltonianParts build_hamiltonian_derivative(const OpenSystemModel& m, const RegisterOperators& ops,
                                              double t) {
    const auto s = protocol_at(m.protocol, t);
    return assemble(ops, local_field_rate(s), s.d_lam);
}

HamiltonianParts build_hamiltonian_derivative(const OpenSystemModel& m, double t) {
    return build_hamiltonian_derivative(m, RegisterOperators(m.n_qubits, m.interaction), t);
}

double bose_occupation(double eps, double beta) {
    if (!(eps > 0)) throw std::domain_error("bose_occupation: eps must be positive");
    if (!(beta > 0)) throw std::domain_error("bose_occupation: beta must be positive");
    const double x = beta * eps;
    if (x > 700.0) return std::exp(-x);  // expm1 overflows; 1/(e^x - 1) ~ e^-x
    return 1.0 / std::expm1(x);
}

std::pair<double, double> jump_amplitudes(const OpenSystemModel& m, double t) {
    const auto s = protocol_at(m.protocol, t);
    const double n_b = bose_occupation(s.eps, m.temperature.beta_at(t));
    return {std::sqrt(s.eps * (n_b + 1.0)), std::sqrt(s.eps * n_b)};
}

JumpOperators build_jump_operators(const OpenSystemModel& m, double t) {
    const RegisterOperators ops(m.n_qubits, InteractionKind::None);
    const auto [a1, a2] = jump_amplitudes(m, t);
    return {{a1, ops.collective_lowering}, {a2, ops.collective_raising}};
}

DensityMatrix gibbs_state(const Operator& h, double beta) {
    if (!(beta > 0)) throw std::invalid_argument("gibbs_state: beta must be positive");
    const Spectrum spec = eig_hermitian(h);
    const double ground = spec.eigenvalues.minCoeff();
    RealVector weights(spec.eigenvalues.size());
    for (Index k = 0; k < weights.size(); ++k) {
        const double gap = spec.eigenvalues[k] - ground;
        if (std::isinf(beta))
            weights[k] = gap <= 1e-12 * std::max(1.0, std::abs(ground)) ? 1.0 : 0.0;
        else
            weights[k] = std::exp(-beta * gap);
    }
    weights /= weights.sum();
    Operator rho = spec.eigenvectors * weights.cast<std::complex<double>>().asDiagonal() *
                   spec.eigenvectors.adjoint();
    rho = (rho + rho.adjoint()).eval() / 2.0;
    return DensityMatrix(std::move(rho));
}

}  // namespace qduality
