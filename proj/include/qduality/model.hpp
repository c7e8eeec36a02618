// model.hpp - driven transverse-field qubit chain coupled to a common bath
//
//   H_g(t) = (eps_t / 2) sum_i [cos(theta_t) Z_i + sin(theta_t) X_i]
//            + lambda_t sum_{i<N} A_i A_{i+1},      A = X, Z or nothing
//
//   eps_t    = eps0 + (eps_tau - eps0) sin^2(pi t / 2 tau)
//   theta_t  = (pi / 2) (t / tau - 1)
//   lambda_t = lambda0 cos(theta_t)
//
// Open boundaries. Collective jump operators
//   L1 = sqrt(eps_t (n_B + 1)) sum_i sigma_i^-,  L2 = sqrt(eps_t n_B) sum_i sigma_i^+
// with n_B the Bose occupation at the instantaneous temperature.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qduality/linalg.hpp"

namespace qduality {

struct ControlProtocol {
    double eps0 = 0.4;
    double eps_tau = 10.0;
    double tau = 10.0;
    double lambda0 = 0.02;
    // When set, the schedule is held at its values at this time and every
    // derivative is zero (static Hamiltonian).
    std::optional<double> frozen_at;
};

struct ProtocolSample {
    double eps;
    double theta;
    double lam;
    double d_eps;
    double d_theta;
    double d_lam;
};

/// Control fields and their exact time derivatives at time t in [0, tau].
ProtocolSample protocol_at(const ControlProtocol& p, double t);

enum class InteractionKind { XX, ZZ, None };

std::string to_string(InteractionKind kind);
InteractionKind interaction_from_string(const std::string& name);

/// Bath temperature T(t) > 0 on [0, tau].
class TemperatureSchedule {
public:
    static TemperatureSchedule constant(double temperature);
    /// T(t) = base + amplitude * sin(pi t / tau).
    static TemperatureSchedule sinusoidal(double base, double amplitude, double tau);
    static TemperatureSchedule custom(std::function<double(double)> fn, std::string description);

    double at(double t) const;
    double beta_at(double t) const { return 1.0 / at(t); }
    bool is_constant() const noexcept { return constant_; }
    const std::string& description() const noexcept { return description_; }

private:
    TemperatureSchedule(std::function<double(double)> fn, bool constant, std::string description)
        : fn_(std::move(fn)), constant_(constant), description_(std::move(description)) {}

    std::function<double(double)> fn_;
    bool constant_;
    std::string description_;
};

struct OpenSystemModel {
    int n_qubits = 2;
    double gamma = 0.02;
    ControlProtocol protocol;
    InteractionKind interaction = InteractionKind::XX;
    TemperatureSchedule temperature = TemperatureSchedule::constant(1.0);

    Index dim() const { return Index{1} << n_qubits; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

inline constexpr int kMaxQubits = 8;

/// Time-independent operators of an N-qubit register, built once.
struct RegisterOperators {
    explicit RegisterOperators(int n_qubits, InteractionKind kind);

    int n_qubits;
    std::vector<Operator> z;        // Z_i embedded
    std::vector<Operator> x;        // X_i embedded
    Operator sum_z;
    Operator sum_x;
    Operator coupling;              // sum_i A_i A_{i+1} (zero for None)
    Operator collective_lowering;   // sum_i sigma_i^-
    Operator collective_raising;    // sum_i sigma_i^+
};

struct HamiltonianParts {
    Operator global;
    std::vector<Operator> locals;   // 2x2 per site
    Operator interaction;
};

HamiltonianParts build_hamiltonian(const OpenSystemModel& m, double t);
HamiltonianParts build_hamiltonian(const OpenSystemModel& m, const RegisterOperators& ops, double t);

/// Exact time derivative of every Hamiltonian piece.
HamiltonianParts build_hamiltonian_derivative(const OpenSystemModel& m, double t);
HamiltonianParts build_hamiltonian_derivative(const OpenSystemModel& m, const RegisterOperators& ops,
                                              double t);

/// 1 / (exp(beta eps) - 1). beta may be +infinity.
double bose_occupation(double eps, double beta);

/// A jump operator written as amplitude * shape, so that L = amplitude * shape.
struct JumpOperator {
    double amplitude;
    Operator shape;

    Operator matrix() const { return amplitude * shape; }
};

struct JumpOperators {
    JumpOperator emission;    // L1 ~ sum sigma^-
    JumpOperator absorption;  // L2 ~ sum sigma^+
};

JumpOperators build_jump_operators(const OpenSystemModel& m, double t);

/// Scalar prefactors of L1, L2 at time t, without building matrices.
std::pair<double, double> jump_amplitudes(const OpenSystemModel& m, double t);

/// exp(-beta H) / Tr exp(-beta H). beta may be +infinity (ground-state projector).
DensityMatrix gibbs_state(const Operator& h, double beta);

}  // namespace qduality
