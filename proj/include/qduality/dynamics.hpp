// dynamics.hpp - fixed-step RK4 integration of the Lindblad master equation
//
//   d rho / dt = -i[H_g(t), rho] + gamma sum_mu D[L_mu(t)] rho
//   D[L] rho   = L rho L^dagger - {L^dagger L, rho} / 2
//
// Jump amplitudes are re-evaluated at every RK4 stage time. Each step is
// re-Hermitized; the trace is never renormalized and eigenvalues are never
// clipped, so drift surfaces as an IntegrationError.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qduality/linalg.hpp"
#include "qduality/model.hpp"

namespace qduality {

struct IntegratorConfig {
    double dt = 1e-4;
    int record_every = 1;
    double positivity_tolerance = 1e-8;
    double trace_tolerance = 1e-9;

    /// Number of steps covering [0, tau]; throws if tau/dt is not an integer.
    long steps_for(double tau) const;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(double t, const std::string& what);
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Right-hand side and dissipator of the master equation for one model,
/// with the register operators cached.
class LindbladGenerator {
public:
    explicit LindbladGenerator(OpenSystemModel model);

    const OpenSystemModel& model() const noexcept { return model_; }
    const RegisterOperators& operators() const noexcept { return ops_; }

    Operator hamiltonian(double t) const;
    /// gamma * sum_mu D[L_mu] rho
    Operator dissipator(const Operator& rho, double t) const;
    Operator rhs(const Operator& rho, double t) const;
    /// -Tr[H_g(t) gamma sum_mu D[L_mu] rho]: energy flux into the bath.
    double heat_rate(const Operator& rho, double t) const;

private:
    OpenSystemModel model_;
    RegisterOperators ops_;
    Operator emission_generator_;    // (sum sigma^+)(sum sigma^-)
    Operator absorption_generator_;  // (sum sigma^-)(sum sigma^+)
};

Operator lindblad_rhs(const OpenSystemModel& m, const DensityMatrix& rho, double t);

DensityMatrix rk4_step(const LindbladGenerator& gen, const DensityMatrix& rho, double t, double dt,
                       const IntegratorConfig& config = {});
DensityMatrix rk4_step(const OpenSystemModel& m, const DensityMatrix& rho, double t, double dt,
                       const IntegratorConfig& config = {});

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    OpenSystemModel model;
};

/// Called at every recording time, including t = 0 and t = tau.
using StateObserver = std::function<void(double t, const DensityMatrix& rho)>;

void evolve(const OpenSystemModel& m, const IntegratorConfig& config, const DensityMatrix& rho0,
            const StateObserver& observe);
Trajectory evolve(const OpenSystemModel& m, const IntegratorConfig& config, const DensityMatrix& rho0);

double dissipator_heat_rate(const OpenSystemModel& m, const DensityMatrix& rho, double t);

}  // namespace qduality
