#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qduality/model.hpp"
#include "test_support.hpp"

using namespace qduality;
using qduality::testing::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

OpenSystemModel fig2_model(int n, InteractionKind kind = InteractionKind::XX) {
    OpenSystemModel m;
    m.n_qubits = n;
    m.interaction = kind;
    return m;
}

}  // namespace

TEST_CASE("protocol_at hand-evaluated points") {
    const ControlProtocol p{0.4, 10.0, 10.0, 0.02, std::nullopt};

    const auto s0 = protocol_at(p, 0.0);
    CHECK(s0.eps == 0.4);
    CHECK(s0.theta == doctest::Approx(-kPi / 2));
    CHECK(std::abs(s0.lam) < 1e-17);
    CHECK(s0.d_eps == 0.0);
    CHECK(s0.d_theta == doctest::Approx(kPi / 20));
    CHECK(s0.d_lam == doctest::Approx(0.001 * kPi));

    const auto s1 = protocol_at(p, 10.0);
    CHECK(s1.eps == doctest::Approx(10.0));
    CHECK(s1.theta == 0.0);
    CHECK(s1.lam == 0.02);
    CHECK(std::abs(s1.d_eps) < 1e-14);
    CHECK(s1.d_theta == doctest::Approx(kPi / 20));
    CHECK(s1.d_lam == 0.0);

    const auto sh = protocol_at(p, 5.0);
    CHECK(sh.eps == doctest::Approx(5.2));
    CHECK(sh.theta == doctest::Approx(-kPi / 4));
    CHECK(sh.lam == doctest::Approx(0.0141421).epsilon(1e-6));
    CHECK(sh.d_eps == doctest::Approx(1.5079645).epsilon(1e-6));
    CHECK(sh.d_theta == doctest::Approx(kPi / 20));
    CHECK(sh.d_lam == doctest::Approx(-0.02 * std::sin(-kPi / 4) * kPi / 20));

    CHECK_THROWS_AS(protocol_at(p, -0.1), std::out_of_range);
    CHECK_THROWS_AS(protocol_at(p, 10.1), std::out_of_range);
}

TEST_CASE("protocol stays positive and derivatives match finite differences") {
    const ControlProtocol p{0.4, 10.0, 10.0, 0.02, std::nullopt};
    const double h = 1e-6;
    for (int k = 0; k <= 1000; ++k) {
        const double t = 10.0 * k / 1000.0;
        const auto s = protocol_at(p, t);
        CHECK(s.eps > 0);
        if (k == 0 || k == 1000) continue;
        const auto a = protocol_at(p, t - h);
        const auto b = protocol_at(p, t + h);
        CHECK(std::abs((b.eps - a.eps) / (2 * h) - s.d_eps) < 1e-6);
        CHECK(std::abs((b.theta - a.theta) / (2 * h) - s.d_theta) < 1e-6);
        CHECK(std::abs((b.lam - a.lam) / (2 * h) - s.d_lam) < 1e-6);
    }
}

TEST_CASE("build_hamiltonian") {
    SUBCASE("t = 0: transverse field only") {
        for (int n : {1, 2, 4}) {
            const auto m = fig2_model(n);
            const auto h = build_hamiltonian(m, 0.0);
            const RegisterOperators ops(n, InteractionKind::XX);
            CHECK(max_abs(h.global - (-0.2) * ops.sum_x) < 1e-15);
            CHECK(max_abs(h.interaction) < 1e-17);
        }
    }
    SUBCASE("t = tau, two qubits, XX") {
        const auto h = build_hamiltonian(fig2_model(2), 10.0);
        const Operator expected = 5.0 * (embed_site(pauli::z(), 1, 2) + embed_site(pauli::z(), 2, 2)) +
                                  0.02 * kron(pauli::x(), pauli::x());
        CHECK(max_abs(h.global - expected) < 1e-14);
        CHECK(max_abs(h.locals[0] - 5.0 * pauli::z()) < 1e-14);
    }
    SUBCASE("ZZ coupling and open boundary") {
        const auto h = build_hamiltonian(fig2_model(3, InteractionKind::ZZ), 10.0);
        const Operator expected = 0.02 * (embed_site(pauli::z(), 1, 3) * embed_site(pauli::z(), 2, 3) +
                                          embed_site(pauli::z(), 2, 3) * embed_site(pauli::z(), 3, 3));
        CHECK(max_abs(h.interaction - expected) < 1e-15);
    }
    SUBCASE("no interaction") {
        const auto m = fig2_model(3, InteractionKind::None);
        for (double t : {0.0, 3.3, 10.0}) CHECK(max_abs(build_hamiltonian(m, t).interaction) == 0.0);
    }
    SUBCASE("Hermitian and decomposes on a 1000-point grid") {
        for (auto kind : {InteractionKind::XX, InteractionKind::ZZ}) {
            const auto m = fig2_model(3, kind);
            const RegisterOperators ops(3, kind);
            for (int k = 0; k <= 1000; ++k) {
                const auto h = build_hamiltonian(m, ops, 10.0 * k / 1000.0);
                CHECK(hermiticity_error(h.global) == 0.0);
                Operator sum = h.interaction;
                for (int i = 0; i < 3; ++i) sum += embed_site(h.locals[i], i + 1, 3);
                CHECK(max_abs(sum - h.global) < 1e-14);
            }
        }
    }
    CHECK_THROWS_AS(build_hamiltonian(fig2_model(2), 11.0), std::out_of_range);
}

TEST_CASE("build_hamiltonian_derivative") {
    SUBCASE("t = tau") {
        const auto dh = build_hamiltonian_derivative(fig2_model(2), 10.0);
        for (const auto& local : dh.locals) CHECK(max_abs(local - (5.0 * kPi / 20) * pauli::x()) < 1e-14);
        CHECK(max_abs(dh.interaction) < 1e-18);
    }
    SUBCASE("no interaction") {
        const auto m = fig2_model(2, InteractionKind::None);
        for (double t : {0.0, 5.0, 10.0}) CHECK(max_abs(build_hamiltonian_derivative(m, t).interaction) == 0.0);
    }
    SUBCASE("static protocol") {
        auto m = fig2_model(2);
        m.protocol.eps_tau = m.protocol.eps0;
        m.protocol.frozen_at = 4.0;
        for (double t : {0.0, 5.0, 10.0}) {
            const auto dh = build_hamiltonian_derivative(m, t);
            CHECK(max_abs(dh.global) == 0.0);
            CHECK(max_abs(build_hamiltonian(m, t).global - build_hamiltonian(m, 4.0).global) == 0.0);
        }
    }
    SUBCASE("finite differences at random times") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> when(1e-4, 10.0 - 1e-4);
        const double h = 1e-5;
        for (auto kind : {InteractionKind::XX, InteractionKind::ZZ}) {
            const auto m = fig2_model(2, kind);
            for (int trial = 0; trial < 100; ++trial) {
                const double t = when(rng);
                const Operator fd =
                    (build_hamiltonian(m, t + h).global - build_hamiltonian(m, t - h).global) / (2 * h);
                const auto dh = build_hamiltonian_derivative(m, t);
                CHECK(max_abs(fd - dh.global) <= 1e-6);
                Operator sum = dh.interaction;
                for (int i = 0; i < 2; ++i) sum += embed_site(dh.locals[i], i + 1, 2);
                CHECK(max_abs(sum - dh.global) < 1e-14);
            }
        }
    }
}

TEST_CASE("bose_occupation") {
    CHECK(bose_occupation(0.4, 1.0) == doctest::Approx(2.0332448).epsilon(1e-7));  // 1 / expm1(0.4)
    CHECK(bose_occupation(10.0, 1.0) == doctest::Approx(4.5400e-5).epsilon(1e-4));
    CHECK(bose_occupation(1.0, 1e6) == 0.0);
    CHECK(bose_occupation(1.0, INFINITY) == 0.0);
    CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), std::domain_error);
}

TEST_CASE("build_jump_operators") {
    SUBCASE("single qubit at t = 0") {
        const auto l = build_jump_operators(fig2_model(1), 0.0);
        CHECK(l.emission.amplitude == doctest::Approx(std::sqrt(0.4 * 3.0332448)).epsilon(1e-6));
        CHECK(max_abs(l.emission.shape - pauli::lowering()) == 0.0);
        const double n_b = bose_occupation(0.4, 1.0);
        CHECK(max_abs(l.absorption.matrix() - std::sqrt(n_b / (n_b + 1)) * l.emission.matrix().adjoint()) < 1e-14);
    }
    SUBCASE("zero temperature: no absorption") {
        auto m = fig2_model(1);
        m.temperature = TemperatureSchedule::constant(1e-3);
        const auto l = build_jump_operators(m, 10.0);
        CHECK(l.absorption.amplitude == 0.0);
        CHECK(l.emission.amplitude == doctest::Approx(std::sqrt(10.0)));
    }
    SUBCASE("collective over sites") {
        const auto l = build_jump_operators(fig2_model(2), 5.0);
        const Operator collective = embed_site(pauli::lowering(), 1, 2) + embed_site(pauli::lowering(), 2, 2);
        CHECK(max_abs(l.emission.shape - collective) == 0.0);
    }
    SUBCASE("time-dependent temperature enters the occupation") {
        auto m = fig2_model(1);
        m.temperature = TemperatureSchedule::sinusoidal(1.0, 0.2, 10.0);
        const auto l = build_jump_operators(m, 5.0);
        const double n_b = bose_occupation(5.2, 1.0 / 1.2);
        CHECK(l.absorption.amplitude == doctest::Approx(std::sqrt(5.2 * n_b)));
    }
}

TEST_CASE("gibbs_state") {
    SUBCASE("zero Hamiltonian") {
        CHECK(max_abs(gibbs_state(Operator::Zero(4, 4), 1.0).op() - Operator::Identity(4, 4) / 4.0) < 1e-15);
    }
    SUBCASE("two-level partition function") {
        const auto rho = gibbs_state(Operator(0.2 * pauli::z()), 1.0);
        CHECK(rho.op()(0, 0).real() == doctest::Approx(0.401312).epsilon(1e-6));
        CHECK(rho.op()(1, 1).real() == doctest::Approx(0.598688).epsilon(1e-6));
        CHECK(rho.op()(0, 0).real() == doctest::Approx(1.0 / (1.0 + std::exp(0.4))));
    }
    SUBCASE("zero temperature is the ground projector") {
        const auto rho = gibbs_state(Operator(0.2 * pauli::z()), INFINITY);
        CHECK(max_abs(rho.op() - Operator(pauli::lowering() * pauli::raising())) < 1e-15);
    }
    SUBCASE("commutes with H") {
        std::mt19937 rng(23);
        for (Index dim : {2, 4, 8, 16}) {
            const Operator h = qduality::testing::random_hermitian(rng, dim);
            const auto rho = gibbs_state(h, 0.7);
            CHECK(max_abs(rho.op() * h - h * rho.op()) <= 1e-10);
        }
    }
    CHECK_THROWS_AS(gibbs_state(Operator(pauli::raising()), 1.0), InvariantViolation);
}

TEST_CASE("temperature schedules") {
    CHECK_THROWS_AS(TemperatureSchedule::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(TemperatureSchedule::sinusoidal(0.1, 0.2, 10.0), std::invalid_argument);
    const auto s = TemperatureSchedule::sinusoidal(1.0, 0.2, 10.0);
    CHECK_FALSE(s.is_constant());
    CHECK(s.at(5.0) == doctest::Approx(1.2));
    CHECK(s.at(0.0) == 1.0);
    const auto bad = TemperatureSchedule::custom([](double t) { return 1.0 - t; }, "1 - t");
    CHECK_THROWS_AS(bad.at(2.0), std::domain_error);
}

TEST_CASE("model validation") {
    auto m = fig2_model(2);
    CHECK_NOTHROW(m.validate());
    m.gamma = -0.1;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
    m = fig2_model(9);
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
