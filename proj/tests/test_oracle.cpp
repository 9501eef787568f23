#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sqbath/measures.hpp"
#include "sqbath/oracle.hpp"

using namespace sqbath;

namespace {

DensityMatrix pure(const std::vector<cx>& psi) {
    ComplexMatrix rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix::from_raw(rho);
}

DensityMatrix bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return pure({s, 0.0, 0.0, s});
}

DensityMatrix random_x_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double w[4];
    double total = 0.0;
    for (double& v : w) {
        v = u(rng) + 1e-3;
        total += v;
    }
    for (double& v : w) v /= total;
    ComplexMatrix rho(4);
    for (int i = 0; i < 4; ++i) rho(i, i) = w[i];
    rho(0, 3) = std::polar(0.98 * u(rng) * std::sqrt(w[0] * w[3]),
                           2.0 * std::numbers::pi * u(rng));
    rho(3, 0) = std::conj(rho(0, 3));
    rho(1, 2) = std::polar(0.98 * u(rng) * std::sqrt(w[1] * w[2]),
                           2.0 * std::numbers::pi * u(rng));
    rho(2, 1) = std::conj(rho(1, 2));
    return DensityMatrix::from_raw(rho);
}

DensityMatrix random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = cx(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    rho *= cx(1.0 / rho.trace().real());
    return DensityMatrix::from_raw(hermitize(rho));
}

DensityMatrix evolved(double r12, double t) {
    BathParams p;
    p.T = 1.0;
    p.r = 0.35;
    p.r12 = r12;
    return propagate(build_liouvillian(p), initial_state_eg(), t);
}

}  // namespace

TEST_CASE("discord grid fixtures") {
    REQUIRE(oracle::discord_grid(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(oracle::discord_grid(pure({0.0, 1.0, 0.0, 0.0})) <= 1e-8);

    // the designated evolved checkpoint: grid vs fast path
    const DensityMatrix ref = evolved(0.2, 1.0);
    REQUIRE(std::abs(oracle::discord_grid(ref) - discord(ref)) <= 1e-4);
}

TEST_CASE("lqu direct minimization vs closed form") {
    REQUIRE(oracle::lqu_minimize(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(oracle::lqu_minimize(pure({0.0, 1.0, 0.0, 0.0})) <= 1e-6);

    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 25; ++rep) {
        const DensityMatrix s = random_state(rng);
        REQUIRE(std::abs(oracle::lqu_minimize(s) - lqu(s)) <= 1e-6);
    }
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const DensityMatrix s = evolved(0.1, t);
        REQUIRE(std::abs(oracle::lqu_minimize(s) - lqu(s)) <= 1e-6);
    }
}

TEST_CASE("general consonance agrees with the X closed form") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 60; ++rep) {
        const DensityMatrix s = random_x_state(rng);
        REQUIRE(std::abs(oracle::consonance_general(s) - consonance(s)) <= 1e-9);
    }
    for (double t : {0.25, 1.0, 3.0}) {
        const DensityMatrix s = evolved(0.2, t);
        REQUIRE(std::abs(oracle::consonance_general(s) - consonance(s)) <= 1e-9);
    }

    ComplexMatrix d(4);
    for (int i = 0; i < 4; ++i) d(i, i) = 0.25;
    REQUIRE(oracle::consonance_general(DensityMatrix::from_raw(d)) <= 1e-12);
}

TEST_CASE("rk4 cross-checks the exponential propagator") {
    BathParams p;
    p.T = 1.0;
    p.r = 0.35;
    p.r12 = 0.1;
    const Liouvillian L = build_liouvillian(p);

    const Trajectory fine = oracle::rk4_trajectory(L, initial_state_eg(), 10.0, 1e-3);
    const Trajectory exact = trajectory(L, initial_state_eg(), 10.0, 1e-3);
    REQUIRE(fine.states.size() == exact.states.size());
    double worst = 0.0;
    for (size_t k = 0; k < fine.states.size(); k += 100)
        worst = std::max(worst, (fine.states[k].rho - exact.states[k].rho).max_abs());
    worst = std::max(worst, (fine.states.back().rho - exact.states.back().rho).max_abs());
    REQUIRE(worst <= 1e-7);
}

TEST_CASE("rk4 trivial and closed-form cases") {
    // L = 0 leaves the state untouched
    Liouvillian idle;
    idle.generator = ComplexMatrix(16);
    const Trajectory still = oracle::rk4_trajectory(idle, initial_state_eg(), 1.0, 0.01);
    REQUIRE((still.states.back().rho - initial_state_eg().rho).max_abs() <= 1e-12);

    // independent zero-temperature damping: excited population follows e^{-t}
    BathCoefficients c;
    c.gamma = {{{1.0, 0.0}, {0.0, 1.0}}};
    const Liouvillian damp = assemble_liouvillian(c, 1.0, 1.0);
    const Trajectory tr = oracle::rk4_trajectory(damp, initial_state_eg(), 3.0, 1e-3);
    for (size_t k = 0; k < tr.states.size(); k += 500) {
        const double t = tr.times[k];
        const ComplexMatrix ra = partial_trace(tr.states[k].rho, Subsystem::A);
        REQUIRE(std::abs(ra(0, 0).real() - std::exp(-t)) <= 1e-9);
    }

    // a step too coarse for the local-error budget is rejected
    BathParams p;
    p.r12 = 0.1;
    REQUIRE_THROWS_AS(oracle::rk4_trajectory(build_liouvillian(p), initial_state_eg(), 1.0, 0.5),
                      std::runtime_error);
}

TEST_CASE("monte carlo fidelity fixtures") {
    // perfect channel: every sample teleports exactly
    const auto bell = oracle::avg_fidelity_monte_carlo(bell_phi_plus(), 20000, 7);
    REQUIRE(bell.mean == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(bell.stddev <= 1e-10);

    // maximally mixed resource: output is I/2 regardless of input
    const auto mixed = oracle::avg_fidelity_monte_carlo(
        DensityMatrix::from_raw(ComplexMatrix::identity(4) * cx(0.25)), 20000, 7);
    REQUIRE(mixed.mean == Catch::Approx(0.5).margin(1e-10));

    REQUIRE_THROWS_AS(oracle::avg_fidelity_monte_carlo(bell_phi_plus(), 100, 7),
                      std::invalid_argument);
}

TEST_CASE("monte carlo matches the closed forms on evolved states") {
    // states in the det T < 0 regime, where the closed forms are attainable
    for (auto [r12, t] : {std::pair{0.05, 0.5}, {0.1, 1.0}, {0.1, 0.5}}) {
        const DensityMatrix s = evolved(r12, t);
        const TeleportReport rep = make_teleport_report(s);
        REQUIRE(rep.det_t < 0.0);

        const auto mc = oracle::avg_fidelity_monte_carlo(s, 40000, 11);
        REQUIRE(std::abs(mc.mean - rep.max_fidelity) <= 3.0 * mc.se_mean);
        REQUIRE(std::abs(mc.stddev - rep.fidelity_deviation) <= 3.0 * mc.se_stddev);
    }
}
