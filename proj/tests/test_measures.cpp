#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sqbath/measures.hpp"

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

DensityMatrix werner(double p) {
    ComplexMatrix rho = ComplexMatrix::identity(4) * cx((1.0 - p) / 4.0);
    rho(0, 0) += 0.5 * p;
    rho(3, 3) += 0.5 * p;
    rho(0, 3) += 0.5 * p;
    rho(3, 0) += 0.5 * p;
    return DensityMatrix::from_raw(rho);
}

// random X state: random diagonal weights plus coherences bounded by the
// exact positivity conditions |rho14|^2 <= w1 w4, |rho23|^2 <= w2 w3
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
    const double m14 = 0.98 * u(rng) * std::sqrt(w[0] * w[3]);
    const double m23 = 0.98 * u(rng) * std::sqrt(w[1] * w[2]);
    const double p14 = 2.0 * std::numbers::pi * u(rng);
    const double p23 = 2.0 * std::numbers::pi * u(rng);
    rho(0, 3) = std::polar(m14, p14);
    rho(3, 0) = std::conj(rho(0, 3));
    rho(1, 2) = std::polar(m23, p23);
    rho(2, 1) = std::conj(rho(1, 2));
    return DensityMatrix::from_raw(rho);
}

ComplexMatrix random_su2(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    cx a(g(rng), g(rng)), b(g(rng), g(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    ComplexMatrix u(2);
    u(0, 0) = a;
    u(0, 1) = -std::conj(b);
    u(1, 0) = b;
    u(1, 1) = std::conj(a);
    return u;
}

DensityMatrix evolved(double r12, double t) {
    BathParams p;
    p.T = 1.0;
    p.r = 0.35;
    p.r12 = r12;
    return propagate(build_liouvillian(p), initial_state_eg(), t);
}

}  // namespace

TEST_CASE("relative entropy of coherence") {
    REQUIRE(rel_entropy_coherence(bell_phi_plus(), CoherenceBasis::computational) ==
            Catch::Approx(1.0).margin(1e-10));

    // diagonal states carry no coherence in the bare basis
    ComplexMatrix d(4);
    d(0, 0) = 0.4;
    d(1, 1) = 0.3;
    d(2, 2) = 0.2;
    d(3, 3) = 0.1;
    const DensityMatrix diag = DensityMatrix::from_raw(d);
    REQUIRE(rel_entropy_coherence(diag, CoherenceBasis::computational) <= 1e-12);

    // |eg> is an equal superposition of the symmetric/antisymmetric states,
    // so in the dressed basis it carries exactly one bit
    REQUIRE(rel_entropy_coherence(initial_state_eg(), CoherenceBasis::dressed) ==
            Catch::Approx(1.0).margin(1e-10));
    REQUIRE(rel_entropy_coherence(initial_state_eg(), CoherenceBasis::computational) <= 1e-12);

    // the maximally mixed state is basis-independent
    const DensityMatrix mixed = DensityMatrix::from_raw(ComplexMatrix::identity(4) * cx(0.25));
    REQUIRE(rel_entropy_coherence(mixed, CoherenceBasis::dressed) <= 1e-12);
    REQUIRE(rel_entropy_coherence(mixed, CoherenceBasis::computational) <= 1e-12);

    // frozen value on an evolved state, dressed basis (the default)
    REQUIRE(rel_entropy_coherence(evolved(0.1, 1.0)) ==
            Catch::Approx(0.009995633244).margin(1e-9));
}

TEST_CASE("concurrence") {
    REQUIRE(concurrence(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(concurrence(initial_state_eg()) <= 1e-10);
    REQUIRE(concurrence(pure({1.0, 0.0, 0.0, 0.0})) <= 1e-10);

    // Werner family against the closed form max(0, (3p-1)/2)
    for (int k = 0; k <= 10; ++k) {
        const double p = k / 10.0;
        const double expect = std::max(0.0, (3.0 * p - 1.0) / 2.0);
        REQUIRE(concurrence(werner(p)) == Catch::Approx(expect).margin(1e-10));
    }
    REQUIRE(concurrence(werner(0.5)) == Catch::Approx(0.25).margin(1e-10));

    // invariance under local unitaries
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        const DensityMatrix s = random_x_state(rng);
        const double base = concurrence(s);
        const ComplexMatrix u = kron(random_su2(rng), random_su2(rng));
        const DensityMatrix rotated = DensityMatrix::from_raw(u * s.rho * u.adjoint());
        REQUIRE(concurrence(rotated) == Catch::Approx(base).margin(1e-8));
    }
}

TEST_CASE("mutual information") {
    REQUIRE(mutual_information(pure({0.0, 1.0, 0.0, 0.0})) <= 1e-10);
    REQUIRE(mutual_information(bell_phi_plus()) == Catch::Approx(2.0).margin(1e-10));

    ComplexMatrix cc(4);
    cc(0, 0) = 0.5;
    cc(3, 3) = 0.5;
    REQUIRE(mutual_information(DensityMatrix::from_raw(cc)) ==
            Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("discord fixtures") {
    REQUIRE(discord(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(discord(pure({0.0, 1.0, 0.0, 0.0})) <= 1e-8);
    REQUIRE(discord(pure({1.0, 0.0, 0.0, 0.0})) <= 1e-8);

    // classically correlated: all correlations classical, discord zero
    ComplexMatrix cc(4);
    cc(0, 0) = 0.5;
    cc(3, 3) = 0.5;
    REQUIRE(discord(DensityMatrix::from_raw(cc)) <= 1e-8);
}

TEST_CASE("discord fast path against the grid oracle") {
    // the designated evolved-state checkpoint
    const DensityMatrix ref = evolved(0.2, 1.0);
    const double fast = discord(ref);
    const double slow = oracle::discord_grid(ref);
    REQUIRE(std::abs(fast - slow) <= 1e-4);

    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 80; ++rep) {
        const DensityMatrix s = random_x_state(rng);
        REQUIRE(std::abs(discord(s) - oracle::discord_grid(s)) <= 1e-4);
    }
}

TEST_CASE("discord invariance under local phase rotations") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const DensityMatrix base = evolved(0.15, 0.8);
    const double d0 = discord(base);
    for (int rep = 0; rep < 10; ++rep) {
        ComplexMatrix uz(4);
        const cx ea = std::exp(cx(0.0, u(rng))), eb = std::exp(cx(0.0, u(rng)));
        uz(0, 0) = 1.0;
        uz(1, 1) = eb;
        uz(2, 2) = ea;
        uz(3, 3) = ea * eb;
        const DensityMatrix rot = DensityMatrix::from_raw(uz * base.rho * uz.adjoint());
        REQUIRE(discord(rot) == Catch::Approx(d0).margin(1e-8));
    }
}

TEST_CASE("consonance") {
    REQUIRE(consonance(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-12));
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(consonance(pure({0.0, s, s, 0.0})) == Catch::Approx(1.0).margin(1e-12));

    ComplexMatrix d(4);
    for (int i = 0; i < 4; ++i) d(i, i) = 0.25;
    REQUIRE(consonance(DensityMatrix::from_raw(d)) <= 1e-14);

    // non-X input is a structure error
    ComplexMatrix nx(4);
    nx(0, 0) = 0.5;
    nx(1, 1) = 0.5;
    nx(0, 1) = 0.3;
    nx(1, 0) = 0.3;
    REQUIRE_THROWS_AS(consonance(DensityMatrix::from_raw(nx)), std::invalid_argument);

    // frozen value on an evolved state
    REQUIRE(consonance(evolved(0.1, 1.0)) == Catch::Approx(0.327960307449).margin(1e-9));
}

TEST_CASE("local quantum uncertainty") {
    REQUIRE(lqu(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(lqu(initial_state_eg()) <= 1e-10);
    REQUIRE(lqu(DensityMatrix::from_raw(ComplexMatrix::identity(4) * cx(0.25))) <= 1e-10);

    // frozen value on an evolved state
    REQUIRE(lqu(evolved(0.1, 1.0)) == Catch::Approx(0.075638934359).margin(1e-9));

    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        const double v = lqu(random_x_state(rng));
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("qfi pure-state formula") {
    // cos(th)|0> + sin(th)|1>  ->  4, independent of th
    for (double th : {0.0, 0.3, 1.1}) {
        const std::vector<cx> psi = {std::cos(th), std::sin(th)};
        const std::vector<cx> dpsi = {-std::sin(th), std::cos(th)};
        REQUIRE(qfi_pure(psi, dpsi) == Catch::Approx(4.0).margin(1e-12));
    }
    // constant family
    REQUIRE(qfi_pure({1.0, 0.0}, {0.0, 0.0}) <= 1e-14);
    // pure gauge e^{i th}|0>: dpsi = i psi
    REQUIRE(qfi_pure({cx(0.0, 1.0), 0.0}, {cx(-1.0, 0.0), 0.0}) <= 1e-12);
    REQUIRE_THROWS_AS(qfi_pure({1.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("qfi mixed formula reduces to the pure formula") {
    // family cos(th)|ee> + sin(th)|gg>, evaluated at th = 0.7
    const double th = 0.7;
    auto fam = [](double v) { return pure({std::cos(v), 0.0, 0.0, std::sin(v)}); };

    // analytic derivative
    ComplexMatrix drho(4);
    const double c = std::cos(th), s = std::sin(th);
    drho(0, 0) = -2.0 * c * s;
    drho(3, 3) = 2.0 * c * s;
    drho(0, 3) = c * c - s * s;
    drho(3, 0) = c * c - s * s;
    REQUIRE(qfi_from_derivative(fam(th).rho, drho) == Catch::Approx(4.0).margin(1e-9));

    // finite-difference derivative
    const double h = 1e-5;
    ComplexMatrix fd = fam(th + h).rho;
    fd -= fam(th - h).rho;
    fd *= cx(1.0 / (2.0 * h));
    REQUIRE(qfi_from_derivative(fam(th).rho, fd) == Catch::Approx(4.0).margin(1e-5));

    // parameter-independent family
    ComplexMatrix zero(4);
    REQUIRE(qfi_from_derivative(fam(0.3).rho, zero) <= 1e-14);
}

TEST_CASE("qfi on evolved states") {
    BathParams p;
    p.T = 1.0;
    p.r = 0.35;

    p.r12 = 0.1;
    const double near = qfi(p, 1.0);
    p.r12 = 1.1;
    const double far = qfi(p, 1.0);
    REQUIRE(near == Catch::Approx(214.259286240).epsilon(1e-6));
    REQUIRE(far == Catch::Approx(0.042715733353).epsilon(1e-6));
    REQUIRE(near > far);  // collective regime is the sensitive one

    // step-halving stability at the default step
    p.r12 = 0.5;
    const double full = qfi(p, 1.0);
    const double half = qfi(p, 1.0, 5e-5);
    REQUIRE(std::abs(full - half) <= 1e-4 * std::abs(full));

    // stencil domain check
    p.r12 = 0.05;
    REQUIRE_THROWS_AS(qfi(p, 1.0, 1.0), std::domain_error);
}

TEST_CASE("measure report") {
    const DensityMatrix s = evolved(0.2, 1.0);
    const MeasureReport rep = make_measure_report(s, CoherenceBasis::dressed, 4.167314930637);

    REQUIRE(rep.c_rel == Catch::Approx(0.012039321890).margin(1e-9));
    REQUIRE(rep.concurrence <= 1e-10);
    REQUIRE(rep.discord == Catch::Approx(0.012083212584).margin(1e-6));
    REQUIRE(rep.consonance == Catch::Approx(0.201487612875).margin(1e-9));
    REQUIRE(rep.lqu == Catch::Approx(0.025117724015).margin(1e-9));
    REQUIRE(rep.qfi.has_value());
    REQUIRE(rep.consonance >= rep.concurrence - 1e-9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(rep.correlation_t[i][j] == rep.teleport.t_matrix[i][j]);

    // ordering invariant across a short trajectory
    BathParams p;
    p.T = 1.0;
    p.r = 0.35;
    p.r12 = 0.2;
    const Trajectory tr = trajectory(build_liouvillian(p), initial_state_eg(), 5.0, 0.1);
    for (size_t k = 0; k < tr.states.size(); k += 5) {
        const MeasureReport r = make_measure_report(tr.states[k]);
        REQUIRE(r.consonance >= r.concurrence - 1e-9);
        REQUIRE(r.discord >= -1e-9);
        REQUIRE(r.lqu >= 0.0);
        REQUIRE(r.lqu <= 1.0);
    }
}
