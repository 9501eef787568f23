#pragma once

// The quantifier layer: relative entropy of coherence, concurrence, quantum
// discord, consonance, local quantum uncertainty, and quantum Fisher
// information, plus the bundled per-state report the CLI emits.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "sqbath/bath.hpp"
#include "sqbath/evolve.hpp"
#include "sqbath/linalg.hpp"
#include "sqbath/oracle.hpp"
#include "sqbath/teleport.hpp"

namespace sqbath {

enum class CoherenceBasis { dressed, computational };

namespace detail {

// the symmetric/antisymmetric dressing of the middle block; involutory
inline const ComplexMatrix& dressed_unitary() {
    static const ComplexMatrix u = [] {
        const double s = 1.0 / std::sqrt(2.0);
        ComplexMatrix m(4);
        m(0, 0) = 1.0;
        m(3, 3) = 1.0;
        m(1, 1) = s;
        m(1, 2) = s;
        m(2, 1) = s;
        m(2, 2) = -s;
        return m;
    }();
    return u;
}

inline double entropy_2x2(cx a, cx b, cx c) {
    // eigenvalues of [[a, c], [c*, b]] for Hermitian input, closed form
    const double ar = a.real(), br = b.real();
    const double half = 0.5 * (ar + br);
    const double rad = std::sqrt(0.25 * (ar - br) * (ar - br) + std::norm(c));
    double total = 0.0;
    for (double lam : {half + rad, half - rad})
        if (lam > 1e-12) total -= lam * std::log2(lam);
    return total;
}

// conditional entropy after measuring B along angle theta in the x-z plane
// (phi = 0); cheap enough for dense scans
inline double conditional_entropy_xz(const ComplexMatrix& rho, double theta) {
    const double nx = std::sin(theta), nz = std::cos(theta);
    double total = 0.0;
    for (int sign : {+1, -1}) {
        // P = 1/2 (I + s n.sigma) on B; M = (I ⊗ P) rho (I ⊗ P) assembled blockwise
        cx p[2][2] = {{0.5 * (1.0 + sign * nz), 0.5 * sign * nx},
                      {0.5 * sign * nx, 0.5 * (1.0 - sign * nz)}};
        // rho_A|s before normalization: (rho_A|s)_{a1 a2} = tr_B[P rho_{a1 a2} P]
        // where rho_{a1 a2} is the 2x2 B-block; P projector so P M P traced = tr[P rho P]
        cx red[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2) {
                cx acc = 0.0;
                for (int i = 0; i < 2; ++i)
                    for (int u = 0; u < 2; ++u)
                        for (int w = 0; w < 2; ++w)
                            acc += p[i][u] * rho(2 * a1 + u, 2 * a2 + w) * p[w][i];
                red[a1][a2] = acc;
            }
        const double prob = (red[0][0] + red[1][1]).real();
        if (prob <= 1e-14) continue;
        total += prob * entropy_2x2(red[0][0] / prob, red[1][1] / prob, red[0][1] / prob);
    }
    return total;
}

inline double conditional_entropy_full(const ComplexMatrix& rho, double theta, double phi) {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    double total = 0.0;
    for (int sign : {+1, -1}) {
        cx p[2][2] = {{0.5 * (1.0 + sign * nz), 0.5 * sign * cx(nx, -ny)},
                      {0.5 * sign * cx(nx, ny), 0.5 * (1.0 - sign * nz)}};
        cx red[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (int a1 = 0; a1 < 2; ++a1)
            for (int a2 = 0; a2 < 2; ++a2) {
                cx acc = 0.0;
                for (int i = 0; i < 2; ++i)
                    for (int u = 0; u < 2; ++u)
                        for (int w = 0; w < 2; ++w)
                            acc += p[i][u] * rho(2 * a1 + u, 2 * a2 + w) * p[w][i];
                red[a1][a2] = acc;
            }
        const double prob = (red[0][0] + red[1][1]).real();
        if (prob <= 1e-14) continue;
        total += prob * entropy_2x2(red[0][0] / prob, red[1][1] / prob, red[0][1] / prob);
    }
    return total;
}

template <class F>
double golden_min(F&& f, double lo, double hi, int iters = 50) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int k = 0; k < iters; ++k) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

}  // namespace detail

// Relative entropy of coherence S(rho_diag) - S(rho). The default basis is the
// dressed one (symmetric/antisymmetric combinations on the middle block),
// which is the eigenbasis of the collectively shifted Hamiltonian; the bare
// computational basis is available as the alternative.
inline double rel_entropy_coherence(const DensityMatrix& state,
                                    CoherenceBasis basis = CoherenceBasis::dressed) {
    state.require_valid();
    ComplexMatrix rho = state.rho;
    if (basis == CoherenceBasis::dressed) {
        const ComplexMatrix& u = detail::dressed_unitary();
        rho = u.adjoint() * rho * u;
    }
    std::vector<double> diag(4);
    for (int i = 0; i < 4; ++i) diag[i] = rho(i, i).real();
    const double s_diag = entropy_bits(diag);
    const double s_full = entropy_bits(hermitian_eig(rho).eigenvalues);
    return std::max(0.0, s_diag - s_full);
}

// Wootters concurrence through the Hermitian route eig(sqrt(rho) rho~ sqrt(rho))
inline double concurrence(const DensityMatrix& state) {
    state.require_valid();
    const ComplexMatrix yy = kron(sigma_y(), sigma_y());
    const ComplexMatrix tilde = yy * state.rho.conjugate() * yy;
    const ComplexMatrix root = matrix_sqrt_psd(state.rho);
    const ComplexMatrix m = hermitize(root * tilde * root);
    const auto ed = hermitian_eig(m);
    // eigenvalue noise at machine epsilon would be amplified to ~1e-8 by the
    // square root; anything that far below the top of the spectrum is noise
    const double floor = 1e-14 * std::max(ed.eigenvalues[3], 0.0);
    double lam[4];
    for (int i = 0; i < 4; ++i)
        lam[i] = ed.eigenvalues[i] > floor ? std::sqrt(ed.eigenvalues[i]) : 0.0;
    return std::max(0.0, lam[3] - lam[2] - lam[1] - lam[0]);
}

inline double mutual_information(const DensityMatrix& state) {
    state.require_valid();
    const double sa = entropy_bits(
        hermitian_eig(hermitize(partial_trace(state.rho, Subsystem::A))).eigenvalues);
    const double sb = entropy_bits(
        hermitian_eig(hermitize(partial_trace(state.rho, Subsystem::B))).eigenvalues);
    const double s = von_neumann_entropy(state.rho);
    return sa + sb - s;
}

// Quantum discord D = I(rho) - max over von Neumann measurements on B of the
// classical correlation. X-shaped states take the fast path: local phase
// rotations make the two coherences real and non-negative, which collapses
// the azimuthal search exactly, leaving a 1-D polar scan plus refinement.
// Anything else falls through to the blind grid oracle.
inline double discord(const DensityMatrix& state) {
    state.require_valid();
    if (x_structure_leak(state.rho) > 1e-8) return oracle::discord_grid(state);

    const ComplexMatrix& rho = state.rho;
    const cx r23 = rho(1, 2), r14 = rho(0, 3);
    const double a23 = std::abs(r23) > 1e-15 ? std::arg(r23) : 0.0;
    const double a14 = std::abs(r14) > 1e-15 ? std::arg(r14) : 0.0;
    const double alpha = 0.5 * (a14 + a23), beta = 0.5 * (a14 - a23);

    ComplexMatrix u(4);
    const cx ea = std::exp(cx(0.0, -alpha / 2.0)), eb = std::exp(cx(0.0, -beta / 2.0));
    u(0, 0) = ea * eb;
    u(1, 1) = ea * std::conj(eb);
    u(2, 2) = std::conj(ea) * eb;
    u(3, 3) = std::conj(ea) * std::conj(eb);
    const ComplexMatrix rc = u * rho * u.adjoint();

    const double pi = std::numbers::pi;
    double best = 1e300, best_th = 0.0;
    auto consider = [&](double th) {
        const double v = detail::conditional_entropy_xz(rc, th);
        if (v < best) {
            best = v;
            best_th = th;
        }
    };
    for (double th : {0.0, pi / 4.0, pi / 2.0}) consider(th);
    const int n_grid = 121;
    for (int i = 0; i <= n_grid; ++i) consider(pi * i / n_grid);
    best = std::min(best, detail::golden_min(
                              [&](double th) { return detail::conditional_entropy_xz(rc, th); },
                              best_th - pi / n_grid, best_th + pi / n_grid));

    // coarse safety net on the raw state, no structure assumptions
    for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 36; ++j)
            best = std::min(best, detail::conditional_entropy_full(
                                      rho, pi * i / 17.0, 2.0 * pi * j / 36.0));

    const double sa = entropy_bits(
        hermitian_eig(hermitize(partial_trace(rho, Subsystem::A))).eigenvalues);
    const double classical = sa - best;
    return std::max(0.0, mutual_information(state) - classical);
}

// Consonance 2(|rho_23| + |rho_14|): total coherence that is locally
// unremovable, valid in this closed form only for X-shaped states.
inline double consonance(const DensityMatrix& state) {
    state.require_valid();
    if (x_structure_leak(state.rho) > 1e-8)
        throw std::invalid_argument("consonance: state is not X-shaped");
    return 2.0 * (std::abs(state.rho(1, 2)) + std::abs(state.rho(0, 3)));
}

// Local quantum uncertainty 1 - lambda_max(W),
// W_ij = Tr[sqrt(rho) (sigma_i ⊗ I) sqrt(rho) (sigma_j ⊗ I)]
inline double lqu(const DensityMatrix& state) {
    state.require_valid();
    const ComplexMatrix root = matrix_sqrt_psd(state.rho);
    const ComplexMatrix pauli[3] = {sigma_x(), sigma_y(), sigma_z()};
    ComplexMatrix local[3];
    for (int i = 0; i < 3; ++i) local[i] = kron(pauli[i], ComplexMatrix::identity(2));

    double w[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            w[i][j] = (root * local[i] * root * local[j]).trace().real();

    ComplexMatrix wm(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) wm(i, j) = 0.5 * (w[i][j] + w[j][i]);
    const auto ed = hermitian_eig(wm);
    return std::clamp(1.0 - ed.eigenvalues[2], 0.0, 1.0);
}

// QFI with respect to a parameter, from the state and its parameter
// derivative: F = sum over eigenpairs with lam_m + lam_n above cutoff of
// 2 |<m| drho |n>|^2 / (lam_m + lam_n).
inline double qfi_from_derivative(const ComplexMatrix& rho, const ComplexMatrix& drho) {
    const auto ed = hermitian_eig(hermitize(rho));
    const ComplexMatrix dh = hermitize(drho);
    const int n = ed.eigenvectors.dim();
    // matrix elements <m| drho |n> in the eigenbasis
    const ComplexMatrix mixed = ed.eigenvectors.adjoint() * dh * ed.eigenvectors;
    double f = 0.0;
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
            const double denom = ed.eigenvalues[m] + ed.eigenvalues[k];
            if (denom <= 1e-10) continue;
            f += 2.0 * std::norm(mixed(m, k)) / denom;
        }
    return f;
}

// QFI for estimating the qubit separation from the evolved state: central
// difference in r12, then the spectral formula.
inline double qfi(const BathParams& params, double t, double h_base = 1e-4) {
    const double h = h_base * std::max(1.0, params.r12);
    if (params.r12 - h <= 0.0)
        throw std::domain_error("qfi: r12 too small for the finite-difference stencil");
    BathParams lo = params, hi = params;
    lo.r12 -= h;
    hi.r12 += h;
    const DensityMatrix rho0 = initial_state_eg();
    const DensityMatrix rm = propagate(build_liouvillian(lo), rho0, t);
    const DensityMatrix rp = propagate(build_liouvillian(hi), rho0, t);
    const DensityMatrix rc = propagate(build_liouvillian(params), rho0, t);
    ComplexMatrix drho = rp.rho;
    drho -= rm.rho;
    drho *= cx(1.0 / (2.0 * h));
    return qfi_from_derivative(rc.rho, drho);
}

// pure-state limit F = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)
inline double qfi_pure(const std::vector<cx>& psi, const std::vector<cx>& dpsi) {
    if (psi.size() != dpsi.size())
        throw std::invalid_argument("qfi_pure: size mismatch");
    double nrm = 0.0;
    for (const cx& c : psi) nrm += std::norm(c);
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("qfi_pure: state not normalized");
    cx overlap = 0.0;
    double dd = 0.0;
    for (size_t i = 0; i < psi.size(); ++i) {
        overlap += std::conj(psi[i]) * dpsi[i];
        dd += std::norm(dpsi[i]);
    }
    return 4.0 * (dd - std::norm(overlap));
}

// Everything the CSV rows need, computed once per state.
struct MeasureReport {
    double c_rel = 0.0;
    double concurrence = 0.0;
    double discord = 0.0;
    double consonance = 0.0;
    double lqu = 0.0;
    std::optional<double> qfi;
    Mat3 correlation_t{};
    TeleportReport teleport;  // carries the fidelity columns derived from correlation_t
};

inline MeasureReport make_measure_report(const DensityMatrix& state,
                                         CoherenceBasis basis = CoherenceBasis::dressed,
                                         std::optional<double> qfi_value = std::nullopt) {
    MeasureReport r;
    r.c_rel = rel_entropy_coherence(state, basis);
    r.concurrence = concurrence(state);
    r.discord = discord(state);
    r.consonance = x_structure_leak(state.rho) <= 1e-8 ? consonance(state)
                                                       : oracle::consonance_general(state);
    r.lqu = lqu(state);
    r.qfi = qfi_value;
    r.teleport = make_teleport_report(state);
    r.correlation_t = r.teleport.t_matrix;

    for (double v : {r.c_rel, r.concurrence, r.discord, r.consonance, r.lqu})
        if (!std::isfinite(v))
            throw std::runtime_error("make_measure_report: non-finite quantifier");
    if (r.consonance < r.concurrence - 1e-9)
        throw std::runtime_error("make_measure_report: consonance fell below concurrence");
    return r;
}

}  // namespace sqbath
