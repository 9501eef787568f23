#pragma once

// Brute-force references that validate every closed-form fast path: grid
// discord, direct LQU minimization, the general consonance construction,
// an independent RK4 integrator, and Monte-Carlo teleportation fidelity.
// Deliberately written against the primitive operations only, not against
// the fast paths they are meant to check.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sqbath/bath.hpp"
#include "sqbath/evolve.hpp"
#include "sqbath/linalg.hpp"

namespace sqbath::oracle {

namespace detail {

inline ComplexMatrix direction_projector(double theta, double phi, int sign) {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    ComplexMatrix p(2);
    p(0, 0) = 0.5 * (1.0 + sign * nz);
    p(1, 1) = 0.5 * (1.0 - sign * nz);
    p(0, 1) = 0.5 * sign * cx(nx, -ny);
    p(1, 0) = 0.5 * sign * cx(nx, ny);
    return p;
}

// sum_i p_i S(rho_{A|i}) for the von Neumann measurement along (theta, phi) on B
inline double conditional_entropy(const ComplexMatrix& rho, double theta, double phi) {
    double total = 0.0;
    for (int sign : {+1, -1}) {
        const ComplexMatrix pb = kron(ComplexMatrix::identity(2),
                                      direction_projector(theta, phi, sign));
        const ComplexMatrix m = pb * rho * pb;
        const double p = m.trace().real();
        if (p <= 1e-14) continue;
        ComplexMatrix ra = partial_trace(m, Subsystem::A);
        ra *= cx(1.0 / p);
        total += p * entropy_bits(hermitian_eig(hermitize(ra)).eigenvalues);
    }
    return total;
}

// golden-section minimization of f on [lo, hi]; returns (argmin, min)
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iters = 60) {
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
    return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// alternating golden-section descent in the two spherical angles, re-centered
// after every round; span shrinks slowly enough to survive zigzag paths
template <class F>
double descend_2d(F&& f, double th, double ph, double span_t, double span_p, int rounds = 32) {
    double best = f(th, ph);
    for (int r = 0; r < rounds; ++r) {
        auto [t1, v1] = golden_min([&](double x) { return f(x, ph); }, th - span_t, th + span_t);
        if (v1 < best) {
            best = v1;
            th = t1;
        }
        auto [p1, v2] = golden_min([&](double x) { return f(th, x); }, ph - span_p, ph + span_p);
        if (v2 < best) {
            best = v2;
            ph = p1;
        }
        span_t *= 0.75;
        span_p *= 0.75;
    }
    return best;
}

}  // namespace detail

// Quantum discord by direct minimization over Bloch-sphere measurement
// directions on B: coarse grid, then golden-section descent around the best
// grid point (alternating in the two angles).
inline double discord_grid(const DensityMatrix& state, int n_theta = 181, int n_phi = 91) {
    const ComplexMatrix& rho = state.rho;

    double best = 1e300, best_th = 0.0, best_ph = 0.0;
    const double pi = std::numbers::pi;
    for (int i = 0; i < n_theta; ++i) {
        const double th = pi * i / (n_theta - 1);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2.0 * pi * j / n_phi;
            const double v = detail::conditional_entropy(rho, th, ph);
            if (v < best) {
                best = v;
                best_th = th;
                best_ph = ph;
            }
        }
    }
    const double dth = pi / (n_theta - 1), dph = 2.0 * pi / n_phi;
    best = std::min(best, detail::descend_2d(
                              [&](double th, double ph) {
                                  return detail::conditional_entropy(rho, th, ph);
                              },
                              best_th, best_ph, dth, dph));

    const ComplexMatrix ra = partial_trace(rho, Subsystem::A);
    const ComplexMatrix rb = partial_trace(rho, Subsystem::B);
    const double sa = entropy_bits(hermitian_eig(hermitize(ra)).eigenvalues);
    const double sb = entropy_bits(hermitian_eig(hermitize(rb)).eigenvalues);
    const double s = entropy_bits(hermitian_eig(rho).eigenvalues);
    const double mutual = sa + sb - s;
    return mutual - (sa - best);
}

// LQU by direct minimization of the skew information -1/2 Tr([sqrt(rho), K]^2)
// over local observables K = n.sigma ⊗ I.
inline double lqu_minimize(const DensityMatrix& state, int n_theta = 61, int n_phi = 121) {
    const ComplexMatrix a = matrix_sqrt_psd(state.rho);
    const ComplexMatrix pauli[3] = {sigma_x(), sigma_y(), sigma_z()};

    auto skew = [&](double th, double ph) {
        const double n[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th)};
        ComplexMatrix k(4);
        for (int i = 0; i < 3; ++i) k += kron(pauli[i], ComplexMatrix::identity(2)) * cx(n[i]);
        const ComplexMatrix c = a * k - k * a;  // anti-Hermitian commutator
        return 0.5 * (c.adjoint() * c).trace().real();
    };

    const double pi = std::numbers::pi;
    double best = 1e300, best_th = 0.0, best_ph = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double th = pi * i / (n_theta - 1);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2.0 * pi * j / n_phi;
            const double v = skew(th, ph);
            if (v < best) {
                best = v;
                best_th = th;
                best_ph = ph;
            }
        }
    }
    const double dth = pi / (n_theta - 1), dph = 2.0 * pi / n_phi;
    return std::min(best, detail::descend_2d(skew, best_th, best_ph, dth, dph));
}

// General consonance: rotate both marginals diagonal by local unitaries, then
// sum the doubly-off-diagonal moduli. For non-degenerate marginals the choice
// is canonical; degenerate ones take whatever eigenbasis comes out.
inline double consonance_general(const DensityMatrix& state) {
    const ComplexMatrix ua = hermitian_eig(hermitize(partial_trace(state.rho, Subsystem::A)))
                                 .eigenvectors;
    const ComplexMatrix ub = hermitian_eig(hermitize(partial_trace(state.rho, Subsystem::B)))
                                 .eigenvectors;
    const ComplexMatrix u = kron(ua, ub);
    const ComplexMatrix rc = u.adjoint() * state.rho * u;
    return std::abs(rc(0, 3)) + std::abs(rc(3, 0)) + std::abs(rc(1, 2)) + std::abs(rc(2, 1));
}

// Fixed-step classic RK4 on dvec(rho)/dt = L vec(rho) — the cross-check
// integrator for the exact exponential stepping.
inline Trajectory rk4_trajectory(const Liouvillian& L, const DensityMatrix& rho0, double t_max,
                                 double dt) {
    if (!(t_max > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("rk4_trajectory: t_max and dt must be > 0");

    auto deriv = [&](const std::vector<cx>& v) { return apply_super(L.generator, v); };

    // local-error probe on the first step: one full step vs two half steps
    {
        std::vector<cx> v = vec(rho0.rho);
        auto step = [&](std::vector<cx> y, double h) {
            auto k1 = deriv(y);
            std::vector<cx> tmp(y.size());
            for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            auto k2 = deriv(tmp);
            for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            auto k3 = deriv(tmp);
            for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
            auto k4 = deriv(tmp);
            for (size_t i = 0; i < y.size(); ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            return y;
        };
        auto full = step(v, dt);
        auto half = step(step(v, dt / 2.0), dt / 2.0);
        double err = 0.0;
        for (size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(full[i] - half[i]));
        if (err > 1e-8)
            throw std::runtime_error("rk4_trajectory: step size too large, local error " +
                                     std::to_string(err));
    }

    const int steps = static_cast<int>(std::llround(t_max / dt));
    Trajectory tr;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    if (x_structure_leak(rho0.rho) <= 1e-10) tr.max_x_leak = 0.0;

    std::vector<cx> v = vec(rho0.rho);
    std::vector<cx> tmp(v.size());
    for (int k = 0; k <= steps; ++k) {
        if (k > 0) {
            auto k1 = deriv(v);
            for (size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * dt * k1[i];
            auto k2 = deriv(tmp);
            for (size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * dt * k2[i];
            auto k3 = deriv(tmp);
            for (size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + dt * k3[i];
            auto k4 = deriv(tmp);
            for (size_t i = 0; i < v.size(); ++i)
                v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        DensityMatrix d = DensityMatrix::from_raw(unvec(v));
        tr.max_trace_err = std::max(tr.max_trace_err, d.trace_err);
        tr.max_herm_drift = std::max(tr.max_herm_drift, d.herm_drift);
        tr.min_eig = std::min(tr.min_eig, d.min_eig);
        if (tr.max_x_leak) *tr.max_x_leak = std::max(*tr.max_x_leak, x_structure_leak(d.rho));
        tr.times.push_back(k * dt);
        tr.states.push_back(std::move(d));
    }
    return tr;
}

struct McFidelity {
    double mean = 0.0;
    double stddev = 0.0;
    double se_mean = 0.0;    // standard error of the mean
    double se_stddev = 0.0;  // standard error of the stddev (delta method)
};

// Teleport Haar-random inputs through the standard protocol using rho as the
// resource: Bell measurement on (input, A), Pauli correction on B, conditional
// fidelity summed exactly over the four outcomes. A best-of-16 local Pauli
// pre-twist aligns rho with |Phi+> so the protocol realizes the maximal
// fidelity the closed forms describe. Mean estimates F, stddev estimates dF.
inline McFidelity avg_fidelity_monte_carlo(const DensityMatrix& state, int n_samples,
                                           unsigned seed) {
    if (n_samples < 10000)
        throw std::invalid_argument("avg_fidelity_monte_carlo: need at least 1e4 samples");

    const ComplexMatrix pauli[4] = {ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()};

    // |Phi+> as amplitude vector
    std::vector<cx> phip = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};

    double best_overlap = -1.0;
    ComplexMatrix rp(4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const ComplexMatrix u = kron(pauli[a], pauli[b]);
            const ComplexMatrix cand = u * state.rho * u;  // Paulis are Hermitian
            cx ov = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) ov += std::conj(phip[i]) * cand(i, j) * phip[j];
            if (ov.real() > best_overlap) {
                best_overlap = ov.real();
                rp = cand;
            }
        }

    // Bell vectors (sigma_k ⊗ I)|Phi+> as 2x2 coefficient blocks b_k[x][a]
    ComplexMatrix bells[4] = {ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2),
                              ComplexMatrix(2)};
    for (int k = 0; k < 4; ++k)
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a) bells[k](x, a) = pauli[k](x, a) / std::sqrt(2.0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> fs(n_samples);

    for (int s = 0; s < n_samples; ++s) {
        cx psi[2] = {cx(gauss(rng), gauss(rng)), cx(gauss(rng), gauss(rng))};
        const double nrm = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
        psi[0] /= nrm;
        psi[1] /= nrm;

        double f = 0.0;
        for (int k = 0; k < 4; ++k) {
            cx ck[2] = {0.0, 0.0};  // c_k[a] = sum_x conj(b_k[x][a]) psi[x]
            for (int a = 0; a < 2; ++a)
                for (int x = 0; x < 2; ++x) ck[a] += std::conj(bells[k](x, a)) * psi[x];

            // unnormalized post-measurement B state
            cx bk[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    cx acc = 0.0;
                    for (int a1 = 0; a1 < 2; ++a1)
                        for (int a2 = 0; a2 < 2; ++a2)
                            acc += ck[a1] * std::conj(ck[a2]) * rp(2 * a1 + b1, 2 * a2 + b2);
                    bk[b1][b2] = acc;
                }

            // correction sigma_k, then overlap with the input
            cx out[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    cx acc = 0.0;
                    for (int u = 0; u < 2; ++u)
                        for (int w = 0; w < 2; ++w)
                            acc += pauli[k](i, u) * bk[u][w] * std::conj(pauli[k](j, w));
                    out[i][j] = acc;
                }
            cx overlap = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) overlap += std::conj(psi[i]) * out[i][j] * psi[j];
            f += overlap.real();  // this is p_k * F_k summed exactly
        }
        fs[s] = f;
    }

    McFidelity r;
    for (double f : fs) r.mean += f;
    r.mean /= n_samples;
    double m2 = 0.0, m4 = 0.0;
    for (double f : fs) {
        const double d = f - r.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var = m2 / (n_samples - 1);
    m2 /= n_samples;
    m4 /= n_samples;
    r.stddev = std::sqrt(var);
    r.se_mean = r.stddev / std::sqrt(static_cast<double>(n_samples));
    r.se_stddev = std::sqrt(std::max(m4 - m2 * m2, 0.0) / (4.0 * std::max(m2, 1e-300) *
                                                           n_samples));
    return r;
}

}  // namespace sqbath::oracle
