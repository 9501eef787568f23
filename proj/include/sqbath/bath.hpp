#pragma once

// Physical parameters -> master-equation generator for two qubits in a common
// squeezed thermal reservoir: squeezed-bath coefficients (N~, M~), collective
// decay/shift, dressed Hamiltonian, and the vectorized 16x16 Liouvillian.
//
// Natural units throughout: hbar = k_B = omega0 = 1, time in units of 1/Gamma.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqbath/linalg.hpp"

namespace sqbath {

struct BathParams {
    double T = 1.0;           // temperature
    double r = 0.35;          // squeezing magnitude
    double phi = 0.0;         // squeezing phase
    double gamma1 = 1.0;      // spontaneous rates
    double gamma2 = 1.0;
    double r12 = 0.1;         // interqubit distance in units of lambda0
    double mu_dot_rhat = 0.0; // dipole/separation alignment, in [-1, 1]
    double omega1 = 1.0;      // transition frequencies
    double omega2 = 1.0;
    // k0 * r12 = k0_scale * r12; lambda0-relative distances mean 2*pi. Kept
    // configurable as a sensitivity knob for the alternative radian convention.
    double k0_scale = 2.0 * std::numbers::pi;

    static constexpr double r12_min = 0.01;  // below this Omega12 ~ x^-3 blows up

    void validate() const {
        if (!(T > 0.0)) throw std::domain_error("BathParams: T must be > 0");
        if (!(r >= 0.0)) throw std::domain_error("BathParams: r must be >= 0");
        if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
            throw std::domain_error("BathParams: gamma1, gamma2 must be > 0");
        if (!(r12 > 0.0)) throw std::domain_error("BathParams: r12 must be > 0");
        if (!(std::abs(mu_dot_rhat) <= 1.0))
            throw std::domain_error("BathParams: |mu_dot_rhat| must be <= 1");
    }

    double x() const { return k0_scale * r12; }
};

struct BathCoefficients {
    double n_th = 0.0;
    double n_tilde = 0.0;
    cx m_tilde = 0.0;
    std::array<std::array<double, 2>, 2> gamma{};  // collective decay matrix
    double omega12 = 0.0;
};

inline double planck_occupation(const BathParams& p) {
    if (!(p.T > 0.0)) throw std::domain_error("planck_occupation: T must be > 0");
    return 1.0 / std::expm1(1.0 / p.T);  // N_th = 1/(e^{omega0/T} - 1), omega0 = 1
}

// N~ = N_th cosh(2r) + sinh^2 r,  M~ = -1/2 sinh(2r) e^{i phi} (2 N_th + 1).
// These satisfy N~(N~+1) - |M~|^2 = N_th(N_th+1) identically.
inline std::pair<double, cx> squeeze_coefficients(const BathParams& p) {
    if (!(p.r >= 0.0)) throw std::domain_error("squeeze_coefficients: r must be >= 0");
    const double n = planck_occupation(p);
    const double ntil = n * std::cosh(2.0 * p.r) + std::pow(std::sinh(p.r), 2);
    const cx mtil = -0.5 * std::sinh(2.0 * p.r) * (2.0 * n + 1.0) * std::polar(1.0, p.phi);
    return {ntil, mtil};
}

inline double collective_shift(const BathParams& p) {
    if (!(p.r12 > 0.0)) throw std::domain_error("collective_shift: r12 must be > 0");
    const double x = p.x();
    const double mu2 = p.mu_dot_rhat * p.mu_dot_rhat;
    const double a = 1.0 - mu2, b = 1.0 - 3.0 * mu2;
    return 0.75 * std::sqrt(p.gamma1 * p.gamma2) *
           (-a * std::cos(x) / x + b * (std::sin(x) / (x * x) + std::cos(x) / (x * x * x)));
}

inline std::array<std::array<double, 2>, 2> collective_decay(const BathParams& p) {
    if (!(p.r12 > 0.0)) throw std::domain_error("collective_decay: r12 must be > 0");
    const double x = p.x();
    const double mu2 = p.mu_dot_rhat * p.mu_dot_rhat;
    const double a = 1.0 - mu2, b = 1.0 - 3.0 * mu2;
    double bracket;
    if (x < 0.01) {
        // series for the x->0 cancellation: sin x/x -> 1, cos x/x^2 - sin x/x^3 -> -1/3
        const double x2 = x * x;
        bracket = a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0) +
                  b * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
    } else {
        bracket = a * std::sin(x) / x + b * (std::cos(x) / (x * x) - std::sin(x) / (x * x * x));
    }
    const double g12 = 1.5 * std::sqrt(p.gamma1 * p.gamma2) * bracket;
    return {{{p.gamma1, g12}, {g12, p.gamma2}}};
}

inline BathCoefficients bath_coefficients(const BathParams& p) {
    p.validate();
    BathCoefficients c;
    c.n_th = planck_occupation(p);
    std::tie(c.n_tilde, c.m_tilde) = squeeze_coefficients(p);
    c.gamma = collective_decay(p);
    c.omega12 = collective_shift(p);
    return c;
}

// --- Two-qubit operator fixtures (basis |ee>,|eg>,|ge>,|gg>) ----------------

namespace ops {

inline ComplexMatrix splus() { return ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0}); }   // |e><g|
inline ComplexMatrix sminus() { return ComplexMatrix(2, {0.0, 0.0, 1.0, 0.0}); }  // |g><e|
inline ComplexMatrix sz_half() { return ComplexMatrix(2, {0.5, 0.0, 0.0, -0.5}); }

inline ComplexMatrix on_qubit(const ComplexMatrix& op, int which) {
    return which == 0 ? kron(op, ComplexMatrix::identity(2))
                      : kron(ComplexMatrix::identity(2), op);
}

}  // namespace ops

inline ComplexMatrix dressed_hamiltonian_from(double omega12, double w1, double w2) {
    ComplexMatrix h = ops::on_qubit(ops::sz_half(), 0) * cx(w1) +
                      ops::on_qubit(ops::sz_half(), 1) * cx(w2);
    ComplexMatrix hop = ops::on_qubit(ops::splus(), 0) * ops::on_qubit(ops::sminus(), 1) +
                        ops::on_qubit(ops::splus(), 1) * ops::on_qubit(ops::sminus(), 0);
    return h + hop * cx(omega12);
}

inline ComplexMatrix dressed_hamiltonian(const BathParams& p) {
    return dressed_hamiltonian_from(collective_shift(p), p.omega1, p.omega2);
}

struct Liouvillian {
    ComplexMatrix generator;  // 16x16, acts on column-stacked rho

    // trace preservation: the identity row of the generator is a zero row
    double trace_row_defect() const {
        double worst = 0.0;
        for (int col = 0; col < 16; ++col) {
            cx s = 0.0;
            for (int i = 0; i < 4; ++i) s += generator(i * 4 + i, col);
            worst = std::max(worst, std::abs(s));
        }
        return worst;
    }
};

namespace detail {

inline ComplexMatrix super_left(const ComplexMatrix& a) {
    return kron(ComplexMatrix::identity(4), a);  // A rho
}
inline ComplexMatrix super_right(const ComplexMatrix& a) {
    ComplexMatrix at(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) at(i, j) = a(j, i);
    return kron(at, ComplexMatrix::identity(4));  // rho A
}
inline ComplexMatrix super_sandwich(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix bt(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) bt(i, j) = b(j, i);
    return kron(bt, a);  // A rho B
}

}  // namespace detail

// The full generator: coherent part plus the four dissipator families with
// weights Gamma_mn(1+N~), Gamma_mn N~, Gamma_mn M~, Gamma_mn M~*. Each bracket
// has the (rho X + X rho - 2 Y rho Z) shape, fixed by trace preservation and
// Hermiticity of the map. Split from build_liouvillian so tests can feed
// hand-made coefficient sets (zero-bath limits etc).
inline Liouvillian assemble_liouvillian(const BathCoefficients& c, double w1, double w2) {
    const ComplexMatrix H = dressed_hamiltonian_from(c.omega12, w1, w2);
    const ComplexMatrix Sp[2] = {ops::on_qubit(ops::splus(), 0), ops::on_qubit(ops::splus(), 1)};
    const ComplexMatrix Sm[2] = {ops::on_qubit(ops::sminus(), 0), ops::on_qubit(ops::sminus(), 1)};

    using detail::super_left;
    using detail::super_right;
    using detail::super_sandwich;

    ComplexMatrix L = (super_left(H) - super_right(H)) * cx(0.0, -1.0);

    for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
            const double g = c.gamma[m][n];

            ComplexMatrix A = Sp[m] * Sm[n];  // downward family, weight (1+N~)
            L += (super_right(A) + super_left(A) - super_sandwich(Sm[n], Sp[m]) * cx(2.0)) *
                 cx(-0.5 * g * (1.0 + c.n_tilde));

            ComplexMatrix B = Sm[m] * Sp[n];  // upward family, weight N~
            L += (super_right(B) + super_left(B) - super_sandwich(Sp[n], Sm[m]) * cx(2.0)) *
                 cx(-0.5 * g * c.n_tilde);

            ComplexMatrix C = Sp[m] * Sp[n];  // squeezing family, weight M~
            L += (super_right(C) + super_left(C) - super_sandwich(Sp[n], Sp[m]) * cx(2.0)) *
                 (cx(0.5 * g) * c.m_tilde);

            ComplexMatrix D = Sm[m] * Sm[n];  // conjugate squeezing family, weight M~*
            L += (super_right(D) + super_left(D) - super_sandwich(Sm[n], Sm[m]) * cx(2.0)) *
                 (cx(0.5 * g) * std::conj(c.m_tilde));
        }
    }
    return Liouvillian{L};
}

inline Liouvillian build_liouvillian(const BathParams& p) {
    p.validate();
    return assemble_liouvillian(bath_coefficients(p), p.omega1, p.omega2);
}

}  // namespace sqbath
