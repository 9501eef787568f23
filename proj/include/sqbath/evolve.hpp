#pragma once

// State propagation under the vectorized generator: exact matrix-exponential
// stepping, trajectories on uniform grids, and the validated DensityMatrix
// wrapper all downstream measures consume.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sqbath/bath.hpp"
#include "sqbath/linalg.hpp"

namespace sqbath {

struct DensityMatrix {
    ComplexMatrix rho;         // hermitized 4x4 state
    double herm_drift = 0.0;   // max|raw - raw^dag| seen before hermitization
    double trace_err = 0.0;    // |tr(rho) - 1|
    double min_eig = 0.0;

    // Construction ladder: hermiticity drift and positivity are asserted
    // loosely here (rejected beyond -1e-6 / 1e-6); the strict state
    // invariants are require_valid().
    static DensityMatrix from_raw(const ComplexMatrix& raw) {
        if (raw.dim() != 4) throw std::invalid_argument("DensityMatrix: expected 4x4");
        DensityMatrix d;
        d.herm_drift = raw.hermiticity_defect();
        if (d.herm_drift > 1e-6)
            throw std::runtime_error("invalid state: hermiticity drift " +
                                     std::to_string(d.herm_drift));
        d.rho = hermitize(raw);
        d.trace_err = std::abs(d.rho.trace() - cx(1.0));
        d.min_eig = hermitian_eig(d.rho).eigenvalues.front();
        if (d.min_eig < -1e-6)
            throw std::runtime_error("invalid state: positivity violation " +
                                     std::to_string(d.min_eig));
        return d;
    }

    void require_valid() const {
        if (rho.hermiticity_defect() > 1e-12)
            throw std::runtime_error("DensityMatrix: hermiticity defect");
        if (trace_err > 1e-10) throw std::runtime_error("DensityMatrix: trace drift");
        if (min_eig < -1e-9) throw std::runtime_error("DensityMatrix: negative eigenvalue");
    }
};

inline DensityMatrix initial_state_eg() {
    ComplexMatrix m(4);
    m(1, 1) = 1.0;  // |eg><eg|
    return DensityMatrix::from_raw(m);
}

// entries outside the diagonal+antidiagonal pattern
inline double x_structure_leak(const ComplexMatrix& rho) {
    double leak = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j || i + j == 3) continue;
            leak = std::max(leak, std::abs(rho(i, j)));
        }
    return leak;
}

// --- matrix exponential -----------------------------------------------------

inline double norm_1(const ComplexMatrix& m) {
    double best = 0.0;
    for (int j = 0; j < m.dim(); ++j) {
        double col = 0.0;
        for (int i = 0; i < m.dim(); ++i) col += std::abs(m(i, j));
        best = std::max(best, col);
    }
    return best;
}

// scaling-and-squaring with a Taylor core; plenty for the 16x16 generators here
inline ComplexMatrix expm(const ComplexMatrix& M) {
    const double nrm = norm_1(M);
    if (!std::isfinite(nrm)) throw std::overflow_error("expm: non-finite input norm");
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm))) + 1;
    if (s > 60) throw std::overflow_error("expm: norm too large to scale");

    ComplexMatrix A = M * cx(std::ldexp(1.0, -s));
    ComplexMatrix acc = ComplexMatrix::identity(M.dim());
    ComplexMatrix term = ComplexMatrix::identity(M.dim());
    for (int k = 1; k <= 40; ++k) {
        term = term * A * cx(1.0 / k);
        acc += term;
        if (norm_1(term) <= 1e-19 * norm_1(acc)) break;
    }
    for (int k = 0; k < s; ++k) acc = acc * acc;
    return acc;
}

inline std::vector<cx> apply_super(const ComplexMatrix& S, const std::vector<cx>& v) {
    const int n = S.dim();
    std::vector<cx> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        cx s = 0.0;
        for (int j = 0; j < n; ++j) s += S(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

// --- propagation ------------------------------------------------------------

inline DensityMatrix propagate(const Liouvillian& L, const DensityMatrix& rho0, double t) {
    if (t < 0.0) throw std::invalid_argument("propagate: t must be >= 0");
    if (t == 0.0) return rho0;
    ComplexMatrix P = expm(L.generator * cx(t));
    return DensityMatrix::from_raw(unvec(apply_super(P, vec(rho0.rho))));
}

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    double max_trace_err = 0.0;
    double max_herm_drift = 0.0;
    double min_eig = 1.0;
    // worst off-pattern entry along the way; meaningful when the initial
    // state is an X state (the generator preserves the pattern)
    std::optional<double> max_x_leak;
};

inline Trajectory trajectory(const Liouvillian& L, const DensityMatrix& rho0, double t_max,
                             double dt) {
    if (!(t_max > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("trajectory: t_max and dt must be > 0");
    const int steps = static_cast<int>(std::llround(t_max / dt));

    Trajectory tr;
    tr.times.reserve(steps + 1);
    tr.states.reserve(steps + 1);
    const bool track_x = x_structure_leak(rho0.rho) <= 1e-10;
    if (track_x) tr.max_x_leak = 0.0;

    const ComplexMatrix P = expm(L.generator * cx(dt));  // one cached step
    std::vector<cx> v = vec(rho0.rho);
    for (int k = 0; k <= steps; ++k) {
        if (k > 0) v = apply_super(P, v);
        DensityMatrix d = DensityMatrix::from_raw(unvec(v));
        if (d.trace_err > 1e-8)
            throw std::runtime_error("trajectory: accumulated trace drift " +
                                     std::to_string(d.trace_err));
        tr.max_trace_err = std::max(tr.max_trace_err, d.trace_err);
        tr.max_herm_drift = std::max(tr.max_herm_drift, d.herm_drift);
        tr.min_eig = std::min(tr.min_eig, d.min_eig);
        if (track_x) *tr.max_x_leak = std::max(*tr.max_x_leak, x_structure_leak(d.rho));
        tr.times.push_back(k * dt);
        tr.states.push_back(std::move(d));
    }
    return tr;
}

}  // namespace sqbath
