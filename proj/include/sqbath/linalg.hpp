#pragma once

// Dense complex-matrix kernel for the small dimensions used here (2, 3, 4, 16):
// Hermitian eigendecomposition (cyclic Jacobi), PSD square root, entropies,
// partial trace, Kronecker products, column-stacking vectorization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqbath {

using cx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
        if (dim <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }
    ComplexMatrix(int dim, std::vector<cx> entries) : dim_(dim), a_(std::move(entries)) {
        if (dim <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
        if (a_.size() != static_cast<size_t>(dim) * dim)
            throw std::invalid_argument("ComplexMatrix: entry count must equal dim^2");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const std::vector<cx>& entries() const { return a_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }
    ComplexMatrix conjugate() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(i, j));
        return r;
    }

    cx trace() const {
        cx t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }
    double fro_norm() const {
        double s = 0.0;
        for (const cx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }
    // max|M - M†|
    double hermiticity_defect() const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cx s) {
        for (cx& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same_dim(b);
        const int n = a.dim_;
        ComplexMatrix r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const cx aik = a(i, k);
                if (aik == cx(0.0)) continue;
                for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }
    int dim_;
    std::vector<cx> a_;
};

inline ComplexMatrix hermitize(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

// --- Pauli / elementary fixtures ------------------------------------------

inline ComplexMatrix sigma_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix sigma_y() { return ComplexMatrix(2, {0.0, cx(0.0, -1.0), cx(0.0, 1.0), 0.0}); }
inline ComplexMatrix sigma_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

// --- Eigendecomposition -----------------------------------------------------

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // k-th column pairs with eigenvalues[k]
};

// Cyclic Jacobi for Hermitian matrices. Deliberately self-contained: every
// spectrum in this project is 2..16 dimensional and accuracy-critical.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& M) {
    if (M.hermiticity_defect() > 1e-12)
        throw std::invalid_argument("hermitian_eig: symmetry violation, max|M - M^dag| = " +
                                    std::to_string(M.hermiticity_defect()));
    const int n = M.dim();
    ComplexMatrix A = hermitize(M);
    ComplexMatrix V = ComplexMatrix::identity(n);

    const double scale = std::max(A.fro_norm(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        if (std::sqrt(off) <= 1e-14 * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double g = std::abs(A(p, q));
                if (g <= 1e-300) continue;
                const double alpha = std::arg(A(p, q));
                const double app = A(p, p).real(), aqq = A(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                const cx eia = std::polar(1.0, alpha);

                // A <- J^dag A J with the unitary block J = [[c, -s],[s e^{-ia}, c e^{-ia}]]
                for (int i = 0; i < n; ++i) {  // columns p,q
                    const cx aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip + s * std::conj(eia) * aiq;
                    A(i, q) = std::conj(eia) * (c * aiq) - s * aip;
                }
                for (int i = 0; i < n; ++i) {  // rows p,q
                    const cx api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api + s * eia * aqi;
                    A(q, i) = eia * (c * aqi) - s * api;
                }
                for (int i = 0; i < n; ++i) {  // accumulate V <- V J
                    const cx vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip + s * std::conj(eia) * viq;
                    V(i, q) = std::conj(eia) * (c * viq) - s * vip;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return A(a, a).real() < A(b, b).real(); });

    EigenDecomposition ed;
    ed.eigenvalues.resize(n);
    ed.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        ed.eigenvalues[k] = A(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) ed.eigenvectors(i, k) = V(i, order[k]);
    }
    return ed;
}

// --- Matrix functions of Hermitian PSD inputs -------------------------------

inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& rho) {
    EigenDecomposition ed = hermitian_eig(rho);
    ComplexMatrix r(rho.dim());
    for (int k = 0; k < rho.dim(); ++k) {
        double lam = ed.eigenvalues[k];
        if (lam < -1e-9)
            throw std::domain_error("matrix_sqrt_psd: positivity violation, eigenvalue " +
                                    std::to_string(lam));
        if (lam < 1e-12) lam = 0.0;
        const double s = std::sqrt(lam);
        for (int i = 0; i < rho.dim(); ++i)
            for (int j = 0; j < rho.dim(); ++j)
                r(i, j) += s * ed.eigenvectors(i, k) * std::conj(ed.eigenvectors(j, k));
    }
    return hermitize(r);
}

// Shannon entropy (base 2) of a clamped spectrum; 0 log 0 := 0.
inline double entropy_bits(std::vector<double> evals) {
    double s = 0.0;
    for (double lam : evals) {
        if (lam < 1e-12) continue;  // clamp tiny/negative-roundoff weights
        s -= lam * std::log2(lam);
    }
    return s;
}

inline double von_neumann_entropy(const ComplexMatrix& rho) {
    if (std::abs(rho.trace() - cx(1.0)) > 1e-10)
        throw std::invalid_argument("von_neumann_entropy: trace must be 1, got " +
                                    std::to_string(rho.trace().real()));
    return entropy_bits(hermitian_eig(rho).eigenvalues);
}

// --- Two-qubit structure ----------------------------------------------------
// Basis order everywhere: |ee>, |eg>, |ge>, |gg> with qubit A leftmost and
// |e> = (1,0). Index = 2*a + b.

enum class Subsystem { A, B };

inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
    if (rho.dim() != 4) throw std::invalid_argument("partial_trace: expected a 4x4 state");
    ComplexMatrix r(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                if (keep == Subsystem::A)
                    r(i, j) += rho(2 * i + k, 2 * j + k);
                else
                    r(i, j) += rho(2 * k + i, 2 * k + j);
            }
    return r;
}

inline ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    const int na = A.dim(), nb = B.dim();
    ComplexMatrix r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cx aij = A(i, j);
            if (aij == cx(0.0)) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * B(k, l);
        }
    return r;
}

// Column-stacking: vec(rho)[j*dim + i] = rho(i,j), so A rho B <-> (B^T ⊗ A) vec(rho).
inline std::vector<cx> vec(const ComplexMatrix& rho) {
    const int n = rho.dim();
    std::vector<cx> v(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(j) * n + i] = rho(i, j);
    return v;
}

inline ComplexMatrix unvec(const std::vector<cx>& v) {
    const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (static_cast<size_t>(n) * n != v.size())
        throw std::invalid_argument("unvec: length is not a perfect square");
    ComplexMatrix r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) r(i, j) = v[static_cast<size_t>(j) * n + i];
    return r;
}

}  // namespace sqbath
