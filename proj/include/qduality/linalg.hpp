// linalg.hpp - dense complex primitives for qubit-register operators
//
// Everything here is templated on the real scalar type and works on plain
// Eigen matrices. Qubit sites are 1-based and site 1 is the leftmost tensor
// factor, i.e. the most significant bit of a computational-basis index.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qduality {

template <typename Real>
using OperatorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using KetT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Operator = OperatorT<double>;
using Ket = KetT<double>;
using RealVector = RealVectorT<double>;
using Index = Eigen::Index;

/// Thrown when a value breaks a documented domain invariant
/// (non-Hermitian input, trace drift, negative populations, ...).
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical acceptance windows for density matrices.
struct StateTolerances {
    double hermiticity = 1e-10;  // max |rho - rho^dagger|
    double trace = 1e-9;         // |Tr rho - 1|
    double positivity = 1e-8;    // smallest eigenvalue >= -positivity
};

// Eigenvalues with magnitude below this contribute nothing to entropies.
inline constexpr double kEntropyCutoff = 1e-14;

namespace pauli {

template <typename Real = double>
OperatorT<Real> identity() { return OperatorT<Real>::Identity(2, 2); }

template <typename Real = double>
OperatorT<Real> x() {
    OperatorT<Real> m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

template <typename Real = double>
OperatorT<Real> y() {
    using C = std::complex<Real>;
    OperatorT<Real> m(2, 2);
    m << C(0), C(0, -1), C(0, 1), C(0);
    return m;
}

template <typename Real = double>
OperatorT<Real> z() {
    OperatorT<Real> m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// sigma^+ = (x + iy)/2 raises sigma^z from -1 to +1; |0> is the +1 eigenstate.
template <typename Real = double>
OperatorT<Real> raising() {
    OperatorT<Real> m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

template <typename Real = double>
OperatorT<Real> lowering() {
    OperatorT<Real> m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

}  // namespace pauli

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// Number of qubits of a 2^N-dimensional space; throws otherwise.
inline int qubit_count(Index dim) {
    if (!is_power_of_two(dim))
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    int n = 0;
    while ((Index{1} << n) < dim) ++n;
    return n;
}

template <typename Derived>
typename Derived::RealScalar hermiticity_error(const Eigen::MatrixBase<Derived>& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, double tol, const char* what) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(what) + ": operator is not square");
    if (hermiticity_error(a) > tol)
        throw InvariantViolation(std::string(what) + ": operator is not Hermitian");
}

/// Tensor product a (x) b.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
        a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// I (x) ... (x) local (x) ... (x) I with `local` at 1-based `site`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
embed_site(const Eigen::MatrixBase<Derived>& local, int site, int n_qubits) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (local.rows() != 2 || local.cols() != 2)
        throw std::invalid_argument("embed_site: local operator must be 2x2");
    if (n_qubits < 1 || site < 1 || site > n_qubits)
        throw std::out_of_range("embed_site: site " + std::to_string(site) + " outside [1, " +
                                std::to_string(n_qubits) + "]");
    const Index left = Index{1} << (site - 1);
    const Index right = Index{1} << (n_qubits - site);
    return kron(kron(Mat::Identity(left, left), local), Mat::Identity(right, right));
}

template <typename Real>
struct SpectrumT {
    RealVectorT<Real> eigenvalues;   // ascending
    OperatorT<Real> eigenvectors;    // columns, unitary

    OperatorT<Real> reconstruct() const {
        return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
               eigenvectors.adjoint();
    }
};
using Spectrum = SpectrumT<double>;

template <typename Real>
SpectrumT<Real> eig_hermitian(const OperatorT<Real>& a, double tol = 1e-10) {
    require_hermitian(a, tol, "eig_hermitian");
    Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigendecomposition did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Real>
RealVectorT<Real> eigenvalues_hermitian(const OperatorT<Real>& a) {
    Eigen::SelfAdjointEigenSolver<OperatorT<Real>> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues_hermitian: eigendecomposition did not converge");
    return solver.eigenvalues();
}

/// Hermitian, unit-trace, positive-semidefinite operator. Validated on construction.
template <typename Real>
class DensityMatrixT {
public:
    explicit DensityMatrixT(OperatorT<Real> op, const StateTolerances& tol = {}) : op_(std::move(op)) {
        validate(tol);
    }

    static DensityMatrixT pure(const KetT<Real>& psi) {
        const KetT<Real> unit = psi.normalized();
        return DensityMatrixT(unit * unit.adjoint());
    }

    static DensityMatrixT maximally_mixed(Index dim) {
        return DensityMatrixT(OperatorT<Real>::Identity(dim, dim) / static_cast<Real>(dim));
    }

    const OperatorT<Real>& op() const noexcept { return op_; }
    Index dim() const noexcept { return op_.rows(); }
    int n_qubits() const { return qubit_count(dim()); }
    Real trace_error() const { return std::abs(op_.trace() - std::complex<Real>(1)); }

private:
    void validate(const StateTolerances& tol) const {
        if (op_.rows() != op_.cols() || !is_power_of_two(op_.rows()))
            throw InvariantViolation("density matrix must be square with dimension 2^N");
        if (!op_.allFinite()) throw InvariantViolation("density matrix has non-finite entries");
        if (hermiticity_error(op_) > tol.hermiticity)
            throw InvariantViolation("density matrix is not Hermitian");
        if (trace_error() > tol.trace)
            throw InvariantViolation("density matrix trace deviates from 1");
        const OperatorT<Real> h = (op_ + op_.adjoint()) / Real(2);
        if (eigenvalues_hermitian<Real>(h).minCoeff() < -tol.positivity)
            throw InvariantViolation("density matrix has a negative eigenvalue");
    }

    OperatorT<Real> op_;
};
using DensityMatrix = DensityMatrixT<double>;

/// Reduced state of one qubit: trace out every other site.
template <typename Real>
DensityMatrixT<Real> partial_trace_to_site(const DensityMatrixT<Real>& rho, int site, int n_qubits) {
    if (rho.dim() != (Index{1} << n_qubits))
        throw std::invalid_argument("partial_trace_to_site: dimension does not match qubit count");
    if (site < 1 || site > n_qubits)
        throw std::out_of_range("partial_trace_to_site: site out of range");
    const Index dim = rho.dim();
    const Index mask = Index{1} << (n_qubits - site);
    OperatorT<Real> reduced = OperatorT<Real>::Zero(2, 2);
    const auto& m = rho.op();
    for (Index rest = 0; rest < dim; ++rest) {
        if (rest & mask) continue;
        for (Index a = 0; a < 2; ++a)
            for (Index b = 0; b < 2; ++b)
                reduced(a, b) += m(rest | (a ? mask : 0), rest | (b ? mask : 0));
    }
    return DensityMatrixT<Real>(std::move(reduced));
}

/// -sum p ln p over eigenvalues that survive the cutoff. Small negative
/// eigenvalues (>= -positivity) are clamped to zero.
template <typename Real>
Real entropy_from_eigenvalues(const RealVectorT<Real>& p, double positivity = 1e-8) {
    Real s = 0;
    for (Index k = 0; k < p.size(); ++k) {
        Real v = p[k];
        if (v < -positivity) throw InvariantViolation("entropy: eigenvalue below positivity tolerance");
        if (v < Real(kEntropyCutoff)) continue;
        s -= v * std::log(v);
    }
    return s;
}

/// von Neumann entropy in nats.
template <typename Real>
Real von_neumann_entropy(const DensityMatrixT<Real>& rho) {
    return entropy_from_eigenvalues<Real>(eigenvalues_hermitian<Real>(rho.op()));
}

/// Re Tr[a rho] for a Hermitian observable `a`.
template <typename Real>
Real expectation(const OperatorT<Real>& a, const DensityMatrixT<Real>& rho, double imag_tol = 1e-10) {
    if (a.rows() != rho.dim() || a.cols() != rho.dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    require_hermitian(a, 1e-10, "expectation");
    const std::complex<Real> tr = a.transpose().cwiseProduct(rho.op()).sum();
    if (std::abs(tr.imag()) > imag_tol)
        throw InvariantViolation("expectation: imaginary residue above tolerance");
    return tr.real();
}

}  // namespace qduality
