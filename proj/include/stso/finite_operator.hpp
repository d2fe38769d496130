#pragma once

// Finite-dimensional diagonalizable model: a dense complex matrix together
// with an eigen system A = T·D·T⁻¹. Construction either decomposes a given
// matrix (refusing defective ones) or builds T·diag(eigs)·T⁻¹ from chosen
// eigenvalues and a similarity.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <vector>

#include "stso/complex.hpp"
#include "stso/errors.hpp"
#include "stso/vector.hpp"

namespace stso {

using Matrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

inline double mat_norm1(const Matrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

inline double mat_norm_inf(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Upper bound for the spectral norm, valid without iteration error.
inline double op_norm_bound(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return std::sqrt(mat_norm1(m) * mat_norm_inf(m));
}

inline double op_norm2(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

class FiniteDiagonalizableOperator {
public:
    static constexpr int kMaxDimension = 16;

    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    const Matrix& similarity() const { return t_; }
    const Matrix& similarity_inverse() const { return tinv_; }
    const std::vector<Complex>& eigenvalues() const { return eigenvalues_; }
    double condition() const { return condition_; }

    DenseVector apply(const DenseVector& x) const { return matrix_ * x; }

    FiniteVector apply(const FiniteVector& x) const {
        return from_dense(matrix_ * to_dense(x));
    }

    // E(selected) = T·diag(χ)·T⁻¹ for a subset of eigenvalue indices.
    Matrix projection_matrix(const std::vector<bool>& selected) const {
        const int d = dimension();
        if (static_cast<int>(selected.size()) != d)
            throw ModelError("selector size does not match dimension");
        Matrix diag = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i)
            if (selected[i]) diag(i, i) = Complex(1, 0);
        return t_ * diag * tinv_;
    }

    DenseVector to_dense(const FiniteVector& x) const {
        DenseVector out = DenseVector::Zero(dimension());
        for (const auto& [k, v] : x.coords()) {
            if (k > dimension())
                throw ModelError("coordinate index " + std::to_string(k) +
                                 " exceeds dimension " + std::to_string(dimension()));
            out(k - 1) = to_complex(v);
        }
        return out;
    }

    static FiniteVector from_dense(const DenseVector& x) {
        FiniteVector out;
        for (int i = 0; i < x.size(); ++i)
            if (x(i) != Complex(0, 0)) out.set(i + 1, x(i));
        return out;
    }

    friend FiniteDiagonalizableOperator eigendecompose(const Matrix& m);
    friend FiniteDiagonalizableOperator make_similar(const std::vector<Complex>& eigs,
                                                     const Matrix& t);

private:
    FiniteDiagonalizableOperator(Matrix matrix, Matrix t, Matrix tinv,
                                 std::vector<Complex> eigenvalues)
        : matrix_(std::move(matrix)),
          t_(std::move(t)),
          tinv_(std::move(tinv)),
          eigenvalues_(std::move(eigenvalues)) {
        condition_ = mat_norm1(t_) * mat_norm1(tinv_);
        const int d = dimension();
        const Matrix eye = Matrix::Identity(d, d);
        if (mat_norm1(t_ * tinv_ - eye) > 1e-10)
            throw ModelError("similarity inverse fails the T·T⁻¹ = I check");
        Matrix diag = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) diag(i, i) = eigenvalues_[i];
        const double scale = std::max(1.0, mat_norm1(matrix_));
        if (mat_norm1(matrix_ - t_ * diag * tinv_) > 1e-8 * scale)
            throw ModelError("eigen system does not reconstruct the matrix");
    }

    Matrix matrix_, t_, tinv_;
    std::vector<Complex> eigenvalues_;
    double condition_ = 0.0;
};

inline void check_dimension(const Matrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw ModelError("matrix must be square and nonempty");
    if (m.rows() > FiniteDiagonalizableOperator::kMaxDimension)
        throw ModelError("dimension exceeds " +
                         std::to_string(FiniteDiagonalizableOperator::kMaxDimension));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) require_finite(m(i, j), "matrix entry");
}

inline FiniteDiagonalizableOperator eigendecompose(const Matrix& m) {
    check_dimension(m);
    Eigen::ComplexEigenSolver<Matrix> solver(m, true);
    if (solver.info() != Eigen::Success) throw ModelError("eigenvalue iteration failed");
    Matrix t = solver.eigenvectors();
    const Eigen::JacobiSVD<Matrix> svd(t);
    const double smin = svd.singularValues()(t.rows() - 1);
    if (smin < 1e-8)
        throw DefectiveMatrixError(
            "no eigenbasis within tolerance (smallest eigenvector-matrix singular value " +
            std::to_string(smin) + ")");
    Matrix tinv = t.partialPivLu().solve(Matrix::Identity(t.rows(), t.cols()));
    std::vector<Complex> eigs(m.rows());
    for (int i = 0; i < m.rows(); ++i) eigs[i] = solver.eigenvalues()(i);
    return FiniteDiagonalizableOperator(m, std::move(t), std::move(tinv), std::move(eigs));
}

inline FiniteDiagonalizableOperator make_similar(const std::vector<Complex>& eigs,
                                                 const Matrix& t) {
    check_dimension(t);
    if (static_cast<int>(eigs.size()) != t.rows())
        throw ModelError("eigenvalue count does not match similarity dimension");
    for (const Complex& e : eigs) require_finite(e, "eigenvalue");
    const Eigen::PartialPivLU<Matrix> lu(t);
    const Matrix tinv = lu.solve(Matrix::Identity(t.rows(), t.cols()));
    const double cond = mat_norm1(t) * mat_norm1(tinv);
    if (!std::isfinite(cond) || cond > 1e6 ||
        mat_norm1(t * tinv - Matrix::Identity(t.rows(), t.cols())) > 1e-10)
        throw SingularMatrixError("similarity is singular or too ill-conditioned");
    Matrix diag = Matrix::Zero(t.rows(), t.cols());
    for (int i = 0; i < t.rows(); ++i) diag(i, i) = eigs[i];
    Matrix matrix = t * diag * tinv;
    return FiniteDiagonalizableOperator(std::move(matrix), Matrix(t), Matrix(tinv), eigs);
}

}  // namespace stso
