#include "moelab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moelab {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw std::invalid_argument("PureState: empty amplitude vector");
  }
  const double n = amplitudes_.norm();
  if (std::abs(n - 1.0) > kStateNormTol) {
    throw std::invalid_argument("PureState: vector is not normalized, ||psi|| = " +
                                std::to_string(n));
  }
}

PureState PureState::basis(int dim, int k) {
  if (k < 0 || k >= dim) throw std::invalid_argument("PureState::basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  if (!is_hermitian(matrix_, kHermitianTol)) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within 1e-10");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                " differs from 1 beyond 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("DensityMatrix: minimum eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) +
                                " below -1e-9");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw std::invalid_argument("maximally_mixed: dim must be >= 1");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, int dim_a, int dim_b, Subsystem keep) {
  if (rho.rows() != rho.cols() ||
      rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw std::invalid_argument("partial_trace: matrix dimension does not equal dim_a*dim_b");
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int a = 0; a < dim_a; ++a)
      for (int ap = 0; ap < dim_a; ++ap)
        for (int b = 0; b < dim_b; ++b)
          out(a, ap) += rho(a * dim_b + b, ap * dim_b + b);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int bp = 0; bp < dim_b; ++bp)
      for (int a = 0; a < dim_a; ++a)
        out(b, bp) += rho(a * dim_b + b, a * dim_b + bp);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b,
                            Subsystem keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

Matrix pure_partial_trace(const Vector& psi, int dim_a, int dim_b, Subsystem keep) {
  if (psi.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw std::invalid_argument("pure_partial_trace: vector dimension mismatch");
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int a = 0; a < dim_a; ++a)
      for (int ap = 0; ap < dim_a; ++ap)
        for (int b = 0; b < dim_b; ++b)
          out(a, ap) += psi(a * dim_b + b) * std::conj(psi(ap * dim_b + b));
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int bp = 0; bp < dim_b; ++bp)
      for (int a = 0; a < dim_a; ++a)
        out(b, bp) += psi(a * dim_b + b) * std::conj(psi(a * dim_b + bp));
  return out;
}

EighResult eigh(const Matrix& h) {
  if (!is_hermitian(h, kHermitianTol)) {
    throw std::invalid_argument("eigh: matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double norm(const Matrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::Frobenius:
      return m.norm();
    case NormKind::Operator: {
      Eigen::JacobiSVD<Matrix> svd(m);
      return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
    }
    case NormKind::Trace: {
      Eigen::JacobiSVD<Matrix> svd(m);
      return svd.singularValues().sum();
    }
  }
  throw std::logic_error("norm: unknown kind");
}

namespace {

Matrix matrix_sqrt_psd(const Matrix& m) {
  EighResult e = eigh(m);
  RealVector s = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return e.eigenvectors * s.asDiagonal() * e.eigenvectors.adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Matrix sr = matrix_sqrt_psd(rho.matrix());
  // F = tr sqrt(sr * sigma * sr); the inner matrix is Hermitian PSD.
  Matrix inner = sr * sigma.matrix() * sr;
  inner = (inner + inner.adjoint()) / 2.0;
  EighResult e = eigh(inner);
  double f = e.eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(f, 0.0, 1.0);
}

Matrix swap_operator(int d) {
  if (d < 1) throw std::invalid_argument("swap_operator: d must be >= 1");
  Matrix f = Matrix::Zero(static_cast<Eigen::Index>(d) * d,
                          static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

}  // namespace moelab
