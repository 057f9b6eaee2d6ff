#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace moelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances used by the structural validators below.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kUnitaryTol);

/// Unit complex vector. Construction enforces ||psi|| = 1 within 1e-12.
class PureState {
 public:
  explicit PureState(Vector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_(i); }

  /// |k> in the computational basis.
  static PureState basis(int dim, int k);

 private:
  Vector amplitudes_;
};

/// Hermitian, PSD (within 1e-9), trace-one complex matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix from_pure(const PureState& psi);

 private:
  Matrix matrix_;
};

enum class Subsystem { A, B };
enum class NormKind { Operator, Frobenius, Trace };

/// Kronecker product with index convention (i_a * b.rows + i_b).
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

/// Reduced matrix of an operator on A (x) B. Works on arbitrary matrices;
/// the DensityMatrix overload revalidates the result.
Matrix partial_trace(const Matrix& rho, int dim_a, int dim_b, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, int dim_a, int dim_b,
                            Subsystem keep);

/// Reduction of a bipartite pure state; the global projector is never formed.
Matrix pure_partial_trace(const Vector& psi, int dim_a, int dim_b, Subsystem keep);

struct EighResult {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

/// Hermitian eigendecomposition h = V diag(lambda) V^dagger.
/// Throws std::invalid_argument if h is not Hermitian within 1e-10.
EighResult eigh(const Matrix& h);

/// Operator (largest singular value), Frobenius, or trace norm.
double norm(const Matrix& m, NormKind kind);

/// Root fidelity F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1 in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Swap operator F |i>|j> = |j>|i> on dimension d^2; F^2 = I, tr F = d.
Matrix swap_operator(int d);

}  // namespace moelab
