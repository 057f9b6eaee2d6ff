#include "moelab/linalg.hpp"
#include "moelab/rng.hpp"

#include <doctest.h>

using namespace moelab;

namespace {

Matrix random_complex(int rows, int cols, RandomStream& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian_complex();
  return m;
}

Matrix random_hermitian(int dim, RandomStream& rng) {
  const Matrix g = random_complex(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("tensor: identity, basis bookkeeping, dimensions") {
  const Matrix i2 = Matrix::Identity(2, 2);
  CHECK(max_abs(tensor(i2, i2) - Matrix::Identity(4, 4)) == 0.0);

  Matrix e00 = Matrix::Zero(2, 2), e11 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  e11(1, 1) = 1.0;
  const Matrix t = tensor(e00, e11);
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;  // index 0*2 + 1
  CHECK(max_abs(t - expected) == 0.0);

  RandomStream rng(SeedSpec{11, 0});
  const Matrix a = random_complex(2, 2, rng);
  const Matrix b = random_complex(3, 3, rng);
  CHECK(tensor(a, b).rows() == 6);
  CHECK(tensor(a, b).cols() == 6);

  const Matrix c = random_complex(2, 2, rng);
  CHECK(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) == 0.0);
}

TEST_CASE("partial trace: entangled, product, and basis states") {
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::from_pure(PureState(phi));
  const DensityMatrix red = partial_trace(rho, 2, 2, Subsystem::B);
  CHECK(max_abs(red.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-12);

  RandomStream rng(SeedSpec{12, 0});
  const DensityMatrix a = random_density(3, 3, rng);
  const DensityMatrix b = random_density(2, 2, rng);
  const DensityMatrix joint(tensor(a.matrix(), b.matrix()));
  CHECK(max_abs(partial_trace(joint, 3, 2, Subsystem::A).matrix() - a.matrix()) < 1e-12);
  CHECK(max_abs(partial_trace(joint, 3, 2, Subsystem::B).matrix() - b.matrix()) < 1e-12);

  // tr_A |01><01| = |1><1|
  Vector e01 = Vector::Zero(4);
  e01(1) = 1.0;
  const DensityMatrix basis = DensityMatrix::from_pure(PureState(e01));
  Matrix e1 = Matrix::Zero(2, 2);
  e1(1, 1) = 1.0;
  CHECK(max_abs(partial_trace(basis, 2, 2, Subsystem::B).matrix() - e1) == 0.0);

  CHECK_THROWS_AS(partial_trace(rho, 3, 2, Subsystem::A), std::invalid_argument);
}

TEST_CASE("partial trace preserves trace on random densities") {
  RandomStream rng(SeedSpec{13, 0});
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = random_density(6, 6, rng);
    for (const Subsystem keep : {Subsystem::A, Subsystem::B}) {
      const DensityMatrix red = partial_trace(rho, 2, 3, keep);
      CHECK(std::abs(red.matrix().trace().real() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("pure_partial_trace matches the dense path") {
  RandomStream rng(SeedSpec{14, 0});
  const PureState psi = haar_state(12, rng);
  const Matrix dense = psi.amplitudes() * psi.amplitudes().adjoint();
  for (const Subsystem keep : {Subsystem::A, Subsystem::B}) {
    CHECK(max_abs(pure_partial_trace(psi.amplitudes(), 4, 3, keep) -
                  partial_trace(dense, 4, 3, keep)) < 1e-13);
  }
}

TEST_CASE("eigh: identity, diagonal, Pauli-X") {
  const EighResult id = eigh(Matrix::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const EighResult de = eigh(d);
  CHECK(de.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(de.eigenvalues(1) == doctest::Approx(3.0));

  Matrix pauli_x = Matrix::Zero(2, 2);
  pauli_x(0, 1) = pauli_x(1, 0) = 1.0;
  const EighResult xe = eigh(pauli_x);
  CHECK(xe.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(xe.eigenvalues(1) == doctest::Approx(1.0));

  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh(skew), std::invalid_argument);
}

TEST_CASE("eigh reconstruction and eigenvector unitarity on random Hermitians") {
  RandomStream rng(SeedSpec{15, 0});
  for (const int dim : {2, 5, 9}) {
    for (int t = 0; t < 10; ++t) {
      const Matrix h = random_hermitian(dim, rng);
      const EighResult e = eigh(h);
      const Matrix rebuilt =
          e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
      CHECK(max_abs(rebuilt - h) < 1e-9);
      CHECK(max_abs(e.eigenvectors.adjoint() * e.eigenvectors -
                    Matrix::Identity(dim, dim)) < 1e-9);
      for (int i = 1; i < dim; ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
    }
  }
}

TEST_CASE("norms: special values and ordering") {
  const Matrix zero = Matrix::Zero(3, 3);
  CHECK(norm(zero, NormKind::Operator) == 0.0);
  CHECK(norm(zero, NormKind::Frobenius) == 0.0);
  CHECK(norm(zero, NormKind::Trace) == 0.0);

  RandomStream rng(SeedSpec{16, 0});
  const PureState psi = haar_state(4, rng);
  const Matrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
  CHECK(norm(proj, NormKind::Operator) == doctest::Approx(1.0));
  CHECK(norm(proj, NormKind::Frobenius) == doctest::Approx(1.0));
  CHECK(norm(proj, NormKind::Trace) == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.5;
  CHECK(norm(d, NormKind::Trace) == doctest::Approx(1.0));
  CHECK(norm(d, NormKind::Operator) == doctest::Approx(0.5));
  CHECK(norm(d, NormKind::Frobenius) == doctest::Approx(1.0 / std::sqrt(2.0)));

  for (int t = 0; t < 20; ++t) {
    const Matrix m = random_complex(4, 4, rng);
    const double op = norm(m, NormKind::Operator);
    const double fro = norm(m, NormKind::Frobenius);
    const double tr = norm(m, NormKind::Trace);
    CHECK(tr >= fro - 1e-12);
    CHECK(fro >= op - 1e-12);
  }
}

TEST_CASE("fidelity: self, orthogonal, mixed-vs-pure") {
  RandomStream rng(SeedSpec{17, 0});
  const DensityMatrix rho = random_density(3, 3, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

  const DensityMatrix p0 = DensityMatrix::from_pure(PureState::basis(2, 0));
  const DensityMatrix p1 = DensityMatrix::from_pure(PureState::basis(2, 1));
  CHECK(fidelity(p0, p1) == doctest::Approx(0.0).epsilon(1e-9));

  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(fidelity(mixed, p0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(fidelity(p0, mixed) == doctest::Approx(1.0 / std::sqrt(2.0)));

  CHECK_THROWS_AS(fidelity(p0, random_density(3, 3, rng)), std::invalid_argument);
}

TEST_CASE("fidelity agrees with the diagonal formula for commuting states") {
  Matrix p = Matrix::Zero(3, 3), q = Matrix::Zero(3, 3);
  p(0, 0) = 0.5;
  p(1, 1) = 0.3;
  p(2, 2) = 0.2;
  q(0, 0) = 0.1;
  q(1, 1) = 0.6;
  q(2, 2) = 0.3;
  const double expected =
      std::sqrt(0.5 * 0.1) + std::sqrt(0.3 * 0.6) + std::sqrt(0.2 * 0.3);
  CHECK(fidelity(DensityMatrix(p), DensityMatrix(q)) == doctest::Approx(expected));
}

TEST_CASE("swap operator: scalar case, trace, involution, swap trick") {
  CHECK(swap_operator(1)(0, 0) == Complex(1.0, 0.0));
  const Matrix f2 = swap_operator(2);
  CHECK(f2.trace().real() == doctest::Approx(2.0));
  CHECK(max_abs(f2 * f2 - Matrix::Identity(4, 4)) == 0.0);

  RandomStream rng(SeedSpec{19, 0});
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_density(3, 3, rng);
    const DensityMatrix sigma = random_density(3, 3, rng);
    const Matrix f = swap_operator(3);
    const Complex lhs = (tensor(rho.matrix(), sigma.matrix()) * f).trace();
    const Complex rhs = (rho.matrix() * sigma.matrix()).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
    const Complex purity = (tensor(rho.matrix(), rho.matrix()) * f).trace();
    CHECK(std::abs(purity - (rho.matrix() * rho.matrix()).trace()) < 1e-10);
  }
}

TEST_CASE("structural validation of PureState and DensityMatrix") {
  Vector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(PureState(bad), std::invalid_argument);

  Matrix not_hermitian = Matrix::Zero(2, 2);
  not_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(DensityMatrix(not_hermitian), std::invalid_argument);

  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(2, 2)), std::invalid_argument);

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(negative), std::invalid_argument);
}
