#include "moelab/rng.hpp"
#include "moelab/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace moelab;

TEST_CASE("haar_state draws are unit vectors, dim 1 is a phase") {
  RandomStream rng(SeedSpec{1, 0});
  for (int t = 0; t < 200; ++t) {
    const PureState psi = haar_state(5, rng);
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) <= 1e-12);
  }
  const PureState one = haar_state(1, rng);
  CHECK(std::abs(std::abs(one[0]) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(haar_state(0, rng), std::invalid_argument);
}

TEST_CASE("haar_state first-component moment matches 1/dim") {
  const long n = 100000;
  RandomStream rng(SeedSpec{2, 0});
  std::vector<double> values(n);
  for (long i = 0; i < n; ++i) values[i] = std::norm(haar_state(4, rng)[0]);
  const double m = stats::mean(values);
  const double se = std::sqrt(stats::sample_variance(values) / n);
  CHECK(std::abs(m - 0.25) <= 3.0 * se);
}

TEST_CASE("haar_unitary: unitarity residual and first-entry moments") {
  RandomStream rng(SeedSpec{3, 0});
  for (int t = 0; t < 50; ++t) {
    const Matrix u = haar_unitary(6, rng);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(6, 6)) <= 1e-10);
  }
  const long n = 100000;
  std::vector<double> re(n), sq(n);
  for (long i = 0; i < n; ++i) {
    const Matrix u = haar_unitary(3, rng);
    re[i] = u(0, 0).real();
    sq[i] = std::norm(u(0, 0));
  }
  const double se_re = std::sqrt(stats::sample_variance(re) / n);
  CHECK(std::abs(stats::mean(re)) <= 3.0 * se_re);
  const double se_sq = std::sqrt(stats::sample_variance(sq) / n);
  CHECK(std::abs(stats::mean(sq) - 1.0 / 3.0) <= 3.0 * se_sq);
}

TEST_CASE("identical seeds reproduce draws bit for bit") {
  const SeedSpec seed{12345, 77};
  RandomStream a(seed), b(seed);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  const PureState s1 = haar_state(7, SeedSpec{9, 4});
  const PureState s2 = haar_state(7, SeedSpec{9, 4});
  CHECK(max_abs(s1.amplitudes() - s2.amplitudes()) == 0.0);

  RandomStream c(seed.substream(0)), d(seed.substream(1));
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("decompose_against: parallel, orthogonal, reconstruction") {
  RandomStream rng(SeedSpec{4, 0});
  const PureState psi = haar_state(5, rng);

  const Decomposition same = decompose_against(psi, psi);
  CHECK(same.x == doctest::Approx(1.0));
  CHECK(std::abs(psi.amplitudes().dot(same.phi.amplitudes())) <= 1e-10);

  const PureState orth = haar_state_orthogonal(psi, rng);
  const Decomposition perp = decompose_against(orth, psi);
  CHECK(perp.x == doctest::Approx(0.0));
  CHECK(std::abs(orth.amplitudes().dot(perp.phi.amplitudes())) ==
        doctest::Approx(1.0));

  for (int t = 0; t < 50; ++t) {
    const PureState chi = haar_state(5, rng);
    const Decomposition dec = decompose_against(chi, psi);
    const Complex overlap = psi.amplitudes().dot(chi.amplitudes());
    Vector adjusted = chi.amplitudes();
    if (std::abs(overlap) > 0) adjusted *= std::conj(overlap) / std::abs(overlap);
    const Vector rebuilt = std::sqrt(dec.x) * psi.amplitudes() +
                           std::sqrt(1.0 - dec.x) * dec.phi.amplitudes();
    CHECK(max_abs(rebuilt - adjusted) <= 1e-10);
  }

  const PureState tiny = PureState::basis(1, 0);
  CHECK_THROWS_AS(decompose_against(tiny, tiny), std::invalid_argument);
}

TEST_CASE("overlap x follows the (n-1)(1-t)^{n-2} law") {
  const int dim = 6;
  const long n = 10000;
  RandomStream rng(SeedSpec{5, 0});
  const PureState psi = PureState::basis(dim, 0);
  std::vector<double> xs(n);
  for (long i = 0; i < n; ++i) xs[i] = decompose_against(haar_state(dim, rng), psi).x;
  const auto ks = stats::ks_test(xs, [dim](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - t, dim - 1);
  });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("haar_state_orthogonal: orthogonality, norm, rotation invariance") {
  RandomStream rng(SeedSpec{6, 0});
  const int dim = 6;
  const PureState psi = PureState::basis(dim, 0);
  for (int t = 0; t < 100; ++t) {
    const PureState phi = haar_state_orthogonal(psi, rng);
    CHECK(std::abs(psi.amplitudes().dot(phi.amplitudes())) <= 1e-10);
    CHECK(std::abs(phi.amplitudes().norm() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(haar_state_orthogonal(PureState::basis(1, 0), rng),
                  std::invalid_argument);

  // A unitary that fixes psi must leave the distribution of phi unchanged.
  Matrix v = Matrix::Identity(dim, dim);
  v.block(1, 1, dim - 1, dim - 1) = haar_unitary(dim - 1, rng);
  const PureState theta = haar_state(dim, rng);
  const long n = 4000;
  std::vector<double> plain(n), rotated(n);
  for (long i = 0; i < n; ++i) {
    plain[i] = std::norm(
        theta.amplitudes().dot(haar_state_orthogonal(psi, rng).amplitudes()));
    rotated[i] = std::norm(theta.amplitudes().dot(
        (v * haar_state_orthogonal(psi, rng).amplitudes()).eval()));
  }
  CHECK(stats::ks_test_two_sample(plain, rotated).p_value > 0.01);
}

TEST_CASE("haar_state distribution is unitarily invariant") {
  RandomStream rng(SeedSpec{7, 0});
  const int dim = 5;
  const Matrix v = haar_unitary(dim, rng);
  const long n = 4000;
  std::vector<double> plain(n), rotated(n);
  for (long i = 0; i < n; ++i) {
    plain[i] = std::abs(haar_state(dim, rng)[0]);
    rotated[i] = std::abs((v * haar_state(dim, rng).amplitudes()).eval()(0));
  }
  CHECK(stats::ks_test_two_sample(plain, rotated).p_value > 0.01);
}

TEST_CASE("x and phi are uncorrelated in the decomposition") {
  const int dim = 8;
  const long n = 10000;
  RandomStream rng(SeedSpec{8, 0});
  const PureState psi = PureState::basis(dim, 0);
  const PureState theta = PureState::basis(dim, 1);
  std::vector<double> xs(n), ys(n);
  for (long i = 0; i < n; ++i) {
    const Decomposition dec = decompose_against(haar_state(dim, rng), psi);
    xs[i] = dec.x;
    ys[i] = std::norm(theta.amplitudes().dot(dec.phi.amplitudes()));
  }
  CHECK(std::abs(stats::pearson_correlation(xs, ys)) <=
        3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("random_density produces reproducible valid states") {
  RandomStream a(SeedSpec{9, 1}), b(SeedSpec{9, 1});
  const DensityMatrix d1 = random_density(4, 4, a);
  const DensityMatrix d2 = random_density(4, 4, b);
  CHECK(max_abs(d1.matrix() - d2.matrix()) == 0.0);
}
