#include "moelab/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace moelab {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeedSpec SeedSpec::substream(std::uint64_t k) const {
  return SeedSpec{master_seed, mix64(stream_id ^ mix64(k ^ 0x6a09e667f3bcc909ULL))};
}

RandomStream::RandomStream(SeedSpec seed) {
  std::uint64_t s = mix64(seed.master_seed) ^ mix64(seed.stream_id ^ 0x243f6a8885a308d3ULL);
  for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on u in (0,1] to keep log(u) finite.
  const double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

Complex RandomStream::gaussian_complex() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

PureState haar_state(int dim, RandomStream& rng) {
  if (dim < 1) throw std::invalid_argument("haar_state: dim must be >= 1");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.gaussian_complex();
  v /= v.norm();
  return PureState(std::move(v));
}

PureState haar_state(int dim, SeedSpec seed) {
  RandomStream rng(seed);
  return haar_state(dim, rng);
}

Matrix haar_unitary(int dim, RandomStream& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.gaussian_complex();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

Matrix haar_unitary(int dim, SeedSpec seed) {
  RandomStream rng(seed);
  return haar_unitary(dim, rng);
}

PureState haar_state_orthogonal(const PureState& psi, RandomStream& rng) {
  const int dim = psi.dim();
  if (dim < 2) {
    throw std::invalid_argument("haar_state_orthogonal: dim must be >= 2");
  }
  const Vector& p = psi.amplitudes();
  for (;;) {
    Vector v = haar_state(dim, rng).amplitudes();
    v -= p * (p.dot(v));
    const double n = v.norm();
    if (n >= 1e-8) {
      return PureState(v / n);
    }
  }
}

PureState haar_state_orthogonal(const PureState& psi, SeedSpec seed) {
  RandomStream rng(seed);
  return haar_state_orthogonal(psi, rng);
}

namespace {

// Deterministic unit vector orthogonal to psi: take the basis vector with
// the smallest overlap and Gram-Schmidt it against psi.
Vector fixed_orthogonal_unit(const Vector& psi) {
  int k = 0;
  double best = std::abs(psi(0));
  for (int i = 1; i < psi.size(); ++i) {
    if (std::abs(psi(i)) < best) {
      best = std::abs(psi(i));
      k = i;
    }
  }
  Vector v = Vector::Zero(psi.size());
  v(k) = 1.0;
  v -= psi * psi.dot(v);
  return v / v.norm();
}

}  // namespace

Decomposition decompose_against(const PureState& chi, const PureState& psi) {
  if (chi.dim() != psi.dim()) {
    throw std::invalid_argument("decompose_against: dimension mismatch");
  }
  if (chi.dim() < 2) {
    throw std::invalid_argument(
        "decompose_against: dim-1 states have no orthogonal complement");
  }
  const Vector& p = psi.amplitudes();
  const Complex c = p.dot(chi.amplitudes());  // <psi|chi>
  const double x = std::min(std::norm(c), 1.0);
  Vector adjusted = chi.amplitudes();
  if (std::abs(c) > 0.0) adjusted *= std::conj(c) / std::abs(c);
  Vector residual = adjusted - std::sqrt(x) * p;
  const double rn = residual.norm();
  if (rn < 1e-9) {
    return {1.0, PureState(fixed_orthogonal_unit(p))};
  }
  return {x, PureState(residual / rn)};
}

DensityMatrix random_density(int dim, int env_dim, RandomStream& rng) {
  if (dim < 1 || env_dim < 1) {
    throw std::invalid_argument("random_density: dims must be >= 1");
  }
  Matrix g(dim, env_dim);
  for (int j = 0; j < env_dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.gaussian_complex();
  Matrix w = g * g.adjoint();
  w = (w + w.adjoint()) / 2.0;
  return DensityMatrix(w / w.trace().real());
}

}  // namespace moelab
