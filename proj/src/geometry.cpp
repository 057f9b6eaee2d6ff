#include "moelab/geometry.hpp"

#include "moelab/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace moelab {

TubeSpec TubeSpec::make(DensityMatrix center, int width_param) {
  if (width_param < 1) throw std::invalid_argument("TubeSpec: width parameter must be >= 1");
  const double n = static_cast<double>(width_param);
  return TubeSpec{std::move(center), width_param, std::sqrt(std::log2(n) / n)};
}

TubeResult in_tube(const DensityMatrix& pi, const TubeSpec& tube) {
  if (pi.dim() != tube.center.dim()) {
    throw std::invalid_argument("in_tube: dimension mismatch");
  }
  const int d = pi.dim();
  const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
  const auto f = [&](double p) {
    return norm(pi.matrix() - p * tube.center.matrix() - (1.0 - p) * mixed,
                NormKind::Operator);
  };
  // Golden-section search on [1/2, 1]; f is a norm of an affine function of
  // p, hence convex.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.5, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-6) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double p = (f1 <= f2) ? x1 : x2;
  const double dist = std::min(f1, f2);
  return {dist <= tube.width + 1e-9, p, dist};
}

bool in_Y(const DensityMatrix& rho, const SetParams& params) {
  if (rho.dim() != params.D) throw std::invalid_argument("in_Y: dimension mismatch");
  return norm(rho.matrix(), NormKind::Operator) <= params.a / params.D + 1e-10;
}

XWitnessResult in_X_witnessed(const DensityMatrix& rho, const SetParams& params,
                              const std::vector<DensityMatrix>& witnesses) {
  if (witnesses.empty()) {
    return {false, std::nullopt, XStatus::NoWitnesses};
  }
  const double threshold = params.c / params.D - 1e-9;
  for (int i = 0; i < static_cast<int>(witnesses.size()); ++i) {
    const DensityMatrix& sigma = witnesses[i];
    if (sigma.dim() != params.D) {
      throw std::invalid_argument("in_X_witnessed: witness dimension mismatch");
    }
    if (entropy_deviation(sigma) < threshold) continue;
    if (in_tube(rho, TubeSpec::make(sigma, params.N)).member) {
      return {true, i, XStatus::Checked};
    }
  }
  return {false, std::nullopt, XStatus::Checked};
}

Matrix pinch(const Matrix& x, const std::vector<Matrix>& projectors) {
  if (x.rows() != x.cols()) throw std::invalid_argument("pinch: matrix must be square");
  if (projectors.empty()) throw std::invalid_argument("pinch: empty projector family");
  Matrix sum = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& p : projectors) {
    if (p.rows() != x.rows() || p.cols() != x.cols()) {
      throw std::invalid_argument("pinch: projector dimension mismatch");
    }
    if (!is_hermitian(p, kHermitianTol) || max_abs(p * p - p) > 1e-8) {
      throw std::invalid_argument("pinch: family member is not an orthogonal projector");
    }
    sum += p;
  }
  if (max_abs(sum - Matrix::Identity(x.rows(), x.cols())) > kHermitianTol) {
    throw std::invalid_argument("pinch: projectors do not resolve the identity");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& p : projectors) out += p * x * p;
  return out;
}

double g_function(const PureState& psi, int dim_a, int dim_b) {
  const Matrix rho_b = pure_partial_trace(psi.amplitudes(), dim_a, dim_b, Subsystem::B);
  return (rho_b - Matrix::Identity(dim_b, dim_b) / static_cast<double>(dim_b)).norm();
}

LipschitzSides lipschitz_pair_check(const PureState& psi, const PureState& phi,
                                    int dim_a, int dim_b, double a) {
  if (a <= 1.0) throw std::invalid_argument("lipschitz_pair_check: a must exceed 1");
  const SetParams params{dim_b, dim_b, kHastingsC0, a};
  for (const PureState* state : {&psi, &phi}) {
    const DensityMatrix red(
        pure_partial_trace(state->amplitudes(), dim_a, dim_b, Subsystem::B));
    if (!in_Y(red, params)) {
      throw std::invalid_argument(
          "lipschitz_pair_check: a B-reduction lies outside Y_{|B|,a}");
    }
  }
  const double lhs = std::abs(g_function(psi, dim_a, dim_b) - g_function(phi, dim_a, dim_b));
  const double rhs = std::sqrt(4.0 * a / dim_b) *
                     (psi.amplitudes() - phi.amplitudes()).norm();
  return {lhs, rhs};
}

}  // namespace moelab
