#include "moelab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace moelab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double entropy_of_eigenvalues(const RealVector& raw) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    double lambda = raw(i);
    if (lambda < 0.0) {
      if (lambda < -kPsdTol) {
        throw std::invalid_argument("entropy: eigenvalue below -1e-9");
      }
      lambda = 0.0;
    }
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

double entropy_of_output(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(es.eigenvalues());
}

}  // namespace

double von_neumann(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(es.eigenvalues());
}

double entropy_deviation(const DensityMatrix& rho) {
  return std::max(std::log2(static_cast<double>(rho.dim())) - von_neumann(rho), 0.0);
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("binary_entropy: x outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double bound_s(double lambda, int d) {
  if (d < 2) throw std::invalid_argument("bound_s: D must be >= 2");
  if (lambda <= 1.0 / d || lambda > 1.0 + 1e-12) {
    throw std::invalid_argument("bound_s: requires 1/D < lambda <= 1");
  }
  lambda = std::min(lambda, 1.0);
  return (1.0 - lambda) * std::log2(static_cast<double>(d - 1)) + binary_entropy(lambda);
}

double bound_r(double lambda, int d) {
  if (d < 1) throw std::invalid_argument("bound_r: D must be >= 1");
  if (lambda < 1.0 / d - 1e-12 || lambda > 1.0 + 1e-12) {
    throw std::invalid_argument("bound_r: requires 1/D <= lambda <= 1");
  }
  lambda = std::clamp(lambda, 1.0 / d, 1.0);
  if (d == 1) return 1.0;
  return lambda * lambda + (1.0 - lambda) * (1.0 - lambda) / (d - 1);
}

EntropyGapSides two_norm_entropy_gap_bound(const DensityMatrix& sigma) {
  const int d = sigma.dim();
  const Matrix diff =
      sigma.matrix() - Matrix::Identity(d, d) / static_cast<double>(d);
  const double lhs = diff.squaredNorm();
  const double rhs = (std::log2(static_cast<double>(d)) - von_neumann(sigma)) / d;
  return {lhs, rhs};
}

namespace {

// Gradient machinery for f(psi) = S(Lambda(psi psi^dagger)) on the unit
// sphere. W = -(log2 sigma + I/ln2) so that dS = tr(W dsigma); eigenvalues
// are floored before the log so rank-deficient outputs stay finite.
struct ObjectiveEval {
  double value = 0.0;
  Vector riemannian_gradient;
};

Matrix entropy_weight_matrix(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  RealVector lam = es.eigenvalues().cwiseMax(1e-18);
  RealVector w(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    w(i) = -(std::log2(lam(i)) + 1.0 / kLn2);
  }
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

ObjectiveEval evaluate_objective(const OutputMap& channel, const Vector& psi) {
  const Matrix sigma = channel.apply_pure(psi);
  ObjectiveEval ev;
  ev.value = entropy_of_output(sigma);
  Vector grad = 2.0 * channel.pullback(entropy_weight_matrix(sigma), psi);
  grad -= psi * Complex(psi.dot(grad).real(), 0.0);
  ev.riemannian_gradient = std::move(grad);
  return ev;
}

struct LocalMin {
  double value;
  Vector argmin;
  double gradient_norm;
  bool converged;
};

LocalMin descend(const OutputMap& channel, Vector psi, const MinEntOptions& opt) {
  ObjectiveEval ev = evaluate_objective(channel, psi);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double gn = ev.riemannian_gradient.norm();
    if (gn <= opt.gradient_tolerance) {
      return {ev.value, psi, gn, true};
    }
    // Armijo backtracking along the retracted ray normalize(psi - t g).
    double t = 1.0;
    bool stepped = false;
    while (t > 1e-12) {
      Vector cand = psi - t * ev.riemannian_gradient;
      cand /= cand.norm();
      const double fc = entropy_of_output(channel.apply_pure(cand));
      if (fc <= ev.value - 1e-4 * t * gn * gn) {
        psi = std::move(cand);
        stepped = true;
        break;
      }
      t *= 0.5;
    }
    if (!stepped) {
      return {ev.value, psi, gn, false};
    }
    ev = evaluate_objective(channel, psi);
  }
  return {ev.value, psi, ev.riemannian_gradient.norm(), false};
}

}  // namespace

MinEntResult min_output_entropy(const OutputMap& channel, int starts, SeedSpec seed,
                                const MinEntOptions& options) {
  if (starts < 1) throw std::invalid_argument("min_output_entropy: starts must be >= 1");
  const int dim = channel.input_dim();
  const double cap = std::log2(static_cast<double>(channel.output_dim()));

  std::optional<LocalMin> best;
  int converged = 0;
  int launched = 0;
  auto consider = [&](Vector start) {
    start /= start.norm();
    LocalMin lm = descend(channel, std::move(start), options);
    ++launched;
    if (lm.converged) ++converged;
    if (!best || lm.value < best->value) best = std::move(lm);
  };

  for (const Vector& s : options.extra_starts) {
    if (s.size() != dim) {
      throw std::invalid_argument("min_output_entropy: extra start has wrong dimension");
    }
    consider(s);
  }
  for (int s = 0; s < starts; ++s) {
    consider(haar_state(dim, seed.substream(static_cast<std::uint64_t>(s))).amplitudes());
  }

  MinEntResult result{std::clamp(best->value, 0.0, cap), PureState(best->argmin),
                      launched, converged, best->gradient_norm};
  return result;
}

namespace {

// Derivative-free coordinate polish: perturb one complex coordinate at a
// time along +-h and +-ih, renormalize, keep strict improvements, shrink h.
double coordinate_polish(const OutputMap& channel, Vector psi, double value) {
  const int dim = channel.input_dim();
  double h = 0.1;
  while (h > 1e-5) {
    bool improved = false;
    for (int k = 0; k < dim; ++k) {
      for (const Complex delta : {Complex(h, 0), Complex(-h, 0), Complex(0, h),
                                  Complex(0, -h)}) {
        Vector cand = psi;
        cand(k) += delta;
        cand /= cand.norm();
        const double fc = entropy_of_output(channel.apply_pure(cand));
        if (fc < value - 1e-12) {
          psi = std::move(cand);
          value = fc;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  return value;
}

}  // namespace

double brute_force_min_entropy(const OutputMap& channel, int grid_points,
                               SeedSpec seed) {
  if (grid_points < 1) {
    throw std::invalid_argument("brute_force_min_entropy: grid_points must be >= 1");
  }
  const int dim = channel.input_dim();
  if (dim > 4) {
    throw std::invalid_argument(
        "brute_force_min_entropy: guarded to input dimension <= 4");
  }
  std::vector<std::pair<double, Vector>> samples;
  samples.reserve(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    Vector psi = haar_state(dim, seed.substream(static_cast<std::uint64_t>(i))).amplitudes();
    samples.emplace_back(entropy_of_output(channel.apply_pure(psi)), std::move(psi));
  }
  const std::size_t keep = std::min<std::size_t>(10, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + keep, samples.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = samples.front().first;
  for (std::size_t i = 0; i < keep; ++i) {
    best = std::min(best, coordinate_polish(channel, samples[i].second, samples[i].first));
  }
  return best;
}

HaydenCheck hayden_check(const StinespringChannel& channel) {
  if (channel.variant() != ChannelVariant::Direct) {
    throw std::invalid_argument("hayden_check: expects the direct variant");
  }
  const int db = channel.dim_b();
  ProductChannel product(channel);
  const PureState phi_in = maximally_entangled(channel.dim_a());
  const Matrix out = product.apply_pure(phi_in.amplitudes());

  HaydenCheck check;
  check.entropy = entropy_of_output(out);
  check.bound = 2.0 * std::log2(static_cast<double>(db)) -
                std::log2(static_cast<double>(db)) / db;
  check.exact_bound = (db == 1) ? 0.0 : bound_s(1.0 / db, db * db);
  const Vector phi_out = maximally_entangled(db).amplitudes();
  check.overlap = (phi_out.adjoint() * out * phi_out)(0, 0).real();
  check.bound_satisfied = check.entropy <= check.bound + 1e-8;
  check.exact_bound_satisfied = check.entropy <= check.exact_bound + 1e-8;
  check.overlap_satisfied = check.overlap >= 1.0 / db - 1e-9;
  return check;
}

}  // namespace moelab
