#pragma once

#include "moelab/channel.hpp"
#include "moelab/rng.hpp"

#include <optional>

namespace moelab {

/// Von Neumann entropy in bits: -sum lambda_i log2 lambda_i over the
/// eigenvalues, with small negative values (>= -1e-9) clamped to zero.
double von_neumann(const DensityMatrix& rho);

/// Entropy deviation from maximal mixing, log2(dim) - S(rho), clamped at 0.
double entropy_deviation(const DensityMatrix& rho);

/// Shannon binary entropy h(x) = -x log2 x - (1-x) log2(1-x).
double binary_entropy(double x);

/// s(lambda, D) = (1 - lambda) log2(D-1) + h(lambda): the largest entropy a
/// D-dimensional state with ||rho||_inf >= lambda can have. Requires
/// 1/D < lambda <= 1 and D >= 2.
double bound_s(double lambda, int d);

/// r(lambda, D) = lambda^2 + (1-lambda)^2/(D-1): the smallest purity tr(rho^2)
/// a state with ||rho||_inf >= lambda can have. Requires 1/D <= lambda <= 1.
double bound_r(double lambda, int d);

struct EntropyGapSides {
  double lhs;  // || sigma - I/D ||_2^2
  double rhs;  // (log2 D - S(sigma)) / D
};

/// Both sides of the two-norm / entropy-gap comparison. Note the bit-valued
/// right-hand side can exceed the left near flat rank-deficient spectra in
/// D >= 3; the nat-valued form rhs*ln(2) is a universal lower bound.
EntropyGapSides two_norm_entropy_gap_bound(const DensityMatrix& sigma);

struct MinEntResult {
  double value = 0.0;             // bits, in [0, log2(output_dim)]
  PureState argmin;               // best input found
  int starts = 0;
  int converged_starts = 0;       // starts that hit the gradient tolerance
  double best_gradient_norm = 0.0;
};

struct MinEntOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-7;
  std::vector<Vector> extra_starts;  // tried before the Haar-random starts
};

/// Estimates S_min(E) = min over pure inputs of S(E(|psi><psi|)) by
/// multi-start projected gradient descent on the unit sphere with Armijo
/// backtracking. The gradient of psi -> S(Lambda(psi psi^dagger)) is
/// 2 Lambda^dagger(-log2 sigma - I/ln 2) psi projected on the tangent space.
MinEntResult min_output_entropy(const OutputMap& channel, int starts, SeedSpec seed,
                                const MinEntOptions& options = {});

/// Independent upper-bound oracle for S_min: dense Haar sampling of
/// grid_points inputs plus a derivative-free coordinate polish of the best
/// ten. Guarded to input dimension <= 4.
double brute_force_min_entropy(const OutputMap& channel, int grid_points,
                               SeedSpec seed);

struct HaydenCheck {
  double entropy = 0.0;       // S((E (x) E-bar)(Phi^{AA'}))
  double bound = 0.0;         // 2 log2|B| - log2|B|/|B| (simplified closed form)
  double exact_bound = 0.0;   // s(1/|B|, |B|^2), what overlap >= 1/|B| guarantees
  double overlap = 0.0;       // <Phi^{BB'}| out |Phi^{BB'}>
  bool bound_satisfied = false;        // entropy <= bound + 1e-8
  bool exact_bound_satisfied = false;  // entropy <= exact_bound + 1e-8
  bool overlap_satisfied = false;      // overlap >= 1/|B| - 1e-9
};

/// Feeds the maximally entangled state through E (x) E-bar and compares the
/// output entropy and Phi-overlap against both bound forms. The simplified
/// closed form drops a log2(e)/|B| term and is exceeded by a sizable
/// fraction of Haar unitaries at small |B|; the majorization form
/// s(1/|B|, |B|^2) holds for every unitary.
HaydenCheck hayden_check(const StinespringChannel& channel);

}  // namespace moelab
