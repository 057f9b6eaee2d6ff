#pragma once

#include "moelab/linalg.hpp"

#include <optional>
#include <vector>

namespace moelab {

/// Constant from the additivity-violation regime; surfaced for reports,
/// exercised by no desk-scale check.
inline constexpr double kHastingsC0 = 1333.0;

/// Tube of states around a center sigma: within operator-norm distance
/// sqrt(log2(N)/N) of some mixture p*sigma + (1-p)*I/D with p in [1/2, 1].
struct TubeSpec {
  DensityMatrix center;
  int width_param;  // N
  double width;     // sqrt(log2(N)/N)

  static TubeSpec make(DensityMatrix center, int width_param);
};

struct TubeResult {
  bool member = false;
  double best_p = 0.0;
  double best_dist = 0.0;
};

/// Minimizes f(p) = || pi - p*sigma - (1-p) I/D ||_inf over p in [1/2, 1]
/// (f is convex; golden-section search to |dp| <= 1e-6) and compares the
/// minimum against the tube width.
TubeResult in_tube(const DensityMatrix& pi, const TubeSpec& tube);

struct SetParams {
  int D = 2;        // ambient dimension
  int N = 2;        // tube width parameter
  double c = kHastingsC0;
  double a = 15.0;  // operator-norm cap multiplier, > 1
};

/// ||rho||_inf <= a/D + 1e-10.
bool in_Y(const DensityMatrix& rho, const SetParams& params);

enum class XStatus { Checked, NoWitnesses };

struct XWitnessResult {
  bool member = false;
  std::optional<int> witness_index;
  XStatus status = XStatus::Checked;
};

/// Witnessed membership in the set of states lying in the tube of a state
/// with entropy deviation at least c/D. The existential over all of state
/// space is not decidable numerically, so membership is certified only
/// relative to the supplied witness list.
XWitnessResult in_X_witnessed(const DensityMatrix& rho, const SetParams& params,
                              const std::vector<DensityMatrix>& witnesses);

/// Pinching sum_k P_k X P_k for an orthogonal projector family resolving the
/// identity. Contracts both the operator and the Frobenius norm.
Matrix pinch(const Matrix& x, const std::vector<Matrix>& projectors);

/// g(psi^{AB}) = || psi^B - I/|B| ||_2, the Frobenius distance of the
/// B-reduction from maximally mixed.
double g_function(const PureState& psi, int dim_a, int dim_b);

struct LipschitzSides {
  double lhs;  // |g(psi) - g(phi)|
  double rhs;  // sqrt(4a/|B|) * || psi - phi ||_2
};

/// Restricted-Lipschitz comparison for a pair of bipartite states whose
/// B-reductions both lie in Y_{|B|, a}. Throws if a reduction is outside Y.
LipschitzSides lipschitz_pair_check(const PureState& psi, const PureState& phi,
                                    int dim_a, int dim_b, double a);

}  // namespace moelab
