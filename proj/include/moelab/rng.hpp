#pragma once

#include "moelab/linalg.hpp"

#include <array>
#include <cstdint>

namespace moelab {

/// Identifies one reproducible draw sequence. Distinct (master_seed,
/// stream_id) pairs give statistically independent streams; equal pairs
/// always reproduce the same draws, independent of thread scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Derived child stream; used to give each trial / optimizer start its
  /// own independent sequence.
  SeedSpec substream(std::uint64_t k) const;
};

/// Counter-free xoshiro256++ stream seeded through splitmix64 so that the
/// draw sequence is identical across platforms and standard libraries
/// (std::normal_distribution makes no such guarantee).
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed);

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal via Box-Muller
  Complex gaussian_complex();

 private:
  std::array<std::uint64_t, 4> state_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unit vector: normalized i.i.d. complex Gaussian vector.
PureState haar_state(int dim, RandomStream& rng);
PureState haar_state(int dim, SeedSpec seed);

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phase correction (column j of Q is multiplied by R_jj/|R_jj|, making the
/// R factor of the canonical decomposition positive-diagonal).
Matrix haar_unitary(int dim, RandomStream& rng);
Matrix haar_unitary(int dim, SeedSpec seed);

/// Haar-distributed unit vector in the orthogonal complement of psi,
/// obtained by projecting a full-space Haar draw and renormalizing
/// (resampling if the projection is degenerate). Requires dim >= 2.
PureState haar_state_orthogonal(const PureState& psi, RandomStream& rng);
PureState haar_state_orthogonal(const PureState& psi, SeedSpec seed);

struct Decomposition {
  double x;       // |<psi|chi>|^2
  PureState phi;  // unit vector orthogonal to psi
};

/// Splits chi = sqrt(x) psi + sqrt(1-x) phi after absorbing a global phase
/// into chi so that <psi|chi> >= 0. When x = 1 (chi parallel to psi), phi is
/// a fixed deterministic unit vector orthogonal to psi.
Decomposition decompose_against(const PureState& chi, const PureState& psi);

/// Random density matrix: G G^dagger / tr with G a dim x env_dim Ginibre
/// matrix. env_dim = dim gives the Hilbert-Schmidt ensemble.
DensityMatrix random_density(int dim, int env_dim, RandomStream& rng);

}  // namespace moelab
