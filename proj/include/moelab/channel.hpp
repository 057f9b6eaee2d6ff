#pragma once

#include "moelab/linalg.hpp"

#include <stdexcept>
#include <vector>

namespace moelab {

/// Thrown when a requested computation exceeds the configured memory cap.
/// The cap bounds the global dimension dimA*dimB (and its square for the
/// product channel) and can be overridden with the MOELAB_MAX_DIM env var.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Current cap on the global (input x output) dimension. Default 512.
int max_global_dim();

enum class ChannelVariant { Direct, Conjugate, Complementary };

/// A linear completely positive map with just enough surface for output
/// entropy minimization: application to operators / pure states and the
/// Hilbert-Schmidt-adjoint pullback used by the entropy gradient.
class OutputMap {
 public:
  virtual ~OutputMap() = default;

  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;

  /// Linear extension of the channel to arbitrary input operators.
  virtual Matrix apply_to_operator(const Matrix& x) const = 0;

  /// Output density of the pure input |psi><psi| (as a raw matrix).
  virtual Matrix apply_pure(const Vector& psi) const;

  /// Adjoint action pulled back through a pure input: Lambda^dagger(w) psi.
  virtual Vector pullback(const Matrix& w, const Vector& psi) const = 0;

  DensityMatrix apply(const DensityMatrix& rho) const;
};

/// Channel E(rho) = tr_A( U (rho^A (x) |0><0|^B) U^dagger ) for a unitary U
/// on A (x) B, together with its conjugate (U -> U*) and complementary
/// (trace out B instead of A) variants. Input and environment dimension are
/// both |A|; the output dimension is |B| (|A| for the complementary variant).
class StinespringChannel : public OutputMap {
 public:
  /// Direct-variant channel. Throws on dimension mismatch or non-unitary U.
  static StinespringChannel make(const Matrix& unitary, int dim_a, int dim_b);

  /// Conjugate channel (same stored unitary, applied entrywise-conjugated).
  /// Only the direct variant may be conjugated.
  StinespringChannel conjugate() const;

  /// Complementary channel A -> A (trace out the output factor instead).
  StinespringChannel complementary() const;

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  ChannelVariant variant() const { return variant_; }
  const Matrix& unitary() const { return unitary_; }

  int input_dim() const override { return dim_a_; }
  int output_dim() const override {
    return variant_ == ChannelVariant::Complementary ? dim_a_ : dim_b_;
  }

  /// Kraus operators of this variant (output_dim x input_dim each).
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply_to_operator(const Matrix& x) const override;
  Matrix apply_pure(const Vector& psi) const override;
  Vector pullback(const Matrix& w, const Vector& psi) const override;

  /// Lambda^dagger(w) as an explicit matrix.
  Matrix adjoint_apply(const Matrix& w) const;

 private:
  StinespringChannel(Matrix unitary, int dim_a, int dim_b, ChannelVariant variant);

  Matrix unitary_;
  int dim_a_;
  int dim_b_;
  ChannelVariant variant_;
  std::vector<Matrix> kraus_;
};

/// Canonical Kraus operators of the complementary channel E^c: one |A|x|A|
/// operator per traced basis index b, (A_b)_{ij} = <i_A, b_B| U |j_A, 0_B>.
/// |B| operators suffice (the environment of E^c has dimension |B|); the
/// double-index reconstruction below runs over all |B|^2 ordered pairs.
std::vector<Matrix> kraus_of_complementary(const StinespringChannel& channel);

/// Number of ordered index pairs (k, k') used by the double-index
/// reconstruction: kraus_count^2, i.e. |B|^2 for a canonical list.
int kraus_pair_count(const StinespringChannel& channel);

/// Rebuilds the direct-channel output from the complementary-channel Kraus
/// list: E(rho) = sum_{k,k'} tr(A_{k'}^dagger A_k rho) |k><k'|.
/// The list length fixes the output dimension; every operator must be
/// square with the same dimension as rho.
Matrix reconstruct_direct_from_kraus(const std::vector<Matrix>& kraus,
                                     const DensityMatrix& rho);

/// The product channel E (x) E-bar acting on A (x) A'. Inputs have dimension
/// |A|^2 (factor order (A, A')), outputs |B|^2 (factor order (B, B')). The
/// factor permutation between (A, A', B, B') and (A, B, A', B') is realized
/// by index reshapes; no permutation matrix is materialized.
class ProductChannel : public OutputMap {
 public:
  explicit ProductChannel(StinespringChannel direct);

  const StinespringChannel& base() const { return base_; }

  int input_dim() const override { return base_.dim_a() * base_.dim_a(); }
  int output_dim() const override { return base_.dim_b() * base_.dim_b(); }

  Matrix apply_to_operator(const Matrix& x) const override;
  Matrix apply_pure(const Vector& psi) const override;
  Vector pullback(const Matrix& w, const Vector& psi) const override;

  /// Output of the rank-one input |u><v| (u, v of dimension |A|^2).
  Matrix apply_rank_one(const Vector& u, const Vector& v) const;

 private:
  StinespringChannel base_;
};

/// (E (x) E-bar)(rho) for a density rho on A (x) A'.
DensityMatrix apply_product(const StinespringChannel& channel, const DensityMatrix& rho);

/// Maximally entangled |Phi> = d^{-1/2} sum_i |i>|i> on dimension d^2.
PureState maximally_entangled(int d);

}  // namespace moelab
