#include "moelab/channel.hpp"

#include <cstdlib>
#include <string>
#include <utility>

namespace moelab {

int max_global_dim() {
  static const int cap = [] {
    if (const char* env = std::getenv("MOELAB_MAX_DIM")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<int>(v);
    }
    return 512;
  }();
  return cap;
}

Matrix OutputMap::apply_pure(const Vector& psi) const {
  return apply_to_operator(psi * psi.adjoint());
}

DensityMatrix OutputMap::apply(const DensityMatrix& rho) const {
  if (rho.dim() != input_dim()) {
    throw std::invalid_argument("channel apply: input dimension mismatch");
  }
  Matrix out = apply_to_operator(rho.matrix());
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix(std::move(out));
}

namespace {

// Kraus operators of the direct variant: K_a = (<a|_A (x) I_B) U (I_A (x) |0>_B),
// i.e. [K_a]_{b,j} = U[(a,b), (j,0)] with global index (a,b) = a*dimB + b.
std::vector<Matrix> direct_kraus(const Matrix& u, int dim_a, int dim_b) {
  std::vector<Matrix> ks;
  ks.reserve(dim_a);
  for (int a = 0; a < dim_a; ++a) {
    Matrix k(dim_b, dim_a);
    for (int b = 0; b < dim_b; ++b)
      for (int j = 0; j < dim_a; ++j) k(b, j) = u(a * dim_b + b, j * dim_b + 0);
    ks.push_back(std::move(k));
  }
  return ks;
}

// Complementary variant: A_b with (A_b)_{ij} = U[(i,b), (j,0)].
std::vector<Matrix> complementary_kraus(const Matrix& u, int dim_a, int dim_b) {
  std::vector<Matrix> ks;
  ks.reserve(dim_b);
  for (int b = 0; b < dim_b; ++b) {
    Matrix k(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j) k(i, j) = u(i * dim_b + b, j * dim_b + 0);
    ks.push_back(std::move(k));
  }
  return ks;
}

}  // namespace

StinespringChannel::StinespringChannel(Matrix unitary, int dim_a, int dim_b,
                                       ChannelVariant variant)
    : unitary_(std::move(unitary)), dim_a_(dim_a), dim_b_(dim_b), variant_(variant) {
  switch (variant_) {
    case ChannelVariant::Direct:
      kraus_ = direct_kraus(unitary_, dim_a_, dim_b_);
      break;
    case ChannelVariant::Conjugate: {
      kraus_ = direct_kraus(unitary_.conjugate(), dim_a_, dim_b_);
      break;
    }
    case ChannelVariant::Complementary:
      kraus_ = complementary_kraus(unitary_, dim_a_, dim_b_);
      break;
  }
}

StinespringChannel StinespringChannel::make(const Matrix& unitary, int dim_a,
                                            int dim_b) {
  if (dim_a < 1 || dim_b < 1) {
    throw std::invalid_argument("StinespringChannel: dimensions must be >= 1");
  }
  const auto global = static_cast<long>(dim_a) * dim_b;
  if (global > max_global_dim()) {
    throw GuardError("StinespringChannel: dimA*dimB = " + std::to_string(global) +
                     " exceeds the cap " + std::to_string(max_global_dim()) +
                     " (override with MOELAB_MAX_DIM)");
  }
  if (unitary.rows() != global || unitary.cols() != global) {
    throw std::invalid_argument("StinespringChannel: unitary must be dimA*dimB square");
  }
  if (!is_unitary(unitary, kUnitaryTol)) {
    throw std::invalid_argument("StinespringChannel: matrix is not unitary within 1e-10");
  }
  return StinespringChannel(unitary, dim_a, dim_b, ChannelVariant::Direct);
}

StinespringChannel StinespringChannel::conjugate() const {
  if (variant_ != ChannelVariant::Direct) {
    throw std::invalid_argument("conjugate: only the direct variant may be conjugated");
  }
  return StinespringChannel(unitary_, dim_a_, dim_b_, ChannelVariant::Conjugate);
}

StinespringChannel StinespringChannel::complementary() const {
  if (variant_ != ChannelVariant::Direct) {
    throw std::invalid_argument("complementary: derive from the direct variant");
  }
  return StinespringChannel(unitary_, dim_a_, dim_b_, ChannelVariant::Complementary);
}

Matrix StinespringChannel::apply_to_operator(const Matrix& x) const {
  if (x.rows() != input_dim() || x.cols() != input_dim()) {
    throw std::invalid_argument("apply_to_operator: input dimension mismatch");
  }
  const int d = output_dim();
  Matrix out = Matrix::Zero(d, d);
  for (const Matrix& k : kraus_) out += k * x * k.adjoint();
  return out;
}

Matrix StinespringChannel::apply_pure(const Vector& psi) const {
  if (psi.size() != input_dim()) {
    throw std::invalid_argument("apply_pure: input dimension mismatch");
  }
  const int d = output_dim();
  Matrix out = Matrix::Zero(d, d);
  for (const Matrix& k : kraus_) {
    const Vector v = k * psi;
    out += v * v.adjoint();
  }
  return out;
}

Vector StinespringChannel::pullback(const Matrix& w, const Vector& psi) const {
  Vector out = Vector::Zero(input_dim());
  for (const Matrix& k : kraus_) out += k.adjoint() * (w * (k * psi));
  return out;
}

Matrix StinespringChannel::adjoint_apply(const Matrix& w) const {
  Matrix out = Matrix::Zero(input_dim(), input_dim());
  for (const Matrix& k : kraus_) out += k.adjoint() * w * k;
  return out;
}

std::vector<Matrix> kraus_of_complementary(const StinespringChannel& channel) {
  if (channel.variant() != ChannelVariant::Direct) {
    throw std::invalid_argument("kraus_of_complementary: expects the direct variant");
  }
  return complementary_kraus(channel.unitary(), channel.dim_a(), channel.dim_b());
}

int kraus_pair_count(const StinespringChannel& channel) {
  return channel.dim_b() * channel.dim_b();
}

Matrix reconstruct_direct_from_kraus(const std::vector<Matrix>& kraus,
                                     const DensityMatrix& rho) {
  if (kraus.empty()) {
    throw std::invalid_argument("reconstruct_direct_from_kraus: empty Kraus list");
  }
  const int d_out = static_cast<int>(kraus.size());
  for (const Matrix& k : kraus) {
    if (k.rows() != rho.dim() || k.cols() != rho.dim()) {
      throw std::invalid_argument(
          "reconstruct_direct_from_kraus: inconsistent Kraus operator shape");
    }
  }
  Matrix out(d_out, d_out);
  for (int k = 0; k < d_out; ++k) {
    for (int kp = 0; kp < d_out; ++kp) {
      out(k, kp) = (kraus[kp].adjoint() * kraus[k] * rho.matrix()).trace();
    }
  }
  return out;
}

ProductChannel::ProductChannel(StinespringChannel direct) : base_(std::move(direct)) {
  if (base_.variant() != ChannelVariant::Direct) {
    throw std::invalid_argument("ProductChannel: build from the direct variant");
  }
  const long global = static_cast<long>(base_.dim_a()) * base_.dim_b();
  const long cap = max_global_dim();
  if (global * global > cap * cap) {
    throw GuardError("ProductChannel: (dimA*dimB)^2 = " + std::to_string(global * global) +
                     " exceeds the cap " + std::to_string(cap * cap) +
                     " (override with MOELAB_MAX_DIM)");
  }
}

namespace {

// Row-major flatten / unflatten: vec_row(M)[r*cols + c] = M(r, c).
Vector vec_row(const Matrix& m) {
  Vector v(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(idx++) = m(r, c);
  return v;
}

Matrix unvec_row(const Vector& v, int rows, int cols) {
  Matrix m(rows, cols);
  Eigen::Index idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(idx++);
  return m;
}

}  // namespace

Matrix ProductChannel::apply_rank_one(const Vector& u, const Vector& v) const {
  const int da = base_.dim_a();
  const int db = base_.dim_b();
  if (u.size() != da * da || v.size() != da * da) {
    throw std::invalid_argument("apply_rank_one: input dimension mismatch");
  }
  // Reshape C^{dA^2} as dA x dA (row = A, col = A'). For each Kraus pair
  // (K_a, conj(K_{a'})) of E (x) E-bar the image of a vector w is
  // vec(K_a W K_{a'}^dagger); summing outer products over pairs gives the
  // output without ever forming the (dA dB)^2-sized permutation.
  const Matrix uw = unvec_row(u, da, da);
  const Matrix vw = unvec_row(v, da, da);
  const auto& ks = base_.kraus();
  Matrix out = Matrix::Zero(db * db, db * db);
  for (int a = 0; a < da; ++a) {
    for (int ap = 0; ap < da; ++ap) {
      const Vector mu = vec_row(ks[a] * uw * ks[ap].adjoint());
      const Vector mv = vec_row(ks[a] * vw * ks[ap].adjoint());
      out += mu * mv.adjoint();
    }
  }
  return out;
}

Matrix ProductChannel::apply_pure(const Vector& psi) const {
  return apply_rank_one(psi, psi);
}

Matrix ProductChannel::apply_to_operator(const Matrix& x) const {
  const int din = input_dim();
  if (x.rows() != din || x.cols() != din) {
    throw std::invalid_argument("apply_to_operator: input dimension mismatch");
  }
  // Split x into Hermitian and anti-Hermitian parts and expand each in its
  // eigenbasis; the channel is linear, so rank-one applications suffice.
  const Matrix h = (x + x.adjoint()) / 2.0;
  const Matrix s = (x - x.adjoint()) / Complex(0.0, 2.0);
  Matrix out = Matrix::Zero(output_dim(), output_dim());
  for (const auto& [part, factor] :
       {std::pair<const Matrix*, Complex>{&h, Complex(1.0, 0.0)},
        std::pair<const Matrix*, Complex>{&s, Complex(0.0, 1.0)}}) {
    if (max_abs(*part) < 1e-300) continue;
    EighResult e = eigh(*part);
    for (int i = 0; i < din; ++i) {
      const double lambda = e.eigenvalues(i);
      if (lambda == 0.0) continue;
      const Vector v = e.eigenvectors.col(i);
      out += (factor * lambda) * apply_rank_one(v, v);
    }
  }
  return out;
}

Vector ProductChannel::pullback(const Matrix& w, const Vector& psi) const {
  const int da = base_.dim_a();
  const int db = base_.dim_b();
  if (psi.size() != da * da || w.rows() != db * db || w.cols() != db * db) {
    throw std::invalid_argument("pullback: dimension mismatch");
  }
  const Matrix pw = unvec_row(psi, da, da);
  const auto& ks = base_.kraus();
  Matrix acc = Matrix::Zero(da, da);
  for (int a = 0; a < da; ++a) {
    for (int ap = 0; ap < da; ++ap) {
      const Vector m = vec_row(ks[a] * pw * ks[ap].adjoint());  // dB^2
      const Matrix zw = unvec_row(w * m, db, db);
      acc += ks[a].adjoint() * zw * ks[ap];                     // back to dA x dA
    }
  }
  return vec_row(acc);
}

DensityMatrix apply_product(const StinespringChannel& channel, const DensityMatrix& rho) {
  ProductChannel product(channel);
  return product.apply(rho);
}

PureState maximally_entangled(int d) {
  if (d < 1) throw std::invalid_argument("maximally_entangled: d must be >= 1");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(i * d + i) = amp;
  return PureState(std::move(v));
}

}  // namespace moelab
