#pragma once

// Metric 2-step nilpotent Lie algebras on a fixed ambient basis: brackets,
// the inner product, the metric adjoint ad-dagger, and the group law in
// exponential coordinates.

#include "nilgeo/error.hpp"
#include "nilgeo/scalar.hpp"

#include <string>
#include <vector>

namespace nilgeo {

enum class CausalCharacter { Timelike, Null, Spacelike, Zero };

const char* causal_name(CausalCharacter c);

/// Default tolerance for null classification in float mode.
inline constexpr double kDefaultTauNull = 1e-9;

template <class T>
class BasicAlgebra {
 public:
  /// One supplied structure constant: [b_i, b_j] = value.
  struct Bracket {
    int i = 0;
    int j = 0;
    Vec<T> value;
  };

  BasicAlgebra() = default;
  BasicAlgebra(int dim, std::vector<Bracket> brackets, Mat<T> gram,
               std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  const std::vector<Bracket>& brackets() const { return sparse_; }
  const Mat<T>& gram() const { return gram_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool nondegenerate() const { return nondegenerate_; }

  /// Throws SingularGram when the inner product is degenerate.
  const Mat<T>& gram_inverse() const;

  /// [b_i, b_j] as reconstructed from the sparse entries.
  const Vec<T>& structure(int i, int j) const { return dense_[static_cast<std::size_t>(i * dim_ + j)]; }

  Vec<T> bracket(const Vec<T>& x, const Vec<T>& y) const;
  T inner(const Vec<T>& x, const Vec<T>& y) const;

  /// Matrix of y -> [x, y].
  Mat<T> ad_matrix(const Vec<T>& x) const;

  /// ad-dagger_x y, characterised by <ad_star(x, y), w> = <y, [x, w]> for all w.
  Vec<T> ad_star(const Vec<T>& x, const Vec<T>& y) const;

  Vec<T> basis_vector(int k) const { return unit_vector<T>(dim_, k); }

  void check_dim(const Vec<T>& x) const;

 private:
  int dim_ = 0;
  std::vector<Bracket> sparse_;
  std::vector<Vec<T>> dense_;
  Mat<T> gram_;
  Mat<T> gram_inv_;
  bool nondegenerate_ = false;
  std::vector<std::string> labels_;
};

using ExactAlgebra = BasicAlgebra<Rational>;
using FloatAlgebra = BasicAlgebra<double>;
using RealAlgebra = BasicAlgebra<Real>;

FloatAlgebra to_float(const ExactAlgebra& alg);

/// Rounds every structure constant and Gram entry to the scalar type R.
template <class R>
BasicAlgebra<R> convert(const ExactAlgebra& alg) {
  std::vector<typename BasicAlgebra<R>::Bracket> brackets;
  brackets.reserve(alg.brackets().size());
  for (const auto& b : alg.brackets()) brackets.push_back({b.i, b.j, to_real<R>(b.value)});
  return BasicAlgebra<R>(alg.dim(), std::move(brackets), to_real<R>(alg.gram()), alg.labels());
}

/// An algebra together with the mode it was supplied in. Both the exact and
/// the floating-point copies are always available; the mode only records
/// provenance (float-mode inputs are stored as their exact dyadic values).
class MetricAlgebra {
 public:
  MetricAlgebra() = default;
  MetricAlgebra(ExactAlgebra exact, Mode mode);

  const ExactAlgebra& exact() const { return exact_; }
  const FloatAlgebra& approx() const { return approx_; }
  Mode mode() const { return mode_; }
  int dim() const { return exact_.dim(); }

 private:
  ExactAlgebra exact_;
  FloatAlgebra approx_;
  Mode mode_ = Mode::Exact;
};

struct ValidationReport {
  bool antisymmetric = true;
  bool jacobi = true;
  bool two_step = true;
  bool abelian = false;
  bool gram_symmetric = true;
  bool gram_nondegenerate = true;
  bool rational = true;
  std::vector<std::string> failures;

  /// Abelian algebras pass; the flag is informational.
  bool ok() const {
    return antisymmetric && jacobi && two_step && gram_symmetric && gram_nondegenerate && rational;
  }
};

ValidationReport validate(const MetricAlgebra& alg);

/// Basis (columns) of the center, the kernel of the stacked ad matrices.
MatQ center(const ExactAlgebra& alg);

/// Element of the simply connected group, always stored in exponential
/// coordinates.
template <class T>
struct GroupElement {
  Vec<T> log;
};

template <class T>
GroupElement<T> identity_element(int dim) {
  return {Vec<T>::Zero(dim)};
}

template <class T>
GroupElement<T> inverse(const GroupElement<T>& g) {
  return {-g.log};
}

/// exp(x) exp(y) = exp(x + y + [x, y] / 2).
template <class T>
GroupElement<T> bch_mul(const BasicAlgebra<T>& alg, const GroupElement<T>& g,
                        const GroupElement<T>& h) {
  alg.check_dim(g.log);
  alg.check_dim(h.log);
  return {g.log + h.log + alg.bracket(g.log, h.log) / T(2)};
}

template <class T>
CausalCharacter causal_character(const BasicAlgebra<T>& alg, const Vec<T>& x,
                                 double tau_null = kDefaultTauNull) {
  alg.check_dim(x);
  if constexpr (std::is_floating_point_v<T>) {
    if (x.size() == 0 || x.cwiseAbs().maxCoeff() <= tau_null) return CausalCharacter::Zero;
    T q = alg.inner(x, x);
    if (std::abs(q) <= tau_null) return CausalCharacter::Null;
    return q > 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
  } else {
    bool zero = true;
    for (Eigen::Index k = 0; k < x.size(); ++k)
      if (x[k] != 0) zero = false;
    if (zero) return CausalCharacter::Zero;
    T q = alg.inner(x, x);
    if (q == 0) return CausalCharacter::Null;
    return q > 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
  }
}

extern template class BasicAlgebra<Rational>;
extern template class BasicAlgebra<double>;
extern template class BasicAlgebra<Real>;

}  // namespace nilgeo
