#include "nilgeo/algebra.hpp"

#include "nilgeo/linalg.hpp"

#include <set>
#include <utility>

namespace nilgeo {

const char* causal_name(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Zero: return "zero";
  }
  return "unknown";
}

template <class T>
BasicAlgebra<T>::BasicAlgebra(int dim, std::vector<Bracket> brackets, Mat<T> gram,
                              std::vector<std::string> labels)
    : dim_(dim), sparse_(std::move(brackets)), gram_(std::move(gram)), labels_(std::move(labels)) {
  if (dim_ <= 0) throw Error(ErrorCode::InvalidAlgebra, "dimension must be positive");
  if (gram_.rows() != dim_ || gram_.cols() != dim_)
    throw Error(ErrorCode::DimensionMismatch, "gram matrix must be " + std::to_string(dim_) + "x" +
                                                  std::to_string(dim_));
  if (!labels_.empty() && static_cast<int>(labels_.size()) != dim_)
    throw Error(ErrorCode::DimensionMismatch, "labels must have one entry per basis vector");

  dense_.assign(static_cast<std::size_t>(dim_ * dim_), Vec<T>::Zero(dim_));
  std::set<std::pair<int, int>> explicit_entries;
  for (const auto& b : sparse_) {
    if (b.i < 0 || b.j < 0 || b.i >= dim_ || b.j >= dim_)
      throw Error(ErrorCode::InvalidAlgebra, "bracket index out of range");
    if (b.value.size() != dim_)
      throw Error(ErrorCode::DimensionMismatch, "bracket value has wrong length");
    if (!explicit_entries.insert({b.i, b.j}).second)
      throw Error(ErrorCode::InvalidAlgebra, "duplicate bracket entry (" + std::to_string(b.i) + ", " +
                                                 std::to_string(b.j) + ")");
    dense_[static_cast<std::size_t>(b.i * dim_ + b.j)] = b.value;
  }
  // Antisymmetry is implied for pairs supplied in one order only.
  for (const auto& b : sparse_) {
    if (b.i == b.j || explicit_entries.count({b.j, b.i})) continue;
    dense_[static_cast<std::size_t>(b.j * dim_ + b.i)] = -b.value;
  }

  if constexpr (std::is_floating_point_v<T>) {
    Eigen::FullPivLU<Mat<T>> lu(gram_);
    nondegenerate_ = lu.isInvertible();
    if (nondegenerate_) gram_inv_ = lu.inverse();
  } else {
    auto inv = inverse(gram_);
    nondegenerate_ = inv.has_value();
    if (inv) gram_inv_ = std::move(*inv);
  }
}

template <class T>
const Mat<T>& BasicAlgebra<T>::gram_inverse() const {
  if (!nondegenerate_) throw Error(ErrorCode::SingularGram, "inner product is degenerate");
  return gram_inv_;
}

template <class T>
void BasicAlgebra<T>::check_dim(const Vec<T>& x) const {
  if (x.size() != dim_)
    throw Error(ErrorCode::DimensionMismatch, "vector of length " + std::to_string(x.size()) +
                                                  " in algebra of dimension " + std::to_string(dim_));
}

template <class T>
Vec<T> BasicAlgebra<T>::bracket(const Vec<T>& x, const Vec<T>& y) const {
  check_dim(x);
  check_dim(y);
  Vec<T> out = Vec<T>::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == T(0)) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == T(0)) continue;
      const Vec<T>& c = structure(i, j);
      T coeff = x[i] * y[j];
      for (int k = 0; k < dim_; ++k)
        if (c[k] != T(0)) out[k] += coeff * c[k];
    }
  }
  return out;
}

template <class T>
T BasicAlgebra<T>::inner(const Vec<T>& x, const Vec<T>& y) const {
  check_dim(x);
  check_dim(y);
  return (x.transpose() * gram_ * y)(0, 0);
}

template <class T>
Mat<T> BasicAlgebra<T>::ad_matrix(const Vec<T>& x) const {
  check_dim(x);
  Mat<T> m = Mat<T>::Zero(dim_, dim_);
  for (int w = 0; w < dim_; ++w) {
    for (int i = 0; i < dim_; ++i) {
      if (x[i] == T(0)) continue;
      m.col(w) += x[i] * structure(i, w);
    }
  }
  return m;
}

template <class T>
Vec<T> BasicAlgebra<T>::ad_star(const Vec<T>& x, const Vec<T>& y) const {
  check_dim(x);
  check_dim(y);
  // c_w = <y, [x, b_w]>, then solve G r = c.
  Vec<T> gy = gram_ * y;
  Mat<T> ad = ad_matrix(x);
  Vec<T> c = ad.transpose() * gy;
  return gram_inverse() * c;
}

template class BasicAlgebra<Rational>;
template class BasicAlgebra<double>;
template class BasicAlgebra<Real>;

FloatAlgebra to_float(const ExactAlgebra& alg) {
  std::vector<FloatAlgebra::Bracket> brackets;
  brackets.reserve(alg.brackets().size());
  for (const auto& b : alg.brackets()) brackets.push_back({b.i, b.j, to_float(b.value)});
  return FloatAlgebra(alg.dim(), std::move(brackets), to_float(alg.gram()), alg.labels());
}

MetricAlgebra::MetricAlgebra(ExactAlgebra exact, Mode mode)
    : exact_(std::move(exact)), approx_(to_float(exact_)), mode_(mode) {}

namespace {

bool is_zero_vec(const VecQ& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0) return false;
  return true;
}

std::string pair_label(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

ValidationReport validate(const MetricAlgebra& metric) {
  const ExactAlgebra& alg = metric.exact();
  const int n = alg.dim();
  ValidationReport report;

  for (int i = 0; i < n; ++i) {
    if (!is_zero_vec(alg.structure(i, i))) {
      report.antisymmetric = false;
      report.failures.push_back("antisymmetry: [b" + std::to_string(i) + ", b" + std::to_string(i) + "] != 0");
    }
    for (int j = i + 1; j < n; ++j) {
      if (!is_zero_vec(VecQ(alg.structure(i, j) + alg.structure(j, i)))) {
        report.antisymmetric = false;
        report.failures.push_back("antisymmetry: [b_i,b_j] != -[b_j,b_i] at " + pair_label(i, j));
      }
    }
  }

  bool abelian = true;
  for (int i = 0; i < n && abelian; ++i)
    for (int j = 0; j < n; ++j)
      if (!is_zero_vec(alg.structure(i, j))) {
        abelian = false;
        break;
      }
  report.abelian = abelian;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      VecQ ij = alg.structure(i, j);
      if (is_zero_vec(ij)) continue;
      for (int k = 0; k < n; ++k) {
        VecQ triple = alg.bracket(ij, alg.basis_vector(k));
        if (report.two_step && !is_zero_vec(triple)) {
          report.two_step = false;
          report.failures.push_back("2-step: [[b" + std::to_string(i) + ",b" + std::to_string(j) + "],b" +
                                    std::to_string(k) + "] != 0");
        }
      }
    }
  }

  for (int i = 0; i < n && report.jacobi; ++i)
    for (int j = i + 1; j < n && report.jacobi; ++j)
      for (int k = j + 1; k < n; ++k) {
        VecQ bi = alg.basis_vector(i), bj = alg.basis_vector(j), bk = alg.basis_vector(k);
        VecQ sum = alg.bracket(alg.bracket(bi, bj), bk) + alg.bracket(alg.bracket(bj, bk), bi) +
                   alg.bracket(alg.bracket(bk, bi), bj);
        if (!is_zero_vec(sum)) {
          report.jacobi = false;
          report.failures.push_back("jacobi fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                    std::to_string(k) + ")");
          break;
        }
      }

  const MatQ& g = alg.gram();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g(i, j) != g(j, i)) {
        if (report.gram_symmetric) report.failures.push_back("gram matrix is not symmetric");
        report.gram_symmetric = false;
      }
  report.gram_nondegenerate = alg.nondegenerate();
  if (!report.gram_nondegenerate) report.failures.push_back("gram matrix is singular");

  if (metric.mode() == Mode::Float) {
    for (const auto& b : alg.brackets()) {
      for (int k = 0; k < n; ++k) {
        if (!rationalize(to_double(b.value[k]))) {
          if (report.rational)
            report.failures.push_back("structure constant at " + pair_label(b.i, b.j) +
                                      " is not recognisably rational");
          report.rational = false;
        }
      }
    }
  }
  return report;
}

MatQ center(const ExactAlgebra& alg) {
  const int n = alg.dim();
  // x is central iff [x, b_w] = 0 for every w; stack the linear maps x -> [x, b_w].
  MatQ stacked = MatQ::Zero(n * n, n);
  for (int w = 0; w < n; ++w)
    for (int i = 0; i < n; ++i) stacked.block(w * n, i, n, 1) = alg.structure(i, w);
  return kernel(stacked);
}

}  // namespace nilgeo
