#pragma once

#include <stdexcept>
#include <vector>

#include "consensus/scalar.hpp"

namespace consensus {

// Dense square row-major matrix over either scalar backend.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, ScalarOps<S>::zero()) {
    if (n < 1) throw std::invalid_argument("matrix needs at least one row");
  }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = ScalarOps<S>::one();
    return m;
  }

  int size() const { return n_; }
  S& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const S& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  bool operator==(const Matrix&) const = default;

 private:
  int n_ = 0;
  std::vector<S> a_;
};

template <class S>
Matrix<S> operator*(const Matrix<S>& lhs, const Matrix<S>& rhs) {
  const int n = lhs.size();
  if (rhs.size() != n) throw std::invalid_argument("matrix dimension mismatch");
  Matrix<S> out(n);
  const S zero = ScalarOps<S>::zero();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const S& lik = lhs.at(i, k);
      if (lik == zero) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) += lik * rhs.at(k, j);
    }
  }
  return out;
}

template <class S>
std::vector<S> operator*(const Matrix<S>& m, const std::vector<S>& v) {
  const int n = m.size();
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("dimension mismatch");
  std::vector<S> out(n, ScalarOps<S>::zero());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += m.at(i, j) * v[j];
  return out;
}

// Row vector times matrix (push-forward of a distribution).
template <class S>
std::vector<S> row_times(const std::vector<S>& v, const Matrix<S>& m) {
  const int n = m.size();
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("dimension mismatch");
  std::vector<S> out(n, ScalarOps<S>::zero());
  const S zero = ScalarOps<S>::zero();
  for (int i = 0; i < n; ++i) {
    if (v[i] == zero) continue;
    for (int j = 0; j < n; ++j) out[j] += v[i] * m.at(i, j);
  }
  return out;
}

// Exact (rational) or toleranced (float, 1e-12 relative row sums,
// nonnegative entries) row-stochasticity test.
template <class S>
bool is_row_stochastic(const Matrix<S>& m) {
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    S row_sum = ScalarOps<S>::zero();
    for (int j = 0; j < n; ++j) {
      if (m.at(i, j) < ScalarOps<S>::zero()) return false;
      row_sum += m.at(i, j);
    }
    if (!Tolerance<S>::approx_equal(row_sum, ScalarOps<S>::one())) return false;
  }
  return true;
}

}  // namespace consensus
