// Copyright 2026 The cubefield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CUBEFIELD_SPARSE_HPP_
#define CUBEFIELD_SPARSE_HPP_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cubefield {

// Column-major sparse matrix over an exact or floating scalar.
template <class T>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(cols) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.add(i, i, T(1));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void add(std::size_t r, std::size_t c, const T& v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::add");
    if (v == T(0)) return;
    auto& col = data_[c];
    auto it = col.find(r);
    if (it == col.end()) {
      col.emplace(r, v);
    } else {
      it->second += v;
      if (it->second == T(0)) col.erase(it);
    }
  }

  T at(std::size_t r, std::size_t c) const {
    auto it = data_[c].find(r);
    return it == data_[c].end() ? T(0) : it->second;
  }

  const std::map<std::size_t, T>& column(std::size_t c) const { return data_[c]; }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : data_) n += c.size();
    return n;
  }
  bool is_zero() const { return nonzeros() == 0; }

  bool is_diagonal() const {
    for (std::size_t c = 0; c < cols_; ++c) {
      for (const auto& [r, v] : data_[c]) {
        if (r != c) return false;
      }
    }
    return true;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows_);
    for (std::size_t c = 0; c < cols_; ++c) {
      for (const auto& [r, v] : data_[c]) t.data_[r].emplace(c, v);
    }
    return t;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix product shape");
    SparseMatrix p(a.rows_, b.cols_);
    for (std::size_t c = 0; c < b.cols_; ++c) {
      for (const auto& [k, bv] : b.data_[c]) {
        for (const auto& [r, av] : a.data_[k]) p.add(r, c, av * bv);
      }
    }
    return p;
  }

  friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) {
    a.check_same(b);
    for (std::size_t c = 0; c < b.cols_; ++c) {
      for (const auto& [r, v] : b.data_[c]) a.add(r, c, v);
    }
    return a;
  }

  friend SparseMatrix operator-(SparseMatrix a, const SparseMatrix& b) {
    a.check_same(b);
    for (std::size_t c = 0; c < b.cols_; ++c) {
      for (const auto& [r, v] : b.data_[c]) a.add(r, c, -v);
    }
    return a;
  }

  friend SparseMatrix operator*(const T& s, SparseMatrix a) {
    if (s == T(0)) return SparseMatrix(a.rows_, a.cols_);
    for (auto& col : a.data_) {
      for (auto& [r, v] : col) v = s * v;
    }
    return a;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // Conversion through a caller-supplied scalar map.
  template <class F>
  Eigen::MatrixXd to_dense(F&& to_double) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
      for (const auto& [r, v] : data_[c]) m(r, c) = to_double(v);
    }
    return m;
  }
  Eigen::MatrixXd to_dense() const {
    return to_dense([](const T& v) { return static_cast<double>(v); });
  }

 private:
  void check_same(const SparseMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw std::invalid_argument("SparseMatrix shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::map<std::size_t, T>> data_;
};

using IntMatrix = SparseMatrix<long long>;

}  // namespace cubefield

#endif  // CUBEFIELD_SPARSE_HPP_
