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

#ifndef CUBEFIELD_JV_HPP_
#define CUBEFIELD_JV_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cubefield/complex.hpp"
#include "cubefield/sparse.hpp"

namespace cubefield {

struct OrientedCube {
  Cube cube;
  int sign = 1;

  OrientedCube reversed() const { return {cube, -sign}; }
  friend bool operator==(const OrientedCube&, const OrientedCube&) = default;
};

// Coefficients of canonically oriented cubes of one degree.
template <class S>
struct Cochain {
  std::size_t degree = 0;
  std::map<Cube, S> terms;

  void add(const Cube& c, const S& v) {
    if (c.dim() != degree) throw std::invalid_argument("Cochain: mixed degree");
    if (v == S(0)) return;
    auto it = terms.find(c);
    if (it == terms.end()) {
      terms.emplace(c, v);
    } else {
      it->second += v;
      if (it->second == S(0)) terms.erase(it);
    }
  }
  void add(const OrientedCube& c, const S& v) { add(c.cube, S(c.sign) * v); }

  static Cochain of(const OrientedCube& c) {
    Cochain f{c.cube.dim(), {}};
    f.add(c, S(1));
    return f;
  }

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const Cochain&, const Cochain&) = default;
};

class WeightFunction {
 public:
  explicit WeightFunction(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("weights must be positive and finite");
      }
    }
  }
  static WeightFunction unit(std::size_t n) { return WeightFunction(std::vector<double>(n, 1.0)); }

  double operator()(HyperplaneId h) const { return values_.at(h); }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  bool is_unit() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; });
  }

 private:
  std::vector<double> values_;
};

// 1 + min(t,1) * dist(H, base); t may be infinite.
inline WeightFunction distance_weight(const CubeComplex& x, double t) {
  const double s = std::min(t, 1.0);
  std::vector<double> v(x.n_hyperplanes());
  for (HyperplaneId h = 0; h < v.size(); ++h) {
    v[h] = 1.0 + s * static_cast<double>(x.dist_hyperplane_to_base(h));
  }
  return WeightFunction(std::move(v));
}

struct SpectralProfile {
  std::size_t q = 0;
  std::size_t p = 0;
  double q_w = 0.0;
  double p_w = 0.0;
};

inline int permutation_sign(std::vector<HyperplaneId> l) {
  int sign = 1;
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t j = i + 1; j < l.size(); ++j) {
      if (l[j] < l[i]) sign = -sign;
    }
  }
  return sign;
}

// Presentation (P, L) to the canonical (anchor, ascending) form.
inline OrientedCube canonicalize(const CubeComplex& x, const Bits& p,
                                 const std::vector<HyperplaneId>& l,
                                 int vertex_sign = 1) {
  std::vector<HyperplaneId> s = l;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ComplexError(ComplexError::Kind::kContract, "canonicalize: repeated hyperplane");
  }
  for (auto h : s) {
    if (h >= x.n_hyperplanes()) {
      throw ComplexError(ComplexError::Kind::kContract, "canonicalize: bad hyperplane");
    }
  }
  if (!x.contains(p) || !x.spans_cube(p, s)) {
    throw ComplexError(ComplexError::Kind::kContract, "canonicalize: presentation spans no cube");
  }
  if (vertex_sign != 1 && vertex_sign != -1) {
    throw ComplexError(ComplexError::Kind::kContract, "canonicalize: sign must be +1 or -1");
  }
  Cube c = x.cube_at(p, s);
  if (l.empty()) return {c, vertex_sign};
  const int parity = (hamming(p, c.anchor) % 2) ? -1 : 1;
  return {c, parity * permutation_sign(l)};
}

namespace detail {

inline int sign_of(std::size_t k) { return (k % 2) ? -1 : 1; }

}  // namespace detail

// H wedge (canonical c, sign +), as (target, sign) in degree q+1.
inline std::optional<OrientedCube> wedge_term(const CubeComplex& x, HyperplaneId h,
                                              const Cube& c) {
  if (c.cuts(h)) return std::nullopt;
  if (c.anchor.test(h) == x.base().test(h)) return std::nullopt;
  if (!x.adjacent_cube(c, h)) return std::nullopt;
  const std::size_t pos = static_cast<std::size_t>(
      std::lower_bound(c.cutting.begin(), c.cutting.end(), h) - c.cutting.begin());
  Cube d = c;
  d.cutting.insert(d.cutting.begin() + static_cast<std::ptrdiff_t>(pos), h);
  const bool far_bit = c.anchor.test(h);
  d.anchor.set(h, false);
  const int s = detail::sign_of(pos) * (far_bit ? 1 : -1);
  return OrientedCube{std::move(d), s};
}

// H hook (canonical c, sign +), as (target, sign) in degree q-1.
inline std::optional<OrientedCube> hook_term(const CubeComplex& x, HyperplaneId h,
                                             const Cube& c) {
  if (c.dim() == 0 || !c.cuts(h)) return std::nullopt;
  const std::size_t idx = static_cast<std::size_t>(
      std::lower_bound(c.cutting.begin(), c.cutting.end(), h) - c.cutting.begin());
  Cube f = c;
  f.cutting.erase(f.cutting.begin() + static_cast<std::ptrdiff_t>(idx));
  if (!x.base().test(h)) {
    f.anchor.set(h, true);
    return OrientedCube{std::move(f), detail::sign_of(idx)};
  }
  return OrientedCube{std::move(f), -detail::sign_of(idx)};
}

inline Cochain<long long> wedge(const CubeComplex& x, HyperplaneId h, const OrientedCube& c) {
  Cochain<long long> out{c.cube.dim() + 1, {}};
  if (auto t = wedge_term(x, h, c.cube)) out.add(t->cube, static_cast<long long>(t->sign * c.sign));
  return out;
}

inline Cochain<long long> hook(const CubeComplex& x, HyperplaneId h, const OrientedCube& c) {
  Cochain<long long> out{c.cube.dim() == 0 ? 0 : c.cube.dim() - 1, {}};
  if (auto t = hook_term(x, h, c.cube)) out.add(t->cube, static_cast<long long>(t->sign * c.sign));
  return out;
}

namespace detail {

template <class S, class W>
Cochain<S> apply_terms(const CubeComplex& x, const Cochain<S>& f, const W& weight,
                       bool raise) {
  if (!raise && f.degree == 0) return Cochain<S>{0, {}};
  Cochain<S> out{raise ? f.degree + 1 : f.degree - 1, {}};
  for (const auto& [c, v] : f.terms) {
    if (c.dim() != f.degree) throw std::invalid_argument("mixed-degree cochain");
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      auto t = raise ? wedge_term(x, h, c) : hook_term(x, h, c);
      if (t) out.add(t->cube, weight(h) * S(t->sign) * v);
    }
  }
  return out;
}

}  // namespace detail

inline Cochain<long long> d(const CubeComplex& x, const Cochain<long long>& f) {
  return detail::apply_terms(x, f, [](HyperplaneId) { return 1LL; }, true);
}
inline Cochain<long long> delta(const CubeComplex& x, const Cochain<long long>& f) {
  return detail::apply_terms(x, f, [](HyperplaneId) { return 1LL; }, false);
}
inline Cochain<double> d_w(const CubeComplex& x, const Cochain<double>& f,
                           const WeightFunction& w) {
  return detail::apply_terms(x, f, w, true);
}
inline Cochain<double> delta_w(const CubeComplex& x, const Cochain<double>& f,
                               const WeightFunction& w) {
  return detail::apply_terms(x, f, w, false);
}

template <class S>
S jv_inner(const Cochain<S>& f, const Cochain<S>& g) {
  if (f.degree != g.degree) throw std::invalid_argument("jv_inner: degree mismatch");
  S acc(0);
  for (const auto& [c, v] : f.terms) {
    auto it = g.terms.find(c);
    if (it != g.terms.end()) acc += v * it->second;
  }
  return acc;
}

inline SpectralProfile spectral_profile(const CubeComplex& x, const Cube& c,
                                        const WeightFunction& w) {
  SpectralProfile sp;
  sp.q = c.dim();
  for (auto h : c.cutting) sp.q_w += w(h) * w(h);
  for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
    if (wedge_term(x, h, c)) {
      ++sp.p;
      sp.p_w += w(h) * w(h);
    }
  }
  return sp;
}

// Degree-q to q+1 matrices in the canonical basis.

inline IntMatrix wedge_matrix(const CubeComplex& x, HyperplaneId h, std::size_t q) {
  IntMatrix m(x.n_cubes(q + 1), x.n_cubes(q));
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (auto t = wedge_term(x, h, cs[j])) m.add(*x.cube_index(t->cube), j, t->sign);
  }
  return m;
}

// Degree q to q-1.
inline IntMatrix hook_matrix(const CubeComplex& x, HyperplaneId h, std::size_t q) {
  IntMatrix m(q == 0 ? 0 : x.n_cubes(q - 1), x.n_cubes(q));
  if (q == 0) return m;
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (auto t = hook_term(x, h, cs[j])) m.add(*x.cube_index(t->cube), j, t->sign);
  }
  return m;
}

inline IntMatrix d_matrix(const CubeComplex& x, std::size_t q) {
  IntMatrix m(x.n_cubes(q + 1), x.n_cubes(q));
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      if (auto t = wedge_term(x, h, cs[j])) m.add(*x.cube_index(t->cube), j, t->sign);
    }
  }
  return m;
}

inline IntMatrix delta_matrix(const CubeComplex& x, std::size_t q) {
  IntMatrix m(q == 0 ? 0 : x.n_cubes(q - 1), x.n_cubes(q));
  if (q == 0) return m;
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      if (auto t = hook_term(x, h, cs[j])) m.add(*x.cube_index(t->cube), j, t->sign);
    }
  }
  return m;
}

inline Eigen::MatrixXd d_matrix(const CubeComplex& x, std::size_t q, const WeightFunction& w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(x.n_cubes(q + 1), x.n_cubes(q));
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      if (auto t = wedge_term(x, h, cs[j])) m(*x.cube_index(t->cube), j) += w(h) * t->sign;
    }
  }
  return m;
}

inline Eigen::MatrixXd delta_matrix(const CubeComplex& x, std::size_t q,
                                    const WeightFunction& w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q == 0 ? 0 : x.n_cubes(q - 1), x.n_cubes(q));
  if (q == 0) return m;
  const auto& cs = x.cubes(q);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      if (auto t = hook_term(x, h, cs[j])) m(*x.cube_index(t->cube), j) += w(h) * t->sign;
    }
  }
  return m;
}

// d delta + delta d on degree q.
inline IntMatrix laplacian_matrix(const CubeComplex& x, std::size_t q) {
  IntMatrix up = delta_matrix(x, q + 1) * d_matrix(x, q);
  if (q == 0) return up;
  return up + d_matrix(x, q - 1) * delta_matrix(x, q);
}

inline Eigen::MatrixXd laplacian_matrix(const CubeComplex& x, std::size_t q,
                                        const WeightFunction& w) {
  Eigen::MatrixXd up = delta_matrix(x, q + 1, w) * d_matrix(x, q, w);
  if (q == 0) return up;
  return up + d_matrix(x, q - 1, w) * delta_matrix(x, q, w);
}

inline std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel = 1e-8) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel * s(0)) ++r;
  }
  return r;
}

// Betti numbers from a list of differentials d_0, d_1, ... (d_q: q -> q+1).
inline std::vector<std::size_t> betti_from(const std::vector<Eigen::MatrixXd>& ds,
                                           const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> ranks(dims.size(), 0);
  for (std::size_t q = 0; q < dims.size() && q < ds.size(); ++q) ranks[q] = numerical_rank(ds[q]);
  std::vector<std::size_t> out(dims.size());
  for (std::size_t q = 0; q < dims.size(); ++q) {
    const std::size_t in = q == 0 ? 0 : ranks[q - 1];
    out[q] = dims[q] - ranks[q] - in;
  }
  return out;
}

inline std::vector<std::size_t> cohomology_ranks(const CubeComplex& x, const WeightFunction& w) {
  std::vector<Eigen::MatrixXd> ds;
  std::vector<std::size_t> dims;
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    dims.push_back(x.n_cubes(q));
    ds.push_back(d_matrix(x, q, w));
  }
  return betti_from(ds, dims);
}

}  // namespace cubefield

#endif  // CUBEFIELD_JV_HPP_
