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

#ifndef CUBEFIELD_DEFORMATION_HPP_
#define CUBEFIELD_DEFORMATION_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cubefield/complex.hpp"
#include "cubefield/format.hpp"
#include "cubefield/jv.hpp"
#include "cubefield/parallelism.hpp"
#include "cubefield/ps.hpp"

namespace cubefield {

class TimeParam {
 public:
  TimeParam() = default;
  TimeParam(double v) : v_(v) {  // NOLINT(runtime/explicit)
    if (!(v >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  }
  static TimeParam infinity() { return TimeParam(std::numeric_limits<double>::infinity()); }
  static TimeParam parse(const std::string& s) {
    if (s == "inf" || s == "infinity") return infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad t value: " + s);
    }
    if (used != s.size()) throw std::invalid_argument("bad t value: " + s);
    return TimeParam(v);
  }

  double value() const { return v_; }
  bool is_infinite() const { return std::isinf(v_); }
  bool is_zero() const { return v_ == 0.0; }

  // e^{-t^2/2}
  double c() const { return is_infinite() ? 0.0 : std::exp(-0.5 * v_ * v_); }
  // 1 - e^{-t^2/2}
  double one_minus_c() const { return is_infinite() ? 1.0 : -std::expm1(-0.5 * v_ * v_); }
  // (1 - e^{-t^2})^{1/2}
  double s() const { return is_infinite() ? 1.0 : std::sqrt(-std::expm1(-v_ * v_)); }
  // e^{-t^2 d/2}
  double decay(std::size_t d) const {
    if (d == 0) return 1.0;
    return is_infinite() ? 0.0 : std::exp(-0.5 * v_ * v_ * static_cast<double>(d));
  }
  std::string to_string() const { return format_number(v_); }

  friend bool operator==(const TimeParam&, const TimeParam&) = default;

 private:
  double v_ = 0.0;
};

inline std::vector<TimeParam> parse_grid(const std::string& text) {
  std::vector<TimeParam> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(TimeParam::parse(tok));
  }
  return out;
}

inline void require_open(TimeParam t, const char* who) {
  if (t.is_zero()) {
    throw std::invalid_argument(std::string(who) + ": t = 0 is handled through symbols");
  }
}

// nullopt: not parallel or incompatibly oriented.
inline std::optional<std::size_t> oriented_pair_distance(const OrientedCube& a,
                                                         const OrientedCube& b) {
  if (a.sign != b.sign) return std::nullopt;
  return pair_distance(a.cube, b.cube);
}

// One parallelism class seen as the vertex set of its own cube complex.
class ClassGeometry {
 public:
  ClassGeometry(const CubeComplex& x, const ParallelClass& k) : cls_(&k) {
    for (std::size_t i = 0; i < k.members.size(); ++i) pos_.emplace(k.members[i].anchor, i);
    for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
      if (std::binary_search(k.determining.begin(), k.determining.end(), h)) continue;
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < k.members.size(); ++i) {
        if (k.members[i].anchor.test(h)) continue;
        auto j = pos_.find(k.members[i].anchor.flipped(h));
        if (j != pos_.end()) pairs.emplace_back(i, j->second);
      }
      if (!pairs.empty()) {
        free_.push_back(h);
        pairs_.emplace(h, std::move(pairs));
      }
    }
  }

  const ParallelClass& cls() const { return *cls_; }
  std::size_t size() const { return cls_->members.size(); }
  const Cube& member(std::size_t i) const { return cls_->members[i]; }
  const std::vector<HyperplaneId>& free_hyperplanes() const { return free_; }

  std::optional<std::size_t> position(const Cube& c) const {
    if (c.cutting != cls_->determining) return std::nullopt;
    auto it = pos_.find(c.anchor);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_position(const Cube& c) const {
    auto p = position(c);
    if (!p) throw ComplexError(ComplexError::Kind::kContract, "cube not in this class");
    return *p;
  }

  std::optional<std::size_t> across(std::size_t i, HyperplaneId h) const {
    auto it = pos_.find(member(i).anchor.flipped(h));
    if (it == pos_.end() || !pairs_.count(h)) return std::nullopt;
    return it->second;
  }

  // (H-bit 0, H-bit 1) member pairs adjacent across h.
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs(HyperplaneId h) const {
    static const std::vector<std::pair<std::size_t, std::size_t>> none;
    auto it = pairs_.find(h);
    return it == pairs_.end() ? none : it->second;
  }

  // BFS tree from `from`, neighbours visited in ascending hyperplane order.
  std::vector<std::size_t> bfs_parents(std::size_t from) const {
    const std::size_t none = size();
    std::vector<std::size_t> parent(size(), none);
    parent[from] = from;
    std::deque<std::size_t> queue{from};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (auto h : free_) {
        auto v = across(u, h);
        if (v && parent[*v] == none) {
          parent[*v] = u;
          queue.push_back(*v);
        }
      }
    }
    return parent;
  }

  std::vector<std::size_t> path(const std::vector<std::size_t>& parent, std::size_t from,
                                std::size_t to) const {
    std::vector<std::size_t> out{to};
    while (out.back() != from) {
      const std::size_t p = parent[out.back()];
      if (p == size()) throw std::logic_error("class complex is disconnected");
      out.push_back(p);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> bfs_path(std::size_t from, std::size_t to) const {
    return path(bfs_parents(from), from, to);
  }

  HyperplaneId step_hyperplane(std::size_t a, std::size_t b) const {
    const auto ones = (member(a).anchor ^ member(b).anchor).ones();
    if (ones.size() != 1 || !pairs_.count(ones.front())) {
      throw ComplexError(ComplexError::Kind::kContract, "cubes are not adjacent across a hyperplane");
    }
    return ones.front();
  }

  // v <- W_t(C^op, C) v with C^op = member a, C = member b.
  void apply_step(std::size_t a, std::size_t b, TimeParam t, Eigen::VectorXd& v) const {
    const HyperplaneId h = step_hyperplane(a, b);
    const bool side = member(b).anchor.test(h);
    const double c = t.c();
    const double s = t.s();
    for (const auto& [lo, hi] : pairs_.at(h)) {
      const std::size_t i = side ? hi : lo;
      const std::size_t j = side ? lo : hi;
      const double vi = v(i);
      const double vj = v(j);
      v(i) = s * vi - c * vj;
      v(j) = c * vi + s * vj;
    }
  }

  // v <- W_t(E_1,E_2) ... W_t(E_{n-1},E_n) v.
  void apply_path(const std::vector<std::size_t>& path, TimeParam t, Eigen::VectorXd& v) const {
    for (std::size_t k = path.size(); k-- > 1;) apply_step(path[k - 1], path[k], t, v);
  }

 private:
  const ParallelClass* cls_;
  std::map<Bits, std::size_t> pos_;
  std::vector<HyperplaneId> free_;
  std::map<HyperplaneId, std::vector<std::pair<std::size_t, std::size_t>>> pairs_;
};

struct BasicSection {
  CubePair pair;
  int sign = 1;

  std::size_t p() const { return pair.p(); }
  std::size_t q() const { return pair.q(); }
};

// Every oriented cube pair of face degree q, canonical face orientation.
inline std::vector<BasicSection> basic_frame(const CubeComplex& x, std::size_t q) {
  std::vector<BasicSection> out;
  for (auto& p : cube_pairs(x)) {
    if (p.q() == q) out.push_back({std::move(p), 1});
  }
  return out;
}

inline std::string section_key(const BasicSection& b) {
  return std::string(b.sign > 0 ? "+" : "-") + "(" + cube_key(b.pair.c) + ";" +
         cube_key(b.pair.d) + ")";
}

// f_<C,D> on canonically oriented cubes.
inline Cochain<long long> basic_cochain(const BasicSection& b) {
  const auto& comp = b.pair.complementary;
  Cochain<long long> f{b.q(), {}};
  for (std::size_t sel = 0; sel < (std::size_t{1} << comp.size()); ++sel) {
    Bits a = b.pair.d.anchor;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if ((sel >> i) & 1) a.flip(comp[i]);
    }
    const long long sign = (std::popcount(sel) % 2) ? -1 : 1;
    f.add(Cube{a, b.pair.d.cutting}, sign * b.sign);
  }
  return f;
}

// The face of C across every complementary hyperplane from D.
inline Cube opposite_face(const CubePair& p) {
  Bits a = p.d.anchor;
  for (auto h : p.complementary) a.flip(h);
  return {a, p.d.cutting};
}

class Field {
 public:
  explicit Field(const CubeComplex& x) : x_(&x), par_(x) {
    for (const auto& k : par_.classes()) {
      geoms_.emplace_back(x, k);
      near_.push_back(nearest_position(x, x.base(), k));
    }
  }
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  const CubeComplex& complex() const { return *x_; }
  const Parallelism& parallelism() const { return par_; }
  const ClassGeometry& geometry(std::size_t id) const { return geoms_[id]; }
  std::size_t class_of(const Cube& c) const {
    auto id = par_.find(c.cutting);
    if (!id) throw ComplexError(ComplexError::Kind::kContract, "cube not in complex");
    return *id;
  }
  // Position of the class member nearest the base vertex.
  std::size_t base_position(std::size_t id) const { return near_[id]; }

  Eigen::MatrixXd gram(std::size_t q, TimeParam t) const {
    require_open(t, "gram_t");
    const std::size_t n = x_->n_cubes(q);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (auto id : par_.of_degree(q)) {
      const auto& k = par_.at(id);
      for (std::size_t i = 0; i < k.members.size(); ++i) {
        for (std::size_t j = 0; j < k.members.size(); ++j) {
          g(k.basis[i], k.basis[j]) = t.decay(*pair_distance(k.members[i], k.members[j]));
        }
      }
    }
    return g;
  }

  // W_t(C^op, C) on the class of C, where C^op is across h from C.
  Eigen::MatrixXd w_step(const Cube& c, HyperplaneId h, TimeParam t) const {
    require_open(t, "w_step");
    const auto& g = geoms_[class_of(c)];
    const std::size_t b = g.require_position(c);
    auto a = g.across(b, h);
    if (!a) throw ComplexError(ComplexError::Kind::kContract, "w_step: cube not adjacent to h");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(g.size(), g.size());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Eigen::VectorXd col = m.col(j);
      g.apply_step(*a, b, t, col);
      m.col(j) = col;
    }
    return m;
  }

  Eigen::MatrixXd w_path(const Cube& a, const Cube& b, TimeParam t) const {
    require_open(t, "w_path");
    if (a.cutting != b.cutting) throw ComplexError(ComplexError::Kind::kContract, "w_path: not parallel");
    const auto& g = geoms_[class_of(a)];
    const auto path = g.bfs_path(g.require_position(a), g.require_position(b));
    return path_matrix(g, path, t);
  }

  static Eigen::MatrixXd path_matrix(const ClassGeometry& g, const std::vector<std::size_t>& path,
                                     TimeParam t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(g.size(), g.size());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Eigen::VectorXd col = m.col(j);
      g.apply_path(path, t, col);
      m.col(j) = col;
    }
    return m;
  }

  Eigen::MatrixXd u(std::size_t q, TimeParam t) const {
    require_open(t, "u_t");
    const std::size_t n = x_->n_cubes(q);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (auto id : par_.of_degree(q)) {
      const auto& g = geoms_[id];
      const auto& k = g.cls();
      const auto parent = g.bfs_parents(near_[id]);
      for (std::size_t j = 0; j < g.size(); ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
        v(j) = 1.0;
        g.apply_path(g.path(parent, near_[id], j), t, v);
        for (std::size_t i = 0; i < g.size(); ++i) m(k.basis[i], k.basis[j]) = v(i);
      }
    }
    return m;
  }

  Eigen::MatrixXd d_t(std::size_t q, TimeParam t, bool weighted) const {
    const Eigen::MatrixXd dw = d_matrix(*x_, q, weight(t, weighted));
    return u(q + 1, t).partialPivLu().solve(dw * u(q, t));
  }

  Eigen::MatrixXd delta_t(std::size_t q, TimeParam t, bool weighted) const {
    if (q == 0) return Eigen::MatrixXd::Zero(0, x_->n_cubes(0));
    const Eigen::MatrixXd dw = delta_matrix(*x_, q, weight(t, weighted));
    return u(q - 1, t).partialPivLu().solve(dw * u(q, t));
  }

  WeightFunction weight(TimeParam t, bool weighted) const {
    return weighted ? distance_weight(*x_, t.value()) : WeightFunction::unit(x_->n_hyperplanes());
  }

  // Block diagonal; per class W_t(C_Q, C_P) for the members nearest Q and P.
  Eigen::MatrixXd w_hat(const Bits& q_vertex, const Bits& p_vertex, std::size_t q,
                        TimeParam t) const {
    require_open(t, "w_hat");
    const std::size_t n = x_->n_cubes(q);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (auto id : par_.of_degree(q)) {
      const auto& g = geoms_[id];
      const auto& k = g.cls();
      const std::size_t cq = nearest_position(*x_, q_vertex, k);
      const std::size_t cp = nearest_position(*x_, p_vertex, k);
      const Eigen::MatrixXd b = path_matrix(g, g.bfs_path(cq, cp), t);
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) m(k.basis[i], k.basis[j]) = b(i, j);
      }
    }
    return m;
  }

  // g_{C,D} = sum_E (-1)^{d(D,E)} W_t(D,E) E on the class of D, divided by t^p.
  Eigen::VectorXd g_scaled(const CubePair& pair, TimeParam t) const {
    require_open(t, "g_{C,D}");
    const auto& g = geoms_[class_of(pair.d)];
    return g_rec(g, pair.c, pair.d, t);
  }

  // t^{-p} U_t f_<C,D> in the degree basis.
  Eigen::VectorXd section_image(const BasicSection& b, TimeParam t) const {
    require_open(t, "section_image");
    const std::size_t id = class_of(b.pair.d);
    const auto& g = geoms_[id];
    Eigen::VectorXd v = g_rec(g, b.pair.c, b.pair.d, t) * static_cast<double>(b.sign);
    g.apply_path(g.bfs_path(near_[id], g.require_position(b.pair.d)), t, v);
    return embed(id, v);
  }

  Eigen::VectorXd embed(std::size_t id, const Eigen::VectorXd& v) const {
    const auto& k = par_.at(id);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x_->n_cubes(k.dim()));
    for (std::size_t i = 0; i < k.members.size(); ++i) out(k.basis[i]) = v(i);
    return out;
  }

  Eigen::VectorXd cochain_vector(const Cochain<long long>& f) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(x_->n_cubes(f.degree));
    for (const auto& [c, a] : f.terms) v(*x_->cube_index(c)) = static_cast<double>(a);
    return v;
  }

 private:
  // Recursion on the smallest complementary hyperplane.
  Eigen::VectorXd g_rec(const ClassGeometry& g, const Cube& c, const Cube& d, TimeParam t) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
    if (c.cutting == d.cutting) {
      out(g.require_position(d)) = 1.0;
      return out;
    }
    HyperplaneId h = 0;
    for (auto k : c.cutting) {
      if (!std::binary_search(d.cutting.begin(), d.cutting.end(), k)) {
        h = k;
        break;
      }
    }
    std::vector<HyperplaneId> rest;
    for (auto k : c.cutting) {
      if (k != h) rest.push_back(k);
    }
    Bits plus = c.anchor;
    plus.set(h, d.anchor.test(h));
    const Cube c_plus{plus, rest};
    const Cube c_minus{plus.flipped(h), rest};
    const Cube d_minus{d.anchor.flipped(h), d.cutting};
    const double tt = t.value();
    const double a = t.is_infinite() ? 0.0 : t.one_minus_c() / tt;
    const double b = t.is_infinite() ? 0.0 : t.s() / tt;
    return a * g_rec(g, c_plus, d, t) - b * g_rec(g, c_minus, d_minus, t);
  }

  const CubeComplex* x_;
  Parallelism par_;
  std::vector<ClassGeometry> geoms_;
  std::vector<std::size_t> near_;
};

// Integer coefficients of <f_1, f_2>_t as a polynomial in e^{-t^2/2}.
struct PairingPolynomial {
  std::vector<long long> coeff;
  std::size_t p_total = 0;

  // Coefficients in y = 1 - e^{-t^2/2}.
  std::vector<long long> in_y() const {
    std::vector<long long> b(coeff.size(), 0);
    for (std::size_t d = 0; d < coeff.size(); ++d) {
      if (coeff[d] == 0) continue;
      long long binom = 1;
      for (std::size_t k = 0; k <= d; ++k) {
        b[k] += coeff[d] * binom * ((k % 2) ? -1 : 1);
        binom = binom * static_cast<long long>(d - k) / static_cast<long long>(k + 1);
      }
    }
    return b;
  }

  // Value of t^{-p_total} times the polynomial.
  double operator()(TimeParam t) const {
    require_open(t, "pairing");
    if (t.is_infinite()) return p_total == 0 && !coeff.empty() ? static_cast<double>(coeff[0]) : 0.0;
    const double tt = t.value();
    double sum = 0.0;
    if (tt >= 1.0) {
      for (std::size_t d = 0; d < coeff.size(); ++d) sum += static_cast<double>(coeff[d]) * t.decay(d);
    } else {
      const auto b = in_y();
      const double y = t.one_minus_c();
      double yk = 1.0;
      for (std::size_t k = 0; k < b.size(); ++k) {
        sum += static_cast<double>(b[k]) * yk;
        yk *= y;
      }
    }
    return sum / std::pow(tt, static_cast<double>(p_total));
  }

  // Exact t -> 0 limit; nullopt if it diverges.
  std::optional<double> limit() const {
    const auto b = in_y();
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b[k] != 0 && 2 * k < p_total) return std::nullopt;
    }
    if (p_total % 2) return 0.0;
    const std::size_t k = p_total / 2;
    return k < b.size() ? static_cast<double>(b[k]) / std::pow(2.0, static_cast<double>(k)) : 0.0;
  }
};

inline PairingPolynomial pairing_polynomial(const BasicSection& a, const BasicSection& b) {
  PairingPolynomial poly;
  poly.p_total = a.p() + b.p();
  if (a.q() != b.q()) throw ComplexError(ComplexError::Kind::kContract, "pairing: degrees differ");
  const auto fa = basic_cochain(a);
  const auto fb = basic_cochain(b);
  for (const auto& [ca, va] : fa.terms) {
    for (const auto& [cb, vb] : fb.terms) {
      auto d = pair_distance(ca, cb);
      if (!d) continue;
      if (poly.coeff.size() <= *d) poly.coeff.resize(*d + 1, 0);
      poly.coeff[*d] += va * vb;
    }
  }
  return poly;
}

inline PSSymbol section_symbol(const SymbolTable& table, const BasicSection& b) {
  return symbol_of_pair(table, b.pair, {b.pair.d, b.sign});
}

// Inner product of the two oriented symbols.
inline double pairing_limit(const SymbolTable& table, const BasicSection& a,
                            const BasicSection& b) {
  const auto sa = section_symbol(table, a);
  const auto sb = section_symbol(table, b);
  if (sa.key() != sb.key()) return 0.0;
  return sa.sign * sb.sign;
}

struct PairingSweep {
  double limit = 0.0;
  std::vector<double> values;
};

inline PairingSweep pairing_sweep(const SymbolTable& table, const BasicSection& a,
                                  const BasicSection& b, const std::vector<TimeParam>& grid) {
  PairingSweep out;
  out.limit = pairing_limit(table, a, b);
  const auto poly = pairing_polynomial(a, b);
  for (auto t : grid) out.values.push_back(poly(t));
  return out;
}

// <d_t sigma_a(t), sigma_b(t)>_t, with a in degree q and b in degree q+1.
inline double d_t_pairing(const Field& field, const BasicSection& a, const BasicSection& b,
                          TimeParam t, bool weighted) {
  const auto& x = field.complex();
  const Eigen::MatrixXd dw = d_matrix(x, a.q(), field.weight(t, weighted));
  return (dw * field.section_image(a, t)).dot(field.section_image(b, t));
}

inline double d_t_pairing_limit(const SymbolTable& table, const BasicSection& a,
                                const BasicSection& b) {
  const auto image = ps_d(table, SymbolCochain::of(section_symbol(table, a)));
  const auto sb = section_symbol(table, b);
  auto it = image.terms.find(sb.key());
  return it == image.terms.end() ? 0.0 : static_cast<double>(it->second * sb.sign);
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// max_q || W^(Q,P) d_{P,w_t} - d_{Q,w_t} W^(Q,P) ||_2 for adjacent P, Q.
inline double basepoint_commutator_norm(const Field& field, const Bits& p, const Bits& q,
                                        TimeParam t) {
  const auto& x = field.complex();
  if (hamming(p, q) > 1 || !x.contains(p) || !x.contains(q)) {
    throw ComplexError(ComplexError::Kind::kContract, "basepoint_commutator_norm: need adjacent vertices");
  }
  const CubeComplex xp = x.with_base(p);
  const CubeComplex xq = x.with_base(q);
  const WeightFunction wp = distance_weight(xp, t.value());
  const WeightFunction wq = distance_weight(xq, t.value());
  double best = 0.0;
  Eigen::MatrixXd w_lo = field.w_hat(q, p, 0, t);
  for (std::size_t k = 0; k < x.dimension(); ++k) {
    const Eigen::MatrixXd w_hi = field.w_hat(q, p, k + 1, t);
    const Eigen::MatrixXd comm = w_hi * d_matrix(xp, k, wp) - d_matrix(xq, k, wq) * w_lo;
    best = std::max(best, spectral_norm(comm));
    w_lo = w_hi;
  }
  return best;
}

}  // namespace cubefield

#endif  // CUBEFIELD_DEFORMATION_HPP_
