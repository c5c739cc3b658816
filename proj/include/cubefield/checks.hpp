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

#ifndef CUBEFIELD_CHECKS_HPP_
#define CUBEFIELD_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Dense>

#include "cubefield/complex.hpp"
#include "cubefield/deformation.hpp"
#include "cubefield/fredholm.hpp"
#include "cubefield/jv.hpp"
#include "cubefield/parallelism.hpp"
#include "cubefield/ps.hpp"

namespace cubefield {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::vector<double> values;
};

class Tolerances {
 public:
  void set(const std::string& name, double v) { named_[name] = v; }
  void set_all(double v) { all_ = v; }
  // name=value, or a bare value applied to every check
  void parse(const std::string& text) {
    const auto eq = text.find('=');
    std::size_t used = 0;
    const std::string num = eq == std::string::npos ? text : text.substr(eq + 1);
    double v = 0;
    try {
      v = std::stod(num, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad tolerance '" + text + "'");
    }
    if (used != num.size() || !(v >= 0)) throw std::invalid_argument("bad tolerance '" + text + "'");
    if (eq == std::string::npos) {
      set_all(v);
    } else {
      set(text.substr(0, eq), v);
    }
  }
  // A bare value only replaces floating-point thresholds.
  double get(const std::string& name, double fallback, bool numeric) const {
    if (auto it = named_.find(name); it != named_.end()) return it->second;
    return all_ && numeric ? *all_ : fallback;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : named_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, double> named_;
  std::optional<double> all_;
};

inline double max_abs_entry(const Eigen::MatrixXd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// Largest dev(t)/(2 C t + 1e-12) over t in {0.01, 0.001}, C = |dev(0.1)|/0.1.
inline double linear_rate_ratio(const std::function<double(double)>& dev) {
  const double c = std::abs(dev(0.1)) / 0.1;
  double worst = 0.0;
  for (double t : {0.01, 0.001}) worst = std::max(worst, std::abs(dev(t)) / (2.0 * c * t + 1e-12));
  return worst;
}

namespace detail {

class Recorder {
 public:
  explicit Recorder(const Tolerances& tol) : tol_(&tol) {}
  CheckResult& add(const std::string& name, double residual, double fallback,
                   bool numeric = true) {
    CheckResult r;
    r.name = name;
    r.residual = residual;
    r.threshold = tol_->get(name, fallback, numeric && fallback > 0.0);
    r.pass = std::isfinite(residual) && residual <= r.threshold;
    out_.push_back(r);
    return out_.back();
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  const Tolerances* tol_;
  std::vector<CheckResult> out_;
};

inline std::vector<TimeParam> standard_grid() {
  return {0.1, 0.5, 1.0, 2.0, TimeParam::infinity()};
}

}  // namespace detail

inline std::vector<CheckResult> check_jv(const CubeComplex& x, const Tolerances& tol) {
  detail::Recorder rec(tol);
  const std::size_t top = x.dimension();
  const WeightFunction w = distance_weight(x, 1.0);
  long long dd = 0, ee = 0, anti = 0, mixed = 0, lap = 0, adj = 0;
  double dd_w = 0, lap_w = 0;
  for (std::size_t q = 0; q <= top; ++q) {
    const IntMatrix d0 = d_matrix(x, q);
    if (q + 1 <= top) {
      const IntMatrix z = d_matrix(x, q + 1) * d0;
      for (std::size_t j = 0; j < z.cols(); ++j)
        for (const auto& [i, v] : z.column(j)) dd = std::max(dd, std::abs(v));
      const double s = std::max(1.0, max_abs_entry(d_matrix(x, q, w)));
      dd_w = std::max(dd_w, max_abs_entry(d_matrix(x, q + 1, w) * d_matrix(x, q, w)) / (s * s));
    }
    if (q >= 2) {
      const IntMatrix z = delta_matrix(x, q - 1) * delta_matrix(x, q);
      for (std::size_t j = 0; j < z.cols(); ++j)
        for (const auto& [i, v] : z.column(j)) ee = std::max(ee, std::abs(v));
    }
    const Eigen::MatrixXd dt = d_matrix(x, q).to_dense();
    const Eigen::MatrixXd et = delta_matrix(x, q + 1).to_dense();
    adj = std::max(adj, static_cast<long long>(max_abs_entry(et - dt.transpose())));
    for (HyperplaneId a = 0; a < x.n_hyperplanes(); ++a) {
      for (HyperplaneId b = 0; b < x.n_hyperplanes(); ++b) {
        if (a == b) continue;
        if (q + 2 <= top) {
          const IntMatrix l = wedge_matrix(x, a, q + 1) * wedge_matrix(x, b, q);
          const IntMatrix r = wedge_matrix(x, b, q + 1) * wedge_matrix(x, a, q);
          anti = std::max(anti, static_cast<long long>(max_abs_entry((l.to_dense() + r.to_dense()))));
        }
        if (q + 1 <= top) {
          const IntMatrix l = hook_matrix(x, a, q + 1) * wedge_matrix(x, b, q);
          const Eigen::MatrixXd rd =
              q > 0 ? (wedge_matrix(x, b, q - 1) * hook_matrix(x, a, q)).to_dense()
                    : Eigen::MatrixXd::Zero(l.rows(), l.cols());
          mixed = std::max(mixed, static_cast<long long>(max_abs_entry(l.to_dense() + rd)));
        }
      }
    }
    const IntMatrix lq = laplacian_matrix(x, q);
    const Eigen::MatrixXd lw = laplacian_matrix(x, q, w);
    for (std::size_t j = 0; j < x.n_cubes(q); ++j) {
      const auto sp = spectral_profile(x, x.cubes(q)[j], w);
      for (const auto& [i, v] : lq.column(j)) {
        const long long want = i == j ? static_cast<long long>(q + sp.p) : 0;
        lap = std::max(lap, std::abs(v - want));
      }
      if (lq.at(j, j) == 0 && q + sp.p != 0) lap = std::max<long long>(lap, q + sp.p);
      const double scale = std::max(1.0, sp.q_w + sp.p_w);
      for (std::size_t i = 0; i < x.n_cubes(q); ++i) {
        const double want = i == j ? sp.q_w + sp.p_w : 0.0;
        lap_w = std::max(lap_w, std::abs(lw(i, j) - want) / scale);
      }
    }
  }
  rec.add("d_squared", static_cast<double>(dd), 0.0);
  rec.add("delta_squared", static_cast<double>(ee), 0.0);
  rec.add("d_squared_weighted", dd_w, 1e-12);
  rec.add("wedge_antisymmetry", static_cast<double>(anti), 0.0);
  rec.add("wedge_hook_anticommute", static_cast<double>(mixed), 0.0);
  rec.add("laplacian_diagonal", static_cast<double>(lap), 0.0);
  rec.add("laplacian_weighted", lap_w, 1e-12);
  rec.add("adjointness", static_cast<double>(adj), 0.0);
  const auto ranks = cohomology_ranks(x, WeightFunction::unit(x.n_hyperplanes()));
  double dev = std::abs(static_cast<double>(ranks.at(0)) - 1.0);
  for (std::size_t q = 1; q < ranks.size(); ++q) dev += static_cast<double>(ranks[q]);
  auto& c = rec.add("cohomology_ranks", dev, 0.0);
  for (auto r : ranks) c.values.push_back(static_cast<double>(r));
  return rec.take();
}

inline std::vector<CheckResult> check_parallel(const CubeComplex& x, const Tolerances& tol) {
  detail::Recorder rec(tol);
  const Parallelism par(x);
  const auto [nv, nc] = class_count_theorem(x, par);
  auto& c = rec.add("class_count", std::abs(double(nv) - double(nc)), 0.0);
  c.values = {double(nv), double(nc)};
  double bij = 0.0;
  try {
    vertex_to_class_bijection(x, par);
  } catch (const std::logic_error&) {
    bij = 1.0;
  }
  rec.add("vertex_to_class_bijection", bij, 0.0);
  // exhaustive scan for ties in the nearest member
  double ties = 0.0, additive = 0.0;
  for (const auto& k : par.classes()) {
    for (const auto& v : x.vertices()) {
      std::size_t best = SIZE_MAX, count = 0;
      for (const auto& m : k.members) {
        const std::size_t dv = cube_distance(m, v);
        if (dv < best) best = dv, count = 1;
        else if (dv == best) ++count;
      }
      if (count != 1) ties += 1.0;
      const Cube near = nearest_in_class(x, v, k);
      for (const auto& m : k.members) {
        const double lhs = double(cube_distance(m, v));
        const double rhs = double(*pair_distance(m, near) + cube_distance(near, v));
        additive = std::max(additive, std::abs(lhs - rhs));
      }
    }
  }
  rec.add("nearest_unique", ties, 0.0);
  rec.add("nearest_additive", additive, 0.0);
  double tri = 0.0;
  for (const auto& k : par.classes()) {
    if (k.members.size() > 20) continue;
    for (const auto& a : k.members)
      for (const auto& b : k.members)
        for (const auto& m : k.members) {
          const double ab = double(*pair_distance(a, b));
          const double bound = double(*pair_distance(a, m) + *pair_distance(m, b));
          tri = std::max(tri, ab - bound);
        }
  }
  rec.add("pair_distance_triangle", std::max(0.0, tri), 0.0);
  return rec.take();
}

inline std::vector<CheckResult> check_ps(const CubeComplex& x, const Tolerances& tol) {
  using Rational = boost::rational<long long>;
  detail::Recorder rec(tol);
  const SymbolTable t(x);
  const std::size_t top = t.top_degree();
  long long dd = 0, ee = 0, lap = 0;
  for (std::size_t q = 0; q + 1 <= top; ++q) {
    const IntMatrix z = ps_d_matrix(t, q + 1) * ps_d_matrix(t, q);
    for (std::size_t j = 0; j < z.cols(); ++j)
      for (const auto& [i, v] : z.column(j)) dd = std::max(dd, std::abs(v));
  }
  for (std::size_t q = 2; q <= top; ++q) {
    const IntMatrix z = ps_delta_matrix(t, q - 1) * ps_delta_matrix(t, q);
    for (std::size_t j = 0; j < z.cols(); ++j)
      for (const auto& [i, v] : z.column(j)) ee = std::max(ee, std::abs(v));
  }
  for (std::size_t q = 0; q <= top; ++q) {
    const IntMatrix l = ps_laplacian(t, q);
    for (std::size_t j = 0; j < t.size(q); ++j) {
      const long long want = static_cast<long long>(t.key(q, j).p() + q);
      if (l.at(j, j) != want) lap = std::max(lap, std::abs(l.at(j, j) - want));
      for (const auto& [i, v] : l.column(j))
        if (i != j) lap = std::max(lap, std::abs(v));
    }
  }
  rec.add("ps_d_squared", double(dd), 0.0);
  rec.add("ps_delta_squared", double(ee), 0.0);
  rec.add("ps_laplacian_scalar", double(lap), 0.0);

  // h_q = delta / (p+q), zero on (0,0); residual of h d + d h - (I - proj) in exact arithmetic
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Rational>> h(top + 2);
  for (std::size_t q = 1; q <= top; ++q) {
    const auto dl = ps_delta_matrix(t, q);
    for (std::size_t j = 0; j < t.size(q); ++j) {
      const long long w = static_cast<long long>(t.key(q, j).p() + q);
      for (const auto& [i, v] : dl.column(j)) h[q][{i, j}] += Rational(v, w);
    }
  }
  Rational worst(0);
  const std::size_t i00 = *t.index_of(SymbolKey{{}, {}});
  for (std::size_t q = 0; q <= top; ++q) {
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    if (q + 1 <= top) {
      const auto dq = ps_d_matrix(t, q);
      for (std::size_t j = 0; j < dq.cols(); ++j)
        for (const auto& [k, v] : dq.column(j))
          for (const auto& [ij, hv] : h[q + 1])
            if (ij.second == k) acc[{ij.first, j}] += hv * Rational(v);
    }
    if (q >= 1) {
      const auto dm = ps_d_matrix(t, q - 1);
      for (const auto& [kj, hv] : h[q])
        for (const auto& [i, v] : dm.column(kj.first)) acc[{i, kj.second}] += Rational(v) * hv;
    }
    for (std::size_t j = 0; j < t.size(q); ++j) acc[{j, j}] -= Rational(q == 0 && j == i00 ? 0 : 1);
    for (const auto& [ij, v] : acc) worst = std::max(worst, v < Rational(0) ? -v : v);
  }
  rec.add("ps_homotopy", boost::rational_cast<double>(worst), 0.0);

  // every raw presentation canonicalizes to the same key and vertex, idempotently
  double pres = 0.0;
  for (std::size_t q = 0; q <= top; ++q) {
    for (const auto& key : t.keys(q)) {
      std::vector<HyperplaneId> all = key.h;
      all.insert(all.end(), key.k.begin(), key.k.end());
      std::vector<Bits> adj;
      for (const auto& v : x.vertices()) {
        bool ok = true;
        for (auto g : all) ok = ok && x.adjacent_vertex(v, g);
        if (ok) adj.push_back(v);
      }
      std::vector<HyperplaneId> perm = key.k;
      do {
        for (const auto& r : adj) {
          for (int vs : {1, -1}) {
            if (q > 0 && vs < 0) continue;
            const auto c = symbol_from_raw(t, key.h, perm, r, vs);
            const auto again = symbol_from_raw(t, c.h_set, c.k_list, c.r_canonical, c.sign);
            const bool same = q == 0 ? again == c : again.sign == 1;
            if (!(c.key() == key) || c.r_canonical != t.r_canonical(key) || !same) pres += 1.0;
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  rec.add("presentation_independence", pres, 0.0);
  std::size_t pair_classes = 0;
  {
    std::set<std::pair<std::vector<HyperplaneId>, std::vector<HyperplaneId>>> seen;
    for (const auto& p : cube_pairs(x)) seen.insert({p.complementary, p.d.cutting});
    pair_classes = seen.size();
  }
  auto& cnt = rec.add("symbol_count", std::abs(double(t.total()) - double(pair_classes)), 0.0);
  cnt.values = {double(t.total()), double(pair_classes)};
  const auto ranks = ps_cohomology_ranks(t);
  double dev = std::abs(double(ranks.at(0)) - 1.0);
  for (std::size_t q = 1; q < ranks.size(); ++q) dev += double(ranks[q]);
  auto& c = rec.add("ps_cohomology_ranks", dev, 0.0);
  for (auto r : ranks) c.values.push_back(double(r));
  return rec.take();
}

inline std::vector<CheckResult> check_field(const CubeComplex& x, const Tolerances& tol) {
  detail::Recorder rec(tol);
  const Field f(x);
  const SymbolTable table(x);
  double psd = 0.0, bridge = 0.0, loops = 0.0;
  for (auto t : detail::standard_grid()) {
    for (std::size_t q = 0; q <= x.dimension(); ++q) {
      const Eigen::MatrixXd g = f.gram(q, t);
      if (g.size() == 0) continue;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
      psd = std::max(psd, -es.eigenvalues()(0));
      const Eigen::MatrixXd u = f.u(q, t);
      bridge = std::max(bridge, max_abs_entry(u.transpose() * u - g));
    }
  }
  rec.add("gram_psd", std::max(0.0, psd), 1e-10);
  rec.add("unitarity_bridge", bridge, 1e-9);
  std::mt19937_64 rng(20260);
  for (std::size_t id = 0; id < f.parallelism().classes().size(); ++id) {
    const auto& g = f.geometry(id);
    if (g.size() < 2) continue;
    for (int loop = 0; loop < 20; ++loop) {
      const std::size_t start = rng() % g.size();
      std::vector<std::size_t> path{start};
      const std::size_t len = 1 + rng() % 8;
      for (std::size_t s = 0; s < len; ++s) {
        std::vector<std::size_t> nb;
        for (auto h : g.free_hyperplanes())
          if (auto a = g.across(path.back(), h)) nb.push_back(*a);
        if (nb.empty()) break;
        path.push_back(nb[rng() % nb.size()]);
      }
      const auto back = g.bfs_path(path.back(), start);
      path.insert(path.end(), back.begin() + 1, back.end());
      for (auto t : {TimeParam(0.3), TimeParam(1.0)}) {
        const auto n = static_cast<Eigen::Index>(g.size());
        loops = std::max(loops, spectral_norm(Eigen::MatrixXd(Field::path_matrix(g, path, t) -
                                                              Eigen::MatrixXd::Identity(n, n))));
      }
    }
  }
  rec.add("loop_triviality", loops, 1e-10);
  double lead = 0.0, pairing = 0.0, dt = 0.0;
  for (const auto& p : cube_pairs(x)) {
    const auto& g = f.geometry(f.class_of(p.d));
    Eigen::VectorXd want = Eigen::VectorXd::Zero(g.size());
    want(g.require_position(opposite_face(p))) = (p.p() % 2) ? -1.0 : 1.0;
    lead = std::max(lead, linear_rate_ratio([&](double t) {
                      return (f.g_scaled(p, t) - want).cwiseAbs().maxCoeff();
                    }));
  }
  rec.add("leading_term_rate", lead, 1.0, false);
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    const auto frame = basic_frame(x, q);
    for (const auto& a : frame)
      for (const auto& b : frame) {
        const auto poly = pairing_polynomial(a, b);
        const double lim = pairing_limit(table, a, b);
        pairing = std::max(pairing, linear_rate_ratio([&](double t) { return poly(t) - lim; }));
      }
    if (q + 1 > x.dimension()) continue;
    const auto hi = basic_frame(x, q + 1);
    for (const auto& a : frame)
      for (const auto& b : hi) {
        const double lim = d_t_pairing_limit(table, a, b);
        for (bool weighted : {false, true}) {
          dt = std::max(dt, linear_rate_ratio([&](double t) {
                          return d_t_pairing(f, a, b, t, weighted) - lim;
                        }));
        }
      }
  }
  rec.add("pairing_continuity", pairing, 1.0, false);
  rec.add("d_t_continuity", dt, 1.0, false);
  return rec.take();
}

inline std::vector<CheckResult> check_fredholm(const CubeComplex& x, const Tolerances& tol) {
  detail::Recorder rec(tol);
  const Field f(x);
  double lap = 0.0, fred = 0.0, bj = 0.0, hom = 0.0, res = 0.0, fnorm = 0.0, dsq = 0.0;
  {
    const auto d = assemble_D(x, WeightFunction::unit(x.n_hyperplanes()));
    Eigen::MatrixXd l = d.matrix * d.matrix;
    for (std::size_t q = 0; q <= x.dimension(); ++q)
      for (std::size_t i = 0; i < x.n_cubes(q); ++i) {
        const auto sp = spectral_profile(x, x.cubes(q)[i], WeightFunction::unit(x.n_hyperplanes()));
        l(d.begin(q) + i, d.begin(q) + i) -= double(q + sp.p);
      }
    lap = max_abs_entry(l);
  }
  for (double t : {0.1, 1.0}) {
    const auto d = assemble_D(x, distance_weight(x, t));
    const Eigen::MatrixXd np = normalized_d(d);
    dsq = std::max(dsq, spectral_norm(Eigen::MatrixXd(np * np)));
    fred = std::max(fred, fredholm_residual(d));
    const Eigen::MatrixXd tt = Eigen::MatrixXd::Identity(d.size(), d.size()) + d.matrix * d.matrix;
    bj = std::max(bj, relative_error(inv_sqrt_baaj_julg(tt, 200), inv_sqrt_spectral(tt)));
  }
  for (auto t : {TimeParam(0.1), TimeParam(1.0), TimeParam::infinity()}) {
    for (bool weighted : {false, true}) {
      const auto c = field_cell(f, t, weighted);
      hom = std::max(hom, homotopy_residual(c));
      fnorm = std::max(fnorm, spectral_norm(c.f_tilde) - 1.0);
      for (double l : report_lambdas()) {
        res = std::max(res, resolvent_norm(c, l) - 1.0 / std::sqrt(1.0 + l * l));
      }
    }
  }
  rec.add("laplacian_diagonal", lap, 0.0);
  rec.add("normalized_d_squared", dsq, 1e-12);
  rec.add("fredholm_identity", fred, 1e-9);
  rec.add("baaj_julg", bj, 1e-6);
  rec.add("homotopy_identity", hom, 1e-8);
  rec.add("f_norm_excess", std::max(0.0, fnorm), 1e-12);
  rec.add("resolvent_bound_excess", std::max(0.0, res), 1e-12);
  double ratio = 0.0;
  for (const auto& e : x.cubes(1)) {
    const auto s = basepoint_decay_sweep(f, e.vertex(0), e.vertex(1), {1e-3, 1.0});
    if (s.norms[1] > 0) ratio = std::max(ratio, s.norms[0] / s.norms[1]);
  }
  rec.add("basepoint_decay_ratio", ratio, 0.05, false);
  return rec.take();
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames{"jv", "ps", "parallel", "field", "fredholm"};
  return kNames;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, const CubeComplex& x,
                                          const Tolerances& tol) {
  if (suite == "jv") return check_jv(x, tol);
  if (suite == "ps") return check_ps(x, tol);
  if (suite == "parallel") return check_parallel(x, tol);
  if (suite == "field") return check_field(x, tol);
  if (suite == "fredholm") return check_fredholm(x, tol);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace cubefield

#endif  // CUBEFIELD_CHECKS_HPP_
