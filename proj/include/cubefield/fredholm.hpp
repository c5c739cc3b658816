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

#ifndef CUBEFIELD_FREDHOLM_HPP_
#define CUBEFIELD_FREDHOLM_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cubefield/complex.hpp"
#include "cubefield/deformation.hpp"
#include "cubefield/jv.hpp"

namespace cubefield {

class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min_(sigma_min) {}
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

// Operator on the graded space; degree q occupies [offset[q], offset[q+1]).
struct AssembledOperator {
  Eigen::MatrixXd matrix;
  std::vector<Eigen::Index> offset;

  std::size_t top_degree() const { return offset.size() - 2; }
  Eigen::Index size() const { return offset.back(); }
  Eigen::Index begin(std::size_t q) const { return offset[q]; }
  Eigen::Index dim(std::size_t q) const { return offset[q + 1] - offset[q]; }

  Eigen::MatrixXd block(std::size_t to, std::size_t from) const {
    return matrix.block(begin(to), begin(from), dim(to), dim(from));
  }
  // Degree-raising part only.
  Eigen::MatrixXd raising() const {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(size(), size());
    for (std::size_t q = 0; q < top_degree(); ++q) {
      r.block(begin(q + 1), begin(q), dim(q + 1), dim(q)) = block(q + 1, q);
    }
    return r;
  }
};

inline std::vector<Eigen::Index> graded_offsets(const CubeComplex& x) {
  std::vector<Eigen::Index> off{0};
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    off.push_back(off.back() + static_cast<Eigen::Index>(x.n_cubes(q)));
  }
  return off;
}

inline AssembledOperator assemble_blocks(const CubeComplex& x,
                                         const std::vector<Eigen::MatrixXd>& up,
                                         const std::vector<Eigen::MatrixXd>& down) {
  AssembledOperator a;
  a.offset = graded_offsets(x);
  a.matrix = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (std::size_t q = 0; q < x.dimension(); ++q) {
    a.matrix.block(a.begin(q + 1), a.begin(q), a.dim(q + 1), a.dim(q)) = up[q];
    a.matrix.block(a.begin(q), a.begin(q + 1), a.dim(q), a.dim(q + 1)) = down[q + 1];
  }
  return a;
}

// D = d_w + delta_w.
inline AssembledOperator assemble_D(const CubeComplex& x, const WeightFunction& w) {
  std::vector<Eigen::MatrixXd> up, down;
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    up.push_back(d_matrix(x, q, w));
    down.push_back(delta_matrix(x, q, w));
  }
  return assemble_blocks(x, up, down);
}

inline Eigen::Index base_index(const CubeComplex& x) {
  return static_cast<Eigen::Index>(*x.cube_index(Cube{x.base(), {}}));
}

// Orthogonal projection onto <P_0>.
inline Eigen::MatrixXd projection_p(const CubeComplex& x) {
  const auto off = graded_offsets(x);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(off.back(), off.back());
  const Eigen::Index i = base_index(x);
  p(i, i) = 1.0;
  return p;
}

inline Eigen::MatrixXcd resolvent(const Eigen::MatrixXd& a, std::complex<double> z) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd m = a.cast<std::complex<double>>();
  m.diagonal().array() += z;
  if (n == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(m.adjoint() * m),
                                                     Eigen::EigenvaluesOnly);
  const double smax = std::sqrt(std::max(0.0, es.eigenvalues()(n - 1)));
  const double smin = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
  if (!(smin > 1e-7 * std::max(1.0, smax))) {
    std::ostringstream os;
    os << "resolvent: singular operator, smallest singular value " << smin;
    throw SpectralError(os.str(), smin);
  }
  return m.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(m.adjoint() * m),
                                                     Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

// ||(D + P + i lambda)^{-1}||_2 for symmetric D and P.
inline double shifted_resolvent_norm(const Eigen::MatrixXd& d, const Eigen::MatrixXd& p,
                                     double lambda) {
  return spectral_norm(resolvent(d + p, {0.0, lambda}));
}

// f(T) for symmetric T by eigendecomposition.
template <class F>
Eigen::MatrixXd spectral_apply(const Eigen::MatrixXd& t, F f) {
  if (t.size() == 0) return t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd v = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().transpose();
}

inline Eigen::MatrixXd inv_sqrt_spectral(const Eigen::MatrixXd& t) {
  return spectral_apply(t, [](double l) { return 1.0 / std::sqrt(l); });
}

// d' = d (I + Delta)^{-1/2}.
inline Eigen::MatrixXd normalized_d(const AssembledOperator& d) {
  const Eigen::Index n = d.size();
  const Eigen::MatrixXd lap = d.matrix * d.matrix;
  return d.raising() * inv_sqrt_spectral(Eigen::MatrixXd::Identity(n, n) + lap);
}

inline Eigen::MatrixXd normalized_d(const CubeComplex& x, const WeightFunction& w) {
  return normalized_d(assemble_D(x, w));
}

// || d'd'^T + d'^T d' - (I - (I + D^2)^{-1}) ||_2
inline double fredholm_residual(const AssembledOperator& d) {
  const Eigen::Index n = d.size();
  const Eigen::MatrixXd np = normalized_d(d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd rhs = id - (id + d.matrix * d.matrix).inverse();
  return spectral_norm(Eigen::MatrixXd(np * np.transpose() + np.transpose() * np - rhs));
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch on [0,1].
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  QuadratureRule r;
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    r.nodes.push_back(0.5 * (es.eigenvalues()(k) + 1.0));
    r.weights.push_back(v0 * v0);
  }
  return r;
}

// (2/pi) int_0^inf (lambda^2 + T)^{-1} dlambda, lambda = u/(1-u).
inline Eigen::MatrixXd inv_sqrt_baaj_julg(const Eigen::MatrixXd& t, int nodes = 200) {
  const Eigen::Index n = t.rows();
  if (n == 0) return t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < 1.0 - 1e-12) {
    std::ostringstream os;
    os << "inv_sqrt_baaj_julg: minimum eigenvalue " << es.eigenvalues()(0) << " below 1";
    throw SpectralError(os.str(), es.eigenvalues()(0));
  }
  const auto rule = gauss_legendre(nodes);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = rule.nodes[k];
    const double lam = u / (1.0 - u);
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    Eigen::MatrixXd m = t;
    m.diagonal().array() += lam * lam;
    acc += (rule.weights[k] * jac) * m.llt().solve(id);
  }
  return (2.0 / std::numbers::pi) * acc;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
  const double r = spectral_norm(ref);
  return r == 0.0 ? spectral_norm(a) : spectral_norm(Eigen::MatrixXd(a - ref)) / r;
}

// One t-cell of the field. U_t is an isometry from l^2_t onto l^2, so the
// tilde matrices (M -> U M U^{-1}) carry l^2_t norms as plain 2-norms.
struct FieldCell {
  TimeParam t;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd u;
  AssembledOperator d;        // D_t on the cube basis
  AssembledOperator d_tilde;  // d_{w_t} + delta_{w_t}
  Eigen::MatrixXd p;          // P_t
  Eigen::MatrixXd p_tilde;
  Eigen::MatrixXd f_tilde;

  Eigen::MatrixXd to_tilde(const Eigen::MatrixXd& m) const {
    return u.transpose().partialPivLu().solve(Eigen::MatrixXd((u * m).transpose())).transpose();
  }
  Eigen::MatrixXd from_tilde(const Eigen::MatrixXd& m) const {
    return u.partialPivLu().solve(Eigen::MatrixXd(m * u));
  }
  // F_t on the cube basis
  Eigen::MatrixXd f() const { return from_tilde(f_tilde); }
  Eigen::MatrixXd d_prime_tilde() const { return AssembledOperator{f_tilde, d.offset}.raising(); }
  Eigen::MatrixXd d_prime() const { return from_tilde(d_prime_tilde()); }
  // G^{-1} M^T G
  Eigen::MatrixXd adjoint(const Eigen::MatrixXd& m) const {
    return gram.llt().solve(Eigen::MatrixXd(m.transpose() * gram));
  }
};

inline Eigen::MatrixXd graded_blocks(const CubeComplex& x,
                                     const std::vector<Eigen::MatrixXd>& blocks) {
  const auto off = graded_offsets(x);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(off.back(), off.back());
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    g.block(off[q], off[q], off[q + 1] - off[q], off[q + 1] - off[q]) = blocks[q];
  }
  return g;
}

inline FieldCell field_cell(const Field& field, TimeParam t, bool weighted) {
  require_open(t, "field_cell");
  const auto& x = field.complex();
  FieldCell c;
  c.t = t;
  std::vector<Eigen::MatrixXd> gs, us, up, down;
  for (std::size_t q = 0; q <= x.dimension(); ++q) {
    gs.push_back(field.gram(q, t));
    us.push_back(field.u(q, t));
    up.push_back(field.d_t(q, t, weighted));
    down.push_back(field.delta_t(q, t, weighted));
  }
  c.gram = graded_blocks(x, gs);
  c.u = graded_blocks(x, us);
  c.d = assemble_blocks(x, up, down);
  c.d_tilde = assemble_D(x, field.weight(t, weighted));
  const Eigen::Index b = base_index(x);
  c.p = Eigen::MatrixXd::Zero(c.d.size(), c.d.size());
  c.p.row(b) = c.gram.row(b) / c.gram(b, b);
  c.p_tilde = projection_p(x);
  const Eigen::MatrixXd& dm = c.d_tilde.matrix;
  c.f_tilde = dm * inv_sqrt_spectral(Eigen::MatrixXd(c.p_tilde + dm * dm));
  return c;
}

// || h d' + d' h - (I - P (P + Delta)^{-1}) || on l^2_t, h the adjoint of d'.
inline double homotopy_residual(const FieldCell& c) {
  const Eigen::Index n = c.d.size();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd dp = c.d_prime_tilde();
  const Eigen::MatrixXd h = dp.transpose();
  const Eigen::MatrixXd& dm = c.d_tilde.matrix;
  const Eigen::MatrixXd rhs = id - c.p_tilde * (c.p_tilde + dm * dm).inverse();
  return spectral_norm(Eigen::MatrixXd(h * dp + dp * h - rhs));
}

// ||U M - M~ U|| / (||U|| ||M||): how well a cube-basis operator matches its tilde.
inline double intertwining_defect(const FieldCell& c, const Eigen::MatrixXd& m,
                                  const Eigen::MatrixXd& m_tilde) {
  const double scale = spectral_norm(c.u) * std::max(spectral_norm(m), spectral_norm(m_tilde));
  if (scale == 0.0) return 0.0;
  return spectral_norm(Eigen::MatrixXd(c.u * m - m_tilde * c.u)) / scale;
}

// ||G M - M^T G|| / (||G|| ||M||)
inline double gram_adjoint_defect(const FieldCell& c, const Eigen::MatrixXd& m) {
  const double scale = spectral_norm(c.gram) * spectral_norm(m);
  if (scale == 0.0) return 0.0;
  return spectral_norm(Eigen::MatrixXd(c.gram * m - m.transpose() * c.gram)) / scale;
}

inline double resolvent_norm(const FieldCell& c, double lambda) {
  return shifted_resolvent_norm(c.d_tilde.matrix, c.p_tilde, lambda);
}

inline std::vector<FieldCell> f_t_family(const Field& field, const std::vector<TimeParam>& grid,
                                         bool weighted) {
  std::vector<FieldCell> out;
  for (auto t : grid) out.push_back(field_cell(field, t, weighted));
  return out;
}

struct DecaySweep {
  std::vector<double> norms;
  double slope = 0.0;  // least squares in log-log over finite t with nonzero norm
};

inline DecaySweep basepoint_decay_sweep(const Field& field, const Bits& p, const Bits& q,
                                        const std::vector<TimeParam>& grid) {
  DecaySweep s;
  std::vector<std::pair<double, double>> pts;
  for (auto t : grid) {
    s.norms.push_back(basepoint_commutator_norm(field, p, q, t));
    if (!t.is_infinite() && s.norms.back() > 0.0) {
      pts.emplace_back(std::log(t.value()), std::log(s.norms.back()));
    }
  }
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [a, b] : pts) mx += a, my += b;
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (auto [a, b] : pts) sxy += (a - mx) * (b - my), sxx += (a - mx) * (a - mx);
    s.slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  return s;
}

struct FredholmCellReport {
  TimeParam t;
  double fredholm_residual = 0.0;
  double homotopy_residual = 0.0;
  std::vector<double> resolvent_bounds;  // lambda = 0, 1, 10
  std::vector<double> basepoint_norms;   // per edge at the base vertex
  std::vector<double> spectra;           // eigenvalues of Delta_t
};

inline const std::vector<double>& report_lambdas() {
  static const std::vector<double> kL{0.0, 1.0, 10.0};
  return kL;
}

inline FredholmCellReport fredholm_cell_report(const Field& field, TimeParam t, bool weighted) {
  const auto& x = field.complex();
  const FieldCell c = field_cell(field, t, weighted);
  FredholmCellReport r;
  r.t = t;
  r.fredholm_residual = fredholm_residual(assemble_D(x, field.weight(t, weighted)));
  r.homotopy_residual = homotopy_residual(c);
  for (double l : report_lambdas()) r.resolvent_bounds.push_back(resolvent_norm(c, l));
  for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
    Bits q = x.base();
    q.flip(h);
    if (x.contains(q)) r.basepoint_norms.push_back(basepoint_commutator_norm(field, x.base(), q, t));
  }
  const Eigen::MatrixXd& ds = c.d_tilde.matrix;
  if (ds.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(ds * ds),
                                                      Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      r.spectra.push_back(es.eigenvalues()(i));
    }
  }
  return r;
}

}  // namespace cubefield

#endif  // CUBEFIELD_FREDHOLM_HPP_
