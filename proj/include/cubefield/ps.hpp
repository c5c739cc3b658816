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

#ifndef CUBEFIELD_PS_HPP_
#define CUBEFIELD_PS_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cubefield/complex.hpp"
#include "cubefield/jv.hpp"
#include "cubefield/parallelism.hpp"
#include "cubefield/sparse.hpp"

namespace cubefield {

struct CubePair {
  Cube c;
  Cube d;
  std::vector<HyperplaneId> complementary;

  CubePair(Cube big, Cube face) : c(std::move(big)), d(std::move(face)) {
    if (!std::includes(c.cutting.begin(), c.cutting.end(), d.cutting.begin(), d.cutting.end())) {
      throw ComplexError(ComplexError::Kind::kContract, "CubePair: D is not a face of C");
    }
    const Bits outside = ~c.mask();
    if ((c.anchor & outside) != (d.anchor & outside)) {
      throw ComplexError(ComplexError::Kind::kContract, "CubePair: D is not a face of C");
    }
    std::set_difference(c.cutting.begin(), c.cutting.end(), d.cutting.begin(), d.cutting.end(),
                        std::back_inserter(complementary));
  }
  std::size_t p() const { return complementary.size(); }
  std::size_t q() const { return d.dim(); }
};

// Unsigned symbol identity.
struct SymbolKey {
  std::vector<HyperplaneId> h;
  std::vector<HyperplaneId> k;

  std::size_t p() const { return h.size(); }
  std::size_t q() const { return k.size(); }
  friend auto operator<=>(const SymbolKey& a, const SymbolKey& b) {
    if (a.h.size() != b.h.size()) return a.h.size() <=> b.h.size();
    if (auto c = a.h <=> b.h; c != 0) return c;
    return a.k <=> b.k;
  }
  friend bool operator==(const SymbolKey&, const SymbolKey&) = default;
};

struct PSSymbol {
  std::vector<HyperplaneId> h_set;
  std::vector<HyperplaneId> k_list;
  Bits r_canonical;
  int sign = 1;

  SymbolKey key() const { return {h_set, k_list}; }
  PSSymbol reversed() const { return {h_set, k_list, r_canonical, -sign}; }
  friend bool operator==(const PSSymbol&, const PSSymbol&) = default;
};

inline std::string to_string(const PSSymbol& s) {
  auto list = [](const std::vector<HyperplaneId>& l) {
    std::string out;
    for (std::size_t i = 0; i < l.size(); ++i) out += (i ? "," : "") + std::to_string(l[i]);
    return out;
  };
  return std::string(s.sign > 0 ? "+" : "-") + "[" + list(s.h_set) + "|" + list(s.k_list) + "|" +
         s.r_canonical.to_string() + "]";
}

// Every unsigned symbol of every degree, with its canonical vertex.
class SymbolTable {
 public:
  explicit SymbolTable(const CubeComplex& x) : x_(&x) {
    const std::size_t top = x.dimension();
    keys_.resize(top + 1);
    const Parallelism par(x);
    for (const auto& cls : par.classes()) {
      const auto& s = cls.determining;
      const std::size_t m = s.size();
      Bits r = cls.members.front().anchor;
      for (const auto& c : cls.members) r = std::min(r, c.anchor);
      for (std::size_t sel = 0; sel < (std::size_t{1} << m); ++sel) {
        SymbolKey key;
        for (std::size_t i = 0; i < m; ++i) ((sel >> i) & 1 ? key.h : key.k).push_back(s[i]);
        keys_[key.q()].push_back(key);
        r_.emplace(key, r);
      }
    }
    for (auto& ks : keys_) {
      std::sort(ks.begin(), ks.end());
      for (std::size_t i = 0; i < ks.size(); ++i) index_.emplace(ks[i], i);
    }
  }

  const CubeComplex& complex() const { return *x_; }
  std::size_t top_degree() const { return keys_.size() - 1; }
  std::size_t size(std::size_t q) const { return q < keys_.size() ? keys_[q].size() : 0; }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& k : keys_) n += k.size();
    return n;
  }
  const std::vector<SymbolKey>& keys(std::size_t q) const { return keys_[q]; }
  const SymbolKey& key(std::size_t q, std::size_t i) const { return keys_[q][i]; }
  std::optional<std::size_t> index_of(const SymbolKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const Bits& r_canonical(const SymbolKey& k) const { return r_.at(k); }
  PSSymbol symbol(std::size_t q, std::size_t i) const {
    const auto& k = keys_[q][i];
    return {k.h, k.k, r_.at(k), 1};
  }

  // Indices [begin, end) of the type-p block in degree q.
  std::pair<std::size_t, std::size_t> block(std::size_t q, std::size_t p) const {
    std::size_t b = 0;
    const auto& ks = keys_[q];
    while (b < ks.size() && ks[b].p() < p) ++b;
    std::size_t e = b;
    while (e < ks.size() && ks[e].p() == p) ++e;
    return {b, e};
  }

 private:
  const CubeComplex* x_;
  std::vector<std::vector<SymbolKey>> keys_;
  std::map<SymbolKey, std::size_t> index_;
  std::map<SymbolKey, Bits> r_;
};

inline PSSymbol symbol_from_raw(const SymbolTable& table, const std::vector<HyperplaneId>& h,
                                const std::vector<HyperplaneId>& k, const Bits& r,
                                int vsign = 1) {
  const CubeComplex& x = table.complex();
  auto bad = [](const std::string& m) {
    return ComplexError(ComplexError::Kind::kContract, "symbol_from_raw: " + m);
  };
  std::vector<HyperplaneId> hs = h;
  std::sort(hs.begin(), hs.end());
  std::vector<HyperplaneId> ks = k;
  std::sort(ks.begin(), ks.end());
  std::vector<HyperplaneId> all = hs;
  all.insert(all.end(), ks.begin(), ks.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) throw bad("repeated hyperplane");
  for (auto g : all) {
    if (g >= x.n_hyperplanes()) throw bad("unknown hyperplane");
  }
  if (!x.pairwise_crossing(all)) throw bad("hyperplanes do not cross");
  if (!x.contains(r)) throw bad("vertex not in complex");
  for (auto g : all) {
    if (!x.adjacent_vertex(r, g)) throw bad("vertex not adjacent to every hyperplane");
  }
  if (vsign != 1 && vsign != -1) throw bad("sign must be +1 or -1");
  const SymbolKey key{hs, ks};
  if (!table.index_of(key)) throw bad("no such symbol");
  const Bits& rc = table.r_canonical(key);
  Bits m(x.n_hyperplanes());
  for (auto g : all) m.set(g);
  int sign = ((r ^ rc) & m).count() % 2 ? -1 : 1;
  sign *= k.empty() ? vsign : permutation_sign(k);
  return {hs, ks, rc, sign};
}

inline PSSymbol symbol_of_pair(const SymbolTable& table, const CubePair& pair,
                               const OrientedCube& d) {
  if (!(d.cube == pair.d)) {
    throw ComplexError(ComplexError::Kind::kContract, "symbol_of_pair: orientation of another cube");
  }
  PSSymbol s = symbol_from_raw(table, pair.complementary, pair.d.cutting, pair.d.anchor,
                               pair.q() == 0 ? d.sign : 1);
  if (pair.q() > 0) s.sign *= d.sign;
  return s;
}

// Coefficients on canonical symbols of one degree.
struct SymbolCochain {
  std::size_t degree = 0;
  std::map<SymbolKey, long long> terms;

  void add(const PSSymbol& s, long long v) {
    if (s.k_list.size() != degree) throw std::invalid_argument("SymbolCochain: mixed degree");
    if (v == 0) return;
    auto [it, fresh] = terms.try_emplace(s.key(), 0);
    it->second += s.sign * v;
    if (it->second == 0) terms.erase(it);
  }
  static SymbolCochain of(const PSSymbol& s) {
    SymbolCochain f{s.k_list.size(), {}};
    f.add(s, 1);
    return f;
  }
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const SymbolCochain&, const SymbolCochain&) = default;
};

inline std::vector<PSSymbol> ps_d_terms(const SymbolTable& table, const PSSymbol& s) {
  std::vector<PSSymbol> out;
  for (std::size_t i = 0; i < s.h_set.size(); ++i) {
    std::vector<HyperplaneId> h = s.h_set;
    h.erase(h.begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<HyperplaneId> k{s.h_set[i]};
    k.insert(k.end(), s.k_list.begin(), s.k_list.end());
    PSSymbol t = symbol_from_raw(table, h, k, s.r_canonical.flipped(s.h_set[i]));
    // On [H|-|R] the sign follows from commuting with the involution.
    t.sign *= s.sign;
    out.push_back(t);
  }
  return out;
}

inline std::vector<std::pair<int, PSSymbol>> ps_delta_terms(const SymbolTable& table,
                                                            const PSSymbol& s) {
  std::vector<std::pair<int, PSSymbol>> out;
  for (std::size_t j = 0; j < s.k_list.size(); ++j) {
    std::vector<HyperplaneId> h = s.h_set;
    h.push_back(s.k_list[j]);
    std::vector<HyperplaneId> k = s.k_list;
    k.erase(k.begin() + static_cast<std::ptrdiff_t>(j));
    PSSymbol t = symbol_from_raw(table, h, k, s.r_canonical);
    t.sign *= s.sign;
    out.emplace_back((j + 1) % 2 ? -1 : 1, t);
  }
  return out;
}

inline SymbolCochain ps_d(const SymbolTable& table, const SymbolCochain& f) {
  SymbolCochain out{f.degree + 1, {}};
  for (const auto& [key, v] : f.terms) {
    const PSSymbol s{key.h, key.k, table.r_canonical(key), 1};
    for (const auto& t : ps_d_terms(table, s)) out.add(t, v);
  }
  return out;
}

inline SymbolCochain ps_delta(const SymbolTable& table, const SymbolCochain& f) {
  SymbolCochain out{f.degree == 0 ? 0 : f.degree - 1, {}};
  if (f.degree == 0) return out;
  for (const auto& [key, v] : f.terms) {
    const PSSymbol s{key.h, key.k, table.r_canonical(key), 1};
    for (const auto& [e, t] : ps_delta_terms(table, s)) out.add(t, e * v);
  }
  return out;
}

// Degree q -> q+1.
inline IntMatrix ps_d_matrix(const SymbolTable& table, std::size_t q) {
  IntMatrix m(table.size(q + 1), table.size(q));
  for (std::size_t j = 0; j < table.size(q); ++j) {
    for (const auto& t : ps_d_terms(table, table.symbol(q, j))) {
      m.add(*table.index_of(t.key()), j, t.sign);
    }
  }
  return m;
}

// Degree q -> q-1.
inline IntMatrix ps_delta_matrix(const SymbolTable& table, std::size_t q) {
  IntMatrix m(q == 0 ? 0 : table.size(q - 1), table.size(q));
  if (q == 0) return m;
  for (std::size_t j = 0; j < table.size(q); ++j) {
    for (const auto& [e, t] : ps_delta_terms(table, table.symbol(q, j))) {
      m.add(*table.index_of(t.key()), j, e * t.sign);
    }
  }
  return m;
}

inline IntMatrix ps_laplacian(const SymbolTable& table, std::size_t q) {
  IntMatrix up = ps_delta_matrix(table, q + 1) * ps_d_matrix(table, q);
  if (q == 0) return up;
  return up + ps_d_matrix(table, q - 1) * ps_delta_matrix(table, q);
}

inline std::vector<std::size_t> ps_cohomology_ranks(const SymbolTable& table) {
  std::vector<Eigen::MatrixXd> ds;
  std::vector<std::size_t> dims;
  for (std::size_t q = 0; q <= table.top_degree(); ++q) {
    dims.push_back(table.size(q));
    ds.push_back(ps_d_matrix(table, q).to_dense());
  }
  return betti_from(ds, dims);
}

// Every cube pair (C, D) with D a face of C.
inline std::vector<CubePair> cube_pairs(const CubeComplex& x) {
  std::vector<CubePair> out;
  for (std::size_t m = 0; m <= x.dimension(); ++m) {
    for (const auto& c : x.cubes(m)) {
      for (std::size_t sel = 0; sel < (std::size_t{1} << m); ++sel) {
        std::vector<HyperplaneId> keep;
        Bits anchor = c.anchor;
        for (std::size_t i = 0; i < m; ++i) {
          if ((sel >> i) & 1) keep.push_back(c.cutting[i]);
        }
        // Faces: fix the remaining cutting bits either way.
        const std::size_t free = m - keep.size();
        std::vector<HyperplaneId> fixed;
        for (std::size_t i = 0; i < m; ++i) {
          if (!((sel >> i) & 1)) fixed.push_back(c.cutting[i]);
        }
        for (std::size_t f = 0; f < (std::size_t{1} << free); ++f) {
          Bits a = anchor;
          for (std::size_t i = 0; i < free; ++i) a.set(fixed[i], (f >> i) & 1);
          out.emplace_back(c, Cube{a, keep});
        }
      }
    }
  }
  return out;
}

}  // namespace cubefield

#endif  // CUBEFIELD_PS_HPP_
