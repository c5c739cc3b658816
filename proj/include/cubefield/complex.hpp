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

#ifndef CUBEFIELD_COMPLEX_HPP_
#define CUBEFIELD_COMPLEX_HPP_

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cubefield/bits.hpp"

namespace cubefield {

using HyperplaneId = std::size_t;

// A q-cube: its lex-smallest vertex and the q hyperplanes cutting it.
struct Cube {
  Bits anchor;
  std::vector<HyperplaneId> cutting;

  std::size_t dim() const { return cutting.size(); }

  Bits mask() const {
    Bits m(anchor.size());
    for (auto h : cutting) m.set(h);
    return m;
  }

  bool cuts(HyperplaneId h) const {
    return std::binary_search(cutting.begin(), cutting.end(), h);
  }

  // Vertex of the cube obtained by flipping the cutting bits in `sel`.
  Bits vertex(std::size_t sel) const {
    Bits v = anchor;
    for (std::size_t i = 0; i < cutting.size(); ++i) {
      if ((sel >> i) & 1u) v.flip(cutting[i]);
    }
    return v;
  }

  friend bool operator==(const Cube&, const Cube&) = default;
  friend std::strong_ordering operator<=>(const Cube& a, const Cube& b) {
    if (auto c = a.cutting.size() <=> b.cutting.size(); c != 0) return c;
    if (auto c = a.anchor <=> b.anchor; c != 0) return c;
    return a.cutting <=> b.cutting;
  }
};

struct CubeHash {
  std::size_t operator()(const Cube& c) const {
    std::size_t h = c.anchor.hash();
    for (auto k : c.cutting) h = h * 1000003u ^ (k + 0x9e37u);
    return h;
  }
};

inline std::string cube_key(const Cube& c) {
  std::string s = c.anchor.to_string() + ":";
  for (std::size_t i = 0; i < c.cutting.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(c.cutting[i]);
  }
  return s;
}

struct NormalCubePath {
  std::vector<Cube> cubes;
  std::vector<Bits> waypoints;
};

class ComplexError : public std::runtime_error {
 public:
  enum class Kind {
    kSyntax,
    kConnectivity,
    kMedianClosure,
    kBaseVertex,
    kConstantCoordinate,
    kContract,
  };

  ComplexError(Kind kind, const std::string& what, std::size_t line = 0,
               std::size_t column = 0)
      : std::runtime_error(what), kind_(kind), line_(line), column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

inline const char* kind_name(ComplexError::Kind k) {
  switch (k) {
    case ComplexError::Kind::kSyntax:
      return "syntax";
    case ComplexError::Kind::kConnectivity:
      return "connectivity";
    case ComplexError::Kind::kMedianClosure:
      return "median-closure";
    case ComplexError::Kind::kBaseVertex:
      return "base-vertex";
    case ComplexError::Kind::kConstantCoordinate:
      return "constant-coordinate";
    case ComplexError::Kind::kContract:
      return "contract";
  }
  return "unknown";
}

// Smallest superset closed under coordinatewise majority.
inline std::vector<Bits> median_closure(const std::vector<Bits>& seed) {
  std::vector<Bits> all;
  std::unordered_set<Bits, BitsHash> have;
  for (const auto& s : seed) {
    if (!all.empty() && s.size() != all.front().size()) {
      throw std::invalid_argument("median_closure: unequal lengths");
    }
    if (have.insert(s).second) all.push_back(s);
  }
  // Triples with at least one element from [fresh, end) are unexamined.
  std::size_t fresh = 0;
  while (fresh < all.size()) {
    const std::size_t end = all.size();
    std::vector<Bits> found;
    for (std::size_t k = fresh; k < end; ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          Bits m = Bits::majority(all[i], all[j], all[k]);
          if (have.insert(m).second) found.push_back(std::move(m));
        }
      }
    }
    fresh = end;
    for (auto& f : found) all.push_back(std::move(f));
  }
  std::sort(all.begin(), all.end());
  return all;
}

class CubeComplex {
 public:
  // Validates; throws ComplexError.
  CubeComplex(std::size_t n_hyperplanes, std::vector<Bits> vertices, Bits base)
      : n_(n_hyperplanes), vertices_(std::move(vertices)) {
    for (const auto& v : vertices_) {
      if (v.size() != n_) {
        throw ComplexError(ComplexError::Kind::kContract,
                           "vertex length differs from hyperplane count");
      }
    }
    if (base.size() != n_) {
      throw ComplexError(ComplexError::Kind::kContract,
                         "basepoint length differs from hyperplane count");
    }
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) !=
        vertices_.end()) {
      throw ComplexError(ComplexError::Kind::kContract, "duplicate vertex");
    }
    if (vertices_.empty()) {
      throw ComplexError(ComplexError::Kind::kContract, "empty vertex set");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) index_[vertices_[i]] = i;
    auto b = index_.find(base);
    if (b == index_.end()) {
      throw ComplexError(ComplexError::Kind::kBaseVertex,
                         "basepoint " + base.to_string() + " is not a vertex");
    }
    base_ = b->second;
    for (HyperplaneId h = 0; h < n_; ++h) {
      bool differs = false;
      for (const auto& v : vertices_) {
        if (v.test(h) != vertices_.front().test(h)) {
          differs = true;
          break;
        }
      }
      if (!differs) {
        throw ComplexError(ComplexError::Kind::kConstantCoordinate,
                           "hyperplane " + std::to_string(h) +
                               " has a constant coordinate");
      }
    }
    neighbor_.assign(vertices_.size() * n_, kNone);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      for (HyperplaneId h = 0; h < n_; ++h) {
        auto it = index_.find(vertices_[i].flipped(h));
        if (it != index_.end()) neighbor_[i * n_ + h] = it->second;
      }
    }
    check_connected();
    check_median();
    build_cubes();
    compute_distances();
  }

  std::size_t n_hyperplanes() const { return n_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  const std::vector<Bits>& vertices() const { return vertices_; }
  const Bits& vertex(std::size_t i) const { return vertices_[i]; }
  const Bits& base() const { return vertices_[base_]; }
  std::size_t base_index() const { return base_; }
  std::size_t dimension() const { return cubes_.size() - 1; }

  std::optional<std::size_t> index_of(const Bits& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Bits& v) const { return index_.count(v) != 0; }

  // Vertex index across h from vertex i, if any.
  std::optional<std::size_t> neighbor(std::size_t i, HyperplaneId h) const {
    const std::size_t j = neighbor_[i * n_ + h];
    if (j == kNone) return std::nullopt;
    return j;
  }

  bool crossing(HyperplaneId h, HyperplaneId k) const {
    if (h == k) {
      throw ComplexError(ComplexError::Kind::kContract,
                         "crossing of a hyperplane with itself");
    }
    return crossing_[h * n_ + k] != 0;
  }

  bool pairwise_crossing(const std::vector<HyperplaneId>& s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (s[i] == s[j] || !crossing(s[i], s[j])) return false;
      }
    }
    return true;
  }

  // Some vertex spanning a cube cut by all of s.
  bool spans_some_cube(const std::vector<HyperplaneId>& s) const {
    for (const auto& v : vertices_) {
      if (spans_cube(v, s)) return true;
    }
    return false;
  }

  bool helly_check(const std::vector<HyperplaneId>& s) const {
    return !pairwise_crossing(s) || spans_some_cube(s);
  }

  bool adjacent_vertex(const Bits& v, HyperplaneId h) const {
    return contains(v.flipped(h));
  }

  bool adjacent_cube(const Cube& c, HyperplaneId h) const {
    if (c.cuts(h)) return false;
    const std::size_t nv = std::size_t{1} << c.dim();
    for (std::size_t s = 0; s < nv; ++s) {
      if (!contains(c.vertex(s).flipped(h))) return false;
    }
    return true;
  }

  static bool separates(HyperplaneId h, const Bits& u, const Bits& v) {
    return u.test(h) != v.test(h);
  }

  // True iff every flip of v over a subset of s is a vertex.
  bool spans_cube(const Bits& v, const std::vector<HyperplaneId>& s) const {
    if (s.size() >= 8 * sizeof(std::size_t)) return false;
    const std::size_t nv = std::size_t{1} << s.size();
    for (std::size_t sel = 0; sel < nv; ++sel) {
      Bits w = v;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if ((sel >> i) & 1u) w.flip(s[i]);
      }
      if (!contains(w)) return false;
    }
    return true;
  }

  // Cube with vertex v and cutting set s (any order).
  Cube cube_at(const Bits& v, std::vector<HyperplaneId> s) const {
    std::sort(s.begin(), s.end());
    Cube c{v, std::move(s)};
    for (auto h : c.cutting) c.anchor.set(h, false);
    return c;
  }

  std::size_t dist_hyperplane_to_base(HyperplaneId h) const {
    return dist_base_[h];
  }
  const std::vector<std::size_t>& hyperplane_distances() const {
    return dist_base_;
  }

  // Min Hamming distance from p to a vertex adjacent to h.
  std::size_t dist_hyperplane_to(HyperplaneId h, const Bits& p) const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (neighbor_[i * n_ + h] != kNone) {
        best = std::min(best, hamming(vertices_[i], p));
      }
    }
    return best;
  }

  const std::vector<Cube>& cubes(std::size_t q) const {
    static const std::vector<Cube> kEmpty;
    return q < cubes_.size() ? cubes_[q] : kEmpty;
  }
  std::vector<Cube> enumerate_cubes(std::size_t q) const { return cubes(q); }
  std::size_t n_cubes(std::size_t q) const { return cubes(q).size(); }
  std::size_t total_cubes() const {
    std::size_t t = 0;
    for (const auto& c : cubes_) t += c.size();
    return t;
  }

  // Basis position of a canonical cube within its degree.
  std::optional<std::size_t> cube_index(const Cube& c) const {
    if (c.dim() >= cube_index_.size()) return std::nullopt;
    auto it = cube_index_[c.dim()].find(c);
    if (it == cube_index_[c.dim()].end()) return std::nullopt;
    return it->second;
  }

  NormalCubePath normal_cube_path(const Bits& q, const Bits& p) const {
    if (!contains(q) || !contains(p)) {
      throw ComplexError(ComplexError::Kind::kContract,
                         "normal_cube_path: endpoint not a vertex");
    }
    NormalCubePath path;
    path.waypoints.push_back(q);
    Bits r = q;
    Bits covered(n_);
    while (r != p) {
      std::vector<HyperplaneId> s;
      for (HyperplaneId h = 0; h < n_; ++h) {
        if (separates(h, r, p) && adjacent_vertex(r, h)) s.push_back(h);
      }
      if (s.empty() || !pairwise_crossing(s) || !spans_cube(r, s)) {
        throw std::logic_error("normal_cube_path: step does not span a cube");
      }
      for (auto h : s) {
        if (covered.test(h)) {
          throw std::logic_error("normal_cube_path: hyperplane cut twice");
        }
        covered.set(h);
        r.flip(h);
      }
      path.cubes.push_back(cube_at(r, s));
      path.waypoints.push_back(r);
    }
    if (covered != (q ^ p)) {
      throw std::logic_error("normal_cube_path: separating set not covered");
    }
    return path;
  }

  // Vertices agreeing with the base on every hyperplane at distance >= n.
  CubeComplex finite_approximation(std::size_t n) const {
    if (n < 1) {
      throw ComplexError(ComplexError::Kind::kContract,
                         "finite_approximation needs n >= 1");
    }
    std::vector<HyperplaneId> keep;
    for (HyperplaneId h = 0; h < n_; ++h) {
      if (dist_base_[h] < n) keep.push_back(h);
    }
    auto project = [&](const Bits& v) {
      Bits r(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) r.set(i, v.test(keep[i]));
      return r;
    };
    std::vector<Bits> vs;
    for (const auto& v : vertices_) {
      bool near = true;
      for (HyperplaneId h = 0; h < n_ && near; ++h) {
        if (dist_base_[h] >= n && v.test(h) != base().test(h)) near = false;
      }
      if (near) vs.push_back(project(v));
    }
    return CubeComplex(keep.size(), std::move(vs), project(base()));
  }

  CubeComplex with_base(const Bits& p) const {
    CubeComplex c = *this;
    auto it = index_.find(p);
    if (it == index_.end()) {
      throw ComplexError(ComplexError::Kind::kBaseVertex,
                         "basepoint " + p.to_string() + " is not a vertex");
    }
    c.base_ = it->second;
    c.compute_distances();
    return c;
  }

  // Max number of cubes sharing a vertex with a single cube.
  std::size_t bounded_geometry() const {
    std::vector<std::vector<std::size_t>> at(vertices_.size());
    std::vector<const Cube*> flat;
    for (const auto& deg : cubes_) {
      for (const auto& c : deg) {
        const std::size_t id = flat.size();
        flat.push_back(&c);
        for (std::size_t s = 0; s < (std::size_t{1} << c.dim()); ++s) {
          at[index_.at(c.vertex(s))].push_back(id);
        }
      }
    }
    std::size_t best = 0;
    std::vector<std::size_t> mark(flat.size(), kNone);
    for (std::size_t id = 0; id < flat.size(); ++id) {
      std::size_t cnt = 0;
      const Cube& c = *flat[id];
      for (std::size_t s = 0; s < (std::size_t{1} << c.dim()); ++s) {
        for (auto o : at[index_.at(c.vertex(s))]) {
          if (mark[o] != id) {
            mark[o] = id;
            ++cnt;
          }
        }
      }
      best = std::max(best, cnt);
    }
    return best;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void check_connected() const {
    std::vector<char> seen(vertices_.size(), 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (HyperplaneId h = 0; h < n_; ++h) {
        const std::size_t j = neighbor_[i * n_ + h];
        if (j != kNone && !seen[j]) {
          seen[j] = 1;
          ++reached;
          queue.push_back(j);
        }
      }
    }
    if (reached != vertices_.size()) {
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!seen[i]) {
          throw ComplexError(ComplexError::Kind::kConnectivity,
                             "vertex " + vertices_[i].to_string() +
                                 " is not connected to " +
                                 vertices_[0].to_string());
        }
      }
    }
  }

  void check_median() const {
    const std::size_t m = vertices_.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
          if (!contains(Bits::majority(vertices_[i], vertices_[j], vertices_[k]))) {
            throw ComplexError(ComplexError::Kind::kMedianClosure,
                               "median of " + vertices_[i].to_string() + ", " +
                                   vertices_[j].to_string() + ", " +
                                   vertices_[k].to_string() +
                                   " is not a vertex");
          }
        }
      }
    }
  }

  void build_cubes() {
    cubes_.clear();
    cubes_.push_back({});
    for (const auto& v : vertices_) cubes_[0].push_back(Cube{v, {}});
    while (true) {
      std::vector<Cube> next;
      for (const auto& c : cubes_.back()) {
        const HyperplaneId lo = c.cutting.empty() ? 0 : c.cutting.back() + 1;
        for (HyperplaneId h = lo; h < n_; ++h) {
          if (c.anchor.test(h)) continue;
          if (!adjacent_cube(c, h)) continue;
          Cube d = c;
          d.cutting.push_back(h);
          next.push_back(std::move(d));
        }
      }
      if (next.empty()) break;
      std::sort(next.begin(), next.end());
      cubes_.push_back(std::move(next));
    }
    cube_index_.assign(cubes_.size(), {});
    for (std::size_t q = 0; q < cubes_.size(); ++q) {
      for (std::size_t i = 0; i < cubes_[q].size(); ++i) {
        cube_index_[q][cubes_[q][i]] = i;
      }
    }
    crossing_.assign(n_ * n_, 0);
    if (cubes_.size() > 2) {
      for (const auto& sq : cubes_[2]) {
        crossing_[sq.cutting[0] * n_ + sq.cutting[1]] = 1;
        crossing_[sq.cutting[1] * n_ + sq.cutting[0]] = 1;
      }
    }
  }

  void compute_distances() {
    dist_base_.assign(n_, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const std::size_t d = hamming(vertices_[i], vertices_[base_]);
      for (HyperplaneId h = 0; h < n_; ++h) {
        if (neighbor_[i * n_ + h] != kNone) {
          dist_base_[h] = std::min(dist_base_[h], d);
        }
      }
    }
  }

  std::size_t n_;
  std::vector<Bits> vertices_;
  std::unordered_map<Bits, std::size_t, BitsHash> index_;
  std::size_t base_ = 0;
  std::vector<std::size_t> neighbor_;
  std::vector<std::vector<Cube>> cubes_;
  std::vector<std::unordered_map<Cube, std::size_t, CubeHash>> cube_index_;
  std::vector<char> crossing_;
  std::vector<std::size_t> dist_base_;
};

// cxc text format.

namespace detail {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view doc) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  while (i < doc.size()) {
    const char ch = doc[i];
    if (ch == '#') {
      while (i < doc.size() && doc[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++col;
      ++i;
      continue;
    }
    Token t{"", line, col};
    while (i < doc.size() && doc[i] != '#' &&
           !std::isspace(static_cast<unsigned char>(doc[i]))) {
      t.text += doc[i];
      ++i;
      ++col;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

inline CubeComplex parse_complex(std::string_view doc) {
  const auto toks = detail::tokenize(doc);
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg, const detail::Token* t) -> ComplexError {
    std::size_t line = 0, col = 0;
    if (t) {
      line = t->line;
      col = t->column;
    } else if (!toks.empty()) {
      line = toks.back().line;
      col = toks.back().column + toks.back().text.size();
    }
    return ComplexError(ComplexError::Kind::kSyntax,
                        std::to_string(line) + ":" + std::to_string(col) + ": " +
                            msg,
                        line, col);
  };
  auto next = [&](const std::string& what) -> const detail::Token& {
    if (pos >= toks.size()) throw fail("expected " + what + ", got end of input", nullptr);
    return toks[pos++];
  };
  auto keyword = [&](const std::string& kw) {
    const auto& t = next("'" + kw + "'");
    if (t.text != kw) throw fail("expected '" + kw + "', got '" + t.text + "'", &t);
  };
  auto number = [&](const std::string& what) -> std::size_t {
    const auto& t = next(what);
    if (t.text.empty() || t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw fail("expected " + what + ", got '" + t.text + "'", &t);
    }
    return static_cast<std::size_t>(std::stoul(t.text));
  };
  auto bitstring = [&](std::size_t n, const std::string& what) -> Bits {
    const auto& t = next(what);
    if (n == 0 && t.text == "-") return Bits(0);
    auto b = Bits::parse(t.text);
    if (!b) throw fail("bad bitstring '" + t.text + "'", &t);
    if (b->size() != n) {
      throw fail("bitstring '" + t.text + "' has length " +
                     std::to_string(b->size()) + ", expected " + std::to_string(n),
                 &t);
    }
    return *b;
  };

  keyword("cxc");
  {
    const auto& t = next("format version");
    if (t.text != "1") throw fail("unsupported version '" + t.text + "'", &t);
  }
  keyword("hyperplanes");
  const std::size_t n = number("hyperplane count");
  keyword("basepoint");
  Bits base = bitstring(n, "basepoint bitstring");
  keyword("vertices");
  const std::size_t m = number("vertex count");
  std::vector<Bits> vs;
  std::unordered_set<Bits, BitsHash> seen;
  for (std::size_t i = 0; i < m; ++i) {
    const detail::Token* t = pos < toks.size() ? &toks[pos] : nullptr;
    Bits v = bitstring(n, "vertex bitstring");
    if (!seen.insert(v).second) throw fail("duplicate vertex " + v.to_string(), t);
    vs.push_back(std::move(v));
  }
  if (pos < toks.size()) throw fail("trailing token '" + toks[pos].text + "'", &toks[pos]);
  return CubeComplex(n, std::move(vs), std::move(base));
}

inline std::string write_complex(const CubeComplex& x) {
  auto bits = [](const Bits& b) { return b.size() ? b.to_string() : std::string("-"); };
  std::ostringstream os;
  os << "cxc 1\n";
  os << "hyperplanes " << x.n_hyperplanes() << "\n";
  os << "basepoint " << bits(x.base()) << "\n";
  os << "vertices " << x.n_vertices() << "\n";
  for (const auto& v : x.vertices()) os << bits(v) << "\n";
  return os.str();
}

}  // namespace cubefield

#endif  // CUBEFIELD_COMPLEX_HPP_
