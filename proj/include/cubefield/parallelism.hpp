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

#ifndef CUBEFIELD_PARALLELISM_HPP_
#define CUBEFIELD_PARALLELISM_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubefield/complex.hpp"

namespace cubefield {

struct ParallelClass {
  std::vector<HyperplaneId> determining;
  std::vector<Cube> members;
  // Basis positions of the members within their degree.
  std::vector<std::size_t> basis;

  std::size_t dim() const { return determining.size(); }
};

// All classes of all degrees, materialized once.
class Parallelism {
 public:
  explicit Parallelism(const CubeComplex& x) {
    const std::size_t top = x.dimension();
    slot_.resize(top + 1);
    for (std::size_t q = 0; q <= top; ++q) {
      std::map<std::vector<HyperplaneId>, std::size_t> local;
      const auto& cs = x.cubes(q);
      slot_[q].resize(cs.size());
      std::vector<std::vector<std::size_t>> groups;
      std::vector<std::vector<HyperplaneId>> keys;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto [it, fresh] = local.try_emplace(cs[i].cutting, groups.size());
        if (fresh) {
          groups.emplace_back();
          keys.push_back(cs[i].cutting);
        }
        groups[it->second].push_back(i);
      }
      // Deterministic order: by determining set.
      std::vector<std::size_t> order(groups.size());
      for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
      for (auto g : order) {
        ParallelClass k;
        k.determining = keys[g];
        const std::size_t id = classes_.size();
        for (std::size_t pos = 0; pos < groups[g].size(); ++pos) {
          const std::size_t i = groups[g][pos];
          k.members.push_back(cs[i]);
          k.basis.push_back(i);
          slot_[q][i] = {id, pos};
        }
        by_key_[k.determining] = id;
        classes_.push_back(std::move(k));
      }
    }
  }

  const std::vector<ParallelClass>& classes() const { return classes_; }
  const ParallelClass& at(std::size_t id) const { return classes_[id]; }

  std::optional<std::size_t> find(const std::vector<HyperplaneId>& determining) const {
    auto it = by_key_.find(determining);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
  }

  // (class id, position in class) of the cube at basis index i of degree q.
  std::pair<std::size_t, std::size_t> slot(std::size_t q, std::size_t i) const {
    return slot_[q][i];
  }

  // Class ids of degree q, ascending.
  std::vector<std::size_t> of_degree(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t id = 0; id < classes_.size(); ++id) {
      if (classes_[id].dim() == q) out.push_back(id);
    }
    return out;
  }

 private:
  std::vector<ParallelClass> classes_;
  std::map<std::vector<HyperplaneId>, std::size_t> by_key_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slot_;
};

// Distance from p to the nearest vertex of c, and that vertex.
inline std::size_t cube_distance(const Cube& c, const Bits& p) {
  return hamming(c.anchor & ~c.mask(), p & ~c.mask());
}
inline Bits nearest_vertex(const Cube& c, const Bits& p) {
  Bits r = c.anchor;
  for (auto h : c.cutting) r.set(h, p.test(h));
  return r;
}

// Position in k.members of the unique member closest to p.
inline std::size_t nearest_position(const CubeComplex& x, const Bits& p, const ParallelClass& k) {
  std::size_t best = 0;
  std::size_t best_d = cube_distance(k.members[0], p);
  bool tie = false;
  for (std::size_t i = 1; i < k.members.size(); ++i) {
    const std::size_t d = cube_distance(k.members[i], p);
    if (d < best_d) {
      best = i;
      best_d = d;
      tie = false;
    } else if (d == best_d) {
      tie = true;
    }
  }
  if (tie) throw std::logic_error("nearest_in_class: tie");
  const Bits r = nearest_vertex(k.members[best], p);
  // Hyperplane property.
  for (auto h : (p ^ r).ones()) {
    bool parallel_to_some = false;
    for (auto g : k.determining) parallel_to_some = parallel_to_some || !x.crossing(h, g);
    if (!parallel_to_some) throw std::logic_error("nearest_in_class: hyperplane property fails");
  }
  // Addition formula over every member vertex.
  for (const auto& s : k.members) {
    for (std::size_t sel = 0; sel < (std::size_t{1} << s.dim()); ++sel) {
      const Bits v = s.vertex(sel);
      if (hamming(p, v) != hamming(p, r) + hamming(r, v)) {
        throw std::logic_error("nearest_in_class: addition formula fails");
      }
    }
  }
  return best;
}

inline Cube nearest_in_class(const CubeComplex& x, const Bits& p, const ParallelClass& k) {
  return k.members[nearest_position(x, p, k)];
}

struct NearestMove {
  enum class Kind { kSame, kOppositeAcross };
  Kind kind = Kind::kSame;
  HyperplaneId across = 0;
};

inline NearestMove nearest_moves_across_edge(const CubeComplex& x, const Bits& p, const Bits& q,
                                             const ParallelClass& k) {
  if (hamming(p, q) != 1 || !x.contains(p) || !x.contains(q)) {
    throw ComplexError(ComplexError::Kind::kContract,
                       "nearest_moves_across_edge: vertices must be adjacent");
  }
  const HyperplaneId h = (p ^ q).ones().front();
  const Cube a = nearest_in_class(x, p, k);
  const Cube b = nearest_in_class(x, q, k);
  if (a == b) return {NearestMove::Kind::kSame, 0};
  if ((a.anchor ^ b.anchor) == [&] {
        Bits m(p.size());
        m.set(h);
        return m;
      }() &&
      x.adjacent_cube(a, h)) {
    return {NearestMove::Kind::kOppositeAcross, h};
  }
  throw std::logic_error("nearest_moves_across_edge: nearest cubes are not opposite faces");
}

// nullopt stands for infinity (cubes not parallel).
inline std::optional<std::size_t> pair_distance(const Cube& a, const Cube& b) {
  if (a.cutting != b.cutting) return std::nullopt;
  const Bits m = ~a.mask();
  return hamming(a.anchor & m, b.anchor & m);
}

struct ClassComplex {
  CubeComplex complex;
  // Coordinate i of the class complex is hyperplane coords[i] of the parent.
  std::vector<HyperplaneId> coords;
  // Vertex index in `complex` of member i.
  std::vector<std::size_t> member_vertex;
};

inline Bits project(const Bits& v, const std::vector<HyperplaneId>& coords) {
  Bits r(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) r.set(i, v.test(coords[i]));
  return r;
}

inline ClassComplex class_complex(const CubeComplex& x, const ParallelClass& k) {
  std::vector<HyperplaneId> coords;
  for (HyperplaneId h = 0; h < x.n_hyperplanes(); ++h) {
    if (std::binary_search(k.determining.begin(), k.determining.end(), h)) continue;
    bool all = true;
    for (auto g : k.determining) all = all && x.crossing(h, g);
    if (all) coords.push_back(h);
  }
  std::vector<Bits> vs;
  for (const auto& m : k.members) vs.push_back(project(m.anchor, coords));
  const Bits base = project(nearest_in_class(x, x.base(), k).anchor, coords);
  CubeComplex cc(coords.size(), vs, base);
  std::vector<std::size_t> mv;
  for (const auto& v : vs) mv.push_back(*cc.index_of(v));
  return {std::move(cc), std::move(coords), std::move(mv)};
}

// Vertex index -> class id of the first cube on its normal path to the base.
inline std::vector<std::size_t> vertex_to_class_bijection(const CubeComplex& x,
                                                          const Parallelism& par) {
  std::vector<std::size_t> out(x.n_vertices());
  const std::size_t empty = *par.find({});
  for (std::size_t i = 0; i < x.n_vertices(); ++i) {
    if (i == x.base_index()) {
      out[i] = empty;
      continue;
    }
    const auto path = x.normal_cube_path(x.vertex(i), x.base());
    out[i] = *par.find(path.cubes.front().cutting);
  }
  std::vector<char> hit(par.classes().size(), 0);
  for (auto c : out) {
    if (hit[c]) throw std::logic_error("vertex_to_class_bijection: not injective");
    hit[c] = 1;
  }
  if (out.size() != par.classes().size()) {
    throw std::logic_error("vertex_to_class_bijection: not surjective");
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> class_count_theorem(const CubeComplex& x,
                                                               const Parallelism& par) {
  return {x.n_vertices(), par.classes().size()};
}

}  // namespace cubefield

#endif  // CUBEFIELD_PARALLELISM_HPP_
