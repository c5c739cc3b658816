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

#ifndef CUBEFIELD_GENERATORS_HPP_
#define CUBEFIELD_GENERATORS_HPP_

#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cubefield/complex.hpp"

namespace cubefield {

// Spider: `leaves` legs of `depth` edges around a centre at the origin.
inline CubeComplex make_tree(std::size_t leaves, std::size_t depth = 1) {
  if (leaves < 1 || depth < 1) throw std::invalid_argument("tree needs leaves, depth >= 1");
  const std::size_t n = leaves * depth;
  std::vector<Bits> vs{Bits(n)};
  for (std::size_t leg = 0; leg < leaves; ++leg) {
    Bits v(n);
    for (std::size_t j = 0; j < depth; ++j) {
      v.set(leg * depth + j);
      vs.push_back(v);
    }
  }
  return CubeComplex(n, std::move(vs), Bits(n));
}

// Product of paths. Axes are laid out last dimension first, each with
// thermometer coordinates.
inline CubeComplex make_grid(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw std::invalid_argument("grid needs at least one dimension");
  std::size_t n = 0;
  for (auto d : dims) {
    if (d < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    n += d;
  }
  std::vector<std::size_t> axes(dims.rbegin(), dims.rend());
  std::vector<Bits> vs{Bits(n)};
  std::size_t offset = 0;
  for (auto len : axes) {
    std::vector<Bits> next;
    for (const auto& v : vs) {
      Bits w = v;
      next.push_back(w);
      for (std::size_t c = 0; c < len; ++c) {
        w.set(offset + c);
        next.push_back(w);
      }
    }
    vs = std::move(next);
    offset += len;
  }
  return CubeComplex(n, std::move(vs), Bits(n));
}

inline CubeComplex make_cube(std::size_t dim) {
  if (dim < 1 || dim > 20) throw std::invalid_argument("cube dimension must be in [1,20]");
  std::vector<Bits> vs;
  for (std::size_t s = 0; s < (std::size_t{1} << dim); ++s) {
    Bits v(dim);
    for (std::size_t i = 0; i < dim; ++i) v.set(i, (s >> i) & 1u);
    vs.push_back(v);
  }
  return CubeComplex(dim, std::move(vs), Bits(dim));
}

// Median closure of k uniform n-bit vectors, largest component,
// constant coordinates pruned, base = lex-smallest vertex.
inline CubeComplex make_random_median(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 1 || n > 16) throw std::invalid_argument("random-median needs 1 <= n <= 16");
  if (k < 1) throw std::invalid_argument("random-median needs k >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Bits> seeds;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t r = rng();
    Bits v(n);
    for (std::size_t j = 0; j < n; ++j) v.set(j, (r >> j) & 1u);
    seeds.push_back(v);
  }
  const auto closed = median_closure(seeds);

  std::unordered_map<Bits, std::size_t, BitsHash> idx;
  for (std::size_t i = 0; i < closed.size(); ++i) idx[closed[i]] = i;
  std::vector<std::size_t> comp(closed.size(), SIZE_MAX);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < closed.size(); ++s) {
    if (comp[s] != SIZE_MAX) continue;
    const std::size_t id = sizes.size();
    sizes.push_back(0);
    std::deque<std::size_t> queue{s};
    comp[s] = id;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++sizes[id];
      for (std::size_t h = 0; h < n; ++h) {
        auto it = idx.find(closed[i].flipped(h));
        if (it != idx.end() && comp[it->second] == SIZE_MAX) {
          comp[it->second] = id;
          queue.push_back(it->second);
        }
      }
    }
  }
  // Components are numbered in lex order of their smallest vertex, so
  // the first largest one wins ties deterministically.
  std::size_t best = 0;
  for (std::size_t c = 1; c < sizes.size(); ++c) {
    if (sizes[c] > sizes[best]) best = c;
  }
  std::vector<Bits> part;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    if (comp[i] == best) part.push_back(closed[i]);
  }
  std::vector<std::size_t> keep;
  for (std::size_t h = 0; h < n; ++h) {
    for (const auto& v : part) {
      if (v.test(h) != part.front().test(h)) {
        keep.push_back(h);
        break;
      }
    }
  }
  std::vector<Bits> vs;
  for (const auto& v : part) {
    Bits w(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) w.set(i, v.test(keep[i]));
    vs.push_back(w);
  }
  std::sort(vs.begin(), vs.end());
  Bits base = vs.front();
  return CubeComplex(keep.size(), std::move(vs), std::move(base));
}

}  // namespace cubefield

#endif  // CUBEFIELD_GENERATORS_HPP_
