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

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cubefield/complex.hpp"
#include "cubefield/generators.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace cubefield {
namespace {

using testing::B;
using testing::fixture;

// Oracles over plain strings.

using StrSet = std::set<std::string>;

std::string maj(const std::string& a, const std::string& b, const std::string& c) {
  std::string m(a.size(), '0');
  for (std::size_t i = 0; i < a.size(); ++i) {
    m[i] = ((a[i] == '1') + (b[i] == '1') + (c[i] == '1') >= 2) ? '1' : '0';
  }
  return m;
}

StrSet oracle_closure(StrSet s) {
  while (true) {
    StrSet add;
    for (const auto& a : s)
      for (const auto& b : s)
        for (const auto& c : s) {
          auto m = maj(a, b, c);
          if (!s.count(m)) add.insert(m);
        }
    if (add.empty()) return s;
    s.insert(add.begin(), add.end());
  }
}

StrSet as_strings(const std::vector<Bits>& v) {
  StrSet s;
  for (const auto& b : v) s.insert(b.to_string());
  return s;
}

std::string flip(std::string s, std::size_t i) {
  s[i] = s[i] == '1' ? '0' : '1';
  return s;
}

bool oracle_crossing(const StrSet& vs, std::size_t h, std::size_t k) {
  for (const auto& v : vs) {
    if (vs.count(flip(v, h)) && vs.count(flip(v, k)) && vs.count(flip(flip(v, h), k))) return true;
  }
  return false;
}

// All (anchor, cutting) pairs by scanning every vertex and subset.
std::set<std::pair<std::string, std::vector<std::size_t>>> oracle_cubes(const StrSet& vs,
                                                                        std::size_t n,
                                                                        std::size_t q) {
  std::set<std::pair<std::string, std::vector<std::size_t>>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) s.push_back(i);
    if (s.size() != q) continue;
    for (const auto& v : vs) {
      bool ok = true;
      for (std::size_t sel = 0; sel < (std::size_t{1} << q) && ok; ++sel) {
        std::string w = v;
        for (std::size_t i = 0; i < q; ++i)
          if ((sel >> i) & 1u) w = flip(w, s[i]);
        ok = vs.count(w) != 0;
      }
      if (!ok) continue;
      std::string a = v;
      for (auto h : s) a[h] = '0';
      out.insert({a, s});
    }
  }
  return out;
}

std::map<std::string, std::size_t> oracle_bfs(const StrSet& vs, const std::string& from) {
  std::map<std::string, std::size_t> dist{{from, 0}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto w = flip(v, i);
      if (vs.count(w) && !dist.count(w)) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::size_t oracle_dist_hyperplane(const StrSet& vs, std::size_t h, const std::string& base) {
  std::size_t best = 1000;
  for (const auto& v : vs) {
    if (!vs.count(flip(v, h))) continue;
    std::size_t d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += v[i] != base[i];
    best = std::min(best, d);
  }
  return best;
}

std::vector<CubeComplex> random_complexes(std::size_t count) {
  std::vector<CubeComplex> out;
  for (std::uint64_t s = 0; s < count; ++s) out.push_back(testing::random_complex(s));
  return out;
}

// Parsing and validation.

TEST(ParseComplex, SquareCounts) {
  auto x = fixture("square");
  EXPECT_EQ(x.n_vertices(), 4u);
  EXPECT_EQ(x.n_cubes(1), 4u);
  EXPECT_EQ(x.n_cubes(2), 1u);
  EXPECT_EQ(x.dimension(), 2u);
}

TEST(ParseComplex, TripodIsMedianAndOneDimensional) {
  auto x = fixture("tripod");
  EXPECT_EQ(x.dimension(), 1u);
  const auto vs = as_strings(x.vertices());
  EXPECT_EQ(oracle_closure(vs), vs);
}

TEST(ParseComplex, DisconnectedRejected) {
  try {
    fixture("disconnected");
    FAIL() << "accepted a disconnected complex";
  } catch (const ComplexError& e) {
    EXPECT_EQ(e.kind(), ComplexError::Kind::kConnectivity);
  }
}

TEST(ParseComplex, MedianFailureReportsTriple) {
  // 6-cycle: connected, not median closed.
  const char* doc = "cxc 1\nhyperplanes 3\nbasepoint 000\nvertices 6\n000\n100\n110\n111\n011\n001\n";
  try {
    parse_complex(doc);
    FAIL();
  } catch (const ComplexError& e) {
    EXPECT_EQ(e.kind(), ComplexError::Kind::kMedianClosure);
    EXPECT_NE(std::string(e.what()).find("median of"), std::string::npos);
  }
}

TEST(ParseComplex, BaseMustBeVertex) {
  const char* doc = "cxc 1\nhyperplanes 2\nbasepoint 11\nvertices 3\n00\n01\n10\n";
  try {
    parse_complex(doc);
    FAIL();
  } catch (const ComplexError& e) {
    EXPECT_EQ(e.kind(), ComplexError::Kind::kBaseVertex);
  }
}

TEST(ParseComplex, ConstantCoordinateRejected) {
  const char* doc = "cxc 1\nhyperplanes 2\nbasepoint 00\nvertices 2\n00\n10\n";
  try {
    parse_complex(doc);
    FAIL();
  } catch (const ComplexError& e) {
    EXPECT_EQ(e.kind(), ComplexError::Kind::kConstantCoordinate);
  }
}

TEST(ParseComplex, SyntaxErrorsCarryPosition) {
  struct Case {
    const char* doc;
    std::size_t line, column;
  };
  const Case cases[] = {
      {"cxc 2\n", 1, 5},
      {"cxc 1\nhyperplanes 2\nbasepoint 0x\nvertices 1\n00\n", 3, 11},
      {"cxc 1\nhyperplanes 2\nbasepoint 00\nvertices 2\n00\n   011\n", 6, 4},
      {"# c\ncxc 1\nhyperplanes 2\nbasepoint 00\nvertices 2\n00\n00\n", 7, 1},
      {"cxc 1\nhyperplanes 2\nbasepoint 00\nvertices 1\n00\nextra\n", 6, 1},
      {"cxc 1\nhyperplans 2\n", 2, 1},
  };
  for (const auto& c : cases) {
    try {
      parse_complex(c.doc);
      ADD_FAILURE() << c.doc;
    } catch (const ComplexError& e) {
      EXPECT_EQ(e.kind(), ComplexError::Kind::kSyntax) << c.doc;
      EXPECT_EQ(e.line(), c.line) << e.what();
      EXPECT_EQ(e.column(), c.column) << e.what();
    }
  }
}

TEST(ParseComplex, TruncatedInput) {
  try {
    parse_complex("cxc 1\nhyperplanes 2\nbasepoint 00\nvertices 3\n00\n01\n");
    FAIL();
  } catch (const ComplexError& e) {
    EXPECT_EQ(e.kind(), ComplexError::Kind::kSyntax);
    EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos);
  }
}

TEST(ParseComplex, CommentsAndSingleVertex) {
  auto x = parse_complex("cxc 1 # header\nhyperplanes 0\nbasepoint -\nvertices 1\n- # lone\n");
  EXPECT_EQ(x.n_vertices(), 1u);
  EXPECT_EQ(x.dimension(), 0u);
  EXPECT_EQ(parse_complex(write_complex(x)).n_vertices(), 1u);
}

TEST(WriteComplex, RoundTripIsLexicographic) {
  for (const auto& name : testing::all_fixture_names()) {
    auto x = fixture(name);
    const auto text = write_complex(x);
    auto y = parse_complex(text);
    EXPECT_EQ(write_complex(y), text);
    EXPECT_TRUE(std::is_sorted(y.vertices().begin(), y.vertices().end()));
  }
}

// Median closure.

TEST(MedianClosure, TripodCentreAppears) {
  auto c = median_closure({B("100"), B("010"), B("001")});
  EXPECT_EQ(as_strings(c), (StrSet{"000", "001", "010", "100"}));
}

TEST(MedianClosure, PathAlreadyClosed) {
  auto c = median_closure({B("00"), B("01"), B("11")});
  EXPECT_EQ(as_strings(c), (StrSet{"00", "01", "11"}));
}

TEST(MedianClosure, MatchesExhaustiveFixpoint) {
  auto c = median_closure({B("0000"), B("1100"), B("0011"), B("1111")});
  EXPECT_EQ(as_strings(c), oracle_closure({"0000", "1100", "0011", "1111"}));
}

TEST(MedianClosure, RandomSeedsMatchOracleAndAreIdempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng() % 4, k = 2 + rng() % 5;
    std::vector<Bits> seed;
    StrSet s;
    for (std::size_t i = 0; i < k; ++i) {
      Bits b(n);
      const auto r = rng();
      for (std::size_t j = 0; j < n; ++j) b.set(j, (r >> j) & 1u);
      seed.push_back(b);
      s.insert(b.to_string());
    }
    auto c = median_closure(seed);
    EXPECT_EQ(as_strings(c), oracle_closure(s));
    EXPECT_EQ(median_closure(c), c);
  }
}

// Predicates.

TEST(Crossing, Examples) {
  EXPECT_TRUE(fixture("square").crossing(0, 1));
  EXPECT_FALSE(fixture("tripod").crossing(0, 1));
  auto c3 = fixture("cube3");
  EXPECT_TRUE(c3.crossing(0, 1));
  EXPECT_TRUE(c3.crossing(0, 2));
  EXPECT_TRUE(c3.crossing(1, 2));
  EXPECT_THROW(c3.crossing(1, 1), ComplexError);
}

TEST(Crossing, MatchesOracle) {
  auto xs = random_complexes(20);
  for (const auto& name : testing::all_fixture_names()) xs.push_back(fixture(name));
  for (const auto& x : xs) {
    const auto vs = as_strings(x.vertices());
    for (std::size_t h = 0; h < x.n_hyperplanes(); ++h)
      for (std::size_t k = 0; k < x.n_hyperplanes(); ++k)
        if (h != k) EXPECT_EQ(x.crossing(h, k), oracle_crossing(vs, h, k));
  }
}

TEST(Helly, Examples) {
  EXPECT_TRUE(fixture("cube3").helly_check({0, 1, 2}));
  EXPECT_TRUE(fixture("tripod").helly_check({0, 1}));
  EXPECT_FALSE(fixture("tripod").pairwise_crossing({0, 1}));
}

TEST(Helly, PairsAndTriplesOnRandomComplexes) {
  for (const auto& x : random_complexes(30)) {
    const auto vs = as_strings(x.vertices());
    const std::size_t n = x.n_hyperplanes();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        EXPECT_TRUE(x.helly_check({a, b}));
        for (std::size_t c = b + 1; c < n; ++c) {
          if (!x.pairwise_crossing({a, b, c})) continue;
          EXPECT_TRUE(x.helly_check({a, b, c}));
          bool found = false;
          for (const auto& v : vs) {
            bool all = true;
            for (std::size_t sel = 0; sel < 8 && all; ++sel) {
              std::string w = v;
              if (sel & 1u) w = flip(w, a);
              if (sel & 2u) w = flip(w, b);
              if (sel & 4u) w = flip(w, c);
              all = vs.count(w) != 0;
            }
            found = found || all;
          }
          EXPECT_TRUE(found);
        }
      }
  }
}

TEST(Adjacency, VertexExamples) {
  EXPECT_TRUE(fixture("tripod").adjacent_vertex(B("000"), 0));
  EXPECT_FALSE(fixture("tripod").adjacent_vertex(B("100"), 1));
  EXPECT_FALSE(fixture("grid1x2").adjacent_vertex(B("111"), 1));
}

TEST(Adjacency, CubeExamples) {
  auto sq = fixture("square");
  EXPECT_TRUE(sq.adjacent_cube(sq.cube_at(B("00"), {0}), 1));
  auto tri = fixture("tripod");
  EXPECT_FALSE(tri.adjacent_cube(tri.cube_at(B("000"), {0}), 1));
  auto c3 = fixture("cube3");
  EXPECT_TRUE(c3.adjacent_cube(c3.cube_at(B("000"), {0, 1}), 2));
  EXPECT_FALSE(c3.adjacent_cube(c3.cube_at(B("000"), {0, 1}), 1));
}

TEST(Adjacency, CubeIffAllVerticesAdjacent) {
  for (const auto& x : random_complexes(20)) {
    for (std::size_t q = 0; q <= x.dimension(); ++q)
      for (const auto& c : x.cubes(q))
        for (std::size_t h = 0; h < x.n_hyperplanes(); ++h) {
          bool all = !c.cuts(h);
          for (std::size_t s = 0; s < (std::size_t{1} << q) && all; ++s)
            all = x.adjacent_vertex(c.vertex(s), h);
          EXPECT_EQ(x.adjacent_cube(c, h), all);
        }
  }
}

TEST(Separates, Examples) {
  EXPECT_TRUE(CubeComplex::separates(0, B("00"), B("10")));
  EXPECT_FALSE(CubeComplex::separates(0, B("00"), B("01")));
  EXPECT_FALSE(CubeComplex::separates(1, B("01"), B("01")));
}

TEST(Distance, HammingEqualsGraphDistance) {
  auto xs = random_complexes(30);
  for (const auto& name : testing::all_fixture_names()) xs.push_back(fixture(name));
  xs.push_back(make_grid({3, 2}));
  xs.push_back(make_tree(3, 3));
  for (const auto& x : xs) {
    ASSERT_LE(x.n_vertices(), 200u);
    const auto vs = as_strings(x.vertices());
    for (const auto& v : x.vertices()) {
      auto dist = oracle_bfs(vs, v.to_string());
      ASSERT_EQ(dist.size(), vs.size());
      for (const auto& w : x.vertices()) EXPECT_EQ(dist[w.to_string()], hamming(v, w));
    }
  }
}

TEST(Distance, HyperplaneToBaseExamples) {
  EXPECT_EQ(fixture("square").dist_hyperplane_to_base(0), 0u);
  EXPECT_EQ(fixture("grid1x2").dist_hyperplane_to_base(2), 1u);
  auto tri = fixture("tripod").with_base(B("100"));
  EXPECT_EQ(tri.dist_hyperplane_to_base(1), 1u);
}

TEST(Distance, HyperplaneToBaseMatchesOracle) {
  for (const auto& x : random_complexes(20)) {
    const auto vs = as_strings(x.vertices());
    for (const auto& p : x.vertices()) {
      auto y = x.with_base(p);
      for (std::size_t h = 0; h < x.n_hyperplanes(); ++h)
        EXPECT_EQ(y.dist_hyperplane_to_base(h), oracle_dist_hyperplane(vs, h, p.to_string()));
    }
  }
}

// Cubes.

TEST(EnumerateCubes, Examples) {
  EXPECT_EQ(fixture("square").enumerate_cubes(1).size(), 4u);
  EXPECT_EQ(fixture("cube3").enumerate_cubes(2).size(), 6u);
  EXPECT_EQ(fixture("grid1x2").enumerate_cubes(2).size(), 2u);
}

TEST(EnumerateCubes, MatchesOracleAndIsSorted) {
  auto xs = random_complexes(25);
  for (const auto& name : testing::all_fixture_names()) xs.push_back(fixture(name));
  for (const auto& x : xs) {
    const auto vs = as_strings(x.vertices());
    for (std::size_t q = 0; q <= x.dimension() + 1; ++q) {
      std::set<std::pair<std::string, std::vector<std::size_t>>> got;
      for (const auto& c : x.cubes(q)) got.insert({c.anchor.to_string(), c.cutting});
      EXPECT_EQ(got, oracle_cubes(vs, x.n_hyperplanes(), q));
      EXPECT_TRUE(std::is_sorted(x.cubes(q).begin(), x.cubes(q).end()));
      for (std::size_t i = 0; i < x.cubes(q).size(); ++i) {
        EXPECT_EQ(x.cube_index(x.cubes(q)[i]), i);
        // Anchor is the lex-smallest vertex.
        const auto& c = x.cubes(q)[i];
        for (std::size_t s = 0; s < (std::size_t{1} << q); ++s) EXPECT_LE(c.anchor, c.vertex(s));
      }
    }
    // Dimension is the largest pairwise-crossing spanning set.
    EXPECT_TRUE(oracle_cubes(vs, x.n_hyperplanes(), x.dimension() + 1).empty());
  }
}

TEST(BoundedGeometry, Square) {
  EXPECT_EQ(fixture("square").bounded_geometry(), 9u);
  EXPECT_EQ(fixture("tripod").bounded_geometry(), 5u);
}

// Normal cube paths.

TEST(NormalCubePath, Examples) {
  auto c3 = fixture("cube3");
  auto p = c3.normal_cube_path(B("111"), B("000"));
  ASSERT_EQ(p.cubes.size(), 1u);
  EXPECT_EQ(p.cubes[0].cutting, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(p.waypoints, (std::vector<Bits>{B("111"), B("000")}));

  auto g = fixture("grid1x2");
  auto q = g.normal_cube_path(B("111"), B("000"));
  ASSERT_EQ(q.cubes.size(), 2u);
  EXPECT_EQ(q.cubes[0], g.cube_at(B("111"), {0, 2}));
  EXPECT_EQ(q.cubes[1], g.cube_at(B("010"), {1}));
  EXPECT_EQ(q.waypoints, (std::vector<Bits>{B("111"), B("010"), B("000")}));

  EXPECT_TRUE(g.normal_cube_path(B("110"), B("110")).cubes.empty());
}

TEST(NormalCubePath, PartitionsSeparatingSet) {
  for (const auto& x : random_complexes(25)) {
    for (const auto& q : x.vertices())
      for (const auto& p : x.vertices()) {
        auto path = x.normal_cube_path(q, p);
        std::vector<std::size_t> all;
        std::size_t steps = 0;
        for (std::size_t i = 0; i < path.cubes.size(); ++i) {
          const auto& c = path.cubes[i];
          EXPECT_TRUE(x.cube_index(c).has_value());
          all.insert(all.end(), c.cutting.begin(), c.cutting.end());
          steps += hamming(path.waypoints[i], path.waypoints[i + 1]);
          EXPECT_EQ(path.waypoints[i] ^ path.waypoints[i + 1], c.mask());
        }
        std::sort(all.begin(), all.end());
        EXPECT_EQ(all, (q ^ p).ones());
        EXPECT_EQ(steps, hamming(q, p));
      }
  }
}

// Finite approximation.

TEST(FiniteApproximation, Examples) {
  auto sq = fixture("square");
  EXPECT_EQ(sq.finite_approximation(1).n_vertices(), 4u);
  auto g = fixture("grid1x2");
  auto a = g.finite_approximation(1);
  EXPECT_EQ(a.n_hyperplanes(), 2u);
  EXPECT_EQ(as_strings(a.vertices()), (StrSet{"00", "01", "10", "11"}));
  EXPECT_EQ(a.n_cubes(2), 1u);
  auto t = make_tree(2, 4);
  EXPECT_EQ(write_complex(t.finite_approximation(10)), write_complex(t));
}

TEST(FiniteApproximation, NestedAndExhaustive) {
  auto xs = random_complexes(15);
  xs.push_back(make_tree(3, 3));
  xs.push_back(make_grid({3, 3}));
  for (const auto& x : xs) {
    std::size_t maxd = 0;
    for (auto d : x.hyperplane_distances()) maxd = std::max(maxd, d);
    std::size_t prev = 0;
    for (std::size_t n = 1; n <= maxd + 2; ++n) {
      auto a = x.finite_approximation(n);
      // Oracle: explicit filter on the original coordinates.
      std::size_t expect = 0;
      for (const auto& v : x.vertices()) {
        bool ok = true;
        for (std::size_t h = 0; h < x.n_hyperplanes(); ++h)
          if (x.dist_hyperplane_to_base(h) >= n && v.test(h) != x.base().test(h)) ok = false;
        expect += ok;
      }
      EXPECT_EQ(a.n_vertices(), expect);
      EXPECT_GE(a.n_vertices(), prev);
      prev = a.n_vertices();
    }
    EXPECT_EQ(prev, x.n_vertices());
  }
}

// Generators.

TEST(Generators, TreeIsTripod) {
  EXPECT_EQ(write_complex(make_tree(3)), write_complex(fixture("tripod")));
}

TEST(Generators, GridMatchesFixture) {
  EXPECT_EQ(write_complex(make_grid({2, 1})), write_complex(fixture("grid1x2")));
}

TEST(Generators, CubeMatchesFixture) {
  EXPECT_EQ(write_complex(make_cube(3)), write_complex(fixture("cube3")));
}

TEST(Generators, RandomMedianIsDeterministicAndValid) {
  auto a = make_random_median(8, 12, 7);
  auto b = make_random_median(8, 12, 7);
  EXPECT_EQ(write_complex(a), write_complex(b));
  EXPECT_NO_THROW(parse_complex(write_complex(a)));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto x = make_random_median(7, 2 + seed % 9, seed);
    EXPECT_EQ(x.base(), x.vertices().front());
    EXPECT_NO_THROW(parse_complex(write_complex(x)));
  }
}

}  // namespace
}  // namespace cubefield
