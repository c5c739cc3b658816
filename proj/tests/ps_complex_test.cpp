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
#include <set>
#include <vector>

#include <boost/rational.hpp>

#include "cubefield/ps.hpp"
#include "fixtures.hpp"
#include "gtest/gtest.h"

namespace cubefield {
namespace {

using testing::B;
using testing::fixture;
using Rational = boost::rational<long long>;
using RatMatrix = SparseMatrix<Rational>;

std::vector<CubeComplex> test_complexes() {
  std::vector<CubeComplex> xs;
  for (const auto& n : testing::all_fixture_names()) xs.push_back(fixture(n));
  for (std::uint64_t s = 0; s < 20; ++s) xs.push_back(testing::random_complex(s));
  return xs;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (const auto& [row, v] : m.column(c)) r.add(row, c, Rational(v));
  }
  return r;
}

std::vector<HyperplaneId> both(const SymbolKey& k) {
  std::vector<HyperplaneId> s = k.h;
  s.insert(s.end(), k.k.begin(), k.k.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Vertices adjacent to every hyperplane in s, by scan.
std::vector<Bits> adjacent_to_all(const CubeComplex& x, const std::vector<HyperplaneId>& s) {
  std::vector<Bits> out;
  for (const auto& v : x.vertices()) {
    bool ok = true;
    for (auto h : s) ok = ok && x.contains(v.flipped(h));
    if (ok) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(SymbolFromRaw, SquareExamples) {
  const auto x = fixture("square");
  const SymbolTable t(x);
  const auto s = symbol_from_raw(t, {}, {1, 0}, B("00"));
  EXPECT_EQ(s.k_list, (std::vector<HyperplaneId>{0, 1}));
  EXPECT_EQ(s.sign, -1);
  EXPECT_EQ(symbol_from_raw(t, {}, {0, 1}, B("00")).sign, 1);
  const auto a = symbol_from_raw(t, {0}, {1}, B("10"));
  const auto b = symbol_from_raw(t, {0}, {1}, B("00"));
  EXPECT_EQ(a.sign * b.sign, -1);
  EXPECT_EQ(a.key(), b.key());
}

TEST(SymbolFromRaw, RejectsInvalid) {
  const auto x = fixture("tripod");
  const SymbolTable t(x);
  EXPECT_THROW(symbol_from_raw(t, {0}, {1}, B("000")), ComplexError);
  EXPECT_THROW(symbol_from_raw(t, {0}, {}, B("010")), ComplexError);
  EXPECT_THROW(symbol_from_raw(t, {0}, {0}, B("000")), ComplexError);
  EXPECT_THROW(symbol_from_raw(t, {}, {}, B("000"), 0), ComplexError);
}

TEST(SymbolFromRaw, CanonicalVertexIsLexMinAdjacent) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= t.top_degree(); ++q) {
      for (const auto& k : t.keys(q)) {
        const auto adj = adjacent_to_all(x, both(k));
        ASSERT_FALSE(adj.empty());
        EXPECT_EQ(t.r_canonical(k), adj.front());
      }
    }
  }
}

// Raw presentations are equivalent exactly when the symbol relation says so.
TEST(SymbolFromRaw, PresentationIndependentAndMatchesEquivalence) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= t.top_degree(); ++q) {
      for (const auto& key : t.keys(q)) {
        struct Raw {
          std::vector<HyperplaneId> k;
          Bits r;
          int vsign;
        };
        std::vector<Raw> raws;
        std::vector<HyperplaneId> perm = key.k;
        std::sort(perm.begin(), perm.end());
        const auto adj = adjacent_to_all(x, both(key));
        do {
          for (const auto& r : adj) {
            if (q == 0) {
              raws.push_back({perm, r, 1});
              raws.push_back({perm, r, -1});
            } else {
              raws.push_back({perm, r, 1});
            }
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::vector<PSSymbol> canon;
        for (const auto& w : raws) {
          canon.push_back(symbol_from_raw(t, key.h, w.k, w.r, w.vsign));
          const auto again = symbol_from_raw(t, canon.back().h_set, canon.back().k_list,
                                             canon.back().r_canonical, canon.back().sign);
          if (q == 0) {
            EXPECT_EQ(again, canon.back());
          } else {
            EXPECT_EQ(again.sign, 1);
          }
          EXPECT_EQ(canon.back().key(), key);
          EXPECT_EQ(canon.back().r_canonical, t.r_canonical(key));
        }
        const auto s = both(key);
        for (std::size_t i = 0; i < raws.size(); ++i) {
          for (std::size_t j = 0; j < raws.size(); ++j) {
            std::size_t sep = 0;
            const auto& hs = q == 0 ? key.h : s;
            for (auto h : hs) sep += raws[i].r.test(h) != raws[j].r.test(h);
            // Parity of the permutation carrying k_i to k_j.
            std::size_t inversions = 0;
            const auto& ki = raws[i].k;
            const auto& kj = raws[j].k;
            std::vector<std::size_t> pos;
            for (auto h : kj) pos.push_back(std::find(ki.begin(), ki.end(), h) - ki.begin());
            for (std::size_t a = 0; a < pos.size(); ++a) {
              for (std::size_t b = a + 1; b < pos.size(); ++b) inversions += pos[b] < pos[a];
            }
            bool equivalent;
            if (q == 0) {
              equivalent = (sep % 2 == 0) == (raws[i].vsign == raws[j].vsign);
            } else {
              equivalent = sep % 2 == inversions % 2;
            }
            EXPECT_EQ(canon[i] == canon[j], equivalent);
          }
        }
      }
    }
  }
}

TEST(SymbolOfPair, SquareExample) {
  const auto x = fixture("square");
  const SymbolTable t(x);
  const Cube sq{B("00"), {0, 1}};
  const CubePair a(sq, Cube{B("00"), {1}});
  const CubePair b(sq, Cube{B("10"), {1}});
  EXPECT_EQ(a.complementary, (std::vector<HyperplaneId>{0}));
  const auto sa = symbol_of_pair(t, a, {a.d, 1});
  const auto sb = symbol_of_pair(t, b, {b.d, 1});
  EXPECT_EQ(sa.key(), (SymbolKey{{0}, {1}}));
  EXPECT_EQ(sa.r_canonical, B("00"));
  EXPECT_EQ(sa.key(), sb.key());
  EXPECT_EQ(sa.sign, -sb.sign);
}

TEST(SymbolOfPair, DiagonalPairsMatchOrientedCubes) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= x.dimension(); ++q) {
      for (const auto& c : x.cubes(q)) {
        const CubePair p(c, c);
        EXPECT_EQ(p.p(), 0u);
        const auto plus = symbol_of_pair(t, p, {c, 1});
        const auto minus = symbol_of_pair(t, p, {c, -1});
        EXPECT_EQ(plus.key(), (SymbolKey{{}, c.cutting}));
        EXPECT_EQ(plus, minus.reversed());
      }
    }
  }
}

TEST(SymbolOfPair, TreeEdgeToFarVertex) {
  const auto x = fixture("tripod");
  const SymbolTable t(x);
  for (const auto& e : x.cubes(1)) {
    const HyperplaneId h = e.cutting[0];
    const Bits far = e.anchor.flipped(h);
    const CubePair p(e, Cube{far, {}});
    const auto s = symbol_of_pair(t, p, {p.d, 1});
    EXPECT_EQ(s.key(), (SymbolKey{{h}, {}}));
    EXPECT_EQ(s, symbol_from_raw(t, {h}, {}, far, 1));
    // The far end is not the canonical vertex, so the sign flips.
    EXPECT_EQ(s.sign, -1);
  }
}

TEST(SymbolOfPair, EqualSymbolsExactlyWhenAligned) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    const auto pairs = cube_pairs(x);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        const auto& a = pairs[i];
        const auto& b = pairs[j];
        if (a.c.cutting != b.c.cutting || a.d.cutting != b.d.cutting) continue;
        std::size_t sep = 0;
        for (auto h : a.complementary) sep += a.d.anchor.test(h) != b.d.anchor.test(h);
        for (int sa : {1, -1}) {
          for (int sb : {1, -1}) {
            // Canonical orientations of parallel cubes are compatible.
            const bool aligned = (sep % 2 == 0) == (sa == sb);
            EXPECT_EQ(symbol_of_pair(t, a, {a.d, sa}) == symbol_of_pair(t, b, {b.d, sb}),
                      aligned);
          }
        }
      }
    }
  }
}

TEST(SymbolTable, CountsMatchCubePairClasses) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    std::set<SymbolKey> classes;
    for (const auto& p : cube_pairs(x)) classes.insert(SymbolKey{p.complementary, p.d.cutting});
    EXPECT_EQ(classes.size(), t.total());
    for (const auto& k : classes) EXPECT_TRUE(t.index_of(k).has_value());
  }
}

TEST(PsD, ZeroOnTypeZeroQ) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= t.top_degree(); ++q) {
      const auto [b, e] = t.block(q, 0);
      for (std::size_t i = b; i < e; ++i) {
        EXPECT_TRUE(ps_d(t, SymbolCochain::of(t.symbol(q, i))).is_zero());
      }
    }
  }
}

TEST(PsD, TreeSingleTerm) {
  const auto x = fixture("tripod");
  const SymbolTable t(x);
  for (HyperplaneId h = 0; h < 3; ++h) {
    const auto r = t.r_canonical({{h}, {}});
    for (const Bits& rr : {r, r.flipped(h)}) {
      const auto s = symbol_from_raw(t, {h}, {}, rr, 1);
      const auto got = ps_d(t, SymbolCochain::of(s));
      EXPECT_EQ(got, SymbolCochain::of(symbol_from_raw(t, {}, {h}, rr.flipped(h))));
    }
  }
}

TEST(PsD, SquaresToZero) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q + 2 <= t.top_degree(); ++q) {
      EXPECT_TRUE((ps_d_matrix(t, q + 1) * ps_d_matrix(t, q)).is_zero());
      EXPECT_TRUE((ps_delta_matrix(t, q + 1) * ps_delta_matrix(t, q + 2)).is_zero());
    }
  }
}

TEST(PsD, MatrixAgreesWithCochainMap) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= t.top_degree(); ++q) {
      const auto m = ps_d_matrix(t, q);
      const auto md = ps_delta_matrix(t, q);
      for (std::size_t j = 0; j < t.size(q); ++j) {
        const auto f = SymbolCochain::of(t.symbol(q, j));
        const auto g = ps_d(t, f);
        for (std::size_t i = 0; i < t.size(q + 1); ++i) {
          auto it = g.terms.find(t.key(q + 1, i));
          EXPECT_EQ(m.at(i, j), it == g.terms.end() ? 0 : it->second);
        }
        if (q == 0) continue;
        const auto h = ps_delta(t, f);
        for (std::size_t i = 0; i < t.size(q - 1); ++i) {
          auto it = h.terms.find(t.key(q - 1, i));
          EXPECT_EQ(md.at(i, j), it == h.terms.end() ? 0 : it->second);
        }
      }
    }
  }
}

TEST(PsDelta, SquareExample) {
  const auto x = fixture("square");
  const SymbolTable t(x);
  for (const auto& r : x.vertices()) {
    const auto s = symbol_from_raw(t, {}, {0, 1}, r);
    SymbolCochain want{1, {}};
    want.add(symbol_from_raw(t, {0}, {1}, r), -1);
    want.add(symbol_from_raw(t, {1}, {0}, r), 1);
    EXPECT_EQ(ps_delta(t, SymbolCochain::of(s)), want);
  }
}

TEST(PsDelta, ZeroOnTypeP0) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t i = 0; i < t.size(0); ++i) {
      EXPECT_TRUE(ps_delta(t, SymbolCochain::of(t.symbol(0, i))).is_zero());
    }
  }
}

TEST(PsDelta, IsTransposeOfD) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q < t.top_degree(); ++q) {
      EXPECT_EQ(ps_delta_matrix(t, q + 1), ps_d_matrix(t, q).transpose());
    }
  }
}

TEST(PsLaplacian, BlockScalar) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (std::size_t q = 0; q <= t.top_degree(); ++q) {
      const auto l = ps_laplacian(t, q);
      IntMatrix want(t.size(q), t.size(q));
      for (std::size_t i = 0; i < t.size(q); ++i) {
        want.add(i, i, static_cast<long long>(t.key(q, i).p() + q));
      }
      EXPECT_EQ(l, want);
    }
  }
}

TEST(PsLaplacian, SmallBlocks) {
  const auto tree = fixture("tripod");
  const SymbolTable tt(tree);
  const auto [b, e] = tt.block(0, 1);
  EXPECT_EQ(e - b, 3u);
  const auto lt = ps_laplacian(tt, 0);
  for (std::size_t i = b; i < e; ++i) EXPECT_EQ(lt.at(i, i), 1);
  EXPECT_EQ(lt.at(0, 0), 0);

  const auto sq = fixture("square");
  const SymbolTable ts(sq);
  const auto [b1, e1] = ts.block(1, 1);
  EXPECT_EQ(e1 - b1, 2u);
  const auto ls = ps_laplacian(ts, 1);
  for (std::size_t i = b1; i < e1; ++i) {
    for (std::size_t j = b1; j < e1; ++j) EXPECT_EQ(ls.at(i, j), i == j ? 2 : 0);
  }
}

TEST(PsHomotopy, ExactRational) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    const std::size_t top = t.top_degree();
    // h_q : degree q -> q-1, delta divided by p+q.
    std::vector<RatMatrix> h(top + 2);
    for (std::size_t q = 0; q <= top + 1; ++q) {
      RatMatrix m(q == 0 ? 0 : t.size(q - 1), t.size(q));
      if (q > 0) {
        const auto dl = ps_delta_matrix(t, q);
        for (std::size_t j = 0; j < t.size(q); ++j) {
          const long long w = static_cast<long long>(t.key(q, j).p() + q);
          for (const auto& [i, v] : dl.column(j)) m.add(i, j, Rational(v, w));
        }
      }
      h[q] = m;
    }
    for (std::size_t q = 0; q <= top; ++q) {
      const RatMatrix dq = to_rational(ps_d_matrix(t, q));
      RatMatrix lhs = h[q + 1] * dq;
      if (q > 0) lhs = lhs + to_rational(ps_d_matrix(t, q - 1)) * h[q];
      RatMatrix want = RatMatrix::identity(t.size(q));
      if (q == 0) {
        const auto i0 = *t.index_of(SymbolKey{{}, {}});
        want.add(i0, i0, Rational(-1));
      }
      EXPECT_EQ(lhs, want);
    }
  }
}

TEST(PsCohomology, TrivialExceptDegreeZero) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    const auto ranks = ps_cohomology_ranks(t);
    ASSERT_EQ(ranks.size(), x.dimension() + 1);
    EXPECT_EQ(ranks[0], 1u);
    for (std::size_t q = 1; q < ranks.size(); ++q) EXPECT_EQ(ranks[q], 0u);
  }
}

TEST(PsCohomology, SingleVertex) {
  const CubeComplex x(0, {Bits(0)}, Bits(0));
  const SymbolTable t(x);
  EXPECT_EQ(ps_cohomology_ranks(t), (std::vector<std::size_t>{1}));
}

TEST(PsComplex, IndependentOfBaseVertex) {
  for (const auto& x : test_complexes()) {
    const SymbolTable t(x);
    for (const auto& p : x.vertices()) {
      const auto y = x.with_base(p);
      const SymbolTable u(y);
      for (std::size_t q = 0; q <= t.top_degree(); ++q) {
        ASSERT_EQ(t.keys(q), u.keys(q));
        for (const auto& k : t.keys(q)) EXPECT_EQ(t.r_canonical(k), u.r_canonical(k));
        EXPECT_EQ(ps_d_matrix(t, q), ps_d_matrix(u, q));
      }
    }
  }
}

}  // namespace
}  // namespace cubefield
