#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "causalkh/cube.hpp"
#include "causalkh/invariants.hpp"
#include "support/naive_kh.hpp"

using namespace causalkh;

namespace {

PlanarDiagram hopf_pd() { return parse_pd("X(1,3,2,4) X(3,1,4,2)"); }

BraidWord random_word(std::mt19937_64& rng, int max_strands, int max_len) {
  int strands = std::uniform_int_distribution<int>(2, max_strands)(rng);
  int length = std::uniform_int_distribution<int>(0, max_len)(rng);
  std::vector<int> letters;
  for (int n = 0; n < length; ++n) {
    int g = std::uniform_int_distribution<int>(1, strands - 1)(rng);
    letters.push_back(rng() % 2 ? g : -g);
  }
  return BraidWord(strands, letters);
}

}  // namespace

TEST(Smooth, HopfResolutions) {
  PlanarDiagram d = hopf_pd();
  EXPECT_EQ(smooth(d, Resolution{0b00, 2}).count, 2u);
  EXPECT_EQ(smooth(d, Resolution{0b01, 2}).count, 1u);
  EXPECT_EQ(smooth(d, Resolution{0b10, 2}).count, 1u);
  EXPECT_EQ(smooth(d, Resolution{0b11, 2}).count, 2u);
  EXPECT_THROW(smooth(d, Resolution{0, 3}), IntegrityError);
}

TEST(Smooth, U2CirclesAreEssential) {
  AnnularDiagram u2 = model_u2();
  StateCircles s = smooth(u2.planar(), Resolution{0, 0}, u2.closure_arcs());
  EXPECT_EQ(s.count, 2u);
  EXPECT_TRUE(s.essential[0]);
  EXPECT_TRUE(s.essential[1]);
  EXPECT_EQ(s.essential_mask(), 0b11u);
}

TEST(Smooth, MatchesUnionFindCircleCount) {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 100; ++n) {
    PlanarDiagram d = braid_closure(random_word(rng, 4, 7)).planar();
    naive::Pd pd;
    for (const auto& x : d.crossings()) pd.crossings.push_back(x.arcs);
    pd.loops = static_cast<int>(d.loops().size());
    for (std::uint32_t r = 0; r < (1u << d.crossing_count()); ++r) {
      EXPECT_EQ(smooth(d, Resolution{r, d.crossing_count()}).count,
                static_cast<std::size_t>(naive::circles(pd, r).second));
    }
  }
}

TEST(Smooth, InvariantUnderCrossingPermutation) {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 40; ++n) {
    PlanarDiagram d = braid_closure(random_word(rng, 3, 6)).planar();
    const std::size_t c = d.crossing_count();
    if (c < 2) continue;
    std::vector<std::size_t> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::array<int, 4>> code;
    for (std::size_t k = 0; k < c; ++k) code.push_back(d.crossings()[perm[k]].arcs);
    PlanarDiagram shuffled = PlanarDiagram::from_code(code, d.loops());
    for (std::uint32_t r = 0; r < (1u << c); ++r) {
      std::uint32_t moved = 0;
      for (std::size_t k = 0; k < c; ++k)
        if ((r >> perm[k]) & 1u) moved |= 1u << k;
      EXPECT_EQ(smooth(d, Resolution{r, c}).count, smooth(shuffled, Resolution{moved, c}).count);
    }
  }
}

TEST(KhComplex, Unknot) {
  ChainComplex cx = build_kh_complex(model_unknot());
  EXPECT_EQ(cx.total_generators(), 2u);
  ASSERT_EQ(cx.blocks.size(), 2u);
  EXPECT_EQ(cx.blocks[0].key.j, -1);
  EXPECT_EQ(cx.blocks[1].key.j, 1);
  EXPECT_TRUE(cx.blocks[0].differentials.empty());
}

TEST(KhComplex, HopfChainDimensions) {
  ChainComplex cx = build_kh_complex(model_hopf(+1));
  EXPECT_EQ(cx.total_generators(), 12u);
  std::vector<std::size_t> by_i(3, 0);
  for (const auto& b : cx.blocks)
    for (int i = 0; i <= 2; ++i) by_i[i] += b.dim(i);
  EXPECT_EQ(by_i, (std::vector<std::size_t>{4, 4, 4}));
}

TEST(KhComplex, KinkHasUnknotHomology) {
  EXPECT_TRUE(kh(parse_pd("X(1,1,2,2)")).same_dims(kh(model_unknot())));
}

TEST(KhComplex, CrossingLimit) {
  PlanarDiagram d = braid_closure(BraidWord(2, {1, 1, 1, 1, 1})).planar();
  ComplexOptions opts;
  opts.crossing_limit = 4;
  try {
    build_kh_complex(d, opts);
    FAIL() << "expected a resource error";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("crossing limit 4"), std::string::npos);
  }
  opts.crossing_limit = 5;
  EXPECT_NO_THROW(build_kh_complex(d, opts));
}

TEST(AkhComplex, U2HasZeroDifferential) {
  ChainComplex cx = build_akh_complex(model_u2());
  EXPECT_EQ(cx.total_generators(), 4u);
  for (const auto& b : cx.blocks) EXPECT_TRUE(b.differentials.empty());
}

TEST(CubeProperty, DSquaredVanishes) {
  std::mt19937_64 rng(33);
  for (int n = 0; n < 60; ++n) {
    AnnularDiagram a = braid_closure(random_word(rng, 3, 8));
    EXPECT_GE(check_d_squared(build_kh_complex(a.planar())), 0u);
    EXPECT_NO_THROW(check_d_squared(build_akh_complex(a)));
    EXPECT_NO_THROW(check_d_squared(build_kh_complex(augment_with_meridian(a))));
  }
}

TEST(CubeProperty, GeneratorCountIsStateSum) {
  std::mt19937_64 rng(34);
  for (int n = 0; n < 60; ++n) {
    AnnularDiagram a = braid_closure(random_word(rng, 4, 7));
    const PlanarDiagram& d = a.planar();
    std::size_t expected = 0;
    for (std::uint32_t r = 0; r < (1u << d.crossing_count()); ++r)
      expected += std::size_t{1} << smooth(d, Resolution{r, d.crossing_count()}).count;
    EXPECT_EQ(build_kh_complex(d).total_generators(), expected);
    EXPECT_EQ(build_akh_complex(a).total_generators(), expected);
  }
}

TEST(CubeProperty, QuantumGradingParity) {
  // j = number of components (mod 2) on every generator.
  std::mt19937_64 rng(35);
  for (int n = 0; n < 60; ++n) {
    AnnularDiagram a = braid_closure(random_word(rng, 4, 7));
    ChainComplex cx = build_kh_complex(a.planar());
    for (const auto& b : cx.blocks)
      EXPECT_EQ(((b.key.j - a.component_count()) % 2 + 2) % 2, 0) << a.presentation().to_string();
  }
}

TEST(CubeProperty, AnnularGradingStaysWithinEssentialCount) {
  // k has the parity and range of the essential circle count; the annular
  // complex only keeps k-preserving entries, and dropped ones lower k by 2
  // (otherwise the build throws).
  std::mt19937_64 rng(36);
  for (int n = 0; n < 60; ++n) {
    AnnularDiagram a = braid_closure(random_word(rng, 3, 8));
    ChainComplex cx;
    ASSERT_NO_THROW(cx = build_akh_complex(a));
    for (const auto& b : cx.blocks) {
      ASSERT_TRUE(b.key.k.has_value());
      EXPECT_LE(std::abs(*b.key.k), a.strand_count());
      EXPECT_EQ(((*b.key.k - a.strand_count()) % 2 + 2) % 2, 0);
    }
  }
}

TEST(DumpComplex, ListsBlocks) {
  std::ostringstream out;
  dump_complex(build_akh_complex(model_u2()), out);
  EXPECT_NE(out.str().find("akh complex"), std::string::npos);
  EXPECT_NE(out.str().find("k=2"), std::string::npos);
}
