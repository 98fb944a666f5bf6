#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dgum/lattice.hpp"

using namespace dgum;

TEST(Grid, BuildGrid) {
  EXPECT_EQ(build_grid(2, 3).size(), 6);
  EXPECT_EQ(build_grid(150, 150).size(), 22500);
  EXPECT_EQ(build_grid(1, 1).size(), 1);
  EXPECT_THROW(build_grid(0, 3), std::invalid_argument);
  EXPECT_THROW(build_grid(3, 0), std::invalid_argument);
}

TEST(Grid, SiteIndexingIsBijective) {
  const GridShape shape(7, 5);
  for (Index s = 0; s < shape.size(); ++s) {
    EXPECT_EQ(shape.site(shape.row(s), shape.col(s)), s);
  }
  EXPECT_EQ(shape.site(1, 0), 5);
}

TEST(Neighbors, FourWrapsAround) {
  const GridShape shape(4, 4);
  const auto nb = neighbors(shape.site(0, 0), shape, Neighborhood::four);
  const std::vector<Index> expected{shape.site(3, 0), shape.site(1, 0), shape.site(0, 3),
                                    shape.site(0, 1)};
  EXPECT_EQ(nb, expected);
}

TEST(Neighbors, EightAreDistinctAndAdjacent) {
  const GridShape shape(4, 4);
  const Index s = shape.site(1, 1);
  const auto nb = neighbors(s, shape, Neighborhood::eight);
  ASSERT_EQ(nb.size(), 8u);
  EXPECT_EQ(std::set<Index>(nb.begin(), nb.end()).size(), 8u);
  for (Index t : nb) {
    EXPECT_LE(std::abs(shape.row(t) - 1), 1);
    EXPECT_LE(std::abs(shape.col(t) - 1), 1);
    EXPECT_NE(t, s);
  }
}

TEST(Neighbors, SymmetricExhaustive) {
  const GridShape shape(5, 7);
  for (auto system : {Neighborhood::four, Neighborhood::eight}) {
    for (Index a = 0; a < shape.size(); ++a) {
      const auto na = neighbors(a, shape, system);
      EXPECT_EQ(static_cast<int>(na.size()), neighbor_count(system));
      for (Index b = 0; b < shape.size(); ++b) {
        const auto nb = neighbors(b, shape, system);
        const bool ab = std::find(na.begin(), na.end(), b) != na.end();
        const bool ba = std::find(nb.begin(), nb.end(), a) != nb.end();
        EXPECT_EQ(ab, ba) << a << " " << b;
      }
    }
  }
}

TEST(Neighbors, OutOfRange) {
  EXPECT_THROW(neighbors(16, GridShape(4, 4), Neighborhood::four), std::invalid_argument);
  EXPECT_THROW(neighbors(-1, GridShape(4, 4), Neighborhood::four), std::invalid_argument);
}

TEST(Distance, TorusLag) {
  EXPECT_DOUBLE_EQ(torus_lag_distance(0, 0, GridShape(9, 4)), 0.0);
  EXPECT_DOUBLE_EQ(torus_lag_distance(7, 0, GridShape(8, 8)), 1.0);
  EXPECT_DOUBLE_EQ(torus_lag_distance(3, 4, GridShape(100, 100)), 5.0);
}

TEST(Distance, TorusLagNegationSymmetry) {
  const GridShape shape(6, 9);
  for (Index dr = 0; dr < 6; ++dr) {
    for (Index dc = 0; dc < 9; ++dc) {
      EXPECT_DOUBLE_EQ(torus_lag_distance(dr, dc, shape),
                       torus_lag_distance((6 - dr) % 6, (9 - dc) % 9, shape));
    }
  }
}

TEST(Distance, Plane) {
  const GridShape shape(150, 150);
  EXPECT_DOUBLE_EQ(plane_distance(0, 0, shape), 0.0);
  EXPECT_DOUBLE_EQ(plane_distance(0, shape.site(3, 4), shape), 5.0);
  EXPECT_DOUBLE_EQ(plane_distance(0, shape.site(0, 149), shape), 149.0);
}

TEST(Coloring, EvenGrids) {
  const GridShape shape(4, 4);
  const Coloring four = color_grid(shape, Neighborhood::four);
  EXPECT_EQ(four.num_colors, 2);
  EXPECT_EQ(four.colors[shape.site(0, 0)], four.colors[shape.site(1, 1)]);
  EXPECT_NE(four.colors[shape.site(0, 0)], four.colors[shape.site(0, 1)]);
  const Coloring eight = color_grid(shape, Neighborhood::eight);
  EXPECT_EQ(eight.num_colors, 4);
  EXPECT_EQ(eight.colors[shape.site(0, 0)], eight.colors[shape.site(2, 2)]);
  EXPECT_TRUE(is_proper_coloring(eight, shape, Neighborhood::eight));
}

TEST(Coloring, OddGridFallback) {
  const GridShape shape(5, 5);
  const Coloring c = color_grid(shape, Neighborhood::four);
  EXPECT_TRUE(is_proper_coloring(c, shape, Neighborhood::four));
  EXPECT_LE(c.num_colors, 3);
}

TEST(Coloring, ProperForAllShapesUpTo64) {
  for (Index h = 1; h <= 64; h += (h < 12 ? 1 : 13)) {
    for (Index w = 1; w <= 64; w += (w < 12 ? 1 : 13)) {
      const GridShape shape(h, w);
      for (auto system : {Neighborhood::four, Neighborhood::eight}) {
        const Coloring c = color_grid(shape, system);
        EXPECT_TRUE(is_proper_coloring(c, shape, system)) << h << "x" << w;
        // Every site must land in exactly one class.
        Index total = 0;
        for (const auto& cls : c.classes()) total += static_cast<Index>(cls.size());
        EXPECT_EQ(total, shape.size());
      }
    }
  }
  const GridShape big(64, 64);
  EXPECT_TRUE(is_proper_coloring(color_grid(big, Neighborhood::eight), big, Neighborhood::eight));
}

TEST(Coloring, DetectsImproper) {
  const GridShape shape(4, 4);
  Coloring c = color_grid(shape, Neighborhood::four);
  c.colors[shape.site(0, 1)] = c.colors[shape.site(0, 0)];
  EXPECT_FALSE(is_proper_coloring(c, shape, Neighborhood::four));
}
