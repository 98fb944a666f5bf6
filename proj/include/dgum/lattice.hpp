#ifndef DGUM_LATTICE_HPP
#define DGUM_LATTICE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace dgum {

using Index = Eigen::Index;

/// Dense per-site field. Rows are grid rows; storage is row-major so that
/// `data()[s]` is site `s` in the row-major site ordering.
template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RealField = Field<double>;
using LabelField = Field<std::int32_t>;

/// Rectangular toroidal lattice. Sites are numbered 0..n-1 in row-major order.
class GridShape {
 public:
  GridShape(Index height, Index width);

  Index height() const { return height_; }
  Index width() const { return width_; }
  Index size() const { return height_ * width_; }

  Index site(Index row, Index col) const { return row * width_ + col; }
  Index row(Index site) const { return site / width_; }
  Index col(Index site) const { return site % width_; }

  bool contains(Index site) const { return site >= 0 && site < size(); }

  friend bool operator==(const GridShape&, const GridShape&) = default;

 private:
  Index height_;
  Index width_;
};

/// Throws std::invalid_argument on a zero (or negative) dimension.
GridShape build_grid(Index height, Index width);

template <typename Scalar>
GridShape shape_of(const Field<Scalar>& field) {
  return GridShape(field.rows(), field.cols());
}

enum class Neighborhood { four, eight };

constexpr int neighbor_count(Neighborhood system) {
  return system == Neighborhood::four ? 4 : 8;
}

/// Row/column offsets in the fixed order N, S, W, E, NW, NE, SW, SE.
inline constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets{{
    {-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

/// Wrapped neighbor of `site` for offset `k` of kNeighborOffsets. No range
/// checks; this is the inner-loop accessor used by the samplers.
inline Index neighbor_unchecked(const GridShape& shape, Index site, int k) {
  const Index h = shape.height();
  const Index w = shape.width();
  Index r = site / w + kNeighborOffsets[k][0];
  Index c = site % w + kNeighborOffsets[k][1];
  r = r < 0 ? r + h : (r >= h ? r - h : r);
  c = c < 0 ? c + w : (c >= w ? c - w : c);
  return r * w + c;
}

/// Toroidal neighbors of `site` in the order N, S, W, E[, NW, NE, SW, SE].
/// Throws std::invalid_argument if the site is out of range.
std::vector<Index> neighbors(Index site, const GridShape& shape, Neighborhood system);

/// Euclidean length of the shortest wrapped displacement for a lag with
/// 0 <= dr < height and 0 <= dc < width.
double torus_lag_distance(Index dr, Index dc, const GridShape& shape);

/// Euclidean distance between unwrapped site coordinates.
double plane_distance(Index site_a, Index site_b, const GridShape& shape);

struct Coloring {
  std::vector<int> colors;
  int num_colors = 0;

  /// Sites of each color, in increasing site order.
  std::vector<std::vector<Index>> classes() const;
};

/// Proper coloring of the neighborhood graph. Even grids get the regular
/// 2-color (four) or 4-color (eight) patterns. Odd dimensions need a third
/// color along that axis; the cycle-product coloring is used unless a greedy
/// raster-order coloring needs fewer colors.
Coloring color_grid(const GridShape& shape, Neighborhood system);

/// True when no two neighboring (distinct) sites share a color.
bool is_proper_coloring(const Coloring& coloring, const GridShape& shape,
                        Neighborhood system);

}  // namespace dgum

#endif  // DGUM_LATTICE_HPP
