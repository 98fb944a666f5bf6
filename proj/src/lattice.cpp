#include "dgum/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgum {

GridShape::GridShape(Index height, Index width) : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("grid dimensions must be positive, got " +
                                std::to_string(height) + "x" + std::to_string(width));
  }
}

GridShape build_grid(Index height, Index width) { return GridShape(height, width); }

std::vector<Index> neighbors(Index site, const GridShape& shape, Neighborhood system) {
  if (!shape.contains(site)) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside grid of " +
                                std::to_string(shape.size()) + " sites");
  }
  const int count = neighbor_count(system);
  std::vector<Index> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(neighbor_unchecked(shape, site, k));
  return out;
}

double torus_lag_distance(Index dr, Index dc, const GridShape& shape) {
  const double r = static_cast<double>(std::min(dr, shape.height() - dr));
  const double c = static_cast<double>(std::min(dc, shape.width() - dc));
  return std::sqrt(r * r + c * c);
}

double plane_distance(Index site_a, Index site_b, const GridShape& shape) {
  const double dr = static_cast<double>(shape.row(site_a) - shape.row(site_b));
  const double dc = static_cast<double>(shape.col(site_a) - shape.col(site_b));
  return std::sqrt(dr * dr + dc * dc);
}

std::vector<std::vector<Index>> Coloring::classes() const {
  std::vector<std::vector<Index>> out(num_colors);
  for (Index s = 0; s < static_cast<Index>(colors.size()); ++s) out[colors[s]].push_back(s);
  return out;
}

namespace {

Coloring greedy_coloring(const GridShape& shape, Neighborhood system) {
  const Index n = shape.size();
  const int count = neighbor_count(system);
  Coloring out;
  out.colors.assign(n, -1);
  std::vector<char> used;
  for (Index s = 0; s < n; ++s) {
    used.assign(count + 1, 0);
    for (int k = 0; k < count; ++k) {
      const Index t = neighbor_unchecked(shape, s, k);
      if (t != s && out.colors[t] >= 0 && out.colors[t] <= count) used[out.colors[t]] = 1;
    }
    int color = 0;
    while (used[color]) ++color;
    out.colors[s] = color;
    out.num_colors = std::max(out.num_colors, color + 1);
  }
  return out;
}

// Proper coloring of the cycle C_n: 0/1 alternation, with a third color
// closing odd cycles.
int cycle_color(Index i, Index n) {
  if (n % 2 == 1 && n > 1 && i == n - 1) return 2;
  return static_cast<int>(i % 2);
}

int cycle_colors(Index n) { return n == 1 ? 1 : (n % 2 == 0 ? 2 : 3); }

}  // namespace

Coloring color_grid(const GridShape& shape, Neighborhood system) {
  // The torus is a product of two cycles: for the four-neighborhood the sum
  // of the cycle colors modulo max(k_r, k_c) is proper, for eight the pair is.
  const int kr = cycle_colors(shape.height());
  const int kc = cycle_colors(shape.width());
  Coloring out;
  out.colors.resize(shape.size());
  out.num_colors = system == Neighborhood::four ? std::max(kr, kc) : kr * kc;
  for (Index s = 0; s < shape.size(); ++s) {
    const int a = cycle_color(shape.row(s), shape.height());
    const int b = cycle_color(shape.col(s), shape.width());
    out.colors[s] = system == Neighborhood::four ? (a + b) % out.num_colors : a * kc + b;
  }
  if (kr == 3 || kc == 3) {
    Coloring greedy = greedy_coloring(shape, system);
    if (greedy.num_colors < out.num_colors) return greedy;
  }
  return out;
}

bool is_proper_coloring(const Coloring& coloring, const GridShape& shape,
                        Neighborhood system) {
  if (static_cast<Index>(coloring.colors.size()) != shape.size()) return false;
  const int count = neighbor_count(system);
  for (Index s = 0; s < shape.size(); ++s) {
    for (int k = 0; k < count; ++k) {
      const Index t = neighbor_unchecked(shape, s, k);
      if (t != s && coloring.colors[t] == coloring.colors[s]) return false;
    }
  }
  return true;
}

}  // namespace dgum
