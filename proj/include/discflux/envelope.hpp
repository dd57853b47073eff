#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace discflux {

/// Indices of the vertices of the lower convex hull of the points
/// (xs[i], ys[i]); xs must be strictly increasing. Collinear interior points
/// are dropped, so consecutive hull slopes increase strictly.
std::vector<std::size_t> lower_convex_hull(std::span<const double> xs,
                                           std::span<const double> ys);

/// Upper concave hull; consecutive slopes decrease strictly.
std::vector<std::size_t> upper_concave_hull(std::span<const double> xs,
                                            std::span<const double> ys);

/// Evaluates the polyline through the hull vertices at every xs[i].
std::vector<double> evaluate_hull(std::span<const double> xs,
                                  std::span<const double> ys,
                                  std::span<const std::size_t> hull);

}  // namespace discflux
