#include "discflux/envelope.hpp"

#include "discflux/errors.hpp"

namespace discflux {
namespace {

// Andrew's monotone chain; `sign` = +1 keeps left turns (lower hull).
std::vector<std::size_t> monotone_chain(std::span<const double> xs,
                                        std::span<const double> ys,
                                        double sign) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw ArgumentError("hull needs matching, non-empty point lists");
  }
  std::vector<std::size_t> hull;
  hull.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2];
      const std::size_t q = hull.back();
      const double cross = (xs[q] - xs[p]) * (ys[i] - ys[p]) -
                           (ys[q] - ys[p]) * (xs[i] - xs[p]);
      if (sign * cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

}  // namespace

std::vector<std::size_t> lower_convex_hull(std::span<const double> xs,
                                           std::span<const double> ys) {
  return monotone_chain(xs, ys, 1.0);
}

std::vector<std::size_t> upper_concave_hull(std::span<const double> xs,
                                            std::span<const double> ys) {
  return monotone_chain(xs, ys, -1.0);
}

std::vector<double> evaluate_hull(std::span<const double> xs,
                                  std::span<const double> ys,
                                  std::span<const std::size_t> hull) {
  std::vector<double> out(xs.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (seg + 2 < hull.size() && xs[i] > xs[hull[seg + 1]]) ++seg;
    const std::size_t p = hull[seg];
    if (hull.size() == 1 || i == p) {
      out[i] = ys[p];
      continue;
    }
    const std::size_t q = hull[seg + 1];
    if (i == q) {
      out[i] = ys[q];
      continue;
    }
    const double t = (xs[i] - xs[p]) / (xs[q] - xs[p]);
    out[i] = ys[p] + t * (ys[q] - ys[p]);
  }
  return out;
}

}  // namespace discflux
