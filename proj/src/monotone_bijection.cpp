#include "discflux/monotone_bijection.hpp"

#include <algorithm>
#include <limits>

#include "discflux/errors.hpp"

namespace discflux {
namespace {

// Segment index k such that xs[k] <= x < xs[k+1], clamped to [0, n-2].
std::size_t segment_of(std::span<const double> xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(k, xs.size() - 2);
}

double interpolate(std::span<const double> xs, std::span<const double> ys,
                   double x) {
  const std::size_t k = segment_of(xs, x);
  const double x0 = xs[k];
  const double x1 = xs[k + 1];
  if (x == x0) return ys[k];
  if (x == x1) return ys[k + 1];
  const double t = (x - x0) / (x1 - x0);
  return ys[k] + t * (ys[k + 1] - ys[k]);
}

}  // namespace

MonotoneBijection::MonotoneBijection(std::vector<double> breakpoints,
                                     std::vector<double> values) {
  *this = unchecked(std::move(breakpoints), std::move(values));
  if (auto bad = first_violation()) {
    throw ArgumentError("bijection table not strictly increasing at segment " +
                        std::to_string(*bad));
  }
}

MonotoneBijection MonotoneBijection::unchecked(std::vector<double> breakpoints,
                                               std::vector<double> values) {
  if (breakpoints.size() != values.size() || breakpoints.size() < 2) {
    throw ArgumentError("bijection table needs >= 2 rows of equal length");
  }
  MonotoneBijection m;
  m.breakpoints_ = std::move(breakpoints);
  m.values_ = std::move(values);
  return m;
}

MonotoneBijection MonotoneBijection::identity(double lo, double hi) {
  return MonotoneBijection({lo, hi}, {lo, hi});
}

MonotoneBijection MonotoneBijection::translation(double lo, double hi,
                                                 double shift) {
  return MonotoneBijection({lo, hi}, {lo + shift, hi + shift});
}

double MonotoneBijection::forward(double u) const {
  return interpolate(breakpoints_, values_, u);
}

double MonotoneBijection::inverse(double y) const {
  return interpolate(values_, breakpoints_, y);
}

double MonotoneBijection::min_slope() const {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    s = std::min(s, (values_[k + 1] - values_[k]) /
                        (breakpoints_[k + 1] - breakpoints_[k]));
  }
  return s;
}

double MonotoneBijection::max_slope() const {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    s = std::max(s, (values_[k + 1] - values_[k]) /
                        (breakpoints_[k + 1] - breakpoints_[k]));
  }
  return s;
}

std::optional<std::size_t> MonotoneBijection::first_violation() const {
  for (std::size_t k = 0; k + 1 < size(); ++k) {
    if (!(breakpoints_[k + 1] > breakpoints_[k]) ||
        !(values_[k + 1] > values_[k])) {
      return k;
    }
  }
  return std::nullopt;
}

}  // namespace discflux
