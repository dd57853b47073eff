#include "discflux/initial_data.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {

InitialData InitialData::constant(double k) {
  std::ostringstream d;
  d << "constant:" << k;
  return InitialData([k](double) { return k; }, d.str());
}

InitialData InitialData::riemann(double u_left, double u_right) {
  std::ostringstream d;
  d << "riemann:" << u_left << "," << u_right;
  return InitialData(
      [u_left, u_right](double x) { return x <= 0.0 ? u_left : u_right; },
      d.str());
}

InitialData InitialData::piecewise_constant(std::vector<double> breaks,
                                            std::vector<double> levels) {
  if (levels.size() != breaks.size() + 1) {
    throw ArgumentError("piecewise constant data needs levels = breaks + 1");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end())) {
    throw ArgumentError("piecewise constant breaks must be sorted");
  }
  auto data = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(
      std::move(breaks), std::move(levels));
  return InitialData(
      [data](double x) {
        const auto& [br, lv] = *data;
        const auto it = std::lower_bound(br.begin(), br.end(), x);
        return lv[static_cast<std::size_t>(it - br.begin())];
      },
      "piecewise-constant");
}

InitialData InitialData::random_bv(std::uint64_t seed, int jumps, double a,
                                   double b, double half_width) {
  if (jumps < 0) throw ArgumentError("random BV data needs jumps >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> where(-half_width, half_width);
  std::uniform_real_distribution<double> level(a, b);
  std::vector<double> breaks(static_cast<std::size_t>(jumps));
  for (double& x : breaks) x = where(rng);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> levels(static_cast<std::size_t>(jumps) + 1);
  for (double& u : levels) u = level(rng);
  InitialData data = piecewise_constant(std::move(breaks), std::move(levels));
  std::ostringstream d;
  d << "random-bv:" << seed << "," << jumps;
  data.description_ = d.str();
  return data;
}

InitialData InitialData::table(std::vector<double> xs, std::vector<double> us) {
  if (xs.size() != us.size() || xs.empty()) {
    throw ArgumentError("initial data table needs matching non-empty columns");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw ArgumentError("initial data x column must increase strictly");
    }
  }
  auto data = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(
      std::move(xs), std::move(us));
  return InitialData(
      [data](double x) {
        const auto& [px, pu] = *data;
        if (x <= px.front()) return pu.front();
        if (x >= px.back()) return pu.back();
        const auto it = std::upper_bound(px.begin(), px.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - px.begin()) - 1;
        const double t = (x - px[k]) / (px[k + 1] - px[k]);
        return pu[k] + t * (pu[k + 1] - pu[k]);
      },
      "table");
}

std::vector<double> InitialData::cell_values(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = profile_(x[i]);
  return out;
}

InitialData pointwise_max(const InitialData& lhs, const InitialData& rhs) {
  return InitialData(
      [lhs, rhs](double x) { return std::max(lhs(x), rhs(x)); },
      "max(" + lhs.description() + "," + rhs.description() + ")");
}

}  // namespace discflux
