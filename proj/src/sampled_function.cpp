#include "discflux/sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {

SampledFunction::SampledFunction(double lo, double hi,
                                 std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (!(lo_ < hi_)) throw ArgumentError("sampled function needs lo < hi");
  if (values_.size() < 2) {
    throw ArgumentError("sampled function needs at least two nodes");
  }
}

double SampledFunction::operator()(double u) const {
  if (std::isnan(u) || u < lo_ - kClampSlack || u > hi_ + kClampSlack) {
    std::ostringstream msg;
    msg << "evaluation point " << u << " outside [" << lo_ << ", " << hi_
        << "]";
    throw DomainError(msg.str());
  }
  const std::size_t m = intervals();
  if (u <= lo_) return values_.front();
  if (u >= hi_) return values_.back();

  const double s = (u - lo_) / (hi_ - lo_) * static_cast<double>(m);
  // Points that are a node up to rounding return the stored sample.
  const double nearest = std::round(s);
  if (std::abs(s - nearest) <= 1e-10) {
    return values_[std::min(static_cast<std::size_t>(nearest), m)];
  }
  std::size_t k = static_cast<std::size_t>(s);
  if (k >= m) k = m - 1;
  const double t = s - static_cast<double>(k);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

double SampledFunction::slope(std::size_t k) const {
  return (values_[k + 1] - values_[k]) / (node(k + 1) - node(k));
}

double SampledFunction::lipschitz() const {
  double lip = 0.0;
  for (std::size_t k = 0; k < intervals(); ++k) {
    lip = std::max(lip, std::abs(slope(k)));
  }
  return lip;
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double y : values_) m = std::max(m, std::abs(y));
  return m;
}

bool SampledFunction::same_lattice(const SampledFunction& other,
                                   double tol) const {
  const double scale = std::max(1.0, hi_ - lo_);
  return intervals() == other.intervals() &&
         std::abs(lo_ - other.lo_) <= tol * scale &&
         std::abs(hi_ - other.hi_) <= tol * scale;
}

SampledFunction ClippedFunction::resample(double lo, double hi,
                                          std::size_t intervals) const {
  return SampledFunction::sample(lo, hi, intervals,
                                 [this](double u) { return (*this)(u); });
}

}  // namespace discflux
