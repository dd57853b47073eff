#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace discflux {

/// Continuous piecewise-linear function on a uniform lattice of
/// `intervals() + 1` nodes over [lo, hi]. Evaluation at a node returns the
/// stored sample exactly.
class SampledFunction {
 public:
  /// Slack beyond [lo, hi] that is clamped instead of rejected.
  static constexpr double kClampSlack = 1e-9;

  SampledFunction(double lo, double hi, std::vector<double> values);

  template <typename Fn>
  static SampledFunction sample(double lo, double hi, std::size_t intervals,
                                Fn&& fn) {
    std::vector<double> values(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
      values[k] = fn(node_position(lo, hi, intervals, k));
    }
    return SampledFunction(lo, hi, std::move(values));
  }

  /// Position of node k; every lattice in the library is built with this.
  static double node_position(double lo, double hi, std::size_t intervals,
                              std::size_t k) {
    if (k == intervals) return hi;
    return lo + (hi - lo) * static_cast<double>(k) /
                    static_cast<double>(intervals);
  }

  /// Throws DomainError outside [lo - slack, hi + slack].
  double operator()(double u) const;

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t intervals() const noexcept { return values_.size() - 1; }
  double spacing() const noexcept { return (hi_ - lo_) / intervals(); }
  double node(std::size_t k) const {
    return node_position(lo_, hi_, intervals(), k);
  }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t k) const { return values_[k]; }

  /// Slope of segment [node k, node k+1].
  double slope(std::size_t k) const;
  /// Largest |slope| over all segments.
  double lipschitz() const;
  double max_abs() const;

  bool same_lattice(const SampledFunction& other, double tol = 1e-12) const;

 private:
  double lo_;
  double hi_;
  std::vector<double> values_;
};

/// f * chi_[lo,hi]: the sampled branch inside its interval, zero outside.
class ClippedFunction {
 public:
  explicit ClippedFunction(SampledFunction inner) : inner_(std::move(inner)) {}

  double operator()(double u) const {
    if (u < inner_.lo() || u > inner_.hi()) return 0.0;
    return inner_(u);
  }

  const SampledFunction& inner() const noexcept { return inner_; }

  /// Resample on an arbitrary interval (may extend past the support).
  SampledFunction resample(double lo, double hi, std::size_t intervals) const;

 private:
  SampledFunction inner_;
};

}  // namespace discflux
