#include "discflux/flux_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {

FluxPair::FluxPair(SampledFunction f, SampledFunction g)
    : f_(std::move(f)), g_(std::move(g)) {
  if (!f_.same_lattice(g_)) {
    throw ArgumentError("flux branches must share one sample lattice");
  }
  const double ends[] = {f_.values().front(), f_.values().back(),
                         g_.values().front(), g_.values().back()};
  for (double e : ends) {
    if (std::abs(e) > kTolEndpoint) {
      std::ostringstream msg;
      msg << "flux endpoint value " << e
          << " violates f(a)=f(b)=g(a)=g(b)=0";
      throw ArgumentError(msg.str());
    }
  }
}

double FluxPair::flux_scale() const {
  const double s = std::max(f_.max_abs(), g_.max_abs());
  return s > 0.0 ? s : 1.0;
}

double truncate(double u, double l, double k) {
  if (!(l < k)) throw ArgumentError("truncation needs l < k");
  return std::max(l, std::min(k, u));
}

namespace {

std::size_t default_intervals(const SampledFunction& flux,
                              const MonotoneBijection& m,
                              std::size_t requested) {
  if (requested > 0) return requested;
  const double ratio =
      (m.domain_hi() - m.domain_lo()) / (flux.hi() - flux.lo());
  const double n = std::round(static_cast<double>(flux.intervals()) * ratio);
  return std::max<std::size_t>(8, static_cast<std::size_t>(n));
}

}  // namespace

SampledFunction compose_flux(const SampledFunction& flux,
                             const MonotoneBijection& m,
                             std::size_t intervals) {
  const double slack = SampledFunction::kClampSlack;
  if (m.range_lo() < flux.lo() - slack || m.range_hi() > flux.hi() + slack) {
    std::ostringstream msg;
    msg << "bijection range [" << m.range_lo() << ", " << m.range_hi()
        << "] escapes flux domain [" << flux.lo() << ", " << flux.hi() << "]";
    throw CompositionError(msg.str());
  }
  const std::size_t n = default_intervals(flux, m, intervals);
  return SampledFunction::sample(m.domain_lo(), m.domain_hi(), n,
                                 [&](double v) { return flux(m(v)); });
}

SampledFunction compose_flux(const ClippedFunction& flux,
                             const MonotoneBijection& m,
                             std::size_t intervals) {
  const std::size_t n = default_intervals(flux.inner(), m, intervals);
  return SampledFunction::sample(m.domain_lo(), m.domain_hi(), n,
                                 [&](double v) { return flux(m(v)); });
}

ClippedFunction clip_flux(const SampledFunction& flux) {
  return ClippedFunction(flux);
}

namespace {

struct Run {
  std::size_t first;
  std::size_t last;
  double value;
};

// Groups consecutive samples that stay within tol of the run's first value.
std::vector<Run> flat_runs(std::span<const double> ys, double tol) {
  std::vector<Run> runs;
  std::size_t start = 0;
  double lo = ys[0];
  double hi = ys[0];
  for (std::size_t k = 1; k <= ys.size(); ++k) {
    if (k < ys.size()) {
      const double nlo = std::min(lo, ys[k]);
      const double nhi = std::max(hi, ys[k]);
      if (nhi - nlo <= tol) {
        lo = nlo;
        hi = nhi;
        continue;
      }
    }
    runs.push_back({start, k - 1, 0.5 * (lo + hi)});
    if (k < ys.size()) {
      start = k;
      lo = hi = ys[k];
    }
  }
  return runs;
}

}  // namespace

std::vector<LocalMaximum> find_local_maxima(const SampledFunction& flux,
                                            double tol_flat) {
  if (flux.intervals() < 8) {
    throw ArgumentError("local maxima need at least 8 sample intervals");
  }
  const auto runs = flat_runs(flux.values(), tol_flat);
  std::vector<LocalMaximum> maxima;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    if (runs[r - 1].value < runs[r].value &&
        runs[r + 1].value < runs[r].value) {
      const double left = flux.node(runs[r].first);
      const double right = flux.node(runs[r].last);
      const std::size_t mid = (runs[r].first + runs[r].last) / 2;
      maxima.push_back({0.5 * (left + right), flux.value(mid)});
    }
  }
  return maxima;
}

ConstantIntervalSet detect_constant_intervals(const SampledFunction& flux,
                                              Branch branch,
                                              double tol_flat) {
  ConstantIntervalSet set;
  set.branch = branch;
  for (const Run& run : flat_runs(flux.values(), tol_flat)) {
    if (run.last > run.first) {
      set.intervals.push_back({flux.node(run.first), flux.node(run.last)});
    }
  }
  return set;
}

namespace {

std::vector<double> parse_coefficients(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad polynomial coefficient '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty polynomial coefficient list");
  return out;
}

double horner(const std::vector<double>& c, double u) {
  double y = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * u + *it;
  return y;
}

}  // namespace

bool is_registry_flux(const std::string& name) {
  return name == "burgers-like" || name == "demo-cross" ||
         name == "demo-swapped" || name == "plateau" ||
         name.rfind("poly:", 0) == 0;
}

FluxPair registry_flux(const std::string& name, std::size_t intervals) {
  auto logistic = [](double u) { return u * (1.0 - u); };
  auto cubic = [](double u) { return 2.0 * u * (1.0 - u) * (1.0 - u); };
  auto plateau = [](double u) {
    return std::min({4.0 * u, 1.0, 4.0 * (1.0 - u)});
  };
  if (name == "burgers-like") {
    return FluxPair::sample(0.0, 1.0, intervals, logistic, logistic);
  }
  if (name == "demo-cross") {
    return FluxPair::sample(0.0, 1.0, intervals, logistic, cubic);
  }
  if (name == "demo-swapped") {
    return FluxPair::sample(0.0, 1.0, intervals, cubic, logistic);
  }
  if (name == "plateau") {
    return FluxPair::sample(0.0, 1.0, intervals, plateau, plateau);
  }
  if (name.rfind("poly:", 0) == 0) {
    const std::string body = name.substr(5);
    const auto bar = body.find('|');
    if (bar == std::string::npos) {
      throw ConfigError("poly flux needs 'poly:<f coeffs>|<g coeffs>'");
    }
    const auto fc = parse_coefficients(body.substr(0, bar));
    const auto gc = parse_coefficients(body.substr(bar + 1));
    return FluxPair::sample(
        0.0, 1.0, intervals, [&](double u) { return horner(fc, u); },
        [&](double u) { return horner(gc, u); });
  }
  throw ConfigError("unknown flux '" + name + "'");
}

}  // namespace discflux
