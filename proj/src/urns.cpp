#include "antnet/urns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace antnet {

namespace {

double checked_g(const std::function<double(double)>& G, double x) {
  const double v = G(x);
  if (!(v >= 0.0 && v <= 1.0))
    throw std::runtime_error("G-urn: G value outside [0,1]");
  return v;
}

}  // namespace

GUrnResult g_urn_run(const std::function<double(double)>& G, uint64_t n_steps,
                     uint64_t seed, double c,
                     std::span<const uint64_t> checkpoints) {
  if (c < 0.0) throw std::invalid_argument("normalization constant c must be >= 0");
  Rng rng(seed);
  GUrnResult result;
  uint64_t x = 1;
  size_t next_cp = 0;
  for (uint64_t n = 0; n < n_steps; ++n) {
    const double denom = static_cast<double>(n) + c;
    const double xhat =
        denom > 0.0 ? std::min(static_cast<double>(x) / denom, 1.0) : 1.0;
    if (rng.u01() < checked_g(G, xhat)) ++x;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == n + 1) {
      const double d = static_cast<double>(n + 1) + c;
      result.trajectory.emplace_back(n + 1, static_cast<double>(x) / d);
      ++next_cp;
    }
  }
  result.final_x = x;
  result.final_xhat =
      static_cast<double>(x) / (static_cast<double>(n_steps) + c);
  return result;
}

FixedPoints stable_fixed_points(const std::function<double(double)>& G,
                                double deriv_tol, int grid) {
  FixedPoints out;
  const double eps = 1e-12;

  auto h = [&](double x) { return checked_g(G, x) - x; };

  bool identity = true;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    if (std::fabs(h(x)) > 1e-9) {
      identity = false;
      break;
    }
  }
  if (identity) {
    out.degenerate_identity = true;
    return out;
  }

  auto derivative = [&](double p) {
    const double step = 1e-6;
    const double lo = std::max(0.0, p - step);
    const double hi = std::min(1.0, p + step);
    return (checked_g(G, hi) - checked_g(G, lo)) / (hi - lo);
  };

  std::vector<double> roots;
  auto add_root = [&](double p) {
    for (double q : roots)
      if (std::fabs(q - p) < 1e-7) return;
    roots.push_back(p);
  };

  if (std::fabs(h(0.0)) < eps) add_root(0.0);
  if (std::fabs(h(1.0)) < eps) add_root(1.0);
  double prev = h(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double x0 = static_cast<double>(i - 1) / grid;
    const double x1 = static_cast<double>(i) / grid;
    const double cur = h(x1);
    if (std::fabs(cur) < eps) {
      add_root(x1);
    } else if (prev * cur < 0.0) {
      double lo = x0, hi = x1;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(lo) * h(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      add_root(0.5 * (lo + hi));
    }
    prev = cur;
  }

  for (double p : roots)
    if (derivative(p) <= 1.0 + deriv_tol) out.stable.push_back(p);
  std::sort(out.stable.begin(), out.stable.end());
  return out;
}

PolyaResult polya_coupled_run(double l1, double l2p, double l3p, double alpha,
                              uint64_t n_steps, uint64_t seed,
                              std::span<const uint64_t> checkpoints) {
  if (l1 < 1.0 || l2p < 1.0 || l3p < 1.0)
    throw std::invalid_argument("urn lengths must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
  Rng rng(seed);
  PolyaState state{l1, l2p + l3p, alpha};
  PolyaResult result;
  size_t next_cp = 0;
  for (uint64_t n = 0; n < n_steps; ++n) {
    const double u1 = rng.u01();
    const double u2 = rng.u01();
    state.step(u1, u2);
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == n + 1) {
      result.trajectory.push_back({n + 1, state.n1, state.n2});
      ++next_cp;
    }
  }
  if (result.trajectory.empty() ||
      result.trajectory.back()[0] != n_steps)
    result.trajectory.push_back({n_steps, state.n1, state.n2});
  return result;
}

}  // namespace antnet
