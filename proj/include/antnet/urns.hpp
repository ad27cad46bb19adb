#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "antnet/rng.hpp"

namespace antnet {

struct GUrnResult {
  std::vector<std::pair<uint64_t, double>> trajectory;  // (n, Xhat) checkpoints
  uint64_t final_x = 1;
  double final_xhat = 0.0;
};

// X_0 = 1; at step n the urn increments with probability G(X_n / (n + c)).
// The normalized value is clamped to [0,1] before evaluating G (with c < 1
// the first few steps can overshoot 1; any c >= 0 normalization has the same
// limit behaviour). G values outside [0,1] are a runtime error.
GUrnResult g_urn_run(const std::function<double(double)>& G, uint64_t n_steps,
                     uint64_t seed, double c = 0.0,
                     std::span<const uint64_t> checkpoints = {});

struct FixedPoints {
  std::vector<double> stable;   // p with G(p) = p and G'(p) <= 1 + tol
  bool degenerate_identity = false;  // G == id within tolerance everywhere
};

// Grid scan plus bisection on G(x) - x; derivative by central differences
// (step 1e-6). Endpoints are checked explicitly.
FixedPoints stable_fixed_points(const std::function<double(double)>& G,
                                double deriv_tol = 1e-3, int grid = 4096);

// Two-color urn from the polynomial-growth coupling: color 1 is picked with
// probability proportional to N1/l1, otherwise color 2 gains a ball only
// with probability alpha (Bernoulli-thinned replacement).
struct PolyaState {
  double l1;
  double l23;  // l2' + l3'
  double alpha;
  uint64_t n1 = 1;
  uint64_t n2 = 1;

  // u1 decides the color route, u2 the thinning; both uniform on [0,1).
  void step(double u1, double u2) {
    const double q1 = static_cast<double>(n1) / l1;
    const double q2 = static_cast<double>(n2) / l23;
    if (u1 * (q1 + q2) < q1)
      ++n1;
    else if (u2 < alpha)
      ++n2;
  }
};

struct PolyaResult {
  std::vector<std::array<uint64_t, 3>> trajectory;  // (n, N1', N2')
};

PolyaResult polya_coupled_run(double l1, double l2p, double l3p, double alpha,
                              uint64_t n_steps, uint64_t seed,
                              std::span<const uint64_t> checkpoints = {});

}  // namespace antnet
