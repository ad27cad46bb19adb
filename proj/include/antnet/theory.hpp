#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "antnet/parallel.hpp"

namespace antnet {

// Parameters of the limit theory: nest-1 probability and the three component
// heights (real values are accepted; the process itself has integer heights).
struct TheoryParams {
  double alpha;
  double l1;
  double l2;
  double l3;
};

struct Point2 {
  double w1;
  double w3;
};

// Membership in the core domain the normalized counters eventually enter:
// w1 + w3 >= alpha/2 and (1 - w1) + w3 >= (1 - alpha)/2.
inline bool in_core_domain(Point2 w, double alpha) {
  return w.w1 + w.w3 >= alpha / 2 && (1.0 - w.w1) + w.w3 >= (1.0 - alpha) / 2;
}

// P_i(c): probability that the next reinforced path touches component i when
// the component conductances are c = (c1, c2, c3).
//   P1 = (a c1 c2 + c1 c3) / (c1 c2 + c1 c3 + c2 c3),   P2 = 1 - P1,
//   P3 = (a c2 c3 + (1-a) c1 c3) / (c1 c2 + c1 c3 + c2 c3).
std::array<double, 3> hit_probabilities(double c1, double c2, double c3,
                                        double alpha);

// p(w) = P(w1/l1, w2/l2, w3/l3).
std::array<double, 3> scaled_hit_probabilities(const std::array<double, 3>& w,
                                               const TheoryParams& tp);

// Shared denominator of the planar field: w3 (l1 + w1 (l2-l1)) + l3 w1 (1-w1).
double field_denominator(Point2 w, const TheoryParams& tp);

// Drift of (N1, N3)/n, in the factored rational form. Throws
// std::domain_error where the denominator vanishes ((0,0) and (1,0)).
Point2 field(Point2 w, const TheoryParams& tp);

// F1 = 0 locus away from w1 in {0,1}: w3 = l3 (w1 - alpha) / (l2 - l1).
// Undefined when l1 == l2 (the locus degenerates to w1 in {0, alpha, 1}).
double gamma_line(double w1, const TheoryParams& tp);

// F3 = 0 locus away from w3 = 0.
double g_curve(double w1, const TheoryParams& tp);

// Interior zero (beta1, beta3), reported in the caller's labeling (labels
// 1,2 are swapped internally when l1 > l2). Throws std::domain_error when a
// beta denominator vanishes.
Point2 beta_point(const TheoryParams& tp);

// The six analytic zeros of the field: (0,0), (0,alpha), (alpha,0),
// (beta1,beta3), (1,1-alpha), (1,0). A degenerate interior zero is reported
// as NaN.
std::vector<Point2> field_zeros(const TheoryParams& tp);

struct CaseLimits {
  int case_id;                   // 1, 2 or 3, classified after sorting
  std::array<double, 3> nhat;    // limit of (N1,N2,N3)/n in the caller's labeling
  std::optional<Point2> beta;    // interior zero, case 2 only
  bool swapped;                  // labels 1,2 exchanged to enforce l1 <= l2
};

// Case 1 when l2 >= l1 + l3 (limits (1, 0, 1-alpha)); case 3 when
// l3 >= l1 + l2 (limits (alpha, 1-alpha, 0)); case 2 otherwise
// (limits (beta1, 1-beta1, beta3)). Boundaries go with the ">=" side.
CaseLimits classify_case(const TheoryParams& tp);

// Closed-form divergence of the rescaled field:
// l3/w3 + (l2-l1)/(1-w1) + l1/(w1 (1-w1)). Positive on (0,1)x(0,1] when
// l1 <= l2, which rules out periodic orbits. Throws on boundary input.
double dulac_divergence(Point2 w, const TheoryParams& tp);

// The rescaled field (m F1, m F3) with multiplier m = -D / (w1 w3 (1-w1));
// its divergence is dulac_divergence. Used for the finite-difference
// cross-check.
Point2 dulac_scaled_field(Point2 w, const TheoryParams& tp);

struct FlowOptions {
  double dt = 1e-3;
  double t_max = 1e3;
  double tol = 1e-9;
  double record_dt = 0.25;
};

struct FlowResult {
  std::vector<std::pair<double, Point2>> trajectory;  // sampled (t, y(t))
  bool converged = false;
  Point2 limit{};      // matching analytic zero when converged
  double t_end = 0.0;
  bool clamped = false;  // some step left [0,1]^2 and was clamped back
};

// Fixed-step RK4 for dy/dt = F(y). Convergence is declared when |F(y)| < tol
// and y lies within 10*tol of an analytic zero; that zero is returned.
FlowResult integrate_flow(Point2 start, const TheoryParams& tp,
                          const FlowOptions& opts = {});

struct GridPoint {
  double w1;
  double w3;
  double f1;
  double f3;
};

// Field samples on the interior grid w = (i/(n+1), j/(n+1)).
std::vector<GridPoint> phase_grid(const TheoryParams& tp, int n, ExecMode mode);

// Minimum of the closed-form divergence over the same interior grid.
double min_dulac_on_grid(const TheoryParams& tp, int n, ExecMode mode);

// Max |closed form - finite-difference divergence of the rescaled field|
// over the interior grid (five-point stencil).
double max_dulac_fd_mismatch(const TheoryParams& tp, int n, ExecMode mode);

}  // namespace antnet
