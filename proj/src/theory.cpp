#include "antnet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace antnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TheoryParams canonical(const TheoryParams& tp, bool& swapped) {
  swapped = tp.l1 > tp.l2;
  if (!swapped) return tp;
  return TheoryParams{1.0 - tp.alpha, tp.l2, tp.l1, tp.l3};
}

// Raw field evaluation; callers guarantee the denominator is usable.
Point2 field_raw(Point2 w, const TheoryParams& tp) {
  const double d = field_denominator(w, tp);
  const double num1 =
      w.w1 * (1.0 - w.w1) * (tp.l3 * (tp.alpha - w.w1) + (tp.l2 - tp.l1) * w.w3);
  const double num3 =
      w.w3 * (tp.l2 * (1.0 - tp.alpha) * w.w1 + tp.l1 * tp.alpha * (1.0 - w.w1) -
              tp.l3 * w.w1 * (1.0 - w.w1) -
              w.w3 * (tp.l1 + w.w1 * (tp.l2 - tp.l1)));
  return Point2{num1 / d, num3 / d};
}

Point2 clamp_unit(Point2 w, bool& moved) {
  Point2 out{std::clamp(w.w1, 0.0, 1.0), std::clamp(w.w3, 0.0, 1.0)};
  moved = out.w1 != w.w1 || out.w3 != w.w3;
  return out;
}

double norm_inf(Point2 v) { return std::max(std::fabs(v.w1), std::fabs(v.w3)); }

// Five-point central-difference first derivative.
template <typename Fn>
double diff5(Fn&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

std::array<double, 3> hit_probabilities(double c1, double c2, double c3,
                                        double alpha) {
  const double den = c1 * c2 + c1 * c3 + c2 * c3;
  if (den == 0.0)
    throw std::domain_error("hit_probabilities: all pairwise products vanish");
  const double p1 = (alpha * c1 * c2 + c1 * c3) / den;
  const double p3 = (alpha * c2 * c3 + (1.0 - alpha) * c1 * c3) / den;
  return {p1, 1.0 - p1, p3};
}

std::array<double, 3> scaled_hit_probabilities(const std::array<double, 3>& w,
                                               const TheoryParams& tp) {
  return hit_probabilities(w[0] / tp.l1, w[1] / tp.l2, w[2] / tp.l3, tp.alpha);
}

double field_denominator(Point2 w, const TheoryParams& tp) {
  return w.w3 * (tp.l1 + w.w1 * (tp.l2 - tp.l1)) +
         tp.l3 * w.w1 * (1.0 - w.w1);
}

Point2 field(Point2 w, const TheoryParams& tp) {
  if (field_denominator(w, tp) <= 0.0)
    throw std::domain_error("field: singular denominator");
  return field_raw(w, tp);
}

double gamma_line(double w1, const TheoryParams& tp) {
  if (tp.l1 == tp.l2)
    throw std::domain_error(
        "gamma_line: undefined for l1 == l2 (F1 vanishes on w1 in {0, alpha, 1})");
  return tp.l3 * (w1 - tp.alpha) / (tp.l2 - tp.l1);
}

double g_curve(double w1, const TheoryParams& tp) {
  return (tp.l2 * (1.0 - tp.alpha) * w1 + tp.l1 * tp.alpha * (1.0 - w1) -
          tp.l3 * w1 * (1.0 - w1)) /
         (tp.l1 + w1 * (tp.l2 - tp.l1));
}

Point2 beta_point(const TheoryParams& tp) {
  bool swapped = false;
  const TheoryParams c = canonical(tp, swapped);
  const double b1den =
      c.l1 * c.l3 +
      (c.l2 - c.l1) * ((1.0 - c.alpha) * (c.l3 - c.l2) + c.alpha * c.l1);
  const double b3den = c.alpha * (c.l2 - c.l1) * (c.l1 + c.l2 - c.l3) +
                       c.l2 * (c.l1 - c.l2 + c.l3);
  if (b1den == 0.0 || b3den == 0.0)
    throw std::domain_error("beta_point: zero denominator");
  const double b1 = c.alpha * c.l1 * (c.l3 + c.l2 - c.l1) / b1den;
  const double b3 =
      c.alpha * (1.0 - c.alpha) * c.l3 * (c.l1 + c.l2 - c.l3) / b3den;
  if (swapped) return Point2{1.0 - b1, b3};
  return Point2{b1, b3};
}

std::vector<Point2> field_zeros(const TheoryParams& tp) {
  Point2 beta{kNaN, kNaN};
  try {
    beta = beta_point(tp);
  } catch (const std::domain_error&) {
    // degenerate interior zero, reported as NaN
  }
  const double a = tp.alpha;
  return {Point2{0, 0},      Point2{0, a}, Point2{a, 0},
          beta,              Point2{1, 1 - a}, Point2{1, 0}};
}

CaseLimits classify_case(const TheoryParams& tp) {
  bool swapped = false;
  const TheoryParams c = canonical(tp, swapped);
  CaseLimits out;
  out.swapped = swapped;
  std::array<double, 3> nhat;
  if (c.l2 >= c.l1 + c.l3) {
    out.case_id = 1;
    nhat = {1.0, 0.0, 1.0 - c.alpha};
  } else if (c.l3 >= c.l1 + c.l2) {
    out.case_id = 3;
    nhat = {c.alpha, 1.0 - c.alpha, 0.0};
  } else {
    out.case_id = 2;
    const Point2 b = beta_point(tp);  // already reported in caller labeling
    out.beta = b;
    out.nhat = {b.w1, 1.0 - b.w1, b.w3};
    return out;
  }
  if (swapped) std::swap(nhat[0], nhat[1]);
  out.nhat = nhat;
  return out;
}

double dulac_divergence(Point2 w, const TheoryParams& tp) {
  if (!(w.w1 > 0.0 && w.w1 < 1.0 && w.w3 > 0.0 && w.w3 <= 1.0))
    throw std::domain_error("dulac_divergence: point outside (0,1)x(0,1]");
  return tp.l3 / w.w3 + (tp.l2 - tp.l1) / (1.0 - w.w1) +
         tp.l1 / (w.w1 * (1.0 - w.w1));
}

Point2 dulac_scaled_field(Point2 w, const TheoryParams& tp) {
  const double d = field_denominator(w, tp);
  const double mult = -d / (w.w1 * w.w3 * (1.0 - w.w1));
  const Point2 f = field(w, tp);
  return Point2{mult * f.w1, mult * f.w3};
}

FlowResult integrate_flow(Point2 start, const TheoryParams& tp,
                          const FlowOptions& opts) {
  FlowResult result;
  const std::vector<Point2> zeros = field_zeros(tp);
  Point2 y = start;
  double t = 0.0;
  const auto steps_per_record =
      std::max<uint64_t>(1, static_cast<uint64_t>(opts.record_dt / opts.dt));
  uint64_t step_count = 0;
  result.trajectory.emplace_back(t, y);

  auto eval = [&](Point2 p) {
    bool moved = false;
    p = clamp_unit(p, moved);
    if (moved) result.clamped = true;
    const double d = field_denominator(p, tp);
    if (d < 1e-12) return Point2{0.0, 0.0};  // stationary corner
    return field_raw(p, tp);
  };

  while (t < opts.t_max) {
    const Point2 k1 = eval(y);
    if (norm_inf(k1) < opts.tol) {
      // settled; snap to the matching analytic zero if one is close
      for (const Point2& z : zeros) {
        if (std::isnan(z.w1)) continue;
        if (std::max(std::fabs(y.w1 - z.w1), std::fabs(y.w3 - z.w3)) <
            10.0 * opts.tol) {
          result.converged = true;
          result.limit = z;
          break;
        }
      }
      if (result.converged) break;
    }
    const double h = opts.dt;
    const Point2 k2 = eval(Point2{y.w1 + 0.5 * h * k1.w1, y.w3 + 0.5 * h * k1.w3});
    const Point2 k3 = eval(Point2{y.w1 + 0.5 * h * k2.w1, y.w3 + 0.5 * h * k2.w3});
    const Point2 k4 = eval(Point2{y.w1 + h * k3.w1, y.w3 + h * k3.w3});
    y.w1 += h / 6.0 * (k1.w1 + 2 * k2.w1 + 2 * k3.w1 + k4.w1);
    y.w3 += h / 6.0 * (k1.w3 + 2 * k2.w3 + 2 * k3.w3 + k4.w3);
    bool moved = false;
    y = clamp_unit(y, moved);
    if (moved) result.clamped = true;
    t += h;
    if (++step_count % steps_per_record == 0) result.trajectory.emplace_back(t, y);
  }
  if (result.trajectory.back().first != t) result.trajectory.emplace_back(t, y);
  result.t_end = t;
  if (!result.converged) result.limit = y;
  return result;
}

std::vector<GridPoint> phase_grid(const TheoryParams& tp, int n, ExecMode mode) {
  std::vector<GridPoint> out(static_cast<size_t>(n) * static_cast<size_t>(n));
  auto fill = [&](int idx) {
    const int i = idx / n;
    const int j = idx % n;
    const double w1 = static_cast<double>(i + 1) / (n + 1);
    const double w3 = static_cast<double>(j + 1) / (n + 1);
    const Point2 f = field(Point2{w1, w3}, tp);
    out[static_cast<size_t>(idx)] = GridPoint{w1, w3, f.w1, f.w3};
  };
  const int total = n * n;
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < total; ++idx) fill(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) fill(idx);
  }
  return out;
}

double min_dulac_on_grid(const TheoryParams& tp, int n, ExecMode mode) {
  std::vector<double> vals(static_cast<size_t>(n) * static_cast<size_t>(n));
  auto fill = [&](int idx) {
    const int i = idx / n;
    const int j = idx % n;
    const double w1 = static_cast<double>(i + 1) / (n + 1);
    const double w3 = static_cast<double>(j + 1) / (n + 1);
    vals[static_cast<size_t>(idx)] = dulac_divergence(Point2{w1, w3}, tp);
  };
  const int total = n * n;
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < total; ++idx) fill(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) fill(idx);
  }
  return *std::min_element(vals.begin(), vals.end());
}

double max_dulac_fd_mismatch(const TheoryParams& tp, int n, ExecMode mode) {
  const double h = 1e-5;
  std::vector<double> vals(static_cast<size_t>(n) * static_cast<size_t>(n));
  auto fill = [&](int idx) {
    const int i = idx / n;
    const int j = idx % n;
    const double w1 = static_cast<double>(i + 1) / (n + 1);
    const double w3 = static_cast<double>(j + 1) / (n + 1);
    const double d1 = diff5(
        [&](double x) { return dulac_scaled_field(Point2{x, w3}, tp).w1; }, w1, h);
    const double d3 = diff5(
        [&](double x) { return dulac_scaled_field(Point2{w1, x}, tp).w3; }, w3, h);
    vals[static_cast<size_t>(idx)] =
        std::fabs(d1 + d3 - dulac_divergence(Point2{w1, w3}, tp));
  };
  const int total = n * n;
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int idx = 0; idx < total; ++idx) fill(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) fill(idx);
  }
  return *std::max_element(vals.begin(), vals.end());
}

}  // namespace antnet
