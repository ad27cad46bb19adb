#include "antnet/ants.hpp"

#include <cmath>
#include <stdexcept>

#include "antnet/theory.hpp"

namespace antnet {

AntsProcess::AntsProcess(const TriangleSP& tri, double alpha, uint64_t seed)
    : tri_(&tri),
      adj_(tri.graph),
      weights_(static_cast<size_t>(tri.num_edges()), 1),
      alpha_(alpha),
      rng_(seed) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in [0,1]");
}

StepRecord AntsProcess::step() {
  const int nest = rng_.bernoulli(alpha_) ? 1 : 2;
  const int start = nest == 1 ? tri_->n1 : tri_->n2;
  Trajectory traj = run_walk(adj_, weights_, start, tri_->food, rng_);
  SimplePath gamma = loop_erase_backward(traj);

  StepRecord rec;
  rec.nest = nest;
  rec.traj_len = traj.edges.size();
  rec.touched = {false, false, false};
  for (const PathStep& s : gamma.steps) {
    weights_[static_cast<size_t>(s.edge)]++;
    rec.touched[static_cast<size_t>(tri_->component_of(s.edge))] = true;
  }
  for (int i = 0; i < 3; ++i)
    if (rec.touched[static_cast<size_t>(i)]) counts_[static_cast<size_t>(i)]++;
  ++n_;
  rec.trajectory = std::move(traj);

  if (rec.touched[0] && !rec.touched[1] && !rec.touched[2])
    rec.category = PathCategory::G1Only;
  else if (!rec.touched[0] && rec.touched[1] && rec.touched[2])
    rec.category = PathCategory::G3ThenG2;
  else if (!rec.touched[0] && rec.touched[1] && !rec.touched[2])
    rec.category = PathCategory::G2Only;
  else if (rec.touched[0] && !rec.touched[1] && rec.touched[2])
    rec.category = PathCategory::G3ThenG1;
  else
    throw std::logic_error("reinforced path touches an impossible component set");
  rec.gamma = std::move(gamma);
  return rec;
}

void AntsProcess::advance(uint64_t steps) {
  for (uint64_t i = 0; i < steps; ++i) step();
}

double AntsProcess::conductance(int i) const {
  const auto lo = static_cast<size_t>(tri_->edge_bound[static_cast<size_t>(i)]);
  const auto hi = static_cast<size_t>(tri_->edge_bound[static_cast<size_t>(i) + 1]);
  return effective_conductance_dbl(
      tri_->g[static_cast<size_t>(i)],
      std::span<const uint64_t>(weights_.data() + lo, hi - lo));
}

Rat AntsProcess::conductance_exact(int i) const {
  const auto lo = static_cast<size_t>(tri_->edge_bound[static_cast<size_t>(i)]);
  const auto hi = static_cast<size_t>(tri_->edge_bound[static_cast<size_t>(i) + 1]);
  return effective_conductance_exact(
      tri_->g[static_cast<size_t>(i)],
      std::span<const uint64_t>(weights_.data() + lo, hi - lo));
}

ResidualInfo residual(const AntsProcess& proc) {
  ResidualInfo info;
  const auto& counts = proc.counts();
  if (counts[0] == 0 || counts[1] == 0 || counts[2] == 0) return info;

  const TriangleSP& tri = proc.triangle();
  const TheoryParams tp{proc.alpha(), static_cast<double>(tri.h_min[0]),
                        static_cast<double>(tri.h_min[1]),
                        static_cast<double>(tri.h_min[2])};
  const std::array<double, 3> ell{tp.l1, tp.l2, tp.l3};
  std::array<double, 3> c{};
  std::array<double, 3> shifted{};
  double delta = 0.0;
  for (size_t i = 0; i < 3; ++i) {
    c[i] = proc.conductance(static_cast<int>(i));
    shifted[i] = static_cast<double>(counts[i] + 1);
    delta = std::max(delta, std::fabs(ell[i] * c[i] / shifted[i] - 1.0));
  }
  const std::array<double, 3> pc = hit_probabilities(c[0], c[1], c[2], tp.alpha);
  const std::array<double, 3> pn = scaled_hit_probabilities(shifted, tp);
  for (int i = 0; i < 3; ++i)
    info.r[static_cast<size_t>(i)] =
        pc[static_cast<size_t>(i)] - pn[static_cast<size_t>(i)];
  info.delta = delta;
  info.defined = true;
  return info;
}

Snapshot AntsProcess::snapshot(bool with_weights) const {
  Snapshot snap;
  snap.n = n_;
  snap.counts = counts_;
  for (int i = 0; i < 3; ++i) {
    snap.nhat[static_cast<size_t>(i)] =
        n_ == 0 ? 0.0
                : static_cast<double>(counts_[static_cast<size_t>(i)]) /
                      static_cast<double>(n_);
    snap.conductance[static_cast<size_t>(i)] = conductance(i);
  }
  snap.residual = residual(*this);
  if (with_weights) snap.weights = weights_;
  return snap;
}

std::vector<uint64_t> geometric_checkpoints(uint64_t n_steps) {
  std::vector<uint64_t> out;
  for (uint64_t c = 1; c < n_steps && c != 0; c *= 2) out.push_back(c);
  out.push_back(n_steps);
  return out;
}

std::vector<Snapshot> run_process(AntsProcess& proc, uint64_t n_steps,
                                  std::span<const uint64_t> checkpoints,
                                  bool with_weights) {
  std::vector<Snapshot> snaps;
  uint64_t done = proc.n();
  const uint64_t target = done + n_steps;
  for (uint64_t cp : checkpoints) {
    if (cp > n_steps) continue;
    proc.advance(done < cp ? cp - done : 0);
    done = proc.n();
    snaps.push_back(proc.snapshot(with_weights));
  }
  if (done < target) {
    proc.advance(target - done);
    snaps.push_back(proc.snapshot(with_weights));
  }
  return snaps;
}

std::vector<size_t> restriction_times(std::span<const StepRecord> records,
                                      int component) {
  std::vector<size_t> out;
  for (size_t i = 0; i < records.size(); ++i)
    if (records[i].touched[static_cast<size_t>(component)]) out.push_back(i);
  return out;
}

SingleNestProcess::SingleNestProcess(const SPExpr& g, uint64_t seed)
    : expr_(g),
      graph_(flatten(g)),
      adj_(graph_),
      weights_(static_cast<size_t>(graph_.edges.size()), 1),
      rng_(seed) {}

SimplePath SingleNestProcess::step() {
  Trajectory traj = run_walk(adj_, weights_, graph_.source, graph_.sink, rng_);
  SimplePath gamma = loop_erase_backward(traj);
  for (const PathStep& s : gamma.steps) weights_[static_cast<size_t>(s.edge)]++;
  ++n_;
  return gamma;
}

double SingleNestProcess::conductance() const {
  return effective_conductance_dbl(expr_, weights_);
}

Rat SingleNestProcess::conductance_exact() const {
  return effective_conductance_exact(expr_, weights_);
}

std::vector<SingleNestSnapshot> single_nest_run(const SPExpr& g,
                                                uint64_t n_steps, uint64_t seed,
                                                std::span<const uint64_t> checkpoints) {
  SingleNestProcess proc(g, seed);
  std::vector<SingleNestSnapshot> out;
  uint64_t done = 0;
  for (uint64_t cp : checkpoints) {
    if (cp > n_steps) continue;
    while (done < cp) {
      proc.step();
      ++done;
    }
    out.push_back(SingleNestSnapshot{done, proc.conductance(), proc.weights()});
  }
  if (done < n_steps) {
    while (done < n_steps) {
      proc.step();
      ++done;
    }
    out.push_back(SingleNestSnapshot{done, proc.conductance(), proc.weights()});
  }
  return out;
}

}  // namespace antnet
