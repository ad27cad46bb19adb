#include <chrono>
#include <cstdio>

#include "antnet/harness.hpp"
#include "antnet/theory.hpp"

using namespace antnet;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {2, 4, 3};
  cfg.alpha = 0.3;
  cfg.n_steps = 200000;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};

  std::printf("%-32s %12s %12s %8s\n", "kernel", "serial[ms]", "parallel[ms]",
              "speedup");

  {
    std::vector<ReplicaResult> serial_out, parallel_out;
    const double ts = time_ms([&] { serial_out = run_replicas(cfg, ExecMode::Serial); });
    const double tp = time_ms([&] { parallel_out = run_replicas(cfg, ExecMode::Parallel); });
    std::printf("%-32s %12.1f %12.1f %8.2f\n", "replica ensemble (8 x 2e5)", ts,
                tp, ts / tp);
  }

  const TheoryParams tp{0.3, 2, 4, 3};
  {
    double a = 0, b = 0;
    const double ts = time_ms([&] { a = min_dulac_on_grid(tp, 600, ExecMode::Serial); });
    const double tpar = time_ms([&] { b = min_dulac_on_grid(tp, 600, ExecMode::Parallel); });
    std::printf("%-32s %12.1f %12.1f %8.2f\n", "dulac grid 600x600", ts, tpar,
                ts / tpar);
    if (a != b) std::printf("MISMATCH: %.17g vs %.17g\n", a, b);
  }
  {
    double a = 0, b = 0;
    const double ts =
        time_ms([&] { a = max_dulac_fd_mismatch(tp, 220, ExecMode::Serial); });
    const double tpar =
        time_ms([&] { b = max_dulac_fd_mismatch(tp, 220, ExecMode::Parallel); });
    std::printf("%-32s %12.1f %12.1f %8.2f\n", "divergence fd check 220x220", ts,
                tpar, ts / tpar);
    if (a != b) std::printf("MISMATCH: %.17g vs %.17g\n", a, b);
  }
  return 0;
}
