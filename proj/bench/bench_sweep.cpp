/**
 * Benchmark: serial reference vs OpenMP-parallel frequency sweep.
 *
 * Runs the same sweep (spectral rates, singular values, fitted decay rates,
 * Lyapunov monitoring) under both execution policies over each catalog model,
 * reports wall times and speedup, and verifies that the parallel rows are
 * bitwise identical to the serial ones — the parallel path distributes
 * index-addressed pure computations, so any divergence is a bug.
 *
 * Usage: bench_sweep [j_max]   (default 8)
 */
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "decaycert/functional.hpp"
#include "decaycert/kalman.hpp"
#include "decaycert/verify.hpp"
#include "decaycert/zoo.hpp"

using namespace decaycert;

int main(int argc, char** argv) {
  const int j_max = argc > 1 ? std::atoi(argv[1]) : 8;
  if (j_max < 0 || j_max > 20) {
    std::fprintf(stderr, "usage: bench_sweep [j_max in 0..20]\n");
    return 2;
  }

  std::printf("%-22s %8s %10s %10s %8s %s\n", "model", "rows", "serial[s]", "parallel[s]",
              "speedup", "identical");
  for (const std::string& name : zoo_names()) {
    const SystemSpec sys = zoo_system(name, {});
    const KalmanCertificate cert = check_kalman(sys);
    if (!cert.holds) continue;
    const LyapunovFunctional functional =
        synthesize_kalman_functional(sys, cert.K, Regime::HF);

    SweepOptions options;
    options.regime = Regime::HF;
    options.j_min = 0;
    options.j_max = j_max;
    options.functional = &functional;
    options.kalman_order = cert.K;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SweepRow> serial = frequency_sweep(sys, options, SweepPolicy::Serial);
    const auto t1 = std::chrono::steady_clock::now();
    const std::vector<SweepRow> parallel = frequency_sweep(sys, options, SweepPolicy::Parallel);
    const auto t2 = std::chrono::steady_clock::now();

    bool identical = serial.size() == parallel.size();
    for (size_t k = 0; identical && k < serial.size(); ++k)
      identical = std::memcmp(&serial[k], &parallel[k], sizeof(SweepRow)) == 0;

    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double tp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("%-22s %8zu %10.3f %10.3f %8.2f %s\n", name.c_str(), serial.size(), ts, tp,
                tp > 0 ? ts / tp : 0.0, identical ? "yes" : "NO");
    if (!identical) return 1;
  }
  return 0;
}
