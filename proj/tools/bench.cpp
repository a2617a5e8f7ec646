// Timing comparison between the OpenMP kernels and their serial references:
// Monte Carlo freshness sampling, the brute-force menu oracle, and a full
// mechanism sweep. Results must agree exactly; only the wall time differs.
#include <cstdio>
#include <cstring>

#include <omp.h>

#include "freshcon/aoi.hpp"
#include "freshcon/harness.hpp"
#include "freshcon/pt.hpp"

namespace {

using namespace freshcon;

void bench_monte_carlo(std::uint64_t samples) {
    const aoi::TimingParams p{2.0, 2, 3};
    double t0 = omp_get_wtime();
    const aoi::MonteCarloEstimate serial = aoi::monte_carlo_averages_serial(p, samples, 7);
    const double dt_serial = omp_get_wtime() - t0;

    t0 = omp_get_wtime();
    const aoi::MonteCarloEstimate parallel = aoi::monte_carlo_averages(p, samples, 7);
    const double dt_parallel = omp_get_wtime() - t0;

    const bool same = std::memcmp(&serial, &parallel, sizeof serial) == 0;
    std::printf("monte_carlo   %10llu samples  serial %8.3f ms  openmp %8.3f ms  x%.2f  %s\n",
                static_cast<unsigned long long>(samples), dt_serial * 1e3, dt_parallel * 1e3,
                dt_serial / dt_parallel, same ? "match" : "MISMATCH");
}

void bench_brute_force(int grid) {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(3, 0.002, 10);
    contract::ProviderPreferences prefs;
    prefs.beta = 5.0;
    const aoi::CycleCase cc = aoi::CycleCase::fixed_idle(1, 2.0);

    double t0 = omp_get_wtime();
    const solver::BruteForceResult serial = solver::brute_force_pt_serial(ladder, prefs, cc, grid);
    const double dt_serial = omp_get_wtime() - t0;

    t0 = omp_get_wtime();
    const solver::BruteForceResult parallel = solver::brute_force_pt(ladder, prefs, cc, grid);
    const double dt_parallel = omp_get_wtime() - t0;

    const bool same = serial.objective == parallel.objective &&
                      serial.menu.frequencies() == parallel.menu.frequencies();
    std::printf("brute_force   %10llu tuples   serial %8.3f ms  openmp %8.3f ms  x%.2f  %s\n",
                static_cast<unsigned long long>(parallel.tuples), dt_serial * 1e3,
                dt_parallel * 1e3, dt_serial / dt_parallel, same ? "match" : "MISMATCH");
}

void bench_sweep() {
    const config::ExperimentConfig cfg = config::ExperimentConfig::defaults();
    const std::vector<double> values =
        harness::default_sweep_values(cfg, harness::SweepAxis::A);

    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    double t0 = omp_get_wtime();
    harness::run_sweep(cfg, harness::SweepAxis::A, values, "/tmp/freshcon_bench_serial");
    const double dt_serial = omp_get_wtime() - t0;

    omp_set_num_threads(max_threads);
    t0 = omp_get_wtime();
    harness::run_sweep(cfg, harness::SweepAxis::A, values, "/tmp/freshcon_bench_parallel");
    const double dt_parallel = omp_get_wtime() - t0;

    std::printf("sweep(a=1:13) %10zu points   serial %8.3f ms  openmp %8.3f ms  x%.2f\n",
                values.size(), dt_serial * 1e3, dt_parallel * 1e3, dt_serial / dt_parallel);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    bench_monte_carlo(20'000'000);
    bench_brute_force(320);
    bench_sweep();
    return 0;
}
