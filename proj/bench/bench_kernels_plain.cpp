// Fallback benchmark used when google-benchmark is unavailable: times the
// OpenMP discrepancy kernels against their serial references and prints a
// small table.

#include <chrono>
#include <cstdio>
#include <vector>

#include "tilesplit/stats.hpp"
#include "tilesplit/util.hpp"

using namespace tilesplit;

namespace {

std::vector<double> points_1d(std::size_t n) {
    SplitMix64 rng(42);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.next_double();
    return xs;
}

std::vector<std::vector<double>> points_2d(std::size_t n) {
    SplitMix64 rng(43);
    std::vector<std::vector<double>> pts(n);
    for (auto& p : pts) p = {2.0 * rng.next_double(), rng.next_double()};
    return pts;
}

template <typename F>
double time_ms(F&& f, int reps) {
    // One warm-up call, then the best of `reps` timed calls.
    f();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        if (ms < best) best = ms;
    }
    return best;
}

}  // namespace

int main() {
    const std::vector<std::vector<double>> domain = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");

    for (std::size_t n : {std::size_t(10000), std::size_t(100000), std::size_t(1000000)}) {
        const auto xs = points_1d(n);
        double r1 = 0.0, r2 = 0.0;
        const double ts = time_ms([&] { r1 = star_discrepancy_1d_serial(xs); }, 5);
        const double tp = time_ms([&] { r2 = star_discrepancy_1d(xs); }, 5);
        std::printf("%-28s %12.3f %12.3f %7.2fx%s\n",
                    ("star_discrepancy/" + std::to_string(n)).c_str(), ts, tp, ts / tp,
                    r1 == r2 ? "" : "  VALUES DIFFER");
    }

    for (std::size_t n : {std::size_t(10000), std::size_t(100000)}) {
        const auto pts = points_2d(n);
        double r1 = 0.0, r2 = 0.0;
        const double ts = time_ms([&] { r1 = box_discrepancy_serial(pts, domain); }, 3);
        const double tp = time_ms([&] { r2 = box_discrepancy(pts, domain); }, 3);
        std::printf("%-28s %12.3f %12.3f %7.2fx%s\n",
                    ("box_discrepancy/" + std::to_string(n)).c_str(), ts, tp, ts / tp,
                    r1 == r2 ? "" : "  VALUES DIFFER");
    }
    return 0;
}
