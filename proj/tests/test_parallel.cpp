#include "doctest.h"
#include "tilesplit/stats.hpp"
#include "tilesplit/util.hpp"

#include <cstdint>
#include <vector>

using namespace tilesplit;

namespace {

std::vector<double> seeded_points_1d(std::uint64_t seed, std::size_t n) {
    std::vector<double> pts;
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.next_double());
    return pts;
}

std::vector<std::vector<double>> seeded_points_2d(std::uint64_t seed, std::size_t n) {
    std::vector<std::vector<double>> pts;
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.next_double(), rng.next_double()});
    return pts;
}

const std::vector<std::vector<double>> kUnitSquare = {
    {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
const std::vector<std::vector<double>> kTriangle = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

}  // namespace

TEST_CASE("threaded star discrepancy is bit-identical to the serial reference") {
    for (std::uint64_t seed : {1ull, 42ull, 991ull}) {
        const auto pts = seeded_points_1d(seed, 10000);
        const double serial = star_discrepancy_1d_serial(pts);
        for (int jobs : {0, 1, 3}) {
            CAPTURE(seed);
            CAPTURE(jobs);
            CHECK(star_discrepancy_1d(pts, jobs) == serial);
        }
    }
}

TEST_CASE("threaded box discrepancy is bit-identical to the serial reference") {
    BoxDiscrepancyOptions opt;
    opt.seed = 17;
    opt.mc_samples = 20000;

    SUBCASE("rectangular domain") {
        const auto pts = seeded_points_2d(8, 5000);
        const double serial = box_discrepancy_serial(pts, kUnitSquare, opt);
        for (int jobs : {0, 1, 3}) {
            CAPTURE(jobs);
            BoxDiscrepancyOptions o = opt;
            o.jobs = jobs;
            CHECK(box_discrepancy(pts, kUnitSquare, o) == serial);
        }
    }

    SUBCASE("sampled polygon domain") {
        const auto pts = seeded_points_2d(9, 2000);
        const double serial = box_discrepancy_serial(pts, kTriangle, opt);
        for (int jobs : {0, 3}) {
            CAPTURE(jobs);
            BoxDiscrepancyOptions o = opt;
            o.jobs = jobs;
            CHECK(box_discrepancy(pts, kTriangle, o) == serial);
        }
    }
}

TEST_CASE("hash-indexed draws do not depend on evaluation order") {
    // Draw the same indices forwards and backwards.
    std::vector<double> fwd, bwd;
    for (std::uint64_t i = 0; i < 1000; ++i) fwd.push_back(hash_mix_double(123, i));
    for (std::uint64_t i = 1000; i-- > 0;) bwd.push_back(hash_mix_double(123, i));
    for (std::size_t i = 0; i < fwd.size(); ++i)
        CHECK(fwd[i] == bwd[fwd.size() - 1 - i]);
}
