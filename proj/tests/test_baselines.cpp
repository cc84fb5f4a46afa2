#include <doctest.h>

#include <random>

#include "relsen/baselines.hpp"
#include "support.hpp"

using namespace relsen;

TEST_CASE("median") {
    const auto topo = support::make_topology({3, 2, 1, 4});
    const auto z = median_clean({1, {1, 100, 5, 0.2, 0.4, 0.77, 4, 1, 3, 2}}, topo);
    CHECK(z.states[0] == 5);
    CHECK(z.states[1] == doctest::Approx(0.3));
    CHECK(z.states[2] == 0.77);
    CHECK(z.states[3] == 2.5);
}

TEST_CASE("median stays in the group range and mean is order independent") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto topo = support::make_topology({7});
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(7);
        for (auto& v : x) v = u(rng);
        const double med = median_clean({0, x}, topo).states[0];
        CHECK(med >= *std::min_element(x.begin(), x.end()));
        CHECK(med <= *std::max_element(x.begin(), x.end()));
        const double mean = mean_clean({0, x}, topo).states[0];
        long double ref = 0.0L;
        for (double v : x) ref += v;
        CHECK(std::fabs(mean - static_cast<double>(ref / 7.0L)) < 1e-15);
        std::shuffle(x.begin(), x.end(), rng);
        CHECK(std::fabs(mean_clean({0, x}, topo).states[0] - mean) < 1e-15);
    }
}

TEST_CASE("mean") {
    const auto topo = support::make_topology({2, 1});
    const auto z = mean_clean({1, {0, 1, 0.3}}, topo);
    CHECK(z.states[0] == 0.5);
    CHECK(z.states[1] == 0.3);
}

TEST_CASE("imc with consistent sensors is the mean") {
    const auto topo = support::make_topology({3});
    ImcCleaner imc(topo, 5);
    CHECK(imc.tolerance() == 0.05);
    for (int t = 1; t <= 20; ++t) {
        const auto [z, c] = imc.step({t, {0.50, 0.51, 0.52}});
        CHECK(z.states[0] == doctest::Approx(0.51));
        for (double v : c) CHECK(v == 1.0);
    }
}

TEST_CASE("imc matches a hand simulation of a diverging pair") {
    // Two sensors; the second drifts away at step 3. Window l = 3, tol 0.05.
    const auto topo = support::make_topology({2, 1});
    ImcCleaner imc(topo, 3);
    const std::vector<std::vector<double>> xs{
        {0.50, 0.52, 0.9}, {0.50, 0.54, 0.9}, {0.50, 0.70, 0.9},
        {0.50, 0.70, 0.9}, {0.50, 0.70, 0.9}, {0.50, 0.52, 0.9}};
    // Hand simulation: window bits start as {1,1,1}.
    // t1: c=(1,1) z=0.51; |0.5-.51|,|.52-.51| <= .05 -> bits 1,1; c=(1,1)
    // t2: z=0.52; both within -> c=(1,1)
    // t3: z=0.60; |0.5-0.6|=0.1 no, |0.7-0.6|=0.1 no -> c=(2/3,2/3)
    // t4: z=0.60 -> both inconsistent -> c=(1/3,1/3)
    // t5: z=0.60 -> c=(0,0)
    // t6: all-zero scores fall back to the mean z=0.51; both within -> c=(1/3,1/3)
    const std::vector<double> want_z{0.51, 0.52, 0.60, 0.60, 0.60, 0.51};
    const std::vector<double> want_c{1.0, 1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0};
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto [z, c] = imc.step({static_cast<Timestamp>(k + 1), xs[k]});
        CHECK(z.states[0] == doctest::Approx(want_z[k]).epsilon(1e-12));
        CHECK(z.states[1] == 0.9);
        CHECK(c[0] == doctest::Approx(want_c[k]));
        CHECK(c[1] == doctest::Approx(want_c[k]));
        CHECK(c[2] == 1.0);
    }
}

TEST_CASE("imc scores stay in [0, 1]") {
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto topo = support::make_topology({3, 2});
    ImcCleaner imc(topo, 10);
    for (int t = 1; t <= 200; ++t) {
        std::vector<double> x(5);
        for (auto& v : x) v = 0.5 + 0.1 * u(rng);
        const auto [z, c] = imc.step({t, x});
        for (double v : c) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}
