#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "relsen/errors.hpp"
#include "relsen/soft_sensor.hpp"
#include "support.hpp"

using namespace relsen;

namespace {

std::vector<HistoryEntry> random_pool(std::mt19937_64& rng, std::size_t n, std::size_t dims) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<HistoryEntry> pool;
    for (std::size_t i = 0; i < n; ++i) {
        HistoryEntry e{static_cast<Timestamp>(i + 1), std::vector<double>(dims), {u(rng)}};
        for (auto& v : e.x) v = u(rng);
        pool.push_back(std::move(e));
    }
    return pool;
}

std::vector<std::size_t> brute_knn(const std::vector<HistoryEntry>& pool,
                                   const std::vector<std::size_t>& dims,
                                   const std::vector<double>& point, std::size_t k) {
    std::vector<std::pair<std::pair<double, Timestamp>, std::size_t>> all;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const double diff = pool[i].x[dims[j]] - point[j];
            d += diff * diff;
        }
        all.push_back({{d, pool[i].t}, i});
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
    return out;
}

}  // namespace

TEST_CASE("explanatory count is the ceiling of r times the foreign sensors") {
    const auto topo = support::make_topology({5, 3, 3, 2, 2, 1});
    CHECK(explanatory_count(topo, 0, 0.7) == 8);
    CHECK(explanatory_count(topo, 5, 0.7) == 11);
    CHECK(explanatory_count(topo, 0, 1.0) == 11);
    CHECK(explanatory_count(topo, 0, 1e-9) == 1);
}

TEST_CASE("select_explanatory excludes own sensors and has the right size") {
    const auto topo = support::make_topology({5, 3, 3, 2, 2, 1});
    Rng rng(5);
    for (std::size_t p = 0; p < topo.process_count(); ++p) {
        for (double r : {0.01, 0.3, 0.7, 1.0}) {
            const auto sel = select_explanatory(topo, p, r, rng);
            CHECK(sel.size() == explanatory_count(topo, p, r));
            CHECK(std::is_sorted(sel.begin(), sel.end()));
            CHECK(std::set<std::size_t>(sel.begin(), sel.end()).size() == sel.size());
            for (auto s : sel) CHECK(topo.process_of(s) != p);
        }
    }
    const auto lone = support::make_topology({2});
    CHECK_THROWS_AS(select_explanatory(lone, 0, 0.5, rng), ConfigError);
}

TEST_CASE("select_explanatory is uniform over foreign sensors") {
    // 11 foreign sensors, 8 picked: each is included with probability 8/11.
    const auto topo = support::make_topology({5, 3, 3, 2, 2, 1});
    Rng rng(6);
    const int n = 1000;
    std::map<std::size_t, int> hits;
    std::set<std::vector<std::size_t>> distinct;
    for (int i = 0; i < n; ++i) {
        const auto sel = select_explanatory(topo, 0, 0.7, rng);
        distinct.insert(sel);
        for (auto s : sel) ++hits[s];
    }
    const double p = 8.0 / 11.0;
    const double sd = std::sqrt(n * p * (1 - p));
    CHECK(hits.size() == 11);
    for (auto [s, h] : hits) CHECK(std::fabs(h - n * p) < 4.0 * sd);
    // C(11, 8) = 165 subsets; 1000 uniform draws hit nearly all of them.
    CHECK(distinct.size() > 150);
}

TEST_CASE("knn matches a full sort") {
    std::mt19937_64 rng(7);
    for (int inst = 0; inst < 20; ++inst) {
        const auto pool = random_pool(rng, 200, 10);
        std::vector<std::size_t> dims{0, 2, 3, 5, 6, 7, 8, 9};
        std::vector<double> q(dims.size());
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& v : q) v = u(rng);
        CHECK(knn(pool, dims, q, 48) == brute_knn(pool, dims, q, 48));
    }
}

TEST_CASE("knn edge cases") {
    std::mt19937_64 rng(8);
    auto pool = random_pool(rng, 30, 3);
    const std::vector<std::size_t> dims{0, 1, 2};

    auto all = knn(pool, dims, pool[5].x, 30);
    CHECK(all.size() == 30);
    CHECK(all.front() == 5);
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> every(30);
    std::iota(every.begin(), every.end(), 0);
    CHECK(all == every);

    const auto excl = knn(pool, dims, pool[5].x, 29, pool[5].t);
    CHECK(std::find(excl.begin(), excl.end(), 5) == excl.end());
    CHECK_THROWS_AS(knn(pool, dims, pool[5].x, 30, pool[5].t), InsufficientHistory);
    CHECK_THROWS_AS(knn(pool, dims, pool[5].x, 31), InsufficientHistory);
    CHECK_THROWS_AS(knn(pool, dims, std::vector<double>{0.1}, 3), DataError);

    // Equal distances resolve to the older timestamp.
    std::vector<HistoryEntry> ties{{9, {1.0}, {0}}, {3, {-1.0}, {0}}, {5, {1.0}, {0}}};
    const std::vector<std::size_t> d0{0};
    CHECK(knn(ties, d0, std::vector<double>{0.0}, 3) == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("fit_local recovers planes and constants") {
    std::vector<std::vector<double>> x{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.3, 0.7}};
    std::vector<double> y;
    for (auto& r : x) y.push_back(2 * r[0] - r[1] + 1);
    auto fit = fit_local(x, y);
    CHECK(fit.weights[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.weights[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.bias == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.fit_error < 1e-24);

    std::vector<double> flat(x.size(), 0.42);
    fit = fit_local(x, flat);
    CHECK(std::fabs(fit.weights[0]) < 1e-12);
    CHECK(std::fabs(fit.weights[1]) < 1e-12);
    CHECK(fit.bias == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(fit.fit_error < 1e-24);
}

TEST_CASE("fit_local error is the mean squared residual") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> x(40, std::vector<double>(3));
    std::vector<double> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        for (auto& v : x[i]) v = g(rng);
        y[i] = x[i][0] - 0.5 * x[i][2] + 0.1 * g(rng);
    }
    const auto fit = fit_local(x, y);
    const auto ref = oracle::normal_equations(x, y);
    double rss = 0.0;
    for (std::size_t i = 0; i < 40; ++i) {
        double r = y[i] - ref[3];
        for (std::size_t j = 0; j < 3; ++j) r -= ref[j] * x[i][j];
        rss += r * r;
    }
    CHECK(fit.fit_error == doctest::Approx(rss / 40.0).epsilon(1e-10));
}

TEST_CASE("fit_local on singular systems stays bounded") {
    // Duplicate column and fewer rows than dimensions.
    std::vector<std::vector<double>> x{{0.1, 0.1, 0.5}, {0.4, 0.4, 0.2}, {0.9, 0.9, 0.7}};
    std::vector<double> y{1.0, 2.0, 3.0};
    const auto fit = fit_local(x, y);
    for (double w : fit.weights) CHECK(std::isfinite(w));
    CHECK(fit.weights[0] == doctest::Approx(fit.weights[1]).epsilon(1e-6));
    CHECK(fit.fit_error < 1e-6);

    std::vector<std::vector<double>> one{{0.5, 0.2}};
    const auto single = fit_local(one, std::vector<double>{0.7});
    CHECK(single.bias == doctest::Approx(0.7));
    CHECK(single.fit_error == doctest::Approx(0.0));

    std::vector<std::vector<double>> bad{{0.5}, {NAN}};
    CHECK_THROWS_AS(fit_local(bad, std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(fit_local(one, std::vector<double>{}), DataError);
}

TEST_CASE("evaluate") {
    SoftSensor ss;
    ss.explanatory = {1, 3};
    ss.weights = {0.0, 0.0};
    ss.bias = 0.3;
    const std::vector<double> x{9, 0.4, 9, 0.6};
    CHECK(evaluate(ss, x) == 0.3);
    ss.explanatory = {1};
    ss.weights = {1.0};
    ss.bias = 0.0;
    CHECK(evaluate(ss, x) == 0.4);

    std::mt19937_64 rng(10);
    const auto topo = support::make_topology({3, 4, 2});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> xv(9);
        for (auto& v : xv) v = u(rng);
        const auto s = support::random_soft(topo, 0, 1, xv, rng);
        long double ref = s.bias;
        for (std::size_t j = 0; j < s.explanatory.size(); ++j)
            ref += static_cast<long double>(s.weights[j]) * xv[s.explanatory[j]];
        CHECK(std::fabs(evaluate(s, xv) - static_cast<double>(ref)) < 1e-15);
    }
}

TEST_CASE("error normalizer") {
    ErrorNormalizer en;
    en.observe(0.3);
    CHECK(en.normalize(0.3) == 0.0);
    en.observe(0.1);
    en.observe(0.5);
    CHECK(en.normalize(0.1) == 0.0);
    CHECK(en.normalize(0.5) == 1.0);
    CHECK(en.normalize(0.3) == doctest::Approx(0.5));
    CHECK(en.normalize(0.9) == 1.0);
    CHECK(en.count() == 3);

    std::mt19937_64 rng(11);
    std::exponential_distribution<double> ex(3.0);
    ErrorNormalizer stream;
    std::vector<double> seen;
    double last_min = INFINITY, last_max = -INFINITY;
    for (int i = 0; i < 50; ++i) {
        const double e = ex(rng);
        stream.observe(e);
        seen.push_back(e);
        const double lo = *std::min_element(seen.begin(), seen.end());
        const double hi = *std::max_element(seen.begin(), seen.end());
        CHECK(stream.min() == lo);
        CHECK(stream.max() == hi);
        CHECK(stream.min() <= last_min);
        CHECK(stream.max() >= last_max);
        last_min = stream.min();
        last_max = stream.max();
        const double want = hi > lo ? (e - lo) / (hi - lo) : 0.0;
        CHECK(stream.normalize(e) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("soft reliability") {
    SoftSensor ss;
    ss.explanatory = {0, 1};
    ss.weights = {0.5, -0.25};
    ss.norm_error = 0.5;
    const std::vector<double> c{2.0, 4.0};
    CHECK(soft_reliability(ss, c) == doctest::Approx((0.5 * 2 + 0.25 * 4) / 0.75 * 0.5));
    CHECK(soft_reliability(ss, c) == doctest::Approx(4.0 / 3.0));

    ss.norm_error = 0.0;
    const std::vector<double> same{1.7, 1.7};
    CHECK(soft_reliability(ss, same) == doctest::Approx(1.7));
    ss.norm_error = 1.0;
    CHECK(soft_reliability(ss, c) == 0.0);
    ss.weights = {0.0, 0.0};
    CHECK_THROWS_AS(soft_reliability(ss, c), EstimationError);
}

TEST_CASE("soft reliability stays within the explanatory score range") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    const auto topo = support::make_topology({2, 3, 3});
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(8), c(8);
        for (auto& v : x) v = u(rng) / 5.0;
        for (auto& v : c) v = u(rng);
        const auto ss = support::random_soft(topo, 1, 1, x, rng);
        double hi = 0.0;
        for (auto s : ss.explanatory) hi = std::max(hi, c[s]);
        const double r = soft_reliability(ss, c);
        CHECK(r >= 0.0);
        CHECK(r <= hi + 1e-12);
    }
}

TEST_CASE("reservoir keeps a bounded uniform sample") {
    HistoryStore small(5, 1);
    for (Timestamp t = 1; t <= 3; ++t) small.observe({t, {0.0}, {0.0}});
    CHECK(small.size() == 3);
    for (Timestamp t = 4; t <= 100; ++t) small.observe({t, {0.0}, {0.0}});
    CHECK(small.size() == 5);
    CHECK(small.seen() == 100);

    // Inclusion probability capacity / N for every timestep.
    const std::size_t cap = 20, n = 200, runs = 2000;
    std::vector<int> hits(n + 1, 0);
    for (std::size_t r = 0; r < runs; ++r) {
        HistoryStore h(cap, 1000 + r);
        for (Timestamp t = 1; t <= static_cast<Timestamp>(n); ++t) h.observe({t, {}, {}});
        for (const auto& e : h.entries()) ++hits[static_cast<std::size_t>(e.t)];
    }
    const double p = static_cast<double>(cap) / n;
    const double sd = std::sqrt(runs * p * (1 - p));
    int outside = 0;
    for (std::size_t t = 1; t <= n; ++t)
        if (std::fabs(hits[t] - runs * p) > 3.0 * sd) ++outside;
    // About 0.3% of timesteps are expected beyond 3 sigma.
    CHECK(outside <= 4);
}

TEST_CASE("construct_soft_sensor") {
    std::mt19937_64 g(13);
    const auto topo = support::make_topology({2, 2, 2});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<HistoryEntry> pool;
    for (Timestamp t = 1; t <= 60; ++t) {
        std::vector<double> x(6);
        for (auto& v : x) v = u(g);
        const double z0 = 0.5 * x[2] + 0.3 * x[4] + 0.1;
        pool.push_back({t, x, {z0, 0.0, 0.0}});
    }
    std::vector<double> q(6, 0.5);
    Rng rng(3);
    const auto ss = construct_soft_sensor(topo, 0, 1, 1.0, 30, pool, q, rng);
    REQUIRE(ss);
    CHECK(ss->process == 0);
    CHECK(ss->index == 1);
    CHECK(ss->explanatory == std::vector<std::size_t>{2, 3, 4, 5});
    CHECK(ss->output == evaluate(*ss, q));
    CHECK(ss->output == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ss->fit_error < 1e-20);

    Rng rng2(3);
    CHECK_FALSE(construct_soft_sensor(topo, 0, 1, 1.0, 61, pool, q, rng2));

    // Constant targets fit with all-zero weights: the soft sensor is dropped.
    for (auto& e : pool) e.z[1] = 0.25;
    std::vector<HistoryEntry> flat(pool.begin(), pool.end());
    for (auto& e : flat)
        for (auto& v : e.x) v = 0.5;
    Rng rng3(3);
    CHECK_FALSE(construct_soft_sensor(topo, 1, 1, 1.0, 30, flat, q, rng3));
}

TEST_CASE("identical neighbors give exactly zero weights") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<double> row{0.1 + 0.2, 1.0 / 3.0, 0.7};
    std::vector<std::vector<double>> x(48, row);
    std::vector<double> y(48);
    for (auto& v : y) v = u(rng);
    const auto fit = fit_local(x, y);
    for (double w : fit.weights) CHECK(w == 0.0);
    CHECK(fit.bias == doctest::Approx(std::accumulate(y.begin(), y.end(), 0.0) / 48.0));
}
