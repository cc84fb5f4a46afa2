#include <doctest.h>

#include <cmath>

#include "relsen/synth.hpp"

using namespace relsen;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) { ma += a[i] / n; mb += b[i] / n; }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("default deployment shape") {
    const auto schema = air_quality_schema();
    std::vector<std::size_t> counts;
    for (const auto& [name, n] : schema) counts.push_back(n);
    CHECK(counts == std::vector<std::size_t>{5, 3, 3, 2, 2, 1});

    const auto d = synthesize({});
    CHECK(d.topology.sensor_count() == 16);
    CHECK(d.topology.process_count() == 6);
    CHECK(d.frames.size() == 1968);
    CHECK(d.frames.front().t == 1);
    CHECK(d.frames.back().t == 1968);
    CHECK(d.sensor_noise.size() == 16);
    for (const auto& f : d.frames)
        for (double v : f.values) CHECK(v > 0.0);
}

TEST_CASE("fixed seed gives identical data, different seeds differ") {
    SynthOptions o;
    o.length = 300;
    o.seed = 5;
    const auto a = synthesize(o), b = synthesize(o);
    bool same = true;
    for (std::size_t i = 0; i < a.frames.size(); ++i) same = same && a.frames[i].values == b.frames[i].values;
    CHECK(same);
    o.seed = 6;
    const auto c = synthesize(o);
    CHECK(c.frames[10].values != a.frames[10].values);
}

TEST_CASE("co-monitoring sensors are strongly correlated") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SynthOptions o;
        o.seed = seed;
        const auto d = synthesize(o);
        for (std::size_t p = 0; p < d.topology.process_count(); ++p) {
            const auto& m = d.topology.sensors_of(p);
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = i + 1; j < m.size(); ++j) {
                    std::vector<double> a, b;
                    for (const auto& f : d.frames) {
                        a.push_back(f.values[m[i]]);
                        b.push_back(f.values[m[j]]);
                    }
                    CHECK(correlation(a, b) > 0.9);
                }
        }
    }
}

TEST_CASE("processes share drivers") {
    SynthOptions o;
    o.seed = 2;
    const auto d = synthesize(o);
    // Every process is predictable from the others: the best absolute
    // correlation with some other process is substantial.
    for (std::size_t p = 0; p < 6; ++p) {
        double best = 0.0;
        for (std::size_t q = 0; q < 6; ++q) {
            if (q == p) continue;
            std::vector<double> a, b;
            for (const auto& f : d.latent) {
                a.push_back(f.states[p]);
                b.push_back(f.states[q]);
            }
            best = std::max(best, std::fabs(correlation(a, b)));
        }
        CHECK(best > 0.5);
    }
}
