#pragma once

// Random instance builders and loss evaluators written directly from the
// loss definitions, for use by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "relsen/model.hpp"
#include "relsen/reliability.hpp"
#include "relsen/soft_sensor.hpp"

namespace support {

using relsen::SoftSensor;
using relsen::Topology;

/// Topology with `counts[p]` sensors in process p, named P<p>_<i>.
inline Topology make_topology(const std::vector<std::size_t>& counts) {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (std::size_t p = 0; p < counts.size(); ++p) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < counts[p]; ++i)
            names.push_back("P" + std::to_string(p) + "_" + std::to_string(i));
        groups.emplace_back("P" + std::to_string(p), names);
    }
    return Topology::from_groups(groups);
}

inline Topology random_topology(std::mt19937_64& rng, std::size_t processes, std::size_t lo,
                                std::size_t hi) {
    std::uniform_int_distribution<std::size_t> count(lo, hi);
    std::vector<std::size_t> counts(processes);
    for (auto& c : counts) c = count(rng);
    return make_topology(counts);
}

/// c_{p,m} straight from its definition.
inline double soft_weight(const SoftSensor& ss, const std::vector<double>& c) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ss.explanatory.size(); ++i) {
        num += std::fabs(ss.weights[i]) * c[ss.explanatory[i]];
        den += std::fabs(ss.weights[i]);
    }
    return num / den * (1.0 - ss.norm_error);
}

/// A soft sensor for `p` with a random explanatory subset of the other
/// processes' sensors, random weights and normalized error, evaluated at x.
inline SoftSensor random_soft(const Topology& topo, std::size_t p, std::size_t m,
                              const std::vector<double>& x, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::size_t> foreign;
    for (std::size_t s = 0; s < topo.sensor_count(); ++s)
        if (topo.process_of(s) != p) foreign.push_back(s);
    std::shuffle(foreign.begin(), foreign.end(), rng);
    const std::size_t k = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(foreign.size()));
    foreign.resize(std::min(k, foreign.size()));
    std::sort(foreign.begin(), foreign.end());

    SoftSensor ss;
    ss.process = p;
    ss.index = m;
    ss.explanatory = foreign;
    for (std::size_t i = 0; i < foreign.size(); ++i) ss.weights.push_back(2.0 * u(rng) - 1.0);
    ss.bias = u(rng) - 0.5;
    ss.fit_error = 0.01 * u(rng);
    ss.norm_error = 0.9 * u(rng);
    double y = ss.bias;
    for (std::size_t i = 0; i < foreign.size(); ++i) y += ss.weights[i] * x[foreign[i]];
    ss.output = y;
    return ss;
}

/// Cleaning loss for one step:
///   sum_s c_s (z_p - x_s)^2 + sum_{p,m} c_{p,m} (z_p - y)^2 + sum_p g_p (z_p - zprev_p)^2.
inline double cleaning_loss(const Topology& topo, const std::vector<double>& x,
                            const std::vector<SoftSensor>& softs, const std::vector<double>& c,
                            const std::vector<double>& zprev, const std::vector<double>& gamma,
                            const std::vector<double>& z) {
    double loss = 0.0;
    for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
        const double d = z[topo.process_of(s)] - x[s];
        loss += c[s] * d * d;
    }
    for (const auto& ss : softs) {
        const double d = z[ss.process] - ss.output;
        loss += soft_weight(ss, c) * d * d;
    }
    for (std::size_t p = 0; p < topo.process_count(); ++p) {
        const double d = z[p] - zprev[p];
        loss += gamma[p] * d * d;
    }
    return loss;
}

/// Reliability loss over a window for scores c: every step contributes its
/// hard-sensor and soft-sensor weighted squared errors.
inline double reliability_loss(const Topology& topo, const std::vector<relsen::WindowRecord>& window,
                               const std::vector<double>& c) {
    double loss = 0.0;
    for (const auto& rec : window) {
        for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
            const double d = rec.z[topo.process_of(s)] - rec.x[s];
            loss += c[s] * d * d;
        }
        for (const auto& ss : rec.softs) {
            const double d = rec.z[ss.process] - ss.output;
            loss += soft_weight(ss, c) * d * d;
        }
    }
    return loss;
}

/// Joint warm-up loss: cleaning loss summed over the span with smoothness
/// linking consecutive steps.
inline double joint_loss(const Topology& topo, const std::vector<relsen::MeasurementFrame>& frames,
                         const std::vector<std::vector<SoftSensor>>& softs,
                         const std::vector<double>& c, const std::vector<std::vector<double>>& z,
                         const std::vector<double>& gamma) {
    double loss = 0.0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        for (std::size_t s = 0; s < topo.sensor_count(); ++s) {
            const double d = z[t][topo.process_of(s)] - frames[t].values[s];
            loss += c[s] * d * d;
        }
        for (const auto& ss : softs[t]) {
            const double d = z[t][ss.process] - ss.output;
            loss += soft_weight(ss, c) * d * d;
        }
        if (t > 0)
            for (std::size_t p = 0; p < topo.process_count(); ++p) {
                const double d = z[t][p] - z[t - 1][p];
                loss += gamma[p] * d * d;
            }
    }
    return loss;
}

/// Coefficients a_s of a loss that is linear in c, read off by probing
/// with unit score vectors.
template <class Loss>
std::vector<double> linear_coefficients(std::size_t n, Loss loss) {
    const std::vector<double> zero(n, 0.0);
    const double base = loss(zero);
    std::vector<double> a(n);
    for (std::size_t s = 0; s < n; ++s) {
        auto e = zero;
        e[s] = 1.0;
        a[s] = loss(e) - base;
    }
    return a;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace support
