#include "relsen/soft_sensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relsen/errors.hpp"

namespace relsen {

HistoryStore::HistoryStore(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(substream(seed, {0x4849535459ULL})) {
    entries_.reserve(capacity_);
}

void HistoryStore::observe(HistoryEntry entry) {
    const std::uint64_t n = seen_++;
    if (entries_.size() < capacity_) {
        entries_.push_back(std::move(entry));
        return;
    }
    if (capacity_ == 0) return;
    std::uniform_int_distribution<std::uint64_t> pick(0, n);
    const auto j = pick(rng_);
    if (j < capacity_) entries_[j] = std::move(entry);
}

void ErrorNormalizer::observe(double fit_error) {
    if (count_ == 0) {
        min_ = max_ = fit_error;
    } else {
        min_ = std::min(min_, fit_error);
        max_ = std::max(max_, fit_error);
    }
    ++count_;
}

double ErrorNormalizer::normalize(double fit_error) const {
    if (count_ == 0 || !(max_ > min_)) return 0.0;
    return std::clamp((fit_error - min_) / (max_ - min_), 0.0, 1.0);
}

double SoftSensor::abs_weight_sum() const {
    double sum = 0.0;
    for (double w : weights) sum += std::abs(w);
    return sum;
}

std::size_t explanatory_count(const Topology& topology, std::size_t process, double ratio) {
    const auto pool = topology.foreign_sensor_count(process);
    const auto n = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(pool)));
    return std::clamp<std::size_t>(n, pool == 0 ? 0 : 1, pool);
}

std::vector<std::size_t> select_explanatory(const Topology& topology, std::size_t process,
                                            double ratio, Rng& rng) {
    if (topology.foreign_sensor_count(process) == 0) {
        throw ConfigError("process '" + topology.process_name(process) +
                          "' has no sensors outside it to build soft sensors from");
    }
    std::vector<std::size_t> candidates;
    candidates.reserve(topology.foreign_sensor_count(process));
    for (std::size_t s = 0; s < topology.sensor_count(); ++s) {
        if (topology.process_of(s) != process) candidates.push_back(s);
    }
    std::vector<std::size_t> chosen;
    const auto n = explanatory_count(topology, process, ratio);
    chosen.reserve(n);
    std::sample(candidates.begin(), candidates.end(), std::back_inserter(chosen), n, rng);
    return chosen;
}

std::vector<std::size_t> knn(std::span<const HistoryEntry> pool,
                             std::span<const std::size_t> dims,
                             std::span<const double> point, std::size_t k,
                             std::optional<Timestamp> exclude) {
    if (point.size() != dims.size()) throw DataError("query point does not match explanatory set");

    struct Candidate {
        double dist2;
        Timestamp t;
        std::size_t pos;
    };
    std::vector<Candidate> cands;
    cands.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto& e = pool[i];
        if (exclude && e.t == *exclude) continue;
        double d2 = 0.0;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            const double d = e.x[dims[j]] - point[j];
            d2 += d * d;
        }
        cands.push_back({d2, e.t, i});
    }
    if (cands.size() < k) {
        throw InsufficientHistory("need " + std::to_string(k) + " neighbors, history holds " +
                                  std::to_string(cands.size()));
    }
    auto closer = [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        return a.t < b.t;
    };
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(),
                      closer);
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = cands[i].pos;
    return out;
}

LocalFit fit_local(std::span<const std::vector<double>> inputs, std::span<const double> targets) {
    const auto rows = inputs.size();
    if (rows == 0 || rows != targets.size())
        throw DataError("local fit needs one target per neighbor and at least one neighbor");
    const auto dim = inputs.front().size();

    Eigen::MatrixXd X(rows, dim);
    Eigen::VectorXd z(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (inputs[i].size() != dim) throw DataError("local fit rows have inconsistent width");
        for (std::size_t j = 0; j < dim; ++j) X(i, j) = inputs[i][j];
        z(i) = targets[i];
    }
    if (!X.allFinite() || !z.allFinite()) throw DataError("local fit received non-finite input");

    // The mean of identical values is that value; summing them can be off by
    // an ulp, which the ridge would turn into spurious nonzero weights.
    Eigen::RowVectorXd x_mean = X.colwise().mean();
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        if ((X.col(j).array() == X(0, j)).all()) x_mean(j) = X(0, j);
    double z_mean = z.mean();
    if ((z.array() == z(0)).all()) z_mean = z(0);
    const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
    const Eigen::VectorXd zc = z.array() - z_mean;

    LocalFit fit;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    if (dim > 0) {
        Eigen::MatrixXd gram = Xc.transpose() * Xc;
        const Eigen::VectorXd rhs = Xc.transpose() * zc;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        const auto pivots = ldlt.vectorD().cwiseAbs();
        const double scale = std::max(pivots.maxCoeff(), 1.0);
        const bool singular = ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
                              pivots.minCoeff() <= 1e-12 * scale;
        if (singular) {
            gram.diagonal().array() += kRidge;
            w = gram.llt().solve(rhs);
        } else {
            w = ldlt.solve(rhs);
        }
    }
    fit.weights.assign(w.data(), w.data() + dim);
    fit.bias = z_mean - x_mean.dot(w);
    const Eigen::VectorXd resid = (z - X * w).array() - fit.bias;
    fit.fit_error = resid.squaredNorm() / static_cast<double>(rows);
    if (!std::isfinite(fit.fit_error) || !std::isfinite(fit.bias))
        throw DataError("local fit produced non-finite coefficients");
    return fit;
}

double evaluate(const SoftSensor& sensor, std::span<const double> x) {
    double y = sensor.bias;
    for (std::size_t i = 0; i < sensor.explanatory.size(); ++i) {
        y += sensor.weights[i] * x[sensor.explanatory[i]];
    }
    return y;
}

double soft_reliability(const SoftSensor& sensor, std::span<const double> scores) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < sensor.explanatory.size(); ++i) {
        const double a = std::abs(sensor.weights[i]);
        num += a * scores[sensor.explanatory[i]];
        den += a;
    }
    if (!(den > 0.0)) throw EstimationError("soft sensor has all-zero weights");
    return num / den * (1.0 - sensor.norm_error);
}

std::optional<SoftSensor> construct_soft_sensor(const Topology& topology, std::size_t process,
                                                std::size_t index, double ratio, std::size_t k,
                                                std::span<const HistoryEntry> pool,
                                                std::span<const double> x, Rng& rng,
                                                std::optional<Timestamp> exclude) {
    SoftSensor ss;
    ss.process = process;
    ss.index = index;
    ss.explanatory = select_explanatory(topology, process, ratio, rng);

    std::vector<double> query(ss.explanatory.size());
    for (std::size_t j = 0; j < query.size(); ++j) query[j] = x[ss.explanatory[j]];

    std::vector<std::size_t> neighbors;
    try {
        neighbors = knn(pool, ss.explanatory, query, k, exclude);
    } catch (const InsufficientHistory&) {
        return std::nullopt;
    }

    std::vector<std::vector<double>> inputs(neighbors.size(), std::vector<double>(query.size()));
    std::vector<double> targets(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const auto& e = pool[neighbors[i]];
        for (std::size_t j = 0; j < query.size(); ++j) inputs[i][j] = e.x[ss.explanatory[j]];
        targets[i] = e.z[process];
    }

    auto fit = fit_local(inputs, targets);
    ss.weights = std::move(fit.weights);
    ss.bias = fit.bias;
    ss.fit_error = fit.fit_error;
    if (!(ss.abs_weight_sum() > 0.0)) return std::nullopt;
    ss.output = evaluate(ss, x);
    return ss;
}

}  // namespace relsen
