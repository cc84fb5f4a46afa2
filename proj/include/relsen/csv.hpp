#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relsen/model.hpp"

namespace relsen {

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

/// Row-at-a-time reader for `t,<col>,<col>...` files. Numeric cells only;
/// errors name the source and line.
class CsvFrameReader {
public:
    CsvFrameReader(std::istream& in, std::string origin);

    const std::vector<std::string>& columns() const { return columns_; }

    /// Next row as a frame with values in file column order; nullopt at EOF.
    std::optional<MeasurementFrame> next();

private:
    std::istream& in_;
    std::string origin_;
    std::vector<std::string> columns_;
    std::size_t line_ = 0;
};

/// Maps file columns onto topology sensor order. Throws DataError naming the
/// first topology sensor missing from `columns`.
class ColumnMapping {
public:
    ColumnMapping(const std::vector<std::string>& columns, const Topology& topology);
    MeasurementFrame apply(const MeasurementFrame& row) const;

private:
    std::vector<std::size_t> source_;
};

struct SensorTable {
    std::vector<std::string> columns;
    std::vector<MeasurementFrame> rows;
};

SensorTable read_sensor_csv(const std::filesystem::path& path);

/// Reads a file and returns frames in topology sensor order.
std::vector<MeasurementFrame> read_frames(const std::filesystem::path& path, const Topology& topology);

void write_csv_header(std::ostream& out, std::span<const std::string> names);
void write_csv_row(std::ostream& out, Timestamp t, std::span<const double> values);
void write_frames(const std::filesystem::path& path, std::span<const std::string> names,
                  std::span<const MeasurementFrame> frames);

}  // namespace relsen
