#include "relsen/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "relsen/errors.hpp"

namespace relsen {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(std::move(cell));
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t");
        const auto e = c.find_last_not_of(" \t");
        c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
    }
    return cells;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

CsvFrameReader::CsvFrameReader(std::istream& in, std::string origin)
    : in_(in), origin_(std::move(origin)) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!blank(line)) break;
    }
    if (blank(line)) throw DataError(origin_ + ": missing header row");
    auto cells = split(line);
    if (cells.front() != "t")
        throw DataError(origin_ + ":" + std::to_string(line_) + ": first column must be 't'");
    columns_.assign(cells.begin() + 1, cells.end());
    if (columns_.empty()) throw DataError(origin_ + ": header names no sensor columns");
}

std::optional<MeasurementFrame> CsvFrameReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (blank(line)) continue;
        const auto cells = split(line);
        const auto where = origin_ + ":" + std::to_string(line_) + ": ";
        if (cells.size() != columns_.size() + 1) {
            throw DataError(where + "expected " + std::to_string(columns_.size() + 1) +
                            " cells, found " + std::to_string(cells.size()));
        }
        MeasurementFrame f;
        {
            const auto& c = cells[0];
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), f.t);
            if (ec != std::errc{} || p != c.data() + c.size())
                throw DataError(where + "bad timestamp '" + c + "'");
        }
        f.values.resize(columns_.size());
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            const auto& c = cells[i + 1];
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), f.values[i]);
            if (ec != std::errc{} || p != c.data() + c.size())
                throw DataError(where + "bad value '" + c + "' in column '" + columns_[i] + "'");
            if (!std::isfinite(f.values[i]))
                throw DataError(where + "non-finite value in column '" + columns_[i] + "'");
        }
        return f;
    }
    return std::nullopt;
}

ColumnMapping::ColumnMapping(const std::vector<std::string>& columns, const Topology& topology) {
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < columns.size(); ++i) pos.emplace(columns[i], i);
    for (std::size_t s = 0; s < topology.sensor_count(); ++s) {
        auto it = pos.find(topology.sensor_name(s));
        if (it == pos.end())
            throw DataError("input has no column for sensor '" + topology.sensor_name(s) + "'");
        source_.push_back(it->second);
    }
}

MeasurementFrame ColumnMapping::apply(const MeasurementFrame& row) const {
    MeasurementFrame out{row.t, std::vector<double>(source_.size())};
    for (std::size_t s = 0; s < source_.size(); ++s) out.values[s] = row.values[source_[s]];
    return out;
}

SensorTable read_sensor_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    CsvFrameReader reader(in, path.string());
    SensorTable table{reader.columns(), {}};
    while (auto row = reader.next()) table.rows.push_back(std::move(*row));
    return table;
}

std::vector<MeasurementFrame> read_frames(const std::filesystem::path& path, const Topology& topology) {
    auto table = read_sensor_csv(path);
    ColumnMapping mapping(table.columns, topology);
    std::vector<MeasurementFrame> frames;
    frames.reserve(table.rows.size());
    for (const auto& r : table.rows) frames.push_back(mapping.apply(r));
    return frames;
}

void write_csv_header(std::ostream& out, std::span<const std::string> names) {
    out << 't';
    for (const auto& n : names) out << ',' << n;
    out << '\n';
}

void write_csv_row(std::ostream& out, Timestamp t, std::span<const double> values) {
    out << t;
    for (double v : values) out << ',' << format_double(v);
    out << '\n';
}

void write_frames(const std::filesystem::path& path, std::span<const std::string> names,
                  std::span<const MeasurementFrame> frames) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv_header(out, names);
    for (const auto& f : frames) write_csv_row(out, f.t, f.values);
}

}  // namespace relsen
