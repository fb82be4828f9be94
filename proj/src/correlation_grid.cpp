#include "lrcorr/correlation_grid.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lrcorr/errors.hpp"

namespace lrcorr {

CorrelationGrid::CorrelationGrid(std::string label_in, std::vector<int> distances_in,
                                 std::vector<double> times_in)
    : label(std::move(label_in)),
      distances(std::move(distances_in)),
      times(std::move(times_in)),
      values(distances.size() * times.size(), 0.0) {}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ValidationError("malformed number in CSV: '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text) {
  int value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ValidationError("malformed distance in CSV: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void write_csv(const CorrelationGrid& grid, std::ostream& out) {
  out << "delta,t,value\n";
  for (std::size_t di = 0; di < grid.num_distances(); ++di) {
    for (std::size_t ti = 0; ti < grid.num_times(); ++ti) {
      out << grid.distances[di] << ',' << format_double(grid.times[ti]) << ','
          << format_double(grid.at(di, ti)) << '\n';
    }
  }
}

CorrelationGrid read_csv(std::istream& in, const std::string& label) {
  std::string line;
  if (!std::getline(in, line) || line != "delta,t,value") {
    throw ValidationError("CSV header must be 'delta,t,value'");
  }
  struct Row {
    int delta;
    double t;
    double value;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ValidationError("malformed CSV row: " + line);
    }
    const std::string_view view(line);
    rows.push_back({parse_int(view.substr(0, c1)),
                    parse_double(view.substr(c1 + 1, c2 - c1 - 1)),
                    parse_double(view.substr(c2 + 1))});
  }
  std::vector<int> distances;
  std::vector<double> times;
  for (const auto& row : rows) {
    if (distances.empty() || distances.back() != row.delta) distances.push_back(row.delta);
    if (distances.size() == 1) times.push_back(row.t);
  }
  if (std::set<int>(distances.begin(), distances.end()).size() != distances.size()) {
    throw ValidationError("CSV distance blocks are not contiguous");
  }
  if (rows.size() != distances.size() * times.size()) {
    throw ValidationError("CSV rows do not form a dense delta x t grid");
  }
  CorrelationGrid grid(label, distances, times);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].t != times[k % times.size()]) {
      throw ValidationError("CSV time axis is not repeated identically per delta");
    }
    grid.values[k] = rows[k].value;
  }
  return grid;
}

nlohmann::ordered_json grid_summary(const CorrelationGrid& grid) {
  nlohmann::ordered_json j;
  j["label"] = grid.label;
  j["distances"] = grid.distances;
  j["times"] = grid.times;
  if (grid.values.empty()) {
    j["min"] = nullptr;
    j["max"] = nullptr;
  } else {
    const auto [lo, hi] = std::minmax_element(grid.values.begin(), grid.values.end());
    j["min"] = *lo;
    j["max"] = *hi;
  }
  if (!grid.argmin_r.empty()) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t di = 0; di < grid.num_distances(); ++di) {
      std::vector<int> row(grid.argmin_r.begin() + grid.index(di, 0),
                           grid.argmin_r.begin() + grid.index(di, 0) + grid.num_times());
      rows.push_back(row);
    }
    j["argmin_r_grid"] = rows;
  }
  return j;
}

}  // namespace lrcorr
