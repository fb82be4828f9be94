#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace lrcorr {

// Real values on a (distance x time) grid, stored distance-major.
struct CorrelationGrid {
  std::string label;
  std::vector<int> distances;
  std::vector<double> times;
  std::vector<double> values;
  // Minimizing ball radius per cell; only filled for bound grids.
  std::vector<int> argmin_r;

  CorrelationGrid() = default;
  CorrelationGrid(std::string label, std::vector<int> distances, std::vector<double> times);

  std::size_t num_distances() const { return distances.size(); }
  std::size_t num_times() const { return times.size(); }
  std::size_t index(std::size_t di, std::size_t ti) const { return di * times.size() + ti; }

  double& at(std::size_t di, std::size_t ti) { return values[index(di, ti)]; }
  double at(std::size_t di, std::size_t ti) const { return values[index(di, ti)]; }

  bool same_axes(const CorrelationGrid& other) const {
    return distances == other.distances && times == other.times;
  }
};

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

// Header `delta,t,value`, rows delta-major / t-minor.
void write_csv(const CorrelationGrid& grid, std::ostream& out);
CorrelationGrid read_csv(std::istream& in, const std::string& label);

// {label, distances, times, min, max[, argmin_r_grid]}
nlohmann::ordered_json grid_summary(const CorrelationGrid& grid);

}  // namespace lrcorr
