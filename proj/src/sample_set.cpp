#include "lcsamp/sample_set.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "csv_util.hpp"
#include "lcsamp/errors.hpp"

namespace lcsamp {

void write_sample_csv(const SampleSet& set, const std::string& csv_path) {
  if (!set.data.allFinite()) {
    throw io_error("write_sample_csv: sample set contains non-finite entries");
  }
  std::string out;
  out.reserve(static_cast<std::size_t>(set.data.size()) * 20 + 64);
  for (int j = 0; j < set.data.cols(); ++j) {
    if (j) out += ',';
    out += 'x';
    out += std::to_string(j + 1);
  }
  out += '\n';
  for (long long i = 0; i < set.data.rows(); ++i) {
    for (int j = 0; j < set.data.cols(); ++j) {
      if (j) out += ',';
      detail::append_double(out, set.data(i, j));
    }
    out += '\n';
  }
  std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("write_sample_csv: cannot open " + csv_path);
  f << out;
  if (!f) throw io_error("write_sample_csv: write failed for " + csv_path);

  std::ofstream side(csv_path + ".json", std::ios::binary | std::ios::trunc);
  if (!side) throw io_error("write_sample_csv: cannot open " + csv_path + ".json");
  side << set.meta.dump(2) << '\n';
  if (!side) throw io_error("write_sample_csv: write failed for " + csv_path + ".json");
}

SampleSet read_sample_csv(const std::string& csv_path) {
  std::ifstream f(csv_path, std::ios::binary);
  if (!f) throw io_error("read_sample_csv: cannot open " + csv_path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  long long lineno = 0;
  std::vector<double> row;
  while (std::getline(f, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    if (!detail::parse_row(line, row)) {
      if (first && !detail::any_numeric_field(line)) {
        first = false;  // header line
        continue;
      }
      throw io_error("read_sample_csv: malformed row at line " +
                     std::to_string(lineno) + " of " + csv_path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw io_error("read_sample_csv: ragged row at line " +
                     std::to_string(lineno) + " of " + csv_path);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw io_error("read_sample_csv: no data rows in " + csv_path);

  SampleSet set;
  set.data.resize(static_cast<long long>(rows.size()),
                  static_cast<long long>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const double v = rows[i][j];
      if (!std::isfinite(v)) {
        throw io_error("read_sample_csv: non-finite entry at row " +
                       std::to_string(i + 1) + " of " + csv_path);
      }
      set.data(static_cast<long long>(i), static_cast<long long>(j)) = v;
    }
  }

  std::ifstream side(csv_path + ".json", std::ios::binary);
  if (side) {
    try {
      side >> set.meta;
    } catch (const nlohmann::json::exception& e) {
      throw io_error("read_sample_csv: malformed sidecar " + csv_path +
                     ".json: " + e.what());
    }
  }
  return set;
}

}  // namespace lcsamp
