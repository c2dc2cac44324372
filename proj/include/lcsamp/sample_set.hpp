#pragma once

#include <string>

#include <Eigen/Core>

#include <nlohmann/json.hpp>

namespace lcsamp {

/// N samples of dimension p (one per row) plus the metadata needed to
/// reproduce them: seed, plan, model tag, N and wall time.
struct SampleSet {
  Eigen::MatrixXd data;
  nlohmann::json meta;

  long long n() const { return data.rows(); }
  int p() const { return static_cast<int>(data.cols()); }
};

/// Writes the samples to `csv_path` (header x1,...,xp, one row per sample,
/// full round-trip precision) and the metadata to `csv_path + ".json"`.
/// All entries must be finite.  The CSV bytes depend only on the data, so
/// identical sample sets produce identical files.
void write_sample_csv(const SampleSet& set, const std::string& csv_path);

/// Reads a sample CSV written by write_sample_csv (a missing header is
/// tolerated).  Ragged rows, non-numeric fields or non-finite entries raise
/// io_error.  The sidecar `csv_path + ".json"` is loaded into meta when
/// present.
SampleSet read_sample_csv(const std::string& csv_path);

}  // namespace lcsamp
