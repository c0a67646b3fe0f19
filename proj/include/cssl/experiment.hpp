#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cssl/evaluation.hpp"
#include "cssl/training.hpp"

namespace cssl {

// Everything needed to re-run an experiment; embedded in every output.
struct ExperimentSpec {
  TrainConfig train;
  std::string edges;
  std::string attrs;
  std::string manifest;
  std::string out_dir = ".";
  std::size_t repeats = 1;
  SplitRatios ratios;
  bool one_hot = false;
  int jobs = 1;
};

nlohmann::json to_json(const ExperimentSpec& spec);
// Fields present in `j` override `base`.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});

// Appends one JSON record per line.
void append_record(const std::filesystem::path& path, const nlohmann::json& record);

// One cell of a sweep. A failed cell keeps its error message instead of a
// result.
struct SweepCell {
  std::string key;
  std::optional<ExperimentResult> result;
  std::string error;
  bool ok() const { return result.has_value(); }
};

// One row per cell: key, status, name, mean, std, per-repeat values, error.
void write_sweep_csv(const std::filesystem::path& path, const std::string& key_name,
                     const std::vector<SweepCell>& cells);

}  // namespace cssl
