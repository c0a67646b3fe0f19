#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "cssl/graph.hpp"
#include "cssl/split.hpp"

namespace cssl {

struct LoadedGraph {
  AttributedGraph graph;
  BuildStats stats;
};

// Edge file: one "src dst" pair of node tokens per line, '#' comments.
// Attribute file: sparse "node attr_index value" triples (an optional
// "# dim N" line fixes m, otherwise m = max index + 1), or a dense CSV whose
// first line is "node,f0,f1,...". Node ids follow first appearance in the
// edge file.
LoadedGraph load_graph(const std::filesystem::path& edge_file,
                       const std::optional<std::filesystem::path>& attr_file = std::nullopt);

nlohmann::json split_to_json(const DataSplit& split);
DataSplit split_from_json(const nlohmann::json& j);
void write_split_manifest(const std::filesystem::path& path, const DataSplit& split);
DataSplit read_split_manifest(const std::filesystem::path& path);

// One walk per line, node tokens separated by spaces.
void write_walks(const std::filesystem::path& path, const AttributedGraph& g,
                 std::span<const std::vector<NodeId>> walks);

// "src dst score label" rows.
void write_predictions(const std::filesystem::path& path, const AttributedGraph& g,
                       std::span<const Edge> pairs, std::span<const double> scores,
                       std::span<const std::uint8_t> labels);

}  // namespace cssl
