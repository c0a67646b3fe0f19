#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cssl/graph.hpp"
#include "cssl/rng.hpp"

namespace cssl::test {

inline AttributedGraph graph_from(std::size_t n, std::vector<Edge> edges) {
  return AttributedGraph::build(n, edges, {}, {});
}

inline AttributedGraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return graph_from(n, e);
}

inline AttributedGraph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
  return graph_from(leaves + 1, e);
}

// G(n, p) with `nnz` random binary attributes per node out of `m`.
inline AttributedGraph random_graph(std::size_t n, double p, std::size_t m, std::size_t nnz, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) e.push_back({i, j});
  std::vector<std::vector<AttrEntry>> rows(n);
  for (auto& row : rows) {
    std::vector<char> used(m, 0);
    while (row.size() < std::min(nnz, m)) {
      const auto c = static_cast<std::uint32_t>(rng.uniform(m));
      if (!used[c]) {
        used[c] = 1;
        row.push_back({c, 1.0});
      }
    }
  }
  return AttributedGraph::build(n, e, m ? AttributeRows::from_rows(rows, m) : AttributeRows{}, {});
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("cssl_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace cssl::test
