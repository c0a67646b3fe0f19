#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cssl/errors.hpp"
#include "cssl/io.hpp"
#include "fixtures.hpp"

using namespace cssl;
using cssl::test::TempDir;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("edge list without attributes") {
  TempDir dir("io");
  write_file(dir / "g.edges", "# comment\n0 1\n\n1\t2\n");
  const auto loaded = load_graph(dir / "g.edges");
  const auto& g = loaded.graph;
  CHECK(g.num_nodes() == 3);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK_FALSE(g.has_attributes());
  CHECK(g.token(2) == "2");
}

TEST_CASE("self-loop is dropped but its node kept") {
  TempDir dir("io");
  write_file(dir / "g.edges", "a b\nc c\nb a\n");
  const auto loaded = load_graph(dir / "g.edges");
  CHECK(loaded.graph.num_nodes() == 3);
  CHECK(loaded.graph.num_edges() == 1);
  CHECK(loaded.graph.degree(2) == 0);
  CHECK(loaded.stats.self_loops_dropped == 1);
  CHECK(loaded.stats.duplicate_edges == 1);
}

TEST_CASE("malformed edge line reports its line number") {
  TempDir dir("io");
  write_file(dir / "g.edges", "0 1\n1 2 3\n");
  try {
    load_graph(dir / "g.edges");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("g.edges:2") != std::string::npos);
  }
}

TEST_CASE("missing file names the path") {
  try {
    load_graph("/nonexistent/dir/x.edges");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.edges") != std::string::npos);
  }
}

TEST_CASE("sparse attribute triples") {
  TempDir dir("io");
  write_file(dir / "g.edges", "a b\nb c\n");
  write_file(dir / "g.attrs", "a 0 1\nc 4 1\nc 2 0.5\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.attrs").graph;
  CHECK(g.attr_dim() == 5);
  CHECK(g.attributes(0).size() == 1);
  CHECK(g.attributes(1).empty());
  REQUIRE(g.attributes(2).size() == 2);
  CHECK(g.attributes(2)[0] == AttrEntry{2, 0.5});

  write_file(dir / "dim.attrs", "# dim 9\na 0 1\n");
  CHECK(load_graph(dir / "g.edges", dir / "dim.attrs").graph.attr_dim() == 9);
}

TEST_CASE("dense CSV attributes") {
  TempDir dir("io");
  write_file(dir / "g.edges", "a b\n");
  write_file(dir / "g.csv", "node,f0,f1,f2\nb,0,1,0\na,1,0,1\n");
  const auto g = load_graph(dir / "g.edges", dir / "g.csv").graph;
  CHECK(g.attr_dim() == 3);
  CHECK(g.attributes(0).size() == 2);
  REQUIRE(g.attributes(1).size() == 1);
  CHECK(g.attributes(1)[0].index == 1);
}

TEST_CASE("attribute row for an unknown node is a validation error") {
  TempDir dir("io");
  write_file(dir / "g.edges", "a b\n");
  write_file(dir / "g.attrs", "a 0 1\nzz 1 1\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "g.attrs"), ValidationError);
  write_file(dir / "bad.attrs", "a x 1\n");
  CHECK_THROWS_AS(load_graph(dir / "g.edges", dir / "bad.attrs"), ParseError);
}

TEST_CASE("split manifest round trip is exact") {
  TempDir dir("io");
  const auto g = cssl::test::random_graph(50, 0.2, 10, 3, 4);
  const auto split = split_links(g, {0.6, 0.2, 0.2}, 17);
  write_split_manifest(dir / "a.json", split);
  const auto back = read_split_manifest(dir / "a.json");
  CHECK(back == split);
  write_split_manifest(dir / "b.json", back);
  CHECK(read_file(dir / "a.json") == read_file(dir / "b.json"));

  write_file(dir / "bad.json", "{\"format\": \"other\"}");
  CHECK_THROWS_AS(read_split_manifest(dir / "bad.json"), ValidationError);
}

TEST_CASE("walks and predictions use node tokens") {
  TempDir dir("io");
  write_file(dir / "g.edges", "x y\ny z\n");
  const auto g = load_graph(dir / "g.edges").graph;
  const std::vector<std::vector<NodeId>> walks{{0, 1, 2}, {2}};
  write_walks(dir / "w.txt", g, walks);
  CHECK(read_file(dir / "w.txt") == "x y z\nz\n");

  const std::vector<Edge> pairs{{0, 1}, {0, 2}};
  const std::vector<double> scores{0.75, 0.25};
  const std::vector<std::uint8_t> labels{1, 0};
  write_predictions(dir / "p.tsv", g, pairs, scores, labels);
  CHECK(read_file(dir / "p.tsv") == "x\ty\t0.75\t1\nx\tz\t0.25\t0\n");
}
