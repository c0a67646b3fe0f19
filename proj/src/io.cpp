#include "cssl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "cssl/errors.hpp"

namespace cssl {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

bool is_blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

double parse_double(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, line, "expected a number, got '" + s + "'");
  }
}

std::uint32_t parse_index(const std::string& s, const std::string& source, std::size_t line) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(source, line, "expected a non-negative attribute index, got '" + s + "'");
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

LoadedGraph load_graph(const std::filesystem::path& edge_file,
                       const std::optional<std::filesystem::path>& attr_file) {
  const std::string src = edge_file.string();
  auto in = open_or_throw(edge_file);
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> tokens;
  const auto intern = [&](const std::string& t) {
    auto [it, inserted] = ids.try_emplace(t, static_cast<NodeId>(tokens.size()));
    if (inserted) tokens.push_back(t);
    return it->second;
  };

  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    const auto f = split_ws(line);
    if (f.size() != 2) throw ParseError(src, lineno, "expected two node tokens, got " + std::to_string(f.size()));
    const NodeId a = intern(f[0]);
    const NodeId b = intern(f[1]);
    edges.push_back({a, b});
  }

  AttributeRows attrs;
  if (attr_file) {
    const std::string asrc = attr_file->string();
    auto ain = open_or_throw(*attr_file);
    std::vector<std::vector<AttrEntry>> rows(tokens.size());
    std::size_t dim = 0;
    std::optional<std::size_t> declared_dim;
    bool dense = false;
    bool first = true;
    lineno = 0;
    const auto lookup = [&](const std::string& t, std::size_t ln) {
      const auto it = ids.find(t);
      if (it == ids.end())
        throw ValidationError(asrc + ":" + std::to_string(ln) + ": node '" + t +
                              "' does not appear in the edge file");
      return it->second;
    };
    while (std::getline(ain, line)) {
      ++lineno;
      if (first && line.rfind("node,", 0) == 0) {
        dense = true;
        first = false;
        dim = split_csv(line).size() - 1;
        continue;
      }
      if (is_blank_or_comment(line)) {
        const auto f = split_ws(line);
        if (f.size() == 3 && f[0] == "#" && f[1] == "dim") declared_dim = parse_index(f[2], asrc, lineno);
        continue;
      }
      first = false;
      if (dense) {
        const auto f = split_csv(line);
        if (f.size() != dim + 1)
          throw ParseError(asrc, lineno, "expected " + std::to_string(dim + 1) + " fields, got " +
                                             std::to_string(f.size()));
        const NodeId v = lookup(f[0], lineno);
        if (!rows[v].empty()) throw ValidationError(asrc + ":" + std::to_string(lineno) + ": duplicate row for node '" + f[0] + "'");
        for (std::size_t c = 0; c < dim; ++c) {
          const double val = parse_double(f[c + 1], asrc, lineno);
          if (val != 0.0) rows[v].push_back({static_cast<std::uint32_t>(c), val});
        }
      } else {
        const auto f = split_ws(line);
        if (f.size() != 3)
          throw ParseError(asrc, lineno, "expected 'node attr_index value', got " + std::to_string(f.size()) + " fields");
        const NodeId v = lookup(f[0], lineno);
        const auto idx = parse_index(f[1], asrc, lineno);
        const double val = parse_double(f[2], asrc, lineno);
        if (!std::isfinite(val)) throw ParseError(asrc, lineno, "non-finite attribute value");
        rows[v].push_back({idx, val});
        dim = std::max<std::size_t>(dim, std::size_t{idx} + 1);
      }
    }
    if (declared_dim) {
      if (*declared_dim < dim) throw ValidationError(asrc + ": attribute index exceeds declared dim");
      dim = *declared_dim;
    }
    attrs = AttributeRows::from_rows(std::move(rows), dim);
  }

  LoadedGraph out;
  const std::size_t n = tokens.size();
  out.graph = AttributedGraph::build(n, edges, std::move(attrs), std::move(tokens), &out.stats);
  return out;
}

namespace {

nlohmann::json edges_json(std::span<const Edge> edges) {
  auto arr = nlohmann::json::array();
  for (const auto& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

std::vector<Edge> edges_from(const nlohmann::json& arr) {
  std::vector<Edge> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back({p.at(0).get<NodeId>(), p.at(1).get<NodeId>()});
  return out;
}

}  // namespace

nlohmann::json split_to_json(const DataSplit& s) {
  nlohmann::json j;
  j["format"] = "cssl-split";
  j["version"] = 1;
  j["kind"] = to_string(s.kind);
  j["seed"] = s.seed;
  j["ratios"] = {s.ratios.train, s.ratios.val, s.ratios.test};
  j["holdout_fraction"] = s.holdout_fraction;
  j["observed_link_fraction"] = s.observed_link_fraction;
  j["graph_hash"] = hash_hex(s.graph_hash);
  j["num_nodes"] = s.num_nodes;
  j["train_pos"] = edges_json(s.train_pos);
  j["val_pos"] = edges_json(s.val_pos);
  j["test_pos"] = edges_json(s.test_pos);
  j["train_neg"] = edges_json(s.train_neg);
  j["val_neg"] = edges_json(s.val_neg);
  j["test_neg"] = edges_json(s.test_neg);
  j["out_of_sample_nodes"] = s.out_of_sample_nodes;
  return j;
}

DataSplit split_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "cssl-split") throw ValidationError("not a split manifest");
  DataSplit s;
  s.kind = parse_split_kind(j.at("kind").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  const auto& r = j.at("ratios");
  s.ratios = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
  s.holdout_fraction = j.at("holdout_fraction").get<double>();
  s.observed_link_fraction = j.at("observed_link_fraction").get<double>();
  s.graph_hash = std::stoull(j.at("graph_hash").get<std::string>(), nullptr, 16);
  s.num_nodes = j.at("num_nodes").get<std::size_t>();
  s.train_pos = edges_from(j.at("train_pos"));
  s.val_pos = edges_from(j.at("val_pos"));
  s.test_pos = edges_from(j.at("test_pos"));
  s.train_neg = edges_from(j.at("train_neg"));
  s.val_neg = edges_from(j.at("val_neg"));
  s.test_neg = edges_from(j.at("test_neg"));
  s.out_of_sample_nodes = j.at("out_of_sample_nodes").get<std::vector<NodeId>>();
  return s;
}

void write_split_manifest(const std::filesystem::path& path, const DataSplit& split) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << split_to_json(split).dump() << "\n";
}

DataSplit read_split_manifest(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  try {
    return split_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": malformed split manifest: " + e.what());
  }
}

void write_walks(const std::filesystem::path& path, const AttributedGraph& g,
                 std::span<const std::vector<NodeId>> walks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& w : walks) {
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << g.token(w[i]);
    out << "\n";
  }
}

void write_predictions(const std::filesystem::path& path, const AttributedGraph& g,
                       std::span<const Edge> pairs, std::span<const double> scores,
                       std::span<const std::uint8_t> labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out << g.token(pairs[k].u) << "\t" << g.token(pairs[k].v) << "\t" << scores[k] << "\t"
        << int{labels[k]} << "\n";
}

}  // namespace cssl
