#include "cssl/experiment.hpp"

#include <fstream>

#include "cssl/errors.hpp"

namespace cssl {

nlohmann::json to_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["train"] = to_json(s.train);
  j["edges"] = s.edges;
  j["attrs"] = s.attrs;
  j["manifest"] = s.manifest;
  j["out_dir"] = s.out_dir;
  j["repeats"] = s.repeats;
  j["ratios"] = {s.ratios.train, s.ratios.val, s.ratios.test};
  j["one_hot"] = s.one_hot;
  j["jobs"] = s.jobs;
  return j;
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j, ExperimentSpec s) {
  if (j.contains("train")) s.train = train_config_from_json(j["train"], s.train);
  s.edges = j.value("edges", s.edges);
  s.attrs = j.value("attrs", s.attrs);
  s.manifest = j.value("manifest", s.manifest);
  s.out_dir = j.value("out_dir", s.out_dir);
  s.repeats = j.value("repeats", s.repeats);
  if (j.contains("ratios")) {
    const auto& r = j["ratios"];
    if (!r.is_array() || r.size() != 3) throw ConfigError("ratios must be a 3-element array");
    s.ratios = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>()};
  }
  s.one_hot = j.value("one_hot", s.one_hot);
  s.jobs = j.value("jobs", s.jobs);
  return s;
}

void append_record(const std::filesystem::path& path, const nlohmann::json& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record.dump() << "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path, const std::string& key_name,
                     const std::vector<SweepCell>& cells) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(6);
  out << key_name << ",status,name,auc_mean,auc_std,values,seconds,error\n";
  for (const auto& c : cells) {
    out << csv_field(c.key) << "," << (c.ok() ? "ok" : "failed") << ",";
    if (c.result) {
      const auto& r = *c.result;
      out << r.name << "," << r.mean << ",";
      if (r.std) out << *r.std;
      out << ",";
      for (std::size_t k = 0; k < r.values.size(); ++k) out << (k ? ";" : "") << r.values[k];
      out << "," << r.seconds << ",";
    } else {
      out << ",,,,,";
    }
    out << csv_field(c.error) << "\n";
  }
}

}  // namespace cssl
