#include "qsr/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qsr {

using nlohmann::json;

namespace {

Qcn network_from_json(const json& j, CalculusId calc_id, NodeId source,
                      NodeId tail) {
  const Calculus& calc = Calculus::get(calc_id);
  std::vector<Edge> edges;
  NodeId max_node = std::max(source, tail);
  for (const auto& e : j.at("edges")) {
    const NodeId h = e.at(0).get<NodeId>();
    const NodeId t = e.at(1).get<NodeId>();
    const Atom label = calc.parse_label(e.at(2).get<std::string>());
    edges.push_back({h, t, RelationSet::single(label)});
    max_node = std::max({max_node, h, t});
  }
  return Qcn(calc_id, max_node + 1, std::move(edges));
}

CalculusId calculus_field(const json& j) {
  const auto id = calculus_from_string(j.at("calculus").get<std::string>());
  if (!id) throw ContractViolation("unknown calculus in JSON input");
  return *id;
}

}  // namespace

json instance_to_json(const ProblemInstance& instance) {
  json edges = json::array();
  for (const Edge& e : instance.network.edges())
    edges.push_back({e.head, e.tail, std::string(e.label.the_atom().name())});
  return json{
      {"calculus", std::string(to_string(instance.network.calculus()))},
      {"edges", std::move(edges)},
      {"query", {instance.source, instance.tail}},
      {"answer", std::string(instance.gold.name())},
      {"k", instance.k},
      {"b", instance.b},
      {"gold", std::string(instance.gold.name())},
      {"metrics", metrics_to_json(instance.metrics)},
      {"id", instance.id},
  };
}

json metrics_to_json(const DifficultyMetrics& m) {
  return json{
      {"intersections", m.intersections},
      {"has_trivial_path", m.has_trivial_path},
      {"num_st_paths", m.num_st_paths},
      {"mean_union_cardinality", m.mean_union_cardinality},
  };
}

ProblemInstance instance_from_json(const json& j) {
  const CalculusId calc_id = calculus_field(j);
  const Calculus& calc = Calculus::get(calc_id);
  const NodeId source = j.at("query").at(0).get<NodeId>();
  const NodeId tail = j.at("query").at(1).get<NodeId>();
  ProblemInstance instance{
      network_from_json(j, calc_id, source, tail),
      source,
      tail,
      calc.parse_label(j.at("gold").get<std::string>()),
      j.at("k").get<int>(),
      j.at("b").get<int>(),
      {},
      j.at("id").get<std::string>(),
  };
  if (j.contains("metrics")) {
    const json& m = j.at("metrics");
    instance.metrics.intersections = m.at("intersections").get<int>();
    instance.metrics.has_trivial_path = m.at("has_trivial_path").get<bool>();
    instance.metrics.num_st_paths = m.at("num_st_paths").get<int>();
    instance.metrics.mean_union_cardinality =
        m.at("mean_union_cardinality").get<double>();
  } else {
    instance.metrics = compute_metrics(instance.network, source, tail);
  }
  return instance;
}

QueryNetwork query_from_json(const json& j) {
  const CalculusId calc_id = calculus_field(j);
  const Calculus& calc = Calculus::get(calc_id);
  const NodeId source = j.at("query").at(0).get<NodeId>();
  const NodeId tail = j.at("query").at(1).get<NodeId>();
  QueryNetwork q{network_from_json(j, calc_id, source, tail), source, tail, {}};
  if (j.contains("answer"))
    q.answer = calc.parse_label(j.at("answer").get<std::string>());
  return q;
}

json record_to_json(const EvalRecord& record) {
  json j{
      {"instance_id", record.instance_id},
      {"prompt", record.prompt},
      {"raw_response", record.raw_response},
  };
  if (record.cot_text) j["cot_text"] = *record.cot_text;
  if (record.parsed) j["parsed"] = std::string(record.parsed->name());
  if (record.parse_error) j["parse_error"] = *record.parse_error;
  if (record.correct) j["correct"] = *record.correct;
  if (record.output_tokens) j["output_tokens"] = *record.output_tokens;
  return j;
}

EvalRecord record_from_json(const json& j, const Calculus& calculus) {
  EvalRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.prompt = j.value("prompt", "");
  r.raw_response = j.value("raw_response", "");
  if (j.contains("cot_text")) r.cot_text = j.at("cot_text").get<std::string>();
  if (j.contains("parsed"))
    r.parsed = calculus.parse_label(j.at("parsed").get<std::string>());
  if (j.contains("parse_error"))
    r.parse_error = j.at("parse_error").get<std::string>();
  if (j.contains("correct")) r.correct = j.at("correct").get<bool>();
  if (j.contains("output_tokens"))
    r.output_tokens = j.at("output_tokens").get<int>();
  return r;
}

json report_to_json(const ScoreReport& report) {
  json labels = json::object();
  for (const LabelScore& ls : report.per_label) {
    labels[std::string(ls.label.name())] = {
        {"precision", ls.precision},
        {"recall", ls.recall},
        {"f1", ls.f1},
        {"count", ls.count},
    };
  }
  return json{
      {"accuracy", report.accuracy},
      {"macro_f1", report.macro_f1},
      {"per_label", std::move(labels)},
      {"non_response_count", report.non_response_count},
      {"scored_records", report.scored_records},
  };
}

std::vector<ProblemInstance> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open dataset file: " + path.string());
  std::vector<ProblemInstance> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw ContractViolation(path.string() + ":" + std::to_string(line_no) +
                              ": " + e.what());
    }
  }
  return out;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<ProblemInstance>& instances) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write dataset file: " + path.string());
  for (const ProblemInstance& instance : instances)
    out << instance_to_json(instance).dump() << '\n';
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path,
                                     const Calculus& calculus) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open records file: " + path.string());
  std::vector<EvalRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line), calculus));
    } catch (const std::exception& e) {
      throw ContractViolation(path.string() + ":" + std::to_string(line_no) +
                              ": " + e.what());
    }
  }
  return out;
}

uint64_t fnv1a(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void write_manifest(const std::filesystem::path& dataset_path,
                    const DatasetConfig& config,
                    const std::vector<ProblemInstance>& instances) {
  std::ifstream in(dataset_path, std::ios::binary);
  std::ostringstream contents;
  contents << in.rdbuf();
  std::ostringstream hash;
  hash << std::hex << fnv1a(contents.str());

  json counts = json::object();
  for (const ProblemInstance& instance : instances) {
    const std::string key =
        "k" + std::to_string(instance.k) + "-b" + std::to_string(instance.b);
    counts[key] = counts.value(key, 0) + 1;
  }
  const json manifest{
      {"calculus", std::string(to_string(config.calculus))},
      {"k_values", config.k_values},
      {"b_values", config.b_values},
      {"per_config_count", config.per_config_count},
      {"seed", config.seed},
      {"balance_labels", config.balance_labels},
      {"total", instances.size()},
      {"counts", std::move(counts)},
      {"content_hash_fnv1a", hash.str()},
  };
  std::filesystem::path manifest_path = dataset_path;
  manifest_path += ".manifest.json";
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << '\n';
}

}  // namespace qsr
