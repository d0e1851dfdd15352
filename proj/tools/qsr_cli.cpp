// Command-line frontend for the qualitative reasoning toolkit.
//
// Subcommands communicate only via files (JSON Lines), so every pipeline
// stage can be rerun or resumed independently.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsr/analysis.hpp"
#include "qsr/client.hpp"
#include "qsr/prompt.hpp"
#include "qsr/serialize.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitEndpoint = 3;

qsr::CalculusId parse_calculus(const std::string& s) {
  const auto id = qsr::calculus_from_string(s);
  if (!id) throw qsr::ContractViolation("unknown calculus: " + s);
  return *id;
}

qsr::KeyStyle parse_key_style(const std::string& s) {
  if (s == "int" || s == "integer" || s == "integer_tuples")
    return qsr::KeyStyle::integer_tuples;
  if (s == "name" || s == "name_tuples") return qsr::KeyStyle::name_tuples;
  throw qsr::ContractViolation("unknown key style: " + s);
}

qsr::PromptMode parse_mode(const std::string& s) {
  if (s == "zero_shot" || s == "zero-shot") return qsr::PromptMode::zero_shot;
  if (s == "few_shot" || s == "few-shot") return qsr::PromptMode::few_shot;
  if (s == "finetune" || s == "finetune_format")
    return qsr::PromptMode::finetune_format;
  throw qsr::ContractViolation("unknown prompt mode: " + s);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw qsr::ContractViolation("empty integer list: " + s);
  return out;
}

// Verifies the algebraic invariants of the shipped tables. Returns the
// violating description, or empty when everything holds.
std::string check_tables(const qsr::Calculus& calc) {
  using qsr::RelationSet;
  uint16_t all = 0;
  for (int i = 0; i < calc.arity(); ++i) {
    all = static_cast<uint16_t>(all | (1u << i));
    const qsr::Atom a = calc.atom(i);
    if (!(calc.converse(calc.converse(a)) == a))
      return "converse involution fails at " + std::string(a.name());
    if (!(calc.compose(calc.identity(), a) == RelationSet::single(a)) ||
        !(calc.compose(a, calc.identity()) == RelationSet::single(a)))
      return "identity law fails at " + std::string(a.name());
    for (int j = 0; j < calc.arity(); ++j) {
      const qsr::Atom b = calc.atom(j);
      if (!(calc.converse(calc.compose(a, b)) ==
            calc.compose(calc.converse(b), calc.converse(a))))
        return "converse symmetry fails at (" + std::string(a.name()) + ", " +
               std::string(b.name()) + ")";
    }
  }
  if (calc.universal().bits() != all) return "JEPD union mismatch";
  return "";
}

std::vector<qsr::QueryNetwork> read_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qsr::ContractViolation("cannot open input file: " + path);
  std::vector<qsr::QueryNetwork> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(qsr::query_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw qsr::ContractViolation(path + ":" + std::to_string(line_no) + ": " +
                                   e.what());
    }
  }
  return out;
}

std::vector<qsr::Atom> join_gold(const std::vector<qsr::EvalRecord>& records,
                                 const qsr::InstanceIndex& index) {
  std::vector<qsr::Atom> gold;
  gold.reserve(records.size());
  for (const auto& record : records) {
    const auto it = index.find(record.instance_id);
    if (it == index.end())
      throw qsr::JoinError("record references unknown instance id: " +
                           record.instance_id);
    gold.push_back(it->second->gold);
  }
  return gold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qualitative spatial-temporal reasoning toolkit"};
  app.require_subcommand(1);

  // --- tables ---------------------------------------------------------
  auto* tables = app.add_subcommand(
      "tables", "Dump a composition table in the prompt dictionary format");
  std::string tables_calculus = "rcc8", tables_style = "int";
  bool tables_check = false;
  tables->add_option("--calculus", tables_calculus, "rcc8 or ia");
  tables->add_option("--key-style", tables_style, "int or name");
  tables->add_flag("--check", tables_check, "verify table invariants");

  // --- solve ----------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Infer query relations for networks");
  std::string solve_in, solve_method = "paths";
  solve->add_option("--in", solve_in, "JSONL of networks with query edges")
      ->required();
  solve->add_option("--method", solve_method, "paths or closure");

  // --- gen ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a problem-instance dataset");
  std::string gen_calculus = "rcc8", gen_k = "2,3", gen_b = "1,2,3", gen_out;
  std::string gen_regime;
  int gen_n = 10;
  uint64_t gen_seed = 0;
  bool gen_no_balance = false;
  gen->add_option("--calculus", gen_calculus, "rcc8 or ia");
  gen->add_option("--k", gen_k, "comma-separated path lengths");
  gen->add_option("--b", gen_b, "comma-separated path counts");
  gen->add_option("--regime", gen_regime,
                  "preset: train (k=2,3), train-wide (k=2,3,4), test (k=2..10, "
                  "b=1..4); overrides --k/--b");
  gen->add_option("--n", gen_n, "instances per (k,b) configuration");
  gen->add_option("--seed", gen_seed, "dataset seed");
  gen->add_flag("--no-balance", gen_no_balance, "disable gold-label balancing");
  gen->add_option("--out", gen_out, "output JSONL path")->required();

  // --- prompt ---------------------------------------------------------
  auto* prompt = app.add_subcommand("prompt", "Render prompts for a dataset");
  std::string prompt_in, prompt_out, prompt_mode = "zero_shot",
              prompt_style = "int";
  int prompt_shots = 5;
  prompt->add_option("--in", prompt_in, "dataset JSONL")->required();
  prompt->add_option("--out", prompt_out, "output JSONL path")->required();
  prompt->add_option("--mode", prompt_mode, "zero_shot, few_shot or finetune");
  prompt->add_option("--shots", prompt_shots, "number of demonstrations");
  prompt->add_option("--key-style", prompt_style, "int or name");

  // --- eval -----------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Run a model over a dataset");
  std::string eval_in, eval_out, eval_endpoint, eval_model,
      eval_mode = "zero_shot", eval_style = "int", eval_key_env;
  int eval_parallel = 4, eval_max_tokens = 256, eval_shots = 5;
  double eval_temperature = 0.0;
  size_t eval_max_requests = 0;
  bool eval_resume = false;
  eval->add_option("--in", eval_in, "dataset JSONL")->required();
  eval->add_option("--out", eval_out, "records JSONL path")->required();
  eval->add_option("--endpoint", eval_endpoint,
                   "base URL, e.g. http://127.0.0.1:8080/v1")
      ->required();
  eval->add_option("--model", eval_model, "model name")->required();
  eval->add_option("--mode", eval_mode, "zero_shot, few_shot or finetune");
  eval->add_option("--key-style", eval_style, "int or name");
  eval->add_option("--shots", eval_shots, "few-shot demonstration count");
  eval->add_option("--parallel", eval_parallel, "max in-flight requests");
  eval->add_option("--max-tokens", eval_max_tokens, "max output tokens");
  eval->add_option("--temperature", eval_temperature, "sampling temperature");
  eval->add_option("--api-key-env", eval_key_env,
                   "environment variable holding the API key");
  eval->add_option("--max-requests", eval_max_requests,
                   "stop after this many new requests (0 = no limit)");
  eval->add_flag("--resume", eval_resume, "skip instances already recorded");

  // --- score ----------------------------------------------------------
  auto* score_cmd = app.add_subcommand("score", "Score an eval record file");
  std::string score_records, score_data, score_policy = "wrong",
              score_format = "text";
  score_cmd->add_option("--records", score_records, "records JSONL")->required();
  score_cmd->add_option("--data", score_data, "dataset JSONL")->required();
  score_cmd->add_option("--policy", score_policy, "wrong or exclude");
  score_cmd->add_option("--format", score_format, "text or json");

  // --- audit ----------------------------------------------------------
  auto* audit = app.add_subcommand("audit", "CoT and difficulty analyses");
  std::string audit_records, audit_data, audit_by = "intersections", audit_out,
              audit_csv, audit_svg;
  audit->add_option("--records", audit_records, "records JSONL")->required();
  audit->add_option("--data", audit_data, "dataset JSONL")->required();
  audit->add_option("--by", audit_by,
                    "bucket key: intersections, b, k, trivial, union");
  audit->add_option("--out", audit_out, "write the full report as JSON");
  audit->add_option("--csv", audit_csv, "write bucket accuracies as CSV");
  audit->add_option("--svg", audit_svg, "write an accuracy chart as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tables) {
      const qsr::Calculus& calc =
          qsr::Calculus::get(parse_calculus(tables_calculus));
      if (tables_check) {
        const std::string violation = check_tables(calc);
        if (!violation.empty()) {
          std::cerr << "table check failed: " << violation << '\n';
          return kExitValidation;
        }
        std::cout << "tables ok: " << qsr::to_string(calc.id()) << '\n';
        return kExitOk;
      }
      std::cout << calc.table_json(parse_key_style(tables_style)) << '\n';
      return kExitOk;
    }

    if (*solve) {
      for (const qsr::QueryNetwork& q : read_queries(solve_in)) {
        if (solve_method == "closure") {
          const qsr::ClosureResult closure = qsr::algebraic_closure(q.network);
          if (!closure.consistent) {
            std::cout << "inconsistent\n";
            continue;
          }
          const qsr::RelationSet label = closure.at(q.source, q.tail);
          std::cout << (label.is_singleton()
                            ? std::string(label.the_atom().name())
                            : "ambiguous")
                    << '\n';
        } else {
          std::cout << qsr::classify(q.network, q.source, q.tail).name() << '\n';
        }
      }
      return kExitOk;
    }

    if (*gen) {
      qsr::DatasetConfig config;
      config.calculus = parse_calculus(gen_calculus);
      config.k_values = parse_int_list(gen_k);
      config.b_values = parse_int_list(gen_b);
      if (gen_regime == "train") {
        config.k_values = {2, 3};
        config.b_values = {1, 2, 3};
      } else if (gen_regime == "train-wide") {
        config.k_values = {2, 3, 4};
        config.b_values = {1, 2, 3};
      } else if (gen_regime == "test") {
        config.k_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
        config.b_values = {1, 2, 3, 4};
      } else if (!gen_regime.empty()) {
        throw qsr::ContractViolation("unknown regime: " + gen_regime);
      }
      config.per_config_count = gen_n;
      config.seed = gen_seed;
      config.balance_labels = !gen_no_balance;
      const auto instances = qsr::generate_dataset(config);
      qsr::write_dataset(gen_out, instances);
      qsr::write_manifest(gen_out, config, instances);
      std::cout << "wrote " << instances.size() << " instances to " << gen_out
                << '\n';
      return kExitOk;
    }

    if (*prompt) {
      const auto instances = qsr::read_dataset(prompt_in);
      std::ofstream out(prompt_out);
      if (!out)
        throw qsr::ContractViolation("cannot write output file: " + prompt_out);
      for (const qsr::ProblemInstance& instance : instances) {
        qsr::PromptSpec spec;
        spec.calculus = instance.network.calculus();
        spec.mode = parse_mode(prompt_mode);
        spec.num_shots = prompt_shots;
        spec.key_style = parse_key_style(prompt_style);
        if (spec.mode == qsr::PromptMode::finetune_format) {
          const auto example = qsr::render_finetune(instance, spec, true);
          out << json{{"instruction", example.instruction},
                      {"input", example.input},
                      {"response", example.response}}
                     .dump()
              << '\n';
        } else {
          const auto rendered = qsr::render_prompt(
              instance, spec, qsr::canonical_shots(spec.calculus));
          out << json{{"id", instance.id},
                      {"system", rendered.system},
                      {"user", rendered.user}}
                     .dump()
              << '\n';
        }
      }
      return kExitOk;
    }

    if (*eval) {
      const auto instances = qsr::read_dataset(eval_in);
      if (instances.empty())
        throw qsr::ContractViolation("dataset is empty: " + eval_in);
      qsr::PromptSpec spec;
      spec.calculus = instances.front().network.calculus();
      spec.mode = parse_mode(eval_mode);
      spec.num_shots = eval_shots;
      spec.key_style = parse_key_style(eval_style);

      qsr::EndpointConfig endpoint;
      endpoint.base_url = eval_endpoint;
      endpoint.model_name = eval_model;
      endpoint.api_key_env_var = eval_key_env;
      endpoint.max_output_tokens = eval_max_tokens;
      endpoint.temperature = eval_temperature;
      endpoint.max_parallel = eval_parallel;
      endpoint.max_requests = eval_max_requests;

      const auto records =
          qsr::run_eval(instances, spec, endpoint, eval_out, eval_resume,
                        qsr::canonical_shots(spec.calculus));
      const bool all_failed =
          !records.empty() &&
          std::all_of(records.begin(), records.end(), [](const auto& r) {
            return r.parse_error &&
                   r.parse_error->find("transport") != std::string::npos;
          });
      std::cout << "recorded " << records.size() << " of " << instances.size()
                << " instances to " << eval_out << '\n';
      return all_failed ? kExitEndpoint : kExitOk;
    }

    if (*score_cmd) {
      const auto instances = qsr::read_dataset(score_data);
      const qsr::InstanceIndex index = qsr::index_instances(instances);
      const qsr::Calculus& calc =
          qsr::Calculus::get(instances.front().network.calculus());
      const auto records = qsr::read_records(score_records, calc);
      const auto gold = join_gold(records, index);
      const auto policy = score_policy == "exclude"
                              ? qsr::ScorePolicy::exclude_failures
                              : qsr::ScorePolicy::wrong_on_failure;
      const qsr::ScoreReport report = qsr::score(records, gold, policy);
      if (score_format == "json")
        std::cout << qsr::report_to_json(report).dump(2) << '\n';
      else
        std::cout << qsr::report_to_text(report);
      return kExitOk;
    }

    if (*audit) {
      const auto instances = qsr::read_dataset(audit_data);
      const qsr::InstanceIndex index = qsr::index_instances(instances);
      const qsr::Calculus& calc =
          qsr::Calculus::get(instances.front().network.calculus());
      const auto records = qsr::read_records(audit_records, calc);

      const auto key = qsr::bucket_key_from_string(audit_by);
      if (!key) throw qsr::ContractViolation("unknown bucket key: " + audit_by);
      const qsr::BucketReport buckets =
          qsr::bucket_accuracy(records, index, *key);
      const auto tokens = qsr::token_stats(records, index);

      json audits = json::array();
      for (const auto& record : records) {
        const auto it = index.find(record.instance_id);
        const qsr::CotAudit a = qsr::audit_cot(record, *it->second);
        json ja{{"instance_id", a.instance_id},
                {"paths_in_instance", a.paths_in_instance},
                {"paths_recovered", a.paths_recovered},
                {"recovery_fraction", a.recovery_fraction}};
        if (a.trivial_path_used) ja["trivial_path_used"] = *a.trivial_path_used;
        if (a.output_tokens) ja["output_tokens"] = *a.output_tokens;
        audits.push_back(std::move(ja));
      }

      json jbuckets = json::array();
      for (const auto& bucket : buckets.buckets)
        jbuckets.push_back({{"key", bucket.key},
                            {"accuracy", bucket.accuracy},
                            {"count", bucket.count},
                            {"stderr", bucket.stderr_value}});
      json jtokens = json::array();
      for (const auto& [kb, stats] : tokens)
        jtokens.push_back({{"k", kb.first},
                           {"b", kb.second},
                           {"median", stats.median},
                           {"q1", stats.q1},
                           {"q3", stats.q3},
                           {"count", stats.count}});
      const json report{{"bucket_key", std::string(qsr::to_string(*key))},
                        {"buckets", std::move(jbuckets)},
                        {"token_stats", std::move(jtokens)},
                        {"cot_audits", std::move(audits)}};

      if (!audit_out.empty()) {
        std::ofstream out(audit_out);
        out << report.dump(2) << '\n';
      } else {
        std::cout << report.dump(2) << '\n';
      }
      if (!audit_csv.empty()) {
        std::ofstream csv(audit_csv);
        csv << "key,accuracy,count,stderr\n";
        for (const auto& bucket : buckets.buckets)
          csv << bucket.key << ',' << bucket.accuracy << ',' << bucket.count
              << ',' << bucket.stderr_value << '\n';
      }
      if (!audit_svg.empty()) {
        std::ofstream svg(audit_svg);
        svg << qsr::bucket_report_svg(buckets,
                                      "accuracy vs " + std::string(qsr::to_string(*key)));
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
