#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsr/eval.hpp"
#include "qsr/generator.hpp"

namespace qsr {

/// A network plus query edge, as read from disk. `answer` is present for
/// dataset rows and absent for bare solve inputs.
struct QueryNetwork {
  Qcn network;
  NodeId source = 0;
  NodeId tail = 0;
  std::optional<Atom> answer;
};

nlohmann::json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const nlohmann::json& j);
QueryNetwork query_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const EvalRecord& record);
EvalRecord record_from_json(const nlohmann::json& j, const Calculus& calculus);

nlohmann::json metrics_to_json(const DifficultyMetrics& m);
nlohmann::json report_to_json(const ScoreReport& report);

std::vector<ProblemInstance> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path,
                   const std::vector<ProblemInstance>& instances);

std::vector<EvalRecord> read_records(const std::filesystem::path& path,
                                     const Calculus& calculus);

/// FNV-1a over the given bytes; used for dataset content hashes.
uint64_t fnv1a(std::string_view bytes);

/// Writes `<path>.manifest.json` recording the config, counts and the
/// content hash of the dataset file.
void write_manifest(const std::filesystem::path& dataset_path,
                    const DatasetConfig& config,
                    const std::vector<ProblemInstance>& instances);

}  // namespace qsr
