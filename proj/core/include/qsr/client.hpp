#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qsr/eval.hpp"
#include "qsr/prompt.hpp"

namespace qsr {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
struct EndpointConfig {
  std::string base_url;         // e.g. "http://127.0.0.1:8080/v1"
  std::string model_name;
  std::string api_key_env_var;  // empty: no Authorization header
  int max_output_tokens = 256;
  double temperature = 0.0;
  int max_parallel = 4;
  int max_retries = 3;
  int retry_backoff_ms = 100;
  size_t max_requests = 0;  // 0 = no limit; smoke-run / test knob
};

/// Issues one chat request per instance with bounded parallelism, parses
/// the answers, and appends every finished record to `records_path` as it
/// completes. With `resume`, instances already present in the records file
/// are skipped. Endpoint failures after retries become empty_response
/// records; the run never aborts on a single instance.
std::vector<EvalRecord> run_eval(const std::vector<ProblemInstance>& dataset,
                                 const PromptSpec& spec,
                                 const EndpointConfig& endpoint,
                                 const std::filesystem::path& records_path,
                                 bool resume,
                                 const std::vector<ProblemInstance>& shots);

}  // namespace qsr
