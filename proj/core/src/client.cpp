#include "qsr/client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qsr/serialize.hpp"

namespace qsr {

using nlohmann::json;

namespace {

struct EndpointParts {
  std::string origin;  // scheme://host:port
  std::string path;    // path prefix + /chat/completions
};

EndpointParts split_endpoint(const std::string& base_url) {
  const size_t scheme = base_url.find("://");
  if (scheme == std::string::npos)
    throw ContractViolation("endpoint URL must include a scheme: " + base_url);
  const size_t slash = base_url.find('/', scheme + 3);
  EndpointParts parts;
  if (slash == std::string::npos) {
    parts.origin = base_url;
    parts.path = "/chat/completions";
  } else {
    parts.origin = base_url.substr(0, slash);
    std::string prefix = base_url.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    parts.path = prefix + "/chat/completions";
  }
  return parts;
}

struct Reply {
  bool ok = false;
  std::string content;
  std::optional<int> completion_tokens;
  std::string error;
};

Reply post_chat(httplib::Client& client, const EndpointParts& parts,
                const EndpointConfig& endpoint, const std::string& api_key,
                const RenderedPrompt& prompt) {
  json messages = json::array();
  if (!prompt.system.empty())
    messages.push_back({{"role", "system"}, {"content", prompt.system}});
  messages.push_back({{"role", "user"}, {"content", prompt.user}});
  const json body{
      {"model", endpoint.model_name},
      {"messages", std::move(messages)},
      {"max_tokens", endpoint.max_output_tokens},
      {"temperature", endpoint.temperature},
  };

  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

  Reply reply;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(
          endpoint.retry_backoff_ms * (1 << (attempt - 1))));
    auto res = client.Post(parts.path, headers, body.dump(), "application/json");
    if (!res) {
      reply.error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      reply.error = "http status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      reply.error = "http status " + std::to_string(res->status);
      return reply;  // non-retryable
    }
    try {
      const json parsed = json::parse(res->body);
      reply.content =
          parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      if (parsed.contains("usage") &&
          parsed.at("usage").contains("completion_tokens"))
        reply.completion_tokens =
            parsed.at("usage").at("completion_tokens").get<int>();
      reply.ok = true;
      return reply;
    } catch (const std::exception& e) {
      reply.error = std::string("malformed response body: ") + e.what();
    }
  }
  return reply;
}

}  // namespace

std::vector<EvalRecord> run_eval(const std::vector<ProblemInstance>& dataset,
                                 const PromptSpec& spec,
                                 const EndpointConfig& endpoint,
                                 const std::filesystem::path& records_path,
                                 bool resume,
                                 const std::vector<ProblemInstance>& shots) {
  const Calculus& calculus = Calculus::get(spec.calculus);
  const EndpointParts parts = split_endpoint(endpoint.base_url);
  std::string api_key;
  if (!endpoint.api_key_env_var.empty()) {
    if (const char* value = std::getenv(endpoint.api_key_env_var.c_str()))
      api_key = value;
  }

  std::vector<EvalRecord> results;
  std::set<std::string> done;
  if (resume && std::filesystem::exists(records_path)) {
    results = read_records(records_path, calculus);
    for (const EvalRecord& r : results) done.insert(r.instance_id);
  }

  std::vector<const ProblemInstance*> pending;
  for (const ProblemInstance& instance : dataset)
    if (!done.contains(instance.id)) pending.push_back(&instance);
  if (endpoint.max_requests > 0 && pending.size() > endpoint.max_requests)
    pending.resize(endpoint.max_requests);

  std::ofstream sink(records_path, std::ios::app);
  if (!sink)
    throw ContractViolation("cannot open records file: " + records_path.string());
  std::mutex sink_mutex;

  std::atomic<size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(endpoint.max_parallel,
                                static_cast<int>(pending.size())));
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      httplib::Client client(parts.origin);
      client.set_read_timeout(600, 0);
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= pending.size()) break;
        const ProblemInstance& instance = *pending[i];
        const RenderedPrompt prompt = render_prompt(instance, spec, shots);

        EvalRecord record;
        record.instance_id = instance.id;
        record.prompt = prompt.user;

        const Reply reply =
            post_chat(client, parts, endpoint, api_key, prompt);
        if (reply.ok) {
          record.raw_response = reply.content;
          record.output_tokens = reply.completion_tokens;
          const ParsedResponse parsed = parse_response(reply.content, calculus);
          if (!parsed.cot_text.empty()) record.cot_text = parsed.cot_text;
          if (parsed.ok()) {
            record.parsed = parsed.atom;
            record.correct = *parsed.atom == instance.gold;
          } else {
            record.parse_error = std::string(to_string(*parsed.failure));
          }
        } else {
          record.parse_error =
              std::string(to_string(ParseFailure::empty_response)) + " (" +
              reply.error + ")";
        }

        std::lock_guard<std::mutex> lock(sink_mutex);
        sink << record_to_json(record).dump() << '\n';
        sink.flush();
        results.push_back(std::move(record));
      }
    });
  }
  for (std::thread& t : threads) t.join();
  return results;
}

}  // namespace qsr
