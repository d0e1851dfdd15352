#include "qsr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace qsr {

std::string_view to_string(BucketKey key) {
  switch (key) {
    case BucketKey::intersections: return "intersections";
    case BucketKey::b: return "b";
    case BucketKey::k: return "k";
    case BucketKey::trivial_presence: return "trivial_presence";
    case BucketKey::union_cardinality: return "union_cardinality";
  }
  return "unknown";
}

std::optional<BucketKey> bucket_key_from_string(std::string_view s) {
  if (s == "intersections") return BucketKey::intersections;
  if (s == "b") return BucketKey::b;
  if (s == "k") return BucketKey::k;
  if (s == "trivial_presence" || s == "trivial") return BucketKey::trivial_presence;
  if (s == "union_cardinality" || s == "union") return BucketKey::union_cardinality;
  return std::nullopt;
}

namespace {

// All node chains mentioned in the text: sequences of integers joined by
// arrows or hyphens, plus runs assembled from consecutively recited edges.
std::vector<std::vector<NodeId>> mentioned_chains(const std::string& text) {
  static const std::regex chain_re(
      "\\d+(?:\\s*(?:->|→|-)\\s*\\d+)+");
  static const std::regex node_re("\\d+");

  std::vector<std::vector<NodeId>> chains;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), chain_re);
       it != std::sregex_iterator(); ++it) {
    const std::string match = it->str();
    std::vector<NodeId> chain;
    for (auto nt = std::sregex_iterator(match.begin(), match.end(), node_re);
         nt != std::sregex_iterator(); ++nt)
      chain.push_back(std::stoi(nt->str()));
    if (chain.size() >= 2) chains.push_back(std::move(chain));
  }

  // Stitch consecutive mentions into runs: "0-2: 64" then "2-4: 16"
  // becomes 0,2,4.
  std::vector<std::vector<NodeId>> runs;
  for (const auto& chain : chains) {
    if (!runs.empty() && runs.back().back() == chain.front())
      runs.back().insert(runs.back().end(), chain.begin() + 1, chain.end());
    else
      runs.push_back(chain);
  }
  chains.insert(chains.end(), runs.begin(), runs.end());
  return chains;
}

bool contains_subsequence(const std::vector<NodeId>& haystack,
                          const std::vector<NodeId>& needle) {
  if (needle.size() > haystack.size()) return false;
  for (size_t i = 0; i + needle.size() <= haystack.size(); ++i)
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i))
      return true;
  return false;
}

double median_of(const std::vector<int>& sorted, size_t begin, size_t end) {
  const size_t n = end - begin;
  if (n == 0) return 0.0;
  if (n % 2 == 1) return sorted[begin + n / 2];
  return (sorted[begin + n / 2 - 1] + sorted[begin + n / 2]) / 2.0;
}

}  // namespace

std::vector<std::vector<NodeId>> extract_recovered_paths(
    const std::string& cot, const ProblemInstance& instance) {
  const auto chains = mentioned_chains(cot);
  std::vector<std::vector<NodeId>> recovered;
  for (const EdgePath& path :
       enumerate_simple_paths(instance.network, instance.source, instance.tail)) {
    const bool found = std::any_of(
        chains.begin(), chains.end(), [&](const std::vector<NodeId>& chain) {
          return contains_subsequence(chain, path.nodes);
        });
    if (found) recovered.push_back(path.nodes);
  }
  return recovered;
}

CotAudit audit_cot(const EvalRecord& record, const ProblemInstance& instance) {
  CotAudit audit;
  audit.instance_id = instance.id;
  audit.output_tokens = record.output_tokens;

  const std::string text = record.cot_text.value_or(record.raw_response);
  const auto recovered = extract_recovered_paths(text, instance);
  audit.paths_in_instance = instance.metrics.num_st_paths;
  audit.paths_recovered = static_cast<int>(recovered.size());
  audit.recovery_fraction =
      audit.paths_in_instance
          ? static_cast<double>(audit.paths_recovered) / audit.paths_in_instance
          : 0.0;

  if (instance.metrics.has_trivial_path) {
    const auto prediction =
        trivial_path_prediction(instance.network, instance.source, instance.tail);
    bool trivial_mentioned = false;
    const Calculus& calc = Calculus::get(instance.network.calculus());
    const Atom identity = calc.identity();
    for (const EdgePath& path : enumerate_simple_paths(
             instance.network, instance.source, instance.tail)) {
      int non_identity = 0;
      for (const RelationSet& label : path.oriented_labels(instance.network))
        if (!(label == RelationSet::single(identity))) ++non_identity;
      if (non_identity > 1) continue;
      if (std::any_of(recovered.begin(), recovered.end(),
                      [&](const auto& nodes) { return nodes == path.nodes; })) {
        trivial_mentioned = true;
        break;
      }
    }
    audit.trivial_path_used = prediction && trivial_mentioned &&
                              record.parsed && *record.parsed == *prediction;
  }
  return audit;
}

InstanceIndex index_instances(const std::vector<ProblemInstance>& instances) {
  InstanceIndex index;
  for (const ProblemInstance& instance : instances)
    index[instance.id] = &instance;
  return index;
}

BucketReport bucket_accuracy(const std::vector<EvalRecord>& records,
                             const InstanceIndex& instances, BucketKey key,
                             double union_bin_width) {
  std::map<double, std::pair<int, int>> groups;  // key -> (correct, total)
  for (const EvalRecord& record : records) {
    const auto it = instances.find(record.instance_id);
    if (it == instances.end())
      throw JoinError("record references unknown instance id: " +
                      record.instance_id);
    const ProblemInstance& instance = *it->second;
    double value = 0.0;
    switch (key) {
      case BucketKey::intersections: value = instance.metrics.intersections; break;
      case BucketKey::b: value = instance.b; break;
      case BucketKey::k: value = instance.k; break;
      case BucketKey::trivial_presence:
        value = instance.metrics.has_trivial_path ? 1.0 : 0.0;
        break;
      case BucketKey::union_cardinality:
        value = std::floor(instance.metrics.mean_union_cardinality /
                           union_bin_width) *
                union_bin_width;
        break;
    }
    auto& [correct, total] = groups[value];
    ++total;
    if (record.correct.value_or(false)) ++correct;
  }

  BucketReport report;
  report.key = key;
  for (const auto& [value, counts] : groups) {
    const auto& [correct, total] = counts;
    Bucket bucket;
    bucket.key = value;
    bucket.count = total;
    bucket.accuracy = static_cast<double>(correct) / total;
    bucket.stderr_value =
        std::sqrt(bucket.accuracy * (1.0 - bucket.accuracy) / total);
    report.buckets.push_back(bucket);
  }
  return report;
}

std::map<std::pair<int, int>, TokenStats> token_stats(
    const std::vector<EvalRecord>& records, const InstanceIndex& instances) {
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (const EvalRecord& record : records) {
    if (!record.output_tokens) continue;
    const auto it = instances.find(record.instance_id);
    if (it == instances.end())
      throw JoinError("record references unknown instance id: " +
                      record.instance_id);
    groups[{it->second->k, it->second->b}].push_back(*record.output_tokens);
  }

  std::map<std::pair<int, int>, TokenStats> out;
  for (auto& [kb, tokens] : groups) {
    std::sort(tokens.begin(), tokens.end());
    TokenStats stats;
    stats.count = static_cast<int>(tokens.size());
    stats.median = median_of(tokens, 0, tokens.size());
    if (tokens.size() == 1) {
      stats.q1 = stats.q3 = stats.median;
    } else {
      // Tukey halves, excluding the median element for odd counts.
      const size_t half = tokens.size() / 2;
      stats.q1 = median_of(tokens, 0, half);
      stats.q3 = median_of(tokens, tokens.size() - half, tokens.size());
    }
    out[kb] = stats;
  }
  return out;
}

TrendFit fit_linear_trend(const BucketReport& report) {
  double w_sum = 0, x_sum = 0, y_sum = 0;
  int populated = 0;
  for (const Bucket& bucket : report.buckets) {
    if (bucket.count == 0) continue;
    ++populated;
    w_sum += bucket.count;
    x_sum += bucket.count * bucket.key;
    y_sum += bucket.count * bucket.accuracy;
  }
  if (populated < 2)
    throw InsufficientBuckets("linear trend needs >= 2 populated buckets");

  const double x_mean = x_sum / w_sum, y_mean = y_sum / w_sum;
  double sxx = 0, syy = 0, sxy = 0;
  for (const Bucket& bucket : report.buckets) {
    if (bucket.count == 0) continue;
    const double dx = bucket.key - x_mean, dy = bucket.accuracy - y_mean;
    sxx += bucket.count * dx * dx;
    syy += bucket.count * dy * dy;
    sxy += bucket.count * dx * dy;
  }
  TrendFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.r_value = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

std::string bucket_report_svg(const BucketReport& report,
                              const std::string& title) {
  constexpr int width = 640, height = 400, margin = 60;
  const int plot_w = width - 2 * margin, plot_h = height - 2 * margin;

  double key_min = 0, key_max = 1;
  if (!report.buckets.empty()) {
    key_min = report.buckets.front().key;
    key_max = report.buckets.back().key;
    if (key_max == key_min) key_max = key_min + 1;
  }
  auto sx = [&](double key) {
    return margin + (key - key_min) / (key_max - key_min) * plot_w;
  };
  auto sy = [&](double accuracy) { return height - margin - accuracy * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
         "font-size='16'>" << title << "</text>\n"
      << "<line x1='" << margin << "' y1='" << height - margin << "' x2='"
      << width - margin << "' y2='" << height - margin
      << "' stroke='black'/>\n"
      << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  std::ostringstream polyline;
  for (const Bucket& bucket : report.buckets) {
    const double x = sx(bucket.key), y = sy(bucket.accuracy);
    polyline << x << ',' << y << ' ';
    svg << "<line x1='" << x << "' y1='" << sy(bucket.accuracy - bucket.stderr_value)
        << "' x2='" << x << "' y2='"
        << sy(bucket.accuracy + bucket.stderr_value)
        << "' stroke='steelblue'/>\n"
        << "<circle cx='" << x << "' cy='" << y
        << "' r='3' fill='steelblue'/>\n"
        << "<text x='" << x << "' y='" << height - margin + 18
        << "' text-anchor='middle' font-size='11'>" << bucket.key
        << "</text>\n";
  }
  svg << "<polyline fill='none' stroke='steelblue' points='" << polyline.str()
      << "'/>\n"
      << "<text x='" << width / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-size='12'>" << to_string(report.key)
      << "</text>\n</svg>\n";
  return svg.str();
}

}  // namespace qsr
