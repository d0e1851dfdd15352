#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsr/eval.hpp"
#include "qsr/generator.hpp"

namespace qsr {

struct CotAudit {
  std::string instance_id;
  int paths_in_instance = 0;
  int paths_recovered = 0;
  double recovery_fraction = 0.0;
  std::optional<bool> trivial_path_used;
  std::optional<int> output_tokens;
};

enum class BucketKey : uint8_t {
  intersections,
  b,
  k,
  trivial_presence,
  union_cardinality
};

std::string_view to_string(BucketKey key);
std::optional<BucketKey> bucket_key_from_string(std::string_view s);

struct Bucket {
  double key = 0.0;
  double accuracy = 0.0;
  int count = 0;
  double stderr_value = 0.0;  // sqrt(p(1-p)/n)
};

struct BucketReport {
  BucketKey key = BucketKey::intersections;
  std::vector<Bucket> buckets;  // ascending key order
};

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_value = 0.0;
};

struct TokenStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  int count = 0;
};

/// Ground-truth s-t paths whose full node sequence the CoT mentions,
/// either as an arrow/hyphen chain ("0 -> 1 -> 4") or as a consecutive
/// run of recited edges ("0-2: 64" then "2-4: 16"). Purely syntactic.
std::vector<std::vector<NodeId>> extract_recovered_paths(
    const std::string& cot, const ProblemInstance& instance);

CotAudit audit_cot(const EvalRecord& record, const ProblemInstance& instance);

using InstanceIndex = std::map<std::string, const ProblemInstance*>;

InstanceIndex index_instances(const std::vector<ProblemInstance>& instances);

/// Accuracy per difficulty bucket with binomial standard error. Unparsed
/// responses count as wrong. `union_bin_width` controls the binning of the
/// union-cardinality key.
BucketReport bucket_accuracy(const std::vector<EvalRecord>& records,
                             const InstanceIndex& instances, BucketKey key,
                             double union_bin_width = 1.0);

/// Median and interquartile bounds of output tokens per (k, b) group.
std::map<std::pair<int, int>, TokenStats> token_stats(
    const std::vector<EvalRecord>& records, const InstanceIndex& instances);

/// Count-weighted least squares of accuracy against the bucket key.
TrendFit fit_linear_trend(const BucketReport& report);

/// Minimal static chart (accuracy vs bucket key with error bars) as SVG.
std::string bucket_report_svg(const BucketReport& report,
                              const std::string& title);

}  // namespace qsr
