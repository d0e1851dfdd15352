#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsr/qcn.hpp"

namespace qsr {

/// splitmix64-based generator; output is a pure function of the seed on
/// every platform, unlike the standard distributions.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) via rejection; bound > 0.
  uint64_t below(uint64_t bound);

  /// Derive an independent child seed from this seed and a tag.
  static uint64_t child_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

private:
  uint64_t state_;
};

struct DifficultyMetrics {
  int intersections = 0;
  bool has_trivial_path = false;
  int num_st_paths = 0;
  double mean_union_cardinality = 0.0;
};

/// One benchmark problem: b internally node-disjoint source-to-tail paths
/// of k edges each, with a unique atomic answer at the query edge.
struct ProblemInstance {
  Qcn network;
  NodeId source = 0;
  NodeId tail = 0;
  Atom gold;
  int k = 0;
  int b = 0;
  DifficultyMetrics metrics;
  std::string id;
};

struct DatasetConfig {
  CalculusId calculus = CalculusId::rcc8;
  std::vector<int> k_values;
  std::vector<int> b_values;
  int per_config_count = 0;
  uint64_t seed = 0;
  bool balance_labels = true;
  int attempt_budget = 10000;
};

ProblemInstance generate_instance(const Calculus& calculus, int k, int b,
                                  std::optional<Atom> target_gold, Rng& rng,
                                  int attempt_budget = 10000);

std::vector<ProblemInstance> generate_dataset(const DatasetConfig& config);

DifficultyMetrics compute_metrics(const Qcn& network, NodeId source,
                                  NodeId tail);

/// The forced answer read off a trivial s-t path, when one exists: the
/// identity if all labels are identity, otherwise the single non-identity
/// label.
std::optional<Atom> trivial_path_prediction(const Qcn& network, NodeId source,
                                            NodeId tail);

}  // namespace qsr
