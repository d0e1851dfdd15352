#include "qsr/generator.hpp"

#include <sstream>

namespace qsr {

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw ContractViolation("Rng::below(0)");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

uint64_t Rng::child_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  Rng mixer(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL) ^
            (c * 0x165667b19e3779f9ULL));
  return mixer.next();
}

namespace {

struct Topology {
  int num_nodes;
  NodeId tail;
  std::vector<std::pair<NodeId, NodeId>> edge_ends;  // path-major order
};

// Source 0, then the intermediate nodes of each path in turn, tail last.
// Matches the layout of the benchmark's example graphs.
Topology make_topology(int k, int b) {
  Topology topo;
  topo.tail = b * (k - 1) + 1;
  topo.num_nodes = topo.tail + 1;
  for (int p = 0; p < b; ++p) {
    NodeId prev = 0;
    for (int step = 1; step < k; ++step) {
      const NodeId node = p * (k - 1) + step;
      topo.edge_ends.emplace_back(prev, node);
      prev = node;
    }
    topo.edge_ends.emplace_back(prev, topo.tail);
  }
  return topo;
}

}  // namespace

ProblemInstance generate_instance(const Calculus& calculus, int k, int b,
                                  std::optional<Atom> target_gold, Rng& rng,
                                  int attempt_budget) {
  if (k < 2 || b < 1) throw ContractViolation("generate_instance requires k>=2, b>=1");
  const Topology topo = make_topology(k, b);

  for (int attempt = 0; attempt < attempt_budget; ++attempt) {
    std::vector<Edge> edges;
    edges.reserve(topo.edge_ends.size());
    for (const auto& [h, t] : topo.edge_ends) {
      const Atom label =
          calculus.atom(static_cast<int>(rng.below(calculus.arity())));
      edges.push_back({h, t, RelationSet::single(label)});
    }
    Qcn network(calculus.id(), topo.num_nodes, std::move(edges));
    const ClosureResult closure = algebraic_closure(network);
    if (!closure.consistent) continue;
    const RelationSet query = closure.at(0, topo.tail);
    if (!query.is_singleton()) continue;
    const Atom gold = query.the_atom();
    if (target_gold && !(gold == *target_gold)) continue;

    ProblemInstance instance{std::move(network), 0, topo.tail, gold, k, b, {}, ""};
    instance.metrics = compute_metrics(instance.network, 0, topo.tail);
    return instance;
  }
  std::ostringstream what;
  what << "attempt budget exhausted for (" << to_string(calculus.id()) << ", k="
       << k << ", b=" << b;
  if (target_gold) what << ", gold=" << target_gold->name();
  what << ") after " << attempt_budget << " attempts";
  throw BudgetExhausted(what.str(), attempt_budget);
}

std::vector<ProblemInstance> generate_dataset(const DatasetConfig& config) {
  if (config.per_config_count < 1)
    throw ContractViolation("per_config_count must be >= 1");
  const Calculus& calculus = Calculus::get(config.calculus);
  std::vector<ProblemInstance> out;
  for (const int k : config.k_values) {
    for (const int b : config.b_values) {
      for (int i = 0; i < config.per_config_count; ++i) {
        Rng rng(Rng::child_seed(config.seed, static_cast<uint64_t>(k),
                                static_cast<uint64_t>(b),
                                static_cast<uint64_t>(i)));
        std::optional<Atom> target;
        if (config.balance_labels)
          target = calculus.atom(i % calculus.arity());
        ProblemInstance instance = generate_instance(calculus, k, b, target,
                                                     rng, config.attempt_budget);
        std::ostringstream id;
        id << to_string(config.calculus) << "-k" << k << "-b" << b << "-" << i;
        instance.id = id.str();
        out.push_back(std::move(instance));
      }
    }
  }
  return out;
}

DifficultyMetrics compute_metrics(const Qcn& network, NodeId source,
                                  NodeId tail) {
  DifficultyMetrics m;
  std::vector<int> indegree(network.num_nodes(), 0);
  for (const Edge& e : network.edges()) ++indegree[e.tail];
  for (const int d : indegree) m.intersections += std::max(0, d - 1);

  const Calculus& calc = Calculus::get(network.calculus());
  const Atom identity = calc.identity();
  const auto paths = enumerate_simple_paths(network, source, tail);
  m.num_st_paths = static_cast<int>(paths.size());
  double total_cardinality = 0.0;
  for (const EdgePath& path : paths) {
    int non_identity = 0;
    for (const RelationSet& label : path.oriented_labels(network))
      if (!(label == RelationSet::single(identity))) ++non_identity;
    if (non_identity <= 1) m.has_trivial_path = true;
    total_cardinality += path_compose(path, network).count();
  }
  if (!paths.empty()) m.mean_union_cardinality = total_cardinality / paths.size();
  return m;
}

std::optional<Atom> trivial_path_prediction(const Qcn& network, NodeId source,
                                            NodeId tail) {
  const Calculus& calc = Calculus::get(network.calculus());
  const Atom identity = calc.identity();
  for (const EdgePath& path : enumerate_simple_paths(network, source, tail)) {
    std::optional<Atom> non_identity;
    bool trivial = true;
    for (const RelationSet& label : path.oriented_labels(network)) {
      if (label == RelationSet::single(identity)) continue;
      if (non_identity || !label.is_singleton()) {
        trivial = false;
        break;
      }
      non_identity = label.the_atom();
    }
    if (trivial) return non_identity ? *non_identity : identity;
  }
  return std::nullopt;
}

}  // namespace qsr
