#include "qsr/qcn.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace qsr {

Qcn::Qcn(CalculusId calc, int num_nodes, std::vector<Edge> edges)
    : calc_(calc), num_nodes_(num_nodes), edges_(std::move(edges)) {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges_) {
    if (e.head < 0 || e.head >= num_nodes_ || e.tail < 0 || e.tail >= num_nodes_)
      throw ContractViolation("edge endpoint out of range");
    if (e.head == e.tail) throw ContractViolation("self-loop in network");
    if (e.label.calculus() != calc_)
      throw ContractViolation("edge label from a different calculus");
    if (e.label.is_empty())
      throw ContractViolation("empty edge label at construction");
    if (!seen.insert({e.head, e.tail}).second)
      throw ContractViolation("duplicate edge for an ordered pair");
  }
}

namespace {

struct Matrix {
  int n;
  std::vector<RelationSet> cells;

  Matrix(const Qcn& net) : n(net.num_nodes()) {
    const Calculus& calc = Calculus::get(net.calculus());
    cells.assign(static_cast<size_t>(n) * n, calc.universal());
    for (int i = 0; i < n; ++i)
      at(i, i) = RelationSet::single(calc.identity());
    for (const Edge& e : net.edges()) {
      at(e.head, e.tail) = at(e.head, e.tail) & e.label;
      at(e.tail, e.head) = at(e.tail, e.head) & calc.converse(e.label);
    }
  }

  RelationSet& at(int i, int j) { return cells[static_cast<size_t>(i) * n + j]; }
  const RelationSet& at(int i, int j) const {
    return cells[static_cast<size_t>(i) * n + j];
  }
};

ClosureResult to_result(const Matrix& m) {
  ClosureResult r;
  r.num_nodes = m.n;
  r.labels = m.cells;
  r.consistent = std::none_of(m.cells.begin(), m.cells.end(),
                              [](const RelationSet& s) { return s.is_empty(); });
  return r;
}

}  // namespace

ClosureResult algebraic_closure(const Qcn& network) {
  const Calculus& calc = Calculus::get(network.calculus());
  Matrix m(network);
  const int n = m.n;

  // Work queue over ordered pairs whose label shrank. Intersection is
  // order-independent, so the fixpoint is deterministic.
  std::deque<std::pair<int, int>> queue;
  std::vector<char> queued(static_cast<size_t>(n) * n, 0);
  auto push = [&](int i, int j) {
    if (i == j) return;
    if (!queued[static_cast<size_t>(i) * n + j]) {
      queued[static_cast<size_t>(i) * n + j] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) push(i, j);

  // Returns true when the refinement emptied the cell.
  auto refine = [&](int i, int j, const RelationSet& by) -> bool {
    const RelationSet next = m.at(i, j) & by;
    if (next == m.at(i, j)) return false;
    m.at(i, j) = next;
    m.at(j, i) = calc.converse(next);
    push(i, j);
    push(j, i);
    return next.is_empty();
  };

  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    queued[static_cast<size_t>(i) * n + j] = 0;
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      // (i,j) feeds (i,k) via j and (k,j) via i.
      if (refine(i, k, calc.compose(m.at(i, j), m.at(j, k)))) return to_result(m);
      if (refine(k, j, calc.compose(m.at(k, i), m.at(i, j)))) return to_result(m);
    }
  }
  return to_result(m);
}

ClosureResult algebraic_closure_naive(const Qcn& network) {
  const Calculus& calc = Calculus::get(network.calculus());
  Matrix m(network);
  const int n = m.n;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const RelationSet next =
              m.at(i, j) & calc.compose(m.at(i, k), m.at(k, j));
          if (!(next == m.at(i, j))) {
            m.at(i, j) = next;
            m.at(j, i) = calc.converse(next);
            changed = true;
          }
        }
      }
    }
  }
  return to_result(m);
}

std::vector<RelationSet> EdgePath::oriented_labels(const Qcn& network) const {
  const Calculus& calc = Calculus::get(network.calculus());
  std::vector<RelationSet> out;
  out.reserve(steps.size());
  for (const PathStep& s : steps) {
    const RelationSet& label = network.edges()[s.edge_index].label;
    out.push_back(s.forward ? label : calc.converse(label));
  }
  return out;
}

std::vector<EdgePath> enumerate_simple_paths(const Qcn& network, NodeId source,
                                             NodeId tail, size_t max_paths) {
  if (source == tail) throw ContractViolation("source equals tail");

  // Neighbors sorted by node id so the DFS yields lexicographic order.
  struct Hop {
    NodeId to;
    int edge_index;
    bool forward;
  };
  std::vector<std::vector<Hop>> adjacent(network.num_nodes());
  for (int i = 0; i < static_cast<int>(network.edges().size()); ++i) {
    const Edge& e = network.edges()[i];
    adjacent[e.head].push_back({e.tail, i, true});
    adjacent[e.tail].push_back({e.head, i, false});
  }
  for (auto& hops : adjacent)
    std::sort(hops.begin(), hops.end(), [](const Hop& a, const Hop& b) {
      return std::tie(a.to, a.edge_index) < std::tie(b.to, b.edge_index);
    });

  std::vector<EdgePath> paths;
  std::vector<char> visited(network.num_nodes(), 0);
  EdgePath current;
  current.nodes.push_back(source);
  visited[source] = 1;

  auto dfs = [&](auto&& self, NodeId at) -> void {
    if (at == tail) {
      if (paths.size() >= max_paths)
        throw ContractViolation("simple path enumeration exceeded cap");
      paths.push_back(current);
      return;
    }
    for (const Hop& hop : adjacent[at]) {
      if (visited[hop.to]) continue;
      visited[hop.to] = 1;
      current.nodes.push_back(hop.to);
      current.steps.push_back({hop.edge_index, hop.forward});
      self(self, hop.to);
      current.steps.pop_back();
      current.nodes.pop_back();
      visited[hop.to] = 0;
    }
  };
  dfs(dfs, source);
  return paths;
}

RelationSet path_compose(const EdgePath& path, const Qcn& network) {
  if (path.steps.empty())
    throw ContractViolation("path_compose on an empty path");
  const Calculus& calc = Calculus::get(network.calculus());
  const std::vector<RelationSet> labels = path.oriented_labels(network);
  RelationSet acc = labels.front();
  for (size_t i = 1; i < labels.size(); ++i) acc = calc.compose(acc, labels[i]);
  return acc;
}

RelationSet infer_query_by_paths(const Qcn& network, NodeId source,
                                 NodeId tail) {
  const Calculus& calc = Calculus::get(network.calculus());
  RelationSet acc = calc.universal();
  for (const EdgePath& path : enumerate_simple_paths(network, source, tail))
    acc = acc & path_compose(path, network);
  return acc;
}

Atom classify(const Qcn& network, NodeId source, NodeId tail) {
  const RelationSet result = infer_query_by_paths(network, source, tail);
  if (result.is_empty()) throw Inconsistent("query relation set is empty");
  if (!result.is_singleton())
    throw NonUniqueAnswer("query relation set has " +
                          std::to_string(result.count()) + " candidates");
  return result.the_atom();
}

}  // namespace qsr
