#pragma once

#include <cstdint>
#include <vector>

#include "qsr/relations.hpp"

namespace qsr {

using NodeId = int;

struct Edge {
  NodeId head = 0;
  NodeId tail = 0;
  RelationSet label;
};

/// A qualitative constraint network: a directed labelled graph whose edges
/// carry relation sets. Immutable after construction.
class Qcn {
public:
  Qcn(CalculusId calc, int num_nodes, std::vector<Edge> edges);

  CalculusId calculus() const { return calc_; }
  int num_nodes() const { return num_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

private:
  CalculusId calc_;
  int num_nodes_;
  std::vector<Edge> edges_;
};

/// Fixpoint of labels(i,j) <- labels(i,j) n compose(labels(i,k), labels(k,j)).
struct ClosureResult {
  bool consistent = false;
  int num_nodes = 0;
  std::vector<RelationSet> labels;  // row-major num_nodes x num_nodes

  const RelationSet& at(NodeId i, NodeId j) const {
    return labels[static_cast<size_t>(i) * num_nodes + j];
  }
};

ClosureResult algebraic_closure(const Qcn& network);

/// Reference implementation: naive full sweeps until no change. Used to
/// cross-check the work-queue version.
ClosureResult algebraic_closure_naive(const Qcn& network);

/// One step of a simple path: the index of the traversed edge and whether
/// it was taken head-to-tail (forward) or tail-to-head.
struct PathStep {
  int edge_index = 0;
  bool forward = true;
};

struct EdgePath {
  std::vector<NodeId> nodes;    // source first, tail last
  std::vector<PathStep> steps;  // nodes.size() - 1 entries

  /// Edge labels in traversal order, converses applied on backward steps.
  std::vector<RelationSet> oriented_labels(const Qcn& network) const;
};

/// All simple paths from source to tail, edges traversable in either
/// direction, in lexicographic node order. Throws ContractViolation past
/// `max_paths` results.
std::vector<EdgePath> enumerate_simple_paths(const Qcn& network, NodeId source,
                                             NodeId tail,
                                             size_t max_paths = 10000);

/// Left fold of compose over the oriented labels of the path.
RelationSet path_compose(const EdgePath& path, const Qcn& network);

/// Intersection of path_compose over all simple source-tail paths;
/// universal when no path exists.
RelationSet infer_query_by_paths(const Qcn& network, NodeId source,
                                 NodeId tail);

/// The unique atom at the query edge; throws NonUniqueAnswer/Inconsistent
/// when the instance is malformed.
Atom classify(const Qcn& network, NodeId source, NodeId tail);

}  // namespace qsr
