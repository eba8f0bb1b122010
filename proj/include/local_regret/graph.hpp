#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace local_regret {

using Edge = std::pair<int, int>;

/// Undirected simple graph on vertices 0..n-1 (dense adjacency).
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int vertex_count() const { return n_; }
  bool has_edge(int u, int v) const;
  /// Adds {u, v}; throws on self-loops or out-of-range vertices. Idempotent.
  void add_edge(int u, int v);
  std::size_t edge_count() const { return edges_; }
  /// Edges as (u, v) with u < v, lexicographically ordered.
  std::vector<Edge> edges() const;

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Text format: "n m" then m lines "u v" (0-based). Duplicate edges and
/// self-loops are rejected.
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

/// Vertices split into n' clusters of equal size l. Within a cluster the
/// label of a vertex is its position in storage order (0-based).
struct ClusterPartition {
  int cluster_size = 0;                 // l
  std::vector<std::vector<int>> clusters;
  std::vector<int> cluster_of;          // per vertex, -1 if discarded
  std::vector<int> label_of;            // per vertex, -1 if discarded

  int cluster_count() const { return static_cast<int>(clusters.size()); }
  int vertex(int cluster, int label) const { return clusters.at(cluster).at(label); }

  /// Builds and validates: disjoint, equal sizes, vertices in range.
  static ClusterPartition from_clusters(int n_vertices, std::vector<std::vector<int>> clusters);
};

}  // namespace local_regret
