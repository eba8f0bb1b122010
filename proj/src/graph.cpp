#include "local_regret/graph.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace local_regret {

Graph::Graph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw std::out_of_range("Graph: vertex " + std::to_string(v) + " outside [0, " +
                            std::to_string(n_) + ")");
  }
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  return adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
}

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(u));
  auto& e = adj_[static_cast<std::size_t>(u) * n_ + v];
  if (e) return;
  e = 1;
  adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
  ++edges_;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (adj_[static_cast<std::size_t>(u) * n_ + v]) out.emplace_back(u, v);
  return out;
}

Graph read_graph(std::istream& in) {
  long n = 0, m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) throw std::runtime_error("read_graph: bad 'n m' header");
  Graph g(static_cast<int>(n));
  for (long e = 0; e < m; ++e) {
    int u = 0, v = 0;
    if (!(in >> u >> v)) throw std::runtime_error("read_graph: expected " + std::to_string(m) + " edges");
    if (u == v) throw std::runtime_error("read_graph: self-loop at line " + std::to_string(e + 2));
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw std::runtime_error("read_graph: vertex out of range at line " + std::to_string(e + 2));
    }
    if (g.has_edge(u, v)) throw std::runtime_error("read_graph: duplicate edge at line " + std::to_string(e + 2));
    g.add_edge(u, v);
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

ClusterPartition ClusterPartition::from_clusters(int n_vertices, std::vector<std::vector<int>> clusters) {
  ClusterPartition p;
  if (clusters.empty()) throw std::invalid_argument("ClusterPartition: no clusters");
  p.cluster_size = static_cast<int>(clusters.front().size());
  if (p.cluster_size < 1) throw std::invalid_argument("ClusterPartition: empty cluster");
  p.cluster_of.assign(n_vertices, -1);
  p.label_of.assign(n_vertices, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (static_cast<int>(clusters[c].size()) != p.cluster_size) {
      throw std::invalid_argument("ClusterPartition: clusters must all have size " +
                                  std::to_string(p.cluster_size));
    }
    for (std::size_t pos = 0; pos < clusters[c].size(); ++pos) {
      int v = clusters[c][pos];
      if (v < 0 || v >= n_vertices) throw std::out_of_range("ClusterPartition: vertex out of range");
      if (p.cluster_of[v] != -1) {
        throw std::invalid_argument("ClusterPartition: vertex " + std::to_string(v) +
                                    " appears in two clusters");
      }
      p.cluster_of[v] = static_cast<int>(c);
      p.label_of[v] = static_cast<int>(pos);
    }
  }
  p.clusters = std::move(clusters);
  return p;
}

}  // namespace local_regret
