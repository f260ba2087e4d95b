#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netlap/core.hpp"

namespace netlap {

struct Edge {
  Index from;
  Index to;
  double weight;
};

/// Finite, strongly connected, loop-free directed network with positive
/// conductances, a designated non-empty boundary and a root vertex.
///
/// Vertices keep their file order; every matrix in the library is indexed
/// by that order. Instances are immutable and always valid.
class Network {
 public:
  /// Validates every invariant and throws InputError on the first violation.
  /// Duplicate edges are rejected rather than summed.
  static Network create(std::vector<std::string> vertices, std::vector<Edge> edges,
                        VertexSet boundary, Index root);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  /// Edges sorted by (from, to).
  const std::vector<Edge>& edges() const { return edges_; }
  const VertexSet& boundary() const { return boundary_; }
  VertexSet interior() const { return set_difference(all_vertices(size()), boundary_); }
  Index root() const { return root_; }

  std::optional<Index> find(std::string_view name) const;
  /// a(x, y), zero when (x, y) is not an edge.
  double weight(Index x, Index y) const;
  /// Outgoing edges of `x`, sorted by target.
  std::span<const Edge> out_edges(Index x) const;
  /// Dense conductance matrix.
  RealMatrix conductances() const;

 private:
  Network() = default;

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_start_;
  VertexSet boundary_;
  Index root_ = 0;
};

/// Strongly connected components (Tarjan), each sorted; components appear in
/// reverse topological order of the condensation.
std::vector<VertexSet> strong_components(std::size_t vertex_count, std::span<const Edge> edges);

/// True iff a single strongly connected component covers all vertices.
bool strongly_connected(std::size_t vertex_count, std::span<const Edge> edges);
bool strongly_connected(const Network& net);

/// Parses the JSON network document; see README for the schema.
Network parse_network(std::string_view text);

/// Canonical form: vertices in order, edges sorted by (from, to), numbers
/// printed with 17 significant digits.
std::string serialize_network(const Network& net);

/// A strict vertex subset Y with its induced boundary
///   dY = { x in Y : (x, z) in E for some z outside Y }
/// and interior Y° = Y \ dY.
struct SubNetwork {
  std::shared_ptr<const Network> parent;
  VertexSet members;
  VertexSet boundary;
  VertexSet interior;

  /// Whether the induced subgraph on `members` is strongly connected.
  bool strongly_connected() const;
};

SubNetwork make_subnetwork(const Network& net, const VertexSet& y);

// Built-in example networks -------------------------------------------------

/// Path 0 - 1 - ... - N with unit conductances both ways; boundary {0, N}, root 0.
Network path_network(int n);

/// Funnel on {1..N}: 1 -> k with weight p_k (k >= 2), k -> k-1 with weight 1.
/// Takes p_2..p_N (positive); row 1 is normalised by their sum. Boundary
/// {N-1, N}, root 1.
Network funnel_network(std::span<const double> tail);

/// Funnel from a full probability vector p_1..p_N summing to one. The loop
/// weight p_1 is dropped and row 1 renormalised to p_k / (1 - p_1).
Network funnel_network_folded(std::span<const double> p);

/// Oriented cycle 0 -> 1 -> ... -> length-1 -> 0 of even length >= 4;
/// boundary = odd vertices, root 0.
Network cycle_network(int length);

}  // namespace netlap
