#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trisketch/seeds.hpp"

namespace trisketch {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSimple : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IdOutOfRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Edge = std::pair<Vertex, Vertex>;  // always first < second

/// Simple undirected graph with sorted adjacency lists.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  /// Validates simplicity and range; edges may be in any order/orientation.
  UndirectedGraph(std::uint32_t n, std::span<const Edge> edges);

  std::uint32_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  /// Canonical edge list: u < v, lexicographically sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool is_adjacent(Vertex v, Vertex w) const;

  /// 32-byte digest of the canonical edge list, hex encoded.
  std::string digest() const;

  friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::uint32_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;
};

/// Orientation by the total order (degree, id): x -> y iff x precedes y.
class OrientedGraph {
 public:
  OrientedGraph() = default;
  explicit OrientedGraph(UndirectedGraph g);

  const UndirectedGraph& base() const { return base_; }
  std::uint32_t n() const { return base_.n(); }
  std::size_t m() const { return base_.m(); }
  bool precedes(Vertex x, Vertex y) const;
  /// N+(x), ascending by vertex id.
  std::span<const Vertex> out_neighbors(Vertex x) const;
  std::size_t out_degree(Vertex x) const { return out_offsets_[x + 1] - out_offsets_[x]; }
  /// All arcs in canonical scan order: ascending (anchor, mate).
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool is_adjacent(Vertex v, Vertex w) const { return base_.is_adjacent(v, w); }

 private:
  UndirectedGraph base_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Arc> arcs_;
  std::vector<Vertex> out_adj_;
};

inline OrientedGraph orient(UndirectedGraph g) { return OrientedGraph(std::move(g)); }

/// "n m" header followed by m lines "u v". Throws ParseError, NotSimple, IdOutOfRange.
UndirectedGraph parse_graph(std::string_view text);
UndirectedGraph read_graph_file(const std::string& path);
/// Canonical form: header then edges with u < v in lexicographic order.
std::string format_graph(const UndirectedGraph& g);
void write_graph_file(const UndirectedGraph& g, const std::string& path);

struct PlantedGraph {
  UndirectedGraph graph;
  std::array<Vertex, 3> planted{};  // ascending
};

/// One planted triangle plus m - 3 distractor edges; distractors that would
/// close another triangle are rejected while that remains feasible.
PlantedGraph gen_planted_triangle(std::uint32_t n, std::uint64_t m, std::uint64_t seed);
/// Random bipartite graph with parts of size floor(n/2) and ceil(n/2).
UndirectedGraph gen_triangle_free(std::uint32_t n, std::uint64_t m, std::uint64_t seed);
/// Uniform G(n, m) with m = ceil(n * avg_degree / 2).
UndirectedGraph gen_er_sparse(std::uint32_t n, double avg_degree, std::uint64_t seed);

}  // namespace trisketch
