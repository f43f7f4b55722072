#include "trisketch/graph.hpp"

#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace trisketch {

namespace {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection keeps the draw exactly uniform and independent of the standard
  // library's distribution implementation.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

/// Floyd's algorithm: m distinct values from [0, universe).
std::vector<std::uint64_t> sample_distinct(std::uint64_t universe, std::uint64_t m, std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  std::vector<std::uint64_t> out;
  out.reserve(m);
  for (std::uint64_t j = universe - m; j < universe; ++j) {
    std::uint64_t t = uniform_below(rng, j + 1);
    std::uint64_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

/// Index k in [0, n(n-1)/2) to the k-th pair (u < v) in lexicographic order.
Edge decode_pair(std::uint64_t k, std::uint32_t n) {
  // Row u holds n - 1 - u pairs.
  std::uint64_t u = 0;
  std::uint64_t row = n - 1;
  while (k >= row) {
    k -= row;
    ++u;
    --row;
  }
  return {static_cast<Vertex>(u), static_cast<Vertex>(u + 1 + k)};
}

std::uint64_t max_edges(std::uint32_t n) { return std::uint64_t{n} * (n - (n > 0)) / 2; }

}  // namespace

UndirectedGraph::UndirectedGraph(std::uint32_t n, std::span<const Edge> edges) : n_(n) {
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n)
      throw IdOutOfRange("edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside [0," +
                         std::to_string(n) + ")");
    if (u == v) throw NotSimple("self-loop at vertex " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end())
    throw NotSimple("duplicate edge {" + std::to_string(dup->first) + "," + std::to_string(dup->second) + "}");

  offsets_.assign(std::size_t{n} + 1, 0);
  for (auto [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
  adj_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges_) {
    adj_[fill[u]++] = v;
    adj_[fill[v]++] = u;
  }
  for (Vertex v = 0; v < n; ++v) std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1]);
}

std::span<const Vertex> UndirectedGraph::neighbors(Vertex v) const {
  return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
}

bool UndirectedGraph::is_adjacent(Vertex v, Vertex w) const {
  if (v >= n_ || w >= n_ || v == w) return false;
  if (degree(v) > degree(w)) std::swap(v, w);
  auto nb = neighbors(v);
  return std::binary_search(nb.begin(), nb.end(), w);
}

std::string UndirectedGraph::digest() const {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, 32);
  auto put = [&](std::uint64_t w) {
    unsigned char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<unsigned char>(w >> (8 * k));
    crypto_generichash_update(&st, buf, 8);
  };
  put(n_);
  put(edges_.size());
  for (auto [u, v] : edges_) put(std::uint64_t{u} << 32 | v);
  unsigned char out[32];
  crypto_generichash_final(&st, out, 32);
  MasterSeed tmp{};
  std::copy(std::begin(out), std::end(out), tmp.begin());
  return master_seed_hex(tmp);
}

OrientedGraph::OrientedGraph(UndirectedGraph g) : base_(std::move(g)) {
  const std::uint32_t n = base_.n();
  out_offsets_.assign(std::size_t{n} + 1, 0);
  for (Vertex x = 0; x < n; ++x) {
    std::size_t cnt = 0;
    for (Vertex y : base_.neighbors(x)) cnt += precedes(x, y);
    out_offsets_[x + 1] = out_offsets_[x] + cnt;
  }
  arcs_.reserve(base_.m());
  out_adj_.reserve(base_.m());
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y : base_.neighbors(x)) {
      if (precedes(x, y)) {
        arcs_.push_back({x, y});
        out_adj_.push_back(y);
      }
    }
  }
}

bool OrientedGraph::precedes(Vertex x, Vertex y) const {
  auto dx = base_.degree(x);
  auto dy = base_.degree(y);
  return dx != dy ? dx < dy : x < y;
}

std::span<const Vertex> OrientedGraph::out_neighbors(Vertex x) const {
  return {out_adj_.data() + out_offsets_[x], out_adj_.data() + out_offsets_[x + 1]};
}

UndirectedGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  auto parse_two = [&](const std::string& s, std::uint64_t& a, std::uint64_t& b) {
    std::istringstream ls(s);
    std::string t1, t2, extra;
    if (!(ls >> t1 >> t2) || (ls >> extra)) return false;
    auto conv = [](const std::string& t, std::uint64_t& out) {
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
      return ec == std::errc{} && p == t.data() + t.size();
    };
    return conv(t1, a) && conv(t2, b);
  };

  if (!next_line(line)) throw ParseError("empty graph document");
  std::uint64_t n = 0, m = 0;
  if (!parse_two(line, n, m)) throw ParseError("line " + std::to_string(lineno) + ": expected header \"n m\"");
  if (n > 0xffffffffull) throw ParseError("vertex count too large");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    if (!next_line(line))
      throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(k));
    std::uint64_t u = 0, v = 0;
    if (!parse_two(line, u, v)) throw ParseError("line " + std::to_string(lineno) + ": expected \"u v\"");
    if (u >= n || v >= n)
      throw IdOutOfRange("line " + std::to_string(lineno) + ": vertex id outside [0," + std::to_string(n) + ")");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (next_line(line)) throw ParseError("line " + std::to_string(lineno) + ": trailing content after edges");
  return UndirectedGraph(static_cast<std::uint32_t>(n), edges);
}

UndirectedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open graph file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

std::string format_graph(const UndirectedGraph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

void write_graph_file(const UndirectedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write graph file: " + path);
  out << format_graph(g);
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

PlantedGraph gen_planted_triangle(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  if (n < 3 || m < 3) throw InfeasibleParams("planted triangle needs n >= 3 and m >= 3");
  if (m > max_edges(n)) throw InfeasibleParams("m exceeds n(n-1)/2");
  std::mt19937_64 rng(seed);
  auto picks = sample_distinct(n, 3, rng);
  std::sort(picks.begin(), picks.end());
  std::array<Vertex, 3> tri{static_cast<Vertex>(picks[0]), static_cast<Vertex>(picks[1]),
                            static_cast<Vertex>(picks[2])};

  std::vector<std::unordered_set<Vertex>> adj(n);
  std::vector<Edge> edges;
  edges.reserve(m);
  auto add = [&](Vertex u, Vertex v) {
    adj[u].insert(v);
    adj[v].insert(u);
    edges.emplace_back(std::min(u, v), std::max(u, v));
  };
  add(tri[0], tri[1]);
  add(tri[0], tri[2]);
  add(tri[1], tri[2]);

  auto closes_triangle = [&](Vertex u, Vertex v) {
    const auto& small = adj[u].size() < adj[v].size() ? adj[u] : adj[v];
    const auto& large = adj[u].size() < adj[v].size() ? adj[v] : adj[u];
    for (Vertex w : small) {
      if (large.contains(w)) return true;
    }
    return false;
  };

  // Give up on rejection after this many consecutive refusals; the remaining
  // edges may then close incidental triangles.
  const std::uint64_t patience = 64 * m + 1024;
  std::uint64_t refusals = 0;
  while (edges.size() < m) {
    auto u = static_cast<Vertex>(uniform_below(rng, n));
    auto v = static_cast<Vertex>(uniform_below(rng, n));
    if (u == v || adj[u].contains(v)) continue;
    if (refusals < patience && closes_triangle(u, v)) {
      ++refusals;
      continue;
    }
    refusals = 0;
    add(u, v);
  }
  return {UndirectedGraph(n, edges), tri};
}

UndirectedGraph gen_triangle_free(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t left = n / 2;
  const std::uint64_t right = n - left;
  if (m > left * right) throw InfeasibleParams("m exceeds floor(n^2/4) for a bipartite graph");
  std::mt19937_64 rng(seed);
  std::vector<Vertex> perm(n);
  for (Vertex v = 0; v < n; ++v) perm[v] = v;
  for (std::uint32_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[uniform_below(rng, k)]);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t idx : sample_distinct(left * right, m, rng)) {
    Vertex u = perm[idx / right];
    Vertex v = perm[left + idx % right];
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return UndirectedGraph(n, edges);
}

UndirectedGraph gen_er_sparse(std::uint32_t n, double avg_degree, std::uint64_t seed) {
  if (!(avg_degree >= 0.0) || !std::isfinite(avg_degree)) throw InfeasibleParams("avg_degree must be >= 0");
  const double target = std::ceil(static_cast<double>(n) * avg_degree / 2.0);
  if (target > static_cast<double>(max_edges(n))) throw InfeasibleParams("average degree too high for n");
  const auto m = static_cast<std::uint64_t>(target);
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t idx : sample_distinct(max_edges(n), m, rng)) edges.push_back(decode_pair(idx, n));
  return UndirectedGraph(n, edges);
}

}  // namespace trisketch
