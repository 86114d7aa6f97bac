#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgc {

enum class TargetKind { Aerial, Ground, Infinity };

struct Target {
  TargetKind kind = TargetKind::Ground;
  int index = 0;  // 0-based aerial or ground index; unused for Infinity

  static Target aerial(int i) { return {TargetKind::Aerial, i}; }
  static Target ground(int i) { return {TargetKind::Ground, i}; }
  static Target infinity() { return {TargetKind::Infinity, 0}; }

  auto operator<=>(const Target&) const = default;
};

// s1: sign relative to the first boundary decomposition, s2 for the second
// axis in quadrant mode (0 when absent).  +1 tangent, -1 normal.
struct EdgeColor {
  int s1 = +1;
  int s2 = 0;
  auto operator<=>(const EdgeColor&) const = default;
};

// n aerial vertices, each emitting an ordered pair of edges; m ground
// vertices on the boundary.  Global edge order is the concatenation of the
// per-vertex pairs in vertex order.
struct KGraph {
  int n = 0;
  int m = 0;
  std::vector<std::array<Target, 2>> out;          // size n
  std::vector<std::array<EdgeColor, 2>> colors;    // empty, or size n

  bool colored() const { return !colors.empty(); }
  int edge_count() const { return 2 * n; }
  Target target(int e) const { return out[e / 2][e % 2]; }
  EdgeColor color(int e) const { return colors[e / 2][e % 2]; }
  int infinity_edge_count() const;

  auto operator<=>(const KGraph&) const = default;
};

enum class GraphKind { LieSimple, Wheel, Superposition, NonEssential };

std::string graph_kind_str(GraphKind k);

struct GraphComponent {
  GraphKind kind = GraphKind::LieSimple;
  std::vector<int> vertices;
  int root = -1;           // LieSimple component
  std::vector<int> cycle;  // Wheel component, in cycle order
};

struct GraphClass {
  GraphKind kind = GraphKind::Superposition;
  std::vector<int> indegree;  // aerial in-degrees (aerial-sourced edges only)
  std::vector<GraphComponent> components;
  int root = -1;
  std::vector<int> cycle;
};

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ", col " +
                           std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

// Throws GraphError naming the violated rule:
//   (i) edges start at aerial vertices, (ii) no loops, (iii) no multiple edges.
void check_admissible(const KGraph& g);
bool is_admissible(const KGraph& g) noexcept;

bool is_essential(const KGraph& g);  // aerial in-degree <= 1 everywhere

GraphClass classify(const KGraph& g);

enum class EnumMode { Plain, Essential, TwoColor, FourColor };

struct EnumOptions {
  int cap_plain = 4;
  int cap_essential = 6;
  int infinity_edges = 0;    // exact number of edges to infinity
  bool infinity_second_slot_only = false;
};

// All labeled admissible graphs, deterministic order.  Colored modes imply
// the essential filter (linear coefficients vanish otherwise).
std::vector<KGraph> enumerate_graphs(int n, int m, EnumMode mode,
                                     const EnumOptions& opt = {});

std::string serialize_graph(const KGraph& g);
KGraph parse_graph(const std::string& line);

// Minimal serialization over all aerial relabelings (edge pairs re-sorted by
// the new vertex order, pair-internal order kept).  Equal ids iff the graphs
// are related by such a relabeling.
std::string canonical_id(const KGraph& g);

// Relabel aerial vertices: vertex v -> perm[v].
KGraph relabel(const KGraph& g, const std::vector<int>& perm);

// Weakly connected components over aerial vertices (ground ignored).
std::vector<std::vector<int>> aerial_components(const KGraph& g);

// Component sub-graph on the given aerial vertices (ground kept), plus the
// sign of the edge-order interleaving permutation relative to g.
std::pair<KGraph, int> component_subgraph(const KGraph& g,
                                          const std::vector<int>& verts);

// Mirror image: ground order reversed (half-plane reflection).
KGraph mirror_graph(const KGraph& g);

}  // namespace kgc
