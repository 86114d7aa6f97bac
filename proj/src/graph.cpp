#include "kgc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>

namespace kgc {

int KGraph::infinity_edge_count() const {
  int c = 0;
  for (const auto& pr : out)
    for (const auto& t : pr)
      if (t.kind == TargetKind::Infinity) ++c;
  return c;
}

std::string graph_kind_str(GraphKind k) {
  switch (k) {
    case GraphKind::LieSimple: return "LieSimple";
    case GraphKind::Wheel: return "Wheel";
    case GraphKind::Superposition: return "Superposition";
    case GraphKind::NonEssential: return "NonEssential";
  }
  return "?";
}

void check_admissible(const KGraph& g) {
  if (g.n < 0 || g.m < 0) throw GraphError("negative vertex count");
  if (static_cast<int>(g.out.size()) != g.n)
    throw GraphError("rule (i): every aerial vertex must emit exactly two edges");
  if (!g.colors.empty() && static_cast<int>(g.colors.size()) != g.n)
    throw GraphError("color table size mismatch");
  for (int v = 0; v < g.n; ++v) {
    for (const auto& t : g.out[v]) {
      switch (t.kind) {
        case TargetKind::Aerial:
          if (t.index < 0 || t.index >= g.n) throw GraphError("aerial target out of range");
          if (t.index == v) throw GraphError("rule (ii): loop edge at vertex " + std::to_string(v + 1));
          break;
        case TargetKind::Ground:
          if (t.index < 0 || t.index >= g.m) throw GraphError("ground target out of range");
          break;
        case TargetKind::Infinity:
          break;
      }
    }
    if (g.out[v][0] == g.out[v][1])
      throw GraphError("rule (iii): multiple edge at vertex " + std::to_string(v + 1));
  }
}

bool is_admissible(const KGraph& g) noexcept {
  try {
    check_admissible(g);
    return true;
  } catch (const GraphError&) {
    return false;
  }
}

bool is_essential(const KGraph& g) {
  std::vector<int> indeg(g.n, 0);
  for (const auto& pr : g.out)
    for (const auto& t : pr)
      if (t.kind == TargetKind::Aerial && ++indeg[t.index] > 1) return false;
  return true;
}

GraphClass classify(const KGraph& g) {
  check_admissible(g);
  GraphClass cls;
  cls.indegree.assign(g.n, 0);
  for (const auto& pr : g.out)
    for (const auto& t : pr)
      if (t.kind == TargetKind::Aerial) ++cls.indegree[t.index];

  if (std::any_of(cls.indegree.begin(), cls.indegree.end(), [](int d) { return d > 1; })) {
    cls.kind = GraphKind::NonEssential;
    return cls;
  }

  // parent[v] = source of the unique aerial edge into v, if any
  std::vector<int> parent(g.n, -1);
  for (int v = 0; v < g.n; ++v)
    for (const auto& t : g.out[v])
      if (t.kind == TargetKind::Aerial) parent[t.index] = v;

  for (const auto& comp : aerial_components(g)) {
    GraphComponent c;
    c.vertices = comp;
    int internal = 0;
    for (int v : comp) internal += (parent[v] >= 0);
    if (internal == static_cast<int>(comp.size())) {
      c.kind = GraphKind::Wheel;
      // walk parents until a vertex repeats: that closes the unique cycle
      std::vector<int> seen(g.n, 0);
      int v = comp[0];
      while (!seen[v]) {
        seen[v] = 1;
        v = parent[v];
      }
      int start = v;
      do {
        c.cycle.push_back(v);
        v = parent[v];
      } while (v != start);
      std::reverse(c.cycle.begin(), c.cycle.end());  // follow edge direction
    } else {
      c.kind = GraphKind::LieSimple;
      for (int v : comp)
        if (parent[v] < 0) c.root = v;
    }
    cls.components.push_back(std::move(c));
  }

  if (cls.components.size() == 1) {
    cls.kind = cls.components[0].kind;
    cls.root = cls.components[0].root;
    cls.cycle = cls.components[0].cycle;
  } else {
    cls.kind = GraphKind::Superposition;
  }
  return cls;
}

std::vector<std::vector<int>> aerial_components(const KGraph& g) {
  std::vector<int> rep(g.n);
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  for (int v = 0; v < g.n; ++v)
    for (const auto& t : g.out[v])
      if (t.kind == TargetKind::Aerial) rep[find(v)] = find(t.index);
  std::vector<std::vector<int>> comps;
  std::vector<int> where(g.n, -1);
  for (int v = 0; v < g.n; ++v) {
    int r = find(v);
    if (where[r] < 0) {
      where[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[where[r]].push_back(v);
  }
  return comps;
}

namespace {

void enumerate_rec(int v, KGraph& g, std::vector<int>& indeg, int inf_left,
                   bool essential, EnumMode mode, const EnumOptions& opt,
                   std::vector<KGraph>& sink) {
  if (v == g.n) {
    if (inf_left != 0) return;
    sink.push_back(g);
    return;
  }
  std::vector<Target> cands;
  for (int a = 0; a < g.n; ++a)
    if (a != v) cands.push_back(Target::aerial(a));
  for (int b = 0; b < g.m; ++b) cands.push_back(Target::ground(b));
  if (inf_left > 0) cands.push_back(Target::infinity());

  const bool colored = (mode == EnumMode::TwoColor || mode == EnumMode::FourColor);
  auto signs_for = [&](const Target& t) {
    std::vector<EdgeColor> cs;
    if (!colored) {
      cs.push_back(EdgeColor{+1, 0});
      return cs;
    }
    if (t.kind == TargetKind::Infinity) {
      cs.push_back(EdgeColor{-1, mode == EnumMode::FourColor ? +1 : 0});
      return cs;
    }
    for (int s1 : {+1, -1}) {
      if (mode == EnumMode::FourColor) {
        for (int s2 : {+1, -1}) cs.push_back(EdgeColor{s1, s2});
      } else {
        cs.push_back(EdgeColor{s1, 0});
      }
    }
    return cs;
  };

  for (const Target& t0 : cands) {
    for (const Target& t1 : cands) {
      if (t0 == t1) continue;  // rule (iii)
      if (opt.infinity_second_slot_only && t0.kind == TargetKind::Infinity) continue;
      int used_inf = (t0.kind == TargetKind::Infinity) + (t1.kind == TargetKind::Infinity);
      if (used_inf > inf_left) continue;
      if (essential) {
        int d0 = (t0.kind == TargetKind::Aerial) ? ++indeg[t0.index] : 0;
        if (t0.kind == TargetKind::Aerial && indeg[t0.index] > 1) {
          --indeg[t0.index];
          continue;
        }
        (void)d0;
        if (t1.kind == TargetKind::Aerial && ++indeg[t1.index] > 1) {
          --indeg[t1.index];
          if (t0.kind == TargetKind::Aerial) --indeg[t0.index];
          continue;
        }
      }
      g.out[v] = {t0, t1};
      for (const EdgeColor& c0 : signs_for(t0)) {
        for (const EdgeColor& c1 : signs_for(t1)) {
          if (colored) g.colors[v] = {c0, c1};
          enumerate_rec(v + 1, g, indeg, inf_left - used_inf, essential, mode, opt, sink);
        }
      }
      if (essential) {
        if (t0.kind == TargetKind::Aerial) --indeg[t0.index];
        if (t1.kind == TargetKind::Aerial) --indeg[t1.index];
      }
    }
  }
}

}  // namespace

std::vector<KGraph> enumerate_graphs(int n, int m, EnumMode mode, const EnumOptions& opt) {
  if (n < 0 || m < 0) throw GraphError("negative vertex count");
  const bool essential = (mode != EnumMode::Plain);
  const int cap = (mode == EnumMode::Plain) ? opt.cap_plain : opt.cap_essential;
  if (n > cap)
    throw GraphError("enumeration cap exceeded: n=" + std::to_string(n) +
                     " > " + std::to_string(cap) + " (raise the cap explicitly)");
  KGraph g;
  g.n = n;
  g.m = m;
  g.out.assign(n, {Target::ground(0), Target::ground(0)});
  if (mode == EnumMode::TwoColor || mode == EnumMode::FourColor)
    g.colors.assign(n, {EdgeColor{+1, 0}, EdgeColor{+1, 0}});
  std::vector<KGraph> sink;
  std::vector<int> indeg(n, 0);
  enumerate_rec(0, g, indeg, opt.infinity_edges, essential, mode, opt, sink);
  return sink;
}

namespace {

std::string target_str(const Target& t) {
  switch (t.kind) {
    case TargetKind::Aerial: return std::to_string(t.index + 1);
    case TargetKind::Ground: return "G" + std::to_string(t.index + 1);
    case TargetKind::Infinity: return "I";
  }
  return "?";
}

std::string color_str(const EdgeColor& c) {
  std::string s = ":";
  s += (c.s1 > 0 ? '+' : '-');
  if (c.s2 != 0) s += (c.s2 > 0 ? '+' : '-');
  return s;
}

}  // namespace

std::string serialize_graph(const KGraph& g) {
  std::ostringstream os;
  os << "n=" << g.n << ";m=" << g.m << ";e=";
  bool first = true;
  for (int v = 0; v < g.n; ++v)
    for (int s = 0; s < 2; ++s) {
      if (!first) os << ",";
      first = false;
      os << (v + 1) << ">" << target_str(g.out[v][s]);
      if (g.colored()) os << color_str(g.colors[v][s]);
    }
  return os.str();
}

KGraph parse_graph(const std::string& line) {
  size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(1, static_cast<int>(pos) + 1, msg);
  };
  auto expect = [&](const std::string& tok) {
    if (line.compare(pos, tok.size(), tok) != 0) fail("expected '" + tok + "'");
    pos += tok.size();
  };
  auto read_int = [&]() -> int {
    size_t start = pos;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return std::stoi(line.substr(start, pos - start));
  };

  expect("n=");
  int n = read_int();
  expect(";m=");
  int m = read_int();
  expect(";e=");

  KGraph g;
  g.n = n;
  g.m = m;
  g.out.assign(n, {Target::ground(0), Target::ground(0)});
  std::vector<std::vector<std::pair<Target, EdgeColor>>> per_vertex(n);
  bool any_color = false, any_plain = false;

  if (pos < line.size()) {
    while (true) {
      int src = read_int();
      if (src < 1 || src > n) fail("edge source out of range");
      expect(">");
      Target t;
      if (pos < line.size() && line[pos] == 'G') {
        ++pos;
        int gi = read_int();
        if (gi < 1 || gi > m) fail("ground target out of range");
        t = Target::ground(gi - 1);
      } else if (pos < line.size() && line[pos] == 'I') {
        ++pos;
        t = Target::infinity();
      } else {
        int ai = read_int();
        if (ai < 1 || ai > n) fail("aerial target out of range");
        if (ai == src) fail("rule (ii): loop edge at vertex " + std::to_string(src));
        t = Target::aerial(ai - 1);
      }
      EdgeColor c{+1, 0};
      if (pos < line.size() && line[pos] == ':') {
        ++pos;
        auto sign = [&]() -> int {
          if (pos >= line.size() || (line[pos] != '+' && line[pos] != '-'))
            fail("expected '+' or '-'");
          return line[pos++] == '+' ? +1 : -1;
        };
        c.s1 = sign();
        if (pos < line.size() && (line[pos] == '+' || line[pos] == '-')) c.s2 = sign();
        any_color = true;
      } else {
        any_plain = true;
      }
      per_vertex[src - 1].push_back({t, c});
      if (pos >= line.size()) break;
      expect(",");
    }
  }
  if (any_color && any_plain) fail("mixed colored and uncolored edges");
  for (int v = 0; v < n; ++v) {
    if (per_vertex[v].size() != 2)
      fail("rule (i): vertex " + std::to_string(v + 1) + " must emit exactly two edges, got " +
           std::to_string(per_vertex[v].size()));
    if (per_vertex[v][0].first == per_vertex[v][1].first)
      fail("rule (iii): multiple edge at vertex " + std::to_string(v + 1));
    g.out[v] = {per_vertex[v][0].first, per_vertex[v][1].first};
  }
  if (any_color) {
    g.colors.assign(n, {EdgeColor{}, EdgeColor{}});
    for (int v = 0; v < n; ++v) g.colors[v] = {per_vertex[v][0].second, per_vertex[v][1].second};
  }
  check_admissible(g);
  return g;
}

KGraph relabel(const KGraph& g, const std::vector<int>& perm) {
  KGraph r = g;
  for (int v = 0; v < g.n; ++v) {
    auto map_t = [&](Target t) {
      if (t.kind == TargetKind::Aerial) t.index = perm[t.index];
      return t;
    };
    r.out[perm[v]] = {map_t(g.out[v][0]), map_t(g.out[v][1])};
    if (g.colored()) r.colors[perm[v]] = g.colors[v];
  }
  return r;
}

std::string canonical_id(const KGraph& g) {
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best = serialize_graph(g);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::string s = serialize_graph(relabel(g, perm));
    if (s < best) best = std::move(s);
  }
  return best;
}

std::pair<KGraph, int> component_subgraph(const KGraph& g, const std::vector<int>& verts) {
  std::vector<int> newidx(g.n, -1);
  for (size_t i = 0; i < verts.size(); ++i) newidx[verts[i]] = static_cast<int>(i);
  KGraph c;
  c.n = static_cast<int>(verts.size());
  c.m = g.m;
  c.out.assign(c.n, {Target::ground(0), Target::ground(0)});
  if (g.colored()) c.colors.assign(c.n, {EdgeColor{}, EdgeColor{}});
  for (size_t i = 0; i < verts.size(); ++i) {
    int v = verts[i];
    for (int s = 0; s < 2; ++s) {
      Target t = g.out[v][s];
      if (t.kind == TargetKind::Aerial) t.index = newidx[t.index];
      c.out[i][s] = t;
      if (g.colored()) c.colors[i][s] = g.colors[v][s];
    }
  }
  // Parity of regrouping the global wedge order so this component's edges
  // come first, order preserved within each part.
  int inversions = 0;
  std::vector<bool> mine(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) mine[e] = (newidx[e / 2] >= 0);
  int others_seen = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (mine[e])
      inversions += others_seen;
    else
      ++others_seen;
  }
  return {c, (inversions % 2 == 0) ? +1 : -1};
}

KGraph mirror_graph(const KGraph& g) {
  KGraph r = g;
  for (auto& pr : r.out)
    for (auto& t : pr)
      if (t.kind == TargetKind::Ground) t.index = g.m - 1 - t.index;
  return r;
}

}  // namespace kgc
