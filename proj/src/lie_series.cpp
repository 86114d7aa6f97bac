#include "kgc/lie_series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace kgc {

void LieSeries::add(const std::string& w, const Rat& c) {
  auto it = coeff.find(w);
  if (it == coeff.end()) {
    if (c != 0) coeff.emplace(w, c);
  } else {
    it->second += c;
    if (it->second == 0) coeff.erase(it);
  }
}

LieSeries& LieSeries::operator+=(const LieSeries& o) {
  for (const auto& [w, c] : o.coeff) add(w, c);
  return *this;
}

LieSeries& LieSeries::operator-=(const LieSeries& o) {
  for (const auto& [w, c] : o.coeff) add(w, -c);
  return *this;
}

LieSeries LieSeries::scaled(const Rat& c) const {
  LieSeries r;
  r.order = order;
  if (c == 0) return r;
  for (const auto& [w, v] : coeff) r.coeff.emplace(w, v * c);
  return r;
}

bool is_lyndon(const std::string& w) {
  if (w.empty()) return false;
  for (size_t i = 1; i < w.size(); ++i)
    if (w.substr(i) <= w) return false;
  return true;
}

std::vector<std::string> lyndon_basis(int order) {
  // Duval's generation, then sort by length first
  std::vector<std::string> words;
  std::string u = "X";
  auto push = [&](const std::string& s) {
    if (static_cast<int>(s.size()) <= order) words.push_back(s);
  };
  push(u);
  while (true) {
    // extend periodically to maximum length, then increment
    std::string t = u;
    while (static_cast<int>(t.size()) < order) t += t[t.size() % u.size()];
    // increment: drop trailing 'Y', bump last 'X'
    while (!t.empty() && t.back() == 'Y') t.pop_back();
    if (t.empty()) break;
    t.back() = 'Y';
    u = t;
    push(u);
  }
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return words;
}

std::pair<std::string, std::string> lyndon_factorize(const std::string& w) {
  if (w.size() < 2) throw std::invalid_argument("cannot factorize a letter");
  // right factor = lexicographically least proper suffix
  size_t best = 1;
  for (size_t i = 2; i < w.size(); ++i)
    if (w.substr(i) < w.substr(best)) best = i;
  return {w.substr(0, best), w.substr(best)};
}

AssocPoly assoc_bracket(const AssocPoly& a, const AssocPoly& b) {
  AssocPoly r;
  auto acc = [&r](const std::string& w, const Rat& c) {
    auto it = r.find(w);
    if (it == r.end()) {
      if (c != 0) r.emplace(w, c);
    } else {
      it->second += c;
      if (it->second == 0) r.erase(it);
    }
  };
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      acc(wa + wb, ca * cb);
      acc(wb + wa, -(ca * cb));
    }
  return r;
}

AssocPoly assoc_of_lyndon(const std::string& w) {
  static std::map<std::string, AssocPoly> memo;
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  AssocPoly r;
  if (w.size() == 1) {
    r.emplace(w, Rat(1));
  } else {
    auto [u, v] = lyndon_factorize(w);
    r = assoc_bracket(assoc_of_lyndon(u), assoc_of_lyndon(v));
  }
  memo.emplace(w, r);
  return r;
}

std::map<std::string, Rat> lyndon_coordinates(const AssocPoly& p) {
  // b_w = w + (lexicographically larger words of the same length), so a
  // greedy sweep from the smallest remaining word terminates.
  std::map<std::string, Rat> coords;
  std::map<size_t, AssocPoly> by_len;
  for (const auto& [w, c] : p)
    if (c != 0) by_len[w.size()][w] = c;
  for (auto& [len, poly] : by_len) {
    (void)len;
    while (!poly.empty()) {
      auto front = poly.begin();
      std::string w = front->first;
      Rat c = front->second;
      if (!is_lyndon(w))
        throw std::invalid_argument("not a Lie element: leading word " + w + " is not Lyndon");
      coords[w] = c;
      for (const auto& [bw, bc] : assoc_of_lyndon(w)) {
        auto it = poly.find(bw);
        Rat nv = (it == poly.end() ? Rat(0) : it->second) - c * bc;
        if (nv == 0) {
          if (it != poly.end()) poly.erase(it);
        } else {
          poly[bw] = nv;
        }
      }
    }
  }
  return coords;
}

namespace {

// Lyndon coordinates of [b_u, b_v], memoized.
const std::map<std::string, Rat>& basis_bracket(const std::string& u, const std::string& v) {
  static std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>> memo;
  auto key = std::make_pair(u, v);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  auto coords = lyndon_coordinates(assoc_bracket(assoc_of_lyndon(u), assoc_of_lyndon(v)));
  return memo.emplace(key, std::move(coords)).first->second;
}

}  // namespace

LieSeries bracket(const LieSeries& a, const LieSeries& b, int order) {
  LieSeries r;
  r.order = order;
  for (const auto& [u, cu] : a.coeff)
    for (const auto& [v, cv] : b.coeff) {
      if (static_cast<int>(u.size() + v.size()) > order) continue;
      if (u == v) continue;
      for (const auto& [w, c] : basis_bracket(u, v)) r.add(w, cu * cv * c);
    }
  return r;
}

LieSeries substituted(const LieSeries& z, int sx, int sy, bool swap_args, int order) {
  AssocPoly total;
  for (const auto& [w, c] : z.coeff) {
    if (static_cast<int>(w.size()) > order) continue;
    for (const auto& [aw, ac] : assoc_of_lyndon(w)) {
      Rat factor = c * ac;
      std::string nw;
      nw.reserve(aw.size());
      for (char ch : aw) {
        if (ch == 'X') {
          factor *= sx;
          nw += swap_args ? 'Y' : 'X';
        } else {
          factor *= sy;
          nw += swap_args ? 'X' : 'Y';
        }
      }
      auto it = total.find(nw);
      if (it == total.end()) {
        if (factor != 0) total.emplace(nw, factor);
      } else {
        it->second += factor;
        if (it->second == 0) total.erase(it);
      }
    }
  }
  LieSeries r;
  r.order = order;
  for (auto& [w, c] : lyndon_coordinates(total)) r.add(w, c);
  return r;
}

LieSeries dynkin_bch(int order) {
  if (order < 1 || order > 8)
    throw std::invalid_argument("dynkin_bch: order must be in 1..8");
  AssocPoly total;
  auto acc = [&total](const AssocPoly& p, const Rat& c) {
    for (const auto& [w, pc] : p) {
      auto it = total.find(w);
      Rat nv = (it == total.end() ? Rat(0) : it->second) + pc * c;
      if (nv == 0) {
        if (it != total.end()) total.erase(it);
      } else {
        total[w] = nv;
      }
    }
  };

  // enumerate block sequences ((p_i,q_i)), p_i+q_i >= 1, total length <= order;
  // each sequence contributes its left-normed bracket word
  std::vector<std::pair<int, int>> blocks;
  std::function<void(int)> rec = [&](int used) {
    if (!blocks.empty()) {
      int k = static_cast<int>(blocks.size());
      std::string word;
      for (auto [p, q] : blocks) {
        word.append(p, 'X');
        word.append(q, 'Y');
      }
      // left-normed bracket of the word; zero quickly for repeated first letter
      AssocPoly cur{{std::string(1, word[0]), Rat(1)}};
      bool zero = false;
      for (size_t i = 1; i < word.size() && !zero; ++i) {
        AssocPoly letter{{std::string(1, word[i]), Rat(1)}};
        cur = assoc_bracket(cur, letter);
        zero = cur.empty();
      }
      if (!zero) {
        Rat denom = Rat(used);
        for (auto [p, q] : blocks) denom *= factorial(p) * factorial(q);
        Rat sign = (k % 2 == 1) ? Rat(1) : Rat(-1);
        acc(cur, sign / (Rat(k) * denom));
      }
    }
    if (used >= order) return;
    for (int len = 1; len + used <= order; ++len)
      for (int p = 0; p <= len; ++p) {
        blocks.emplace_back(p, len - p);
        rec(used + len);
        blocks.pop_back();
      }
  };
  rec(0);

  LieSeries z;
  z.order = order;
  for (auto& [w, c] : lyndon_coordinates(total)) z.add(w, c);
  return z;
}

namespace {

AssocPoly symbol_rec(const KGraph& g, const Target& t) {
  switch (t.kind) {
    case TargetKind::Ground:
      return AssocPoly{{std::string(1, t.index == 0 ? 'X' : 'Y'), Rat(1)}};
    case TargetKind::Aerial:
      return assoc_bracket(symbol_rec(g, g.out[t.index][0]), symbol_rec(g, g.out[t.index][1]));
    case TargetKind::Infinity:
      throw GraphError("graph symbol: edge to infinity has no bracket word");
  }
  return {};
}

std::string bracket_str(const std::string& w) {
  if (w.size() == 1) return w;
  auto [u, v] = lyndon_factorize(w);
  return "[" + bracket_str(u) + "," + bracket_str(v) + "]";
}

}  // namespace

LieSeries graph_symbol(const KGraph& g) {
  if (g.m != 2) throw GraphError("graph symbol requires two ground vertices");
  GraphClass cls = classify(g);
  if (cls.kind != GraphKind::LieSimple)
    throw GraphError("graph symbol requires a LieSimple graph, got " + graph_kind_str(cls.kind));
  AssocPoly p = symbol_rec(g, Target::aerial(cls.root));
  LieSeries r;
  r.order = g.n + 1;
  for (auto& [w, c] : lyndon_coordinates(p)) r.add(w, c);
  return r;
}

std::string lie_series_str(const LieSeries& s) {
  if (s.coeff.empty()) return "0\n";
  std::vector<std::string> words;
  for (const auto& [w, c] : s.coeff) words.push_back(w);
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::ostringstream os;
  for (const auto& w : words) os << rat_str(s.coeff.at(w)) << " * " << bracket_str(w) << "\n";
  return os.str();
}

std::string lie_series_machine(const LieSeries& s, const std::map<std::string, double>& err) {
  std::vector<std::string> words;
  for (const auto& [w, c] : s.coeff) words.push_back(w);
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::ostringstream os;
  for (const auto& w : words) {
    auto it = err.find(w);
    os << w.size() << ";" << w << ";" << rat_str(s.coeff.at(w)) << ";"
       << (it == err.end() ? 0.0 : it->second) << "\n";
  }
  return os.str();
}

BchAssembly kontsevich_bch(int order, const GraphWeightFn& weights) {
  if (order < 1) throw std::invalid_argument("kontsevich_bch: order must be >= 1");
  BchAssembly out;
  out.series.order = order;
  out.series.add("X", 1);
  out.series.add("Y", 1);

  std::map<std::string, double> variance;
  std::vector<std::string> missing;
  for (int n = 1; n + 1 <= order; ++n) {
    EnumOptions opt;
    opt.cap_essential = std::max(opt.cap_essential, n);
    auto graphs = enumerate_graphs(n, 2, EnumMode::Essential, opt);

    // group labeled graphs into classes modulo aerial renumbering
    std::map<std::string, std::pair<KGraph, Int>> classes;
    for (const auto& g : graphs) {
      if (classify(g).kind != GraphKind::LieSimple) continue;
      auto id = canonical_id(g);
      auto it = classes.find(id);
      if (it == classes.end())
        classes.emplace(id, std::make_pair(g, Int(1)));
      else
        it->second.second += 1;
    }

    Rat vertex_norm = pow_rat(rat(1, 2), n);  // half-bracket bivector per vertex
    Rat nfact = Rat(factorial(n));
    for (auto& [id, cls] : classes) {
      auto& [rep, count] = cls;
      auto w = weights(rep);
      if (!w) {
        missing.push_back(id);
        continue;
      }
      Rat multiplicity = Rat(count) / nfact;  // 1 for trees: |Aut| trivial
      LieSeries sym = graph_symbol(rep);
      if (w->exact) {
        Rat factor = multiplicity * vertex_norm * w->snapped;
        out.series += sym.scaled(factor);
      } else {
        double factor = to_double(multiplicity * vertex_norm);
        for (const auto& [word, c] : sym.coeff) {
          double cd = to_double(c);
          variance[word] += factor * factor * cd * cd * w->std_error * w->std_error;
          out.series.add(word, rat_from_double(factor * cd * w->value));
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "kontsevich_bch: missing weights for graphs:";
    for (const auto& id : missing) msg += " " + id;
    throw std::runtime_error(msg);
  }
  for (const auto& [w, v] : variance)
    if (v > 0) out.std_error[w] = std::sqrt(v);

  LieSeries oracle = dynkin_bch(order);
  for (const auto& [w, e] : out.std_error) {
    double residual = std::abs(to_double(out.series.at(w) - oracle.at(w)));
    if (e > residual / 2) out.noise_dominated.push_back(w);
  }
  return out;
}

}  // namespace kgc
