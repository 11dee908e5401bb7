#include "pramcc/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pramcc {

bool Graph::valid() const {
  for (const auto& [v, w] : arcs) {
    if (v >= n || w >= n) return false;
  }
  // Mirror check: multiset of (v, w) equals multiset of (w, v).
  auto sorted = arcs;
  auto mirrored = arcs;
  for (auto& [v, w] : mirrored) std::swap(v, w);
  std::sort(sorted.begin(), sorted.end());
  std::sort(mirrored.begin(), mirrored.end());
  return sorted == mirrored;
}

VertexId ParentForest::root_of(VertexId v) const {
  VertexId cur = v;
  for (std::size_t hops = 0; hops <= parent.size(); ++hops) {
    VertexId up = parent[cur];
    if (up == cur) return cur;
    cur = up;
  }
  throw std::logic_error("parent forest contains a non-trivial cycle");
}

std::size_t ParentForest::root_count() const {
  std::size_t count = 0;
  for (VertexId v = 0; v < size(); ++v) {
    if (is_root(v)) ++count;
  }
  return count;
}

std::size_t ParentForest::height() const {
  std::vector<std::int32_t> depth(parent.size(), -1);
  std::size_t best = 0;
  for (VertexId v = 0; v < size(); ++v) {
    std::vector<VertexId> chain;
    VertexId cur = v;
    while (depth[cur] < 0 && parent[cur] != cur) {
      chain.push_back(cur);
      cur = parent[cur];
      if (chain.size() > parent.size()) {
        throw std::logic_error("parent forest contains a non-trivial cycle");
      }
    }
    std::int32_t base = depth[cur] < 0 ? 0 : depth[cur];
    if (depth[cur] < 0) depth[cur] = 0;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth[*it] = ++base;
    }
    best = std::max(best, static_cast<std::size_t>(depth[v]));
  }
  return best;
}

bool ParentForest::acyclic() const {
  // 0 = unseen, 1 = on current chain, 2 = settled.
  std::vector<std::uint8_t> mark(parent.size(), 0);
  for (VertexId v = 0; v < size(); ++v) {
    if (mark[v]) continue;
    std::vector<VertexId> chain;
    VertexId cur = v;
    while (mark[cur] == 0 && parent[cur] != cur) {
      mark[cur] = 1;
      chain.push_back(cur);
      cur = parent[cur];
    }
    if (mark[cur] == 1) return false;
    mark[cur] = 2;
    for (VertexId u : chain) mark[u] = 2;
  }
  return true;
}

Graph alter(const Graph& g, const ParentForest& d) {
  Graph out;
  out.n = g.n;
  out.arcs.reserve(g.arcs.size());
  for (const auto& [v, w] : g.arcs) {
    out.arcs.emplace_back(d.parent[v], d.parent[w]);
  }
  return out;
}

ParentForest shortcut(const ParentForest& d) {
  ParentForest out;
  out.parent.resize(d.parent.size());
  for (VertexId v = 0; v < d.size(); ++v) {
    out.parent[v] = d.parent[d.parent[v]];
  }
  return out;
}

std::vector<VertexId> bfs_ball(const Graph& g, VertexId u,
                               std::size_t radius) {
  std::vector<std::vector<VertexId>> adj(g.n);
  for (const auto& [v, w] : g.arcs) {
    if (v != w) adj[v].push_back(w);
  }
  std::vector<std::size_t> dist(g.n, SIZE_MAX);
  std::deque<VertexId> queue;
  dist[u] = 0;
  queue.push_back(u);
  std::vector<VertexId> ball{u};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (dist[v] == radius) continue;
    for (VertexId w : adj[v]) {
      if (dist[w] == SIZE_MAX) {
        dist[w] = dist[v] + 1;
        ball.push_back(w);
        queue.push_back(w);
      }
    }
  }
  std::sort(ball.begin(), ball.end());
  return ball;
}

namespace {

struct UnionFind {
  std::vector<VertexId> parent;
  explicit UnionFind(VertexId n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  VertexId find(VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent[b] = a;  // keep the minimum id as representative
    } else {
      parent[a] = b;
    }
  }
};

}  // namespace

std::vector<VertexId> oracle_components(const Graph& g) {
  UnionFind uf(g.n);
  for (const auto& [v, w] : g.arcs) uf.unite(v, w);
  std::vector<VertexId> label(g.n);
  for (VertexId v = 0; v < g.n; ++v) label[v] = uf.find(v);
  return label;
}

std::size_t diameter(const Graph& g) {
  std::vector<std::vector<VertexId>> adj(g.n);
  for (const auto& [v, w] : g.arcs) {
    if (v != w) adj[v].push_back(w);
  }
  std::size_t best = 0;
  std::vector<std::size_t> dist(g.n);
  std::deque<VertexId> queue;
  for (VertexId s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      best = std::max(best, dist[v]);
      for (VertexId w : adj[v]) {
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return best;
}

InvariantReport check_digraph_invariants(
    const ParentForest& d, const std::vector<std::int64_t>* levels) {
  if (!d.acyclic()) {
    // Name a vertex on a non-trivial cycle.
    for (VertexId v = 0; v < d.size(); ++v) {
      VertexId slow = v;
      VertexId fast = v;
      bool cyclic = false;
      do {
        slow = d.parent[slow];
        fast = d.parent[d.parent[fast]];
        if (slow != d.parent[slow] && slow == fast) {
          cyclic = true;
          break;
        }
      } while (slow != d.parent[slow] && fast != d.parent[fast]);
      if (cyclic) {
        return {false, "acyclicity violated at vertex " + std::to_string(slow)};
      }
    }
    return {false, "acyclicity violated"};
  }
  if (levels) {
    for (VertexId v = 0; v < d.size(); ++v) {
      if (d.parent[v] == v) continue;
      std::int64_t lv = (*levels)[v];
      std::int64_t lp = (*levels)[d.parent[v]];
      if (lv < 0 || lv >= lp) {
        return {false, "level order violated at vertex " + std::to_string(v) +
                           " (level " + std::to_string(lv) + " vs parent " +
                           std::to_string(lp) + ")"};
      }
    }
  }
  return {true, ""};
}

std::vector<VertexId> canonical_labels(const ParentForest& d) {
  std::vector<VertexId> by_root(d.size());
  for (VertexId v = 0; v < d.size(); ++v) by_root[v] = d.root_of(v);
  return canonical_labels(by_root);
}

std::vector<VertexId> canonical_labels(const std::vector<VertexId>& label_of) {
  VertexId n = static_cast<VertexId>(label_of.size());
  std::vector<VertexId> min_of(n);
  std::iota(min_of.begin(), min_of.end(), 0);
  for (VertexId v = 0; v < n; ++v) {
    min_of[label_of[v]] = std::min(min_of[label_of[v]], v);
  }
  std::vector<VertexId> out(n);
  for (VertexId v = 0; v < n; ++v) out[v] = min_of[label_of[v]];
  return out;
}

bool same_partition(const std::vector<VertexId>& a,
                    const std::vector<VertexId>& b) {
  if (a.size() != b.size()) return false;
  return canonical_labels(a) == canonical_labels(b);
}

Graph normalize_density(const Graph& g) {
  Graph out = g;
  VertexId cursor = 0;
  while (out.edge_count() < 2 * static_cast<std::size_t>(out.n)) {
    out.add_edge(cursor, cursor);
    cursor = (cursor + 1) % std::max<VertexId>(out.n, 1);
  }
  return out;
}

Graph read_graph(std::istream& in) {
  Graph g;
  std::size_t m = 0;
  if (!(in >> g.n >> m)) {
    throw std::runtime_error("graph parse error at line 1: expected 'n m'");
  }
  g.arcs.reserve(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    VertexId u = 0;
    VertexId v = 0;
    if (!(in >> u >> v)) {
      throw std::runtime_error("graph parse error at line " +
                               std::to_string(i + 2) + ": expected 'u v'");
    }
    if (u >= g.n || v >= g.n) {
      throw std::runtime_error("graph parse error at line " +
                               std::to_string(i + 2) + ": vertex out of range");
    }
    g.add_edge(u, v);
  }
  return g;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.edge_count() << '\n';
  for (std::size_t i = 0; i < g.arcs.size(); i += 2) {
    out << g.arcs[i].first << ' ' << g.arcs[i].second << '\n';
  }
}

}  // namespace pramcc
