#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pramcc {

using VertexId = std::uint32_t;

/// Undirected multigraph stored as mirrored arcs: every edge {v, w} appears
/// as both (v, w) and (w, v), self-loops included, so each arc can be owned
/// by one logical edge processor. Duplicates are legal and preserved.
struct Graph {
  VertexId n = 0;
  std::vector<std::pair<VertexId, VertexId>> arcs;

  std::size_t arc_count() const { return arcs.size(); }
  std::size_t edge_count() const { return arcs.size() / 2; }

  void add_edge(VertexId v, VertexId w) {
    arcs.emplace_back(v, w);
    arcs.emplace_back(w, v);
  }

  bool valid() const;
};

/// Parent pointers p[v] forming rooted trees; a root satisfies p[r] = r.
/// The only cycles ever allowed are these self-loops.
struct ParentForest {
  std::vector<VertexId> parent;

  static ParentForest identity(VertexId n) {
    ParentForest d;
    d.parent.resize(n);
    for (VertexId v = 0; v < n; ++v) d.parent[v] = v;
    return d;
  }

  VertexId size() const { return static_cast<VertexId>(parent.size()); }
  VertexId root_of(VertexId v) const;
  bool is_root(VertexId v) const { return parent[v] == v; }
  std::size_t root_count() const;
  /// Longest leaf-to-root chain length (flat forest has height <= 1).
  std::size_t height() const;
  bool acyclic() const;
};

/// Index into the input graph's arc array; identifies the original arc a
/// repeatedly altered arc descended from. Stable across the whole run.
using OriginalArcRef = std::uint32_t;

/// Replace every arc (v, w) by (p[v], p[w]). Arc count and ordering are
/// preserved, so original-arc references stay valid.
Graph alter(const Graph& g, const ParentForest& d);

/// Simultaneous p'[v] = p[p[v]] for all v (all reads before any write).
ParentForest shortcut(const ParentForest& d);

/// Exact set of vertices within distance `radius` of `u` (sequential BFS;
/// the oracle the hashing-based expansions are checked against).
std::vector<VertexId> bfs_ball(const Graph& g, VertexId u, std::size_t radius);

/// Ground-truth component labeling via union-find, canonicalized to the
/// minimum vertex id per component.
std::vector<VertexId> oracle_components(const Graph& g);

/// Maximum eccentricity over all components (all-source BFS; desk scale).
std::size_t diameter(const Graph& g);

struct InvariantReport {
  bool ok = true;
  std::string detail;  // names the offending vertex on failure
};

/// Asserts acyclicity of the parent forest; with levels supplied, also that
/// every non-root sits strictly below its parent's level.
InvariantReport check_digraph_invariants(
    const ParentForest& d,
    const std::vector<std::int64_t>* levels = nullptr);

/// Relabel so every vertex carries the minimum original id in its tree.
std::vector<VertexId> canonical_labels(const ParentForest& d);
std::vector<VertexId> canonical_labels(const std::vector<VertexId>& label_of);

/// Partition equality: do two labelings induce the same grouping?
bool same_partition(const std::vector<VertexId>& a,
                    const std::vector<VertexId>& b);

/// Pad with self-loops until the edge count reaches 2n (the algorithms'
/// standing density assumption). Loops never count as non-loop edges.
Graph normalize_density(const Graph& g);

/// Text format: first line "n m", then m lines "u v" (0-indexed).
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

}  // namespace pramcc
