#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace phylotoric {

/// Rooted tree with edges directed away from the root.
///
/// Vertices are 0..n-1. A vertex of degree one is a leaf (this includes a
/// degree-one root); every other vertex is inner. Leaves carry labels.
/// Edge indices are stable under reorient(), so per-edge data survives a
/// change of root.
class Tree {
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Edge {
    std::size_t parent;
    std::size_t child;

    friend bool operator==(const Edge&, const Edge&) = default;
  };

  /// Validates connectivity, acyclicity and the one-parent rule.
  /// Throws InputError on violations.
  Tree(std::size_t num_vertices, std::size_t root, std::vector<Edge> edges,
       std::vector<std::string> labels);

  std::size_t num_vertices() const noexcept { return labels_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  const std::string& label(std::size_t v) const { return labels_[v]; }
  std::size_t degree(std::size_t v) const { return degree_[v]; }
  bool is_leaf(std::size_t v) const { return degree_[v] == 1; }

  /// Leaves and inner vertices in increasing vertex order.
  const std::vector<std::size_t>& leaves() const noexcept { return leaves_; }
  const std::vector<std::size_t>& inner() const noexcept { return inner_; }

  /// Edge into v, or npos for the root.
  std::size_t incoming_edge(std::size_t v) const { return incoming_[v]; }
  const std::vector<std::size_t>& outgoing_edges(std::size_t v) const { return outgoing_[v]; }
  /// The unique edge incident to a leaf.
  std::size_t leaf_edge(std::size_t leaf) const;

  /// Vertices in breadth-first order from the root (parents before children).
  std::vector<std::size_t> topological_order() const;

  /// Vertex with the given leaf label; throws TreeError(UnknownVertex).
  std::size_t vertex_by_label(std::string_view label) const;

  /// Newick serialization; a degree-one root is written as "(subtree)label".
  std::string to_newick() const;

private:
  std::size_t root_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> degree_;
  std::vector<std::size_t> incoming_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::size_t> leaves_;
  std::vector<std::size_t> inner_;
};

/// Parses the Newick subset: labels on leaves only, no branch lengths, no
/// quoting, terminated by ';'. Vertices are numbered depth-first with children
/// in source order, so the root is 0 and edge i enters vertex i + 1.
/// A root with a single child may carry a label ("(A)B;" is the one-edge tree).
/// Throws ParseError with a byte offset.
Tree parse_newick(std::string_view text);

/// Same undirected tree with edges directed away from new_root; vertex and
/// edge indices are unchanged. Throws TreeError(UnknownVertex).
Tree reorient(const Tree& tree, std::size_t new_root);

/// One outgoing edge per inner vertex (the one with the smallest child index).
using EdgeSelection = std::map<std::size_t, std::size_t>;
EdgeSelection choose_edges(const Tree& tree);

struct GlueResult {
  Tree tree;
  /// Result edge for each edge of the first input tree.
  std::vector<std::size_t> first_edges;
  /// Whether the first tree's edge points the other way in the result (only
  /// possible when t1 is rooted at leaf1).
  std::vector<bool> first_flipped;
  /// Result edge for each edge of the second input tree.
  std::vector<std::size_t> second_edges;
  /// Whether the second tree's edge points the other way in the result.
  std::vector<bool> second_flipped;
  /// The result edge formed from the two leaf edges.
  std::size_t glued_edge;
};

/// Identifies the edge of leaf1 in t1 with the edge of leaf2 in t2 and drops
/// both leaves. The result keeps t1's root; t2's part is directed away from
/// the glued edge. Leaf labels of t2 already used in t1 get a "_2" suffix.
/// Throws TreeError(NotALeaf).
GlueResult glue(const Tree& t1, std::size_t leaf1, const Tree& t2, std::size_t leaf2);

}  // namespace phylotoric
