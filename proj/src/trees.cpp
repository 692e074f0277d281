#include "phylotoric/trees.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "phylotoric/error.hpp"

namespace phylotoric {

Tree::Tree(std::size_t num_vertices, std::size_t root, std::vector<Edge> edges,
           std::vector<std::string> labels)
    : root_(root), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (num_vertices < 2) throw InputError("a tree needs at least one edge");
  if (labels_.size() != num_vertices) throw InputError("one label slot per vertex required");
  if (root_ >= num_vertices) throw InputError("root out of range");
  if (edges_.size() != num_vertices - 1) throw InputError("a tree on n vertices has n - 1 edges");

  degree_.assign(num_vertices, 0);
  incoming_.assign(num_vertices, npos);
  outgoing_.assign(num_vertices, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [p, c] = edges_[e];
    if (p >= num_vertices || c >= num_vertices || p == c) throw InputError("bad edge endpoints");
    if (incoming_[c] != npos) throw InputError("vertex " + std::to_string(c) + " has two parents");
    incoming_[c] = e;
    outgoing_[p].push_back(e);
    ++degree_[p];
    ++degree_[c];
  }
  if (incoming_[root_] != npos) throw InputError("root has an incoming edge");

  // n - 1 edges with one parent each: connected from the root iff acyclic.
  std::vector<bool> seen(num_vertices, false);
  std::vector<std::size_t> stack{root_};
  seen[root_] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e : outgoing_[v]) {
      const std::size_t c = edges_[e].child;
      if (seen[c]) throw InputError("edges contain a cycle");
      seen[c] = true;
      ++reached;
      stack.push_back(c);
    }
  }
  if (reached != num_vertices) throw InputError("tree is not connected");

  for (std::size_t v = 0; v < num_vertices; ++v) (degree_[v] == 1 ? leaves_ : inner_).push_back(v);
}

std::size_t Tree::leaf_edge(std::size_t leaf) const {
  if (leaf >= num_vertices() || !is_leaf(leaf))
    throw TreeError(TreeError::Kind::NotALeaf, "vertex " + std::to_string(leaf) + " is not a leaf");
  return incoming_[leaf] != npos ? incoming_[leaf] : outgoing_[leaf].front();
}

std::vector<std::size_t> Tree::topological_order() const {
  std::vector<std::size_t> order{root_};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t e : outgoing_[order[i]]) order.push_back(edges_[e].child);
  return order;
}

std::size_t Tree::vertex_by_label(std::string_view label) const {
  for (std::size_t v = 0; v < labels_.size(); ++v)
    if (!labels_[v].empty() && labels_[v] == label) return v;
  throw TreeError(TreeError::Kind::UnknownVertex, "no vertex labelled '" + std::string(label) + "'");
}

std::string Tree::to_newick() const {
  std::string out;
  std::function<void(std::size_t)> write = [&](std::size_t v) {
    if (outgoing_[v].empty()) {
      out += labels_[v];
      return;
    }
    out += '(';
    for (std::size_t i = 0; i < outgoing_[v].size(); ++i) {
      if (i) out += ',';
      write(edges_[outgoing_[v][i]].child);
    }
    out += ')';
    if (v == root_ && is_leaf(v)) out += labels_[v];
  };
  write(root_);
  out += ';';
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class NewickParser {
public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  Tree parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty input", pos_);
    const std::size_t root = parse_node(Tree::npos);
    skip_space();
    if (pos_ == text_.size()) throw ParseError("missing terminating ';'", pos_);
    if (text_[pos_] == ')') throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
    if (text_[pos_] != ';') throw ParseError("expected ';'", pos_);
    ++pos_;
    skip_space();
    if (pos_ != text_.size()) throw ParseError("trailing characters after ';'", pos_);

    const std::size_t n = labels_.size();
    if (n < 2) throw ParseError("tree has no edges", 0);
    const bool root_is_leaf = children_count_[root] == 1;
    if (!root_labelled_ && root_is_leaf) throw ParseError("single-child root needs a label", root_label_pos_);
    if (root_labelled_ && !root_is_leaf)
      throw ParseError("labels on inner vertices are not supported", root_label_pos_);
    return Tree(n, root, std::move(edges_), std::move(labels_));
  }

private:
  static bool is_label_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' && c != ';' &&
           c != ':' && c != '[' && c != ']' && c != '\'' && c != '"';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_label() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void reject_unsupported() {
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == ':') throw ParseError("branch lengths are not supported", pos_);
    if (c == '\'' || c == '"') throw ParseError("quoted labels are not supported", pos_);
    if (c == '[') throw ParseError("comments are not supported", pos_);
  }

  std::size_t new_vertex(std::size_t parent) {
    const std::size_t v = labels_.size();
    labels_.emplace_back();
    children_count_.push_back(0);
    if (parent != Tree::npos) {
      edges_.push_back({parent, v});
      ++children_count_[parent];
    }
    return v;
  }

  std::size_t parse_node(std::size_t parent) {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unbalanced parentheses: unexpected end of input", pos_);
    const std::size_t v = new_vertex(parent);
    if (text_[pos_] == '(') {
      const std::size_t open = pos_;
      ++pos_;
      for (;;) {
        skip_space();
        if (pos_ == text_.size())
          throw ParseError("unbalanced parentheses: unexpected end of input", pos_);
        if (text_[pos_] == ',' || text_[pos_] == ')') throw ParseError("empty clade", pos_);
        parse_node(v);
        skip_space();
        if (pos_ == text_.size())
          throw ParseError("unbalanced parentheses: '(' at byte " + std::to_string(open) + " never closed", pos_);
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        reject_unsupported();
        throw ParseError("expected ',' or ')'", pos_);
      }
      skip_space();
      reject_unsupported();
      const std::size_t label_pos = pos_;
      std::string label = read_label();
      if (!label.empty()) {
        if (parent != Tree::npos) throw ParseError("labels on inner vertices are not supported", label_pos);
        root_labelled_ = true;
        root_label_pos_ = label_pos;
        register_label(label, label_pos);
        labels_[v] = std::move(label);
      } else if (parent == Tree::npos) {
        root_label_pos_ = label_pos;
      }
      return v;
    }
    reject_unsupported();
    const std::size_t label_pos = pos_;
    std::string label = read_label();
    if (label.empty()) throw ParseError("expected leaf label or '('", pos_);
    register_label(label, label_pos);
    labels_[v] = std::move(label);
    skip_space();
    reject_unsupported();
    return v;
  }

  void register_label(const std::string& label, std::size_t at) {
    if (!seen_labels_.insert(label).second) throw ParseError("duplicate leaf label '" + label + "'", at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::size_t> children_count_;
  std::vector<Tree::Edge> edges_;
  std::set<std::string> seen_labels_;
  bool root_labelled_ = false;
  std::size_t root_label_pos_ = 0;
};

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(const Tree& tree) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(tree.num_vertices());
  for (std::size_t e = 0; e < tree.num_edges(); ++e) {
    adj[tree.edge(e).parent].emplace_back(tree.edge(e).child, e);
    adj[tree.edge(e).child].emplace_back(tree.edge(e).parent, e);
  }
  return adj;
}

std::size_t neighbour_of_leaf(const Tree& tree, std::size_t leaf) {
  const Tree::Edge& e = tree.edge(tree.leaf_edge(leaf));
  return e.parent == leaf ? e.child : e.parent;
}

}  // namespace

Tree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

Tree reorient(const Tree& tree, std::size_t new_root) {
  if (new_root >= tree.num_vertices())
    throw TreeError(TreeError::Kind::UnknownVertex, "vertex " + std::to_string(new_root) + " not in tree");
  const auto adj = adjacency(tree);
  std::vector<Tree::Edge> edges(tree.num_edges());
  std::vector<bool> seen(tree.num_vertices(), false);
  std::vector<std::size_t> queue{new_root};
  seen[new_root] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const std::size_t v = queue[i];
    for (auto [w, e] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      edges[e] = {v, w};
      queue.push_back(w);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < tree.num_vertices(); ++v) labels.push_back(tree.label(v));
  return Tree(tree.num_vertices(), new_root, std::move(edges), std::move(labels));
}

EdgeSelection choose_edges(const Tree& tree) {
  EdgeSelection chosen;
  for (std::size_t v : tree.inner()) {
    const auto& out = tree.outgoing_edges(v);
    chosen[v] = *std::min_element(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      return tree.edge(a).child < tree.edge(b).child;
    });
  }
  return chosen;
}

GlueResult glue(const Tree& t1, std::size_t leaf1, const Tree& t2, std::size_t leaf2) {
  if (leaf1 >= t1.num_vertices() || !t1.is_leaf(leaf1))
    throw TreeError(TreeError::Kind::NotALeaf, "first glue vertex is not a leaf");
  if (leaf2 >= t2.num_vertices() || !t2.is_leaf(leaf2))
    throw TreeError(TreeError::Kind::NotALeaf, "second glue vertex is not a leaf");

  const std::size_t e1 = t1.leaf_edge(leaf1);
  const std::size_t e2 = t2.leaf_edge(leaf2);
  const std::size_t p1 = neighbour_of_leaf(t1, leaf1);
  const std::size_t p2 = neighbour_of_leaf(t2, leaf2);

  // Provisional ids: t1 vertices, then t2 vertices offset by n1; the two glue
  // leaves are dropped. Undirected edges carry their source edge.
  const std::size_t n1 = t1.num_vertices();
  const std::size_t n = n1 + t2.num_vertices();
  struct Source {
    int tree;  // 1, 2, or 0 for the glued edge
    std::size_t edge;
  };
  std::vector<std::vector<std::pair<std::size_t, Source>>> adj(n);
  auto link = [&](std::size_t a, std::size_t b, Source s) {
    adj[a].emplace_back(b, s);
    adj[b].emplace_back(a, s);
  };
  for (std::size_t e = 0; e < t1.num_edges(); ++e)
    if (e != e1) link(t1.edge(e).parent, t1.edge(e).child, {1, e});
  for (std::size_t e = 0; e < t2.num_edges(); ++e)
    if (e != e2) link(n1 + t2.edge(e).parent, n1 + t2.edge(e).child, {2, e});
  link(p1, n1 + p2, {0, 0});
  for (auto& list : adj)
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const std::size_t old_root = t1.root() == leaf1 ? p1 : t1.root();

  // Labels of t2 that clash with a surviving label of t1 get a "_2" suffix.
  std::set<std::string> taken;
  for (std::size_t v : t1.leaves())
    if (v != leaf1) taken.insert(t1.label(v));
  auto second_label = [&](std::size_t v) {
    std::string label = t2.label(v);
    if (label.empty()) return label;
    while (taken.count(label)) label += "_2";
    return label;
  };

  // Depth-first preorder renumbering; edge i enters new vertex i + 1.
  std::vector<std::size_t> new_id(n, Tree::npos);
  std::vector<std::string> labels;
  std::vector<Tree::Edge> edges;
  GlueResult result{Tree(2, 0, std::vector<Tree::Edge>{Tree::Edge{0, 1}}, std::vector<std::string>(2)), std::vector<std::size_t>(t1.num_edges()),
                    std::vector<bool>(t1.num_edges(), false), std::vector<std::size_t>(t2.num_edges()), std::vector<bool>(t2.num_edges(), false), 0};
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    for (const auto& [w, source] : adj[v]) {
      if (new_id[w] != Tree::npos) continue;
      new_id[w] = labels.size();
      labels.push_back(w < n1 ? t1.label(w) : second_label(w - n1));
      const std::size_t edge_index = edges.size();
      edges.push_back({new_id[v], new_id[w]});
      if (source.tree == 0) {
        result.glued_edge = edge_index;
        result.first_edges[e1] = edge_index;
        result.first_flipped[e1] = t1.edge(e1).parent == leaf1;
        result.second_edges[e2] = edge_index;
        // In t2 the leaf edge points at p2 from the leaf iff the leaf is its parent.
        result.second_flipped[e2] = t2.edge(e2).parent != leaf2;
      } else if (source.tree == 1) {
        result.first_edges[source.edge] = edge_index;
        result.first_flipped[source.edge] = t1.edge(source.edge).parent != v;
      } else {
        result.second_edges[source.edge] = edge_index;
        result.second_flipped[source.edge] = t2.edge(source.edge).parent + n1 != v;
      }
      visit(w);
    }
  };
  new_id[old_root] = 0;
  labels.push_back(old_root < n1 ? t1.label(old_root) : t2.label(old_root - n1));
  visit(old_root);
  // The dropped leaves are never reached; everything else must be.
  if (labels.size() != n - 2) throw std::logic_error("glue: disconnected result");
  const std::size_t count = labels.size();
  result.tree = Tree(count, 0, std::move(edges), std::move(labels));
  return result;
}

}  // namespace phylotoric
