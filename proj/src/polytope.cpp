#include "phylotoric/polytope.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "phylotoric/error.hpp"

namespace phylotoric {

std::vector<std::size_t> vertex_characters(const Tree& tree, const CyclicFactorization& group,
                                           const Network& network) {
  if (network.characters.size() != tree.num_edges()) throw ShapeMismatch("network needs one character per edge");
  std::vector<std::size_t> at(tree.num_vertices(), 0);
  for (std::size_t e = 0; e < tree.num_edges(); ++e) {
    const std::size_t chi = network.characters[e];
    at[tree.edge(e).child] = group.add(at[tree.edge(e).child], chi);
    at[tree.edge(e).parent] = group.subtract(at[tree.edge(e).parent], chi);
  }
  return at;
}

bool is_network(const Tree& tree, const CyclicFactorization& group, const Network& network) {
  if (network.characters.size() != tree.num_edges()) return false;
  for (std::size_t chi : network.characters)
    if (chi >= group.order()) return false;
  const auto at = vertex_characters(tree, group, network);
  for (std::size_t v : tree.inner())
    if (at[v] != 0) return false;
  return true;
}

bool is_socket(const CyclicFactorization& group, const Socket& socket) {
  std::size_t sum = 0;
  for (std::size_t chi : socket.characters) {
    if (chi >= group.order()) return false;
    sum = group.add(sum, chi);
  }
  return sum == 0;
}

Socket socket_of(const Tree& tree, const CyclicFactorization& group, const Network& network) {
  const auto at = vertex_characters(tree, group, network);
  Socket socket;
  for (std::size_t leaf : tree.leaves()) socket.characters.push_back(at[leaf]);
  return socket;
}

Network extend_socket(const Tree& tree, const CyclicFactorization& group, const Socket& socket) {
  if (socket.characters.size() != tree.leaves().size()) throw ShapeMismatch("socket needs one character per leaf");
  std::vector<std::size_t> below(tree.num_vertices(), 0);
  for (std::size_t i = 0; i < tree.leaves().size(); ++i) below[tree.leaves()[i]] = socket.characters[i];
  const auto order = tree.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t e = tree.incoming_edge(*it);
    if (e == Tree::npos) continue;
    const std::size_t parent = tree.edge(e).parent;
    if (tree.is_leaf(parent)) continue;  // degree-one root keeps its own socket character
    below[parent] = group.add(below[parent], below[*it]);
  }
  Network network;
  for (std::size_t e = 0; e < tree.num_edges(); ++e) network.characters.push_back(below[tree.edge(e).child]);
  return network;
}

std::size_t network_count(const Tree& tree, const CyclicFactorization& group) {
  const std::size_t free_edges = tree.num_edges() - tree.inner().size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < free_edges; ++i) {
    if (count > std::numeric_limits<std::size_t>::max() / group.order()) return std::numeric_limits<std::size_t>::max();
    count *= group.order();
  }
  return count;
}

void for_each_network(const Tree& tree, const CyclicFactorization& group,
                      const std::function<void(const Network&)>& visit, std::size_t cap) {
  const std::size_t total = network_count(tree, group);
  if (total > cap)
    throw CapExceeded("network count " + (total == std::numeric_limits<std::size_t>::max() ? std::string("(overflow)")
                                                                                           : std::to_string(total)) +
                      " exceeds cap " + std::to_string(cap));
  const EdgeSelection chosen = choose_edges(tree);
  std::vector<bool> is_chosen(tree.num_edges(), false);
  for (const auto& [v, e] : chosen) is_chosen[e] = true;
  std::vector<std::size_t> free_edges;
  for (std::size_t e = 0; e < tree.num_edges(); ++e)
    if (!is_chosen[e]) free_edges.push_back(e);

  std::vector<std::size_t> solve_order;  // inner vertices, parents first
  for (std::size_t v : tree.topological_order())
    if (chosen.count(v)) solve_order.push_back(v);

  const std::size_t order = group.order();
  std::vector<std::size_t> counter(free_edges.size(), 0);
  Network network{std::vector<std::size_t>(tree.num_edges(), 0)};
  for (;;) {
    for (std::size_t i = 0; i < free_edges.size(); ++i) network.characters[free_edges[i]] = counter[i];
    for (std::size_t v : solve_order) {
      const std::size_t in = tree.incoming_edge(v);
      std::size_t value = in == Tree::npos ? 0 : network.characters[in];
      const std::size_t target = chosen.at(v);
      for (std::size_t e : tree.outgoing_edges(v))
        if (e != target) value = group.subtract(value, network.characters[e]);
      network.characters[target] = value;
    }
    visit(network);

    std::size_t pos = free_edges.size();
    while (pos > 0) {
      --pos;
      if (++counter[pos] < order) break;
      counter[pos] = 0;
      if (pos == 0) return;
    }
    if (free_edges.empty()) return;
  }
}

std::vector<Network> enumerate_networks(const Tree& tree, const CyclicFactorization& group, std::size_t cap) {
  std::vector<Network> out;
  for_each_network(tree, group, [&](const Network& n) { out.push_back(n); }, cap);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Socket> enumerate_sockets(const Tree& tree, const CyclicFactorization& group, std::size_t cap) {
  const std::size_t leaves = tree.leaves().size();
  const std::size_t order = group.order();
  // there are |H|^(leaves - 1) sockets
  std::size_t total = 1;
  for (std::size_t i = 1; i < leaves; ++i) {
    total *= order;
    if (total > cap) throw CapExceeded("socket count exceeds cap " + std::to_string(cap));
  }
  std::vector<Socket> out;
  Socket socket{std::vector<std::size_t>(leaves, 0)};
  for (;;) {
    if (is_socket(group, socket)) out.push_back(socket);
    std::size_t pos = leaves;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++socket.characters[pos] < order) {
        done = false;
        break;
      }
      socket.characters[pos] = 0;
    }
    if (done) break;
  }
  return out;
}

NetworkSocketBijection network_socket_bijection(const Tree& tree, const CyclicFactorization& group,
                                                std::size_t cap) {
  NetworkSocketBijection result;
  result.networks = enumerate_networks(tree, group, cap);
  std::vector<Socket> direct = enumerate_sockets(tree, group, cap);
  for (const auto& n : result.networks) {
    if (!is_network(tree, group, n)) throw BijectionFailure("enumerated assignment is not a network");
    Socket s = socket_of(tree, group, n);
    if (extend_socket(tree, group, s) != n) throw BijectionFailure("socket does not extend back to its network");
    result.sockets.push_back(std::move(s));
  }
  std::vector<Socket> image = result.sockets;
  std::sort(image.begin(), image.end());
  if (std::adjacent_find(image.begin(), image.end()) != image.end())
    throw BijectionFailure("two networks restrict to the same socket");
  if (image != direct) throw BijectionFailure("restriction to leaves misses some sockets");
  return result;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Flavor flavor) { return flavor == Flavor::Abelian ? "abelian" : "projected"; }

std::size_t ModelPolytope::ambient_dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += b.width;
  return d;
}

std::size_t ModelPolytope::block_offset(std::size_t block) const {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < block; ++i) offset += blocks[i].width;
  return offset;
}

std::size_t ModelPolytope::block_of_edge(std::size_t edge) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].edge == edge) return i;
  throw InputError("polytope has no block for edge " + std::to_string(edge));
}

namespace {

void canonicalize(std::vector<Point>& vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
}

}  // namespace

ModelPolytope build_polytope(const Tree& tree, const GroupModel& model, std::size_t cap) {
  const CyclicFactorization& group = model.abelian();
  const std::size_t width = group.order();
  ModelPolytope polytope;
  polytope.flavor = Flavor::Abelian;
  polytope.tree = tree.to_newick();
  polytope.group = group.to_string();
  for (std::size_t e = 0; e < tree.num_edges(); ++e) polytope.blocks.push_back({e, width});
  for_each_network(
      tree, group,
      [&](const Network& network) {
        Point v(tree.num_edges() * width, 0);
        for (std::size_t e = 0; e < tree.num_edges(); ++e) v[e * width + network.characters[e]] = 1;
        polytope.vertices.push_back(std::move(v));
      },
      cap);
  canonicalize(polytope.vertices);
  return polytope;
}

ModelPolytope project_orbits(const ModelPolytope& polytope, const GroupModel& model) {
  if (polytope.flavor == Flavor::Projected) return polytope;
  const std::size_t order = model.abelian().order();
  const std::size_t orbits = model.dual_orbits().size();
  for (const auto& b : polytope.blocks)
    if (b.width != order) throw ShapeMismatch("polytope blocks do not match the model's abelian group");

  ModelPolytope out;
  out.flavor = Flavor::Projected;
  out.group = polytope.group;
  out.tree = polytope.tree;
  for (const auto& b : polytope.blocks) out.blocks.push_back({b.edge, orbits});
  for (const auto& v : polytope.vertices) {
    Point image(out.blocks.size() * orbits, 0);
    for (std::size_t b = 0; b < polytope.blocks.size(); ++b)
      for (std::size_t chi = 0; chi < order; ++chi)
        image[b * orbits + model.dual_orbit_of(chi)] += v[b * order + chi];
    out.vertices.push_back(std::move(image));
  }
  canonicalize(out.vertices);
  return out;
}

ModelPolytope negate_blocks(const ModelPolytope& polytope, const CyclicFactorization& group,
                            const std::set<std::size_t>& edges) {
  if (polytope.flavor != Flavor::Abelian) throw InputError("negate_blocks needs an abelian-flavor polytope");
  ModelPolytope out = polytope;
  for (auto& v : out.vertices) {
    for (std::size_t b = 0; b < out.blocks.size(); ++b) {
      if (!edges.count(out.blocks[b].edge)) continue;
      const std::size_t offset = out.block_offset(b);
      const Point old(v.begin() + offset, v.begin() + offset + out.blocks[b].width);
      for (std::size_t chi = 0; chi < old.size(); ++chi) v[offset + group.negate(chi)] = old[chi];
    }
  }
  canonicalize(out.vertices);
  return out;
}

ModelPolytope permute_blocks(const ModelPolytope& polytope, const std::vector<std::size_t>& new_edges) {
  if (new_edges.size() != polytope.blocks.size()) throw ShapeMismatch("one new edge label per block required");
  std::vector<std::size_t> order(polytope.blocks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return new_edges[a] < new_edges[b]; });

  ModelPolytope out = polytope;
  out.blocks.clear();
  for (std::size_t b : order) out.blocks.push_back({new_edges[b], polytope.blocks[b].width});
  for (auto& v : out.vertices) {
    Point moved;
    moved.reserve(v.size());
    for (std::size_t b : order) {
      const std::size_t offset = polytope.block_offset(b);
      moved.insert(moved.end(), v.begin() + offset, v.begin() + offset + polytope.blocks[b].width);
    }
    v = std::move(moved);
  }
  canonicalize(out.vertices);
  return out;
}

Network decode_vertex(const ModelPolytope& polytope, const Point& vertex) {
  if (polytope.flavor != Flavor::Abelian) throw InputError("only abelian-flavor vertices decode to networks");
  if (vertex.size() != polytope.ambient_dim()) throw ShapeMismatch("vertex has the wrong dimension");
  std::size_t max_edge = 0;
  for (const auto& b : polytope.blocks) max_edge = std::max(max_edge, b.edge);
  Network network{std::vector<std::size_t>(max_edge + 1, 0)};
  for (std::size_t b = 0; b < polytope.blocks.size(); ++b) {
    const std::size_t offset = polytope.block_offset(b);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < polytope.blocks[b].width; ++i) {
      const auto x = vertex[offset + i];
      if (x != 0 && x != 1) throw InputError("vertex is not 0/1");
      if (x == 1) {
        network.characters[polytope.blocks[b].edge] = i;
        ++ones;
      }
    }
    if (ones != 1) throw InputError("vertex block is not a unit vector");
  }
  return network;
}

void write_vertex_file(std::ostream& os, const ModelPolytope& polytope) {
  std::vector<Point> sorted = polytope.vertices;
  std::sort(sorted.begin(), sorted.end());
  os << "# group=" << polytope.group << " tree=" << polytope.tree << " flavor=" << to_string(polytope.flavor)
     << " dim=" << polytope.ambient_dim() << " count=" << sorted.size() << '\n';
  for (const auto& v : sorted) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ' ';
      os << v[i];
    }
    os << '\n';
  }
}

std::vector<Point> parse_vertex_lines(std::string_view text) {
  std::vector<Point> out;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_offset = offset;
    offset = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    Point p;
    std::size_t pos = first;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',' || line[pos] == '\r'))
        ++pos;
      if (pos == line.size()) break;
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
      if (ec != std::errc{}) throw ParseError("expected integer in vertex line", line_offset + pos);
      pos = static_cast<std::size_t>(ptr - line.data());
      p.push_back(value);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace phylotoric
