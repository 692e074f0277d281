#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phylotoric/groups.hpp"
#include "phylotoric/trees.hpp"

namespace phylotoric {

using Point = std::vector<std::int64_t>;

/// Character (canonical index into H's dual) on every edge, indexed by edge.
/// At each inner vertex the incoming character equals the sum of the
/// outgoing ones (at the root the outgoing ones sum to zero).
struct Network {
  std::vector<std::size_t> characters;

  auto operator<=>(const Network&) const = default;
};

/// Character on every leaf, in tree.leaves() order, summing to zero.
struct Socket {
  std::vector<std::size_t> characters;

  auto operator<=>(const Socket&) const = default;
};

/// Signed character sum at each vertex: incoming edge counts +, outgoing -.
std::vector<std::size_t> vertex_characters(const Tree& tree, const CyclicFactorization& group,
                                           const Network& network);

bool is_network(const Tree& tree, const CyclicFactorization& group, const Network& network);
bool is_socket(const CyclicFactorization& group, const Socket& socket);

/// Restriction of a network to the leaves.
Socket socket_of(const Tree& tree, const CyclicFactorization& group, const Network& network);
/// The unique network restricting to `socket`: each edge carries the sum of
/// the socket characters on the leaves below it.
Network extend_socket(const Tree& tree, const CyclicFactorization& group, const Socket& socket);

constexpr std::size_t kDefaultVertexCap = 1'000'000;

/// |H|^(|E| - |N|), saturating at SIZE_MAX.
std::size_t network_count(const Tree& tree, const CyclicFactorization& group);

/// Streams every network: all assignments of the non-chosen edges, with each
/// chosen edge solved from its vertex condition (parents before children).
/// Emission order follows the free-edge odometer, not canonical order.
/// Throws CapExceeded if more than `cap` networks would be produced.
void for_each_network(const Tree& tree, const CyclicFactorization& group,
                      const std::function<void(const Network&)>& visit, std::size_t cap = kDefaultVertexCap);

/// All networks in lexicographic order.
std::vector<Network> enumerate_networks(const Tree& tree, const CyclicFactorization& group,
                                        std::size_t cap = kDefaultVertexCap);

/// All sockets in lexicographic order, enumerated directly on the leaves.
std::vector<Socket> enumerate_sockets(const Tree& tree, const CyclicFactorization& group,
                                      std::size_t cap = kDefaultVertexCap);

struct NetworkSocketBijection {
  std::vector<Network> networks;  // lexicographic
  std::vector<Socket> sockets;    // sockets[i] = socket_of(networks[i])
};

/// Pairs networks with sockets and checks both directions.
/// Throws BijectionFailure if restriction is not a bijection.
NetworkSocketBijection network_socket_bijection(const Tree& tree, const CyclicFactorization& group,
                                                std::size_t cap = kDefaultVertexCap);

enum class Flavor { Abelian, Projected };

std::string_view to_string(Flavor flavor);

/// Coordinates come in one block per edge; within a block, coordinate i
/// stands for character i (abelian) or dual orbit i (projected).
struct CoordinateBlock {
  std::size_t edge;
  std::size_t width;

  friend bool operator==(const CoordinateBlock&, const CoordinateBlock&) = default;
};

struct ModelPolytope {
  std::vector<Point> vertices;  // sorted, distinct
  std::vector<CoordinateBlock> blocks;
  Flavor flavor = Flavor::Abelian;
  std::string group;  // provenance, e.g. "K3P"
  std::string tree;   // provenance, Newick

  std::size_t ambient_dim() const;
  std::size_t block_offset(std::size_t block) const;
  /// Position in `blocks` of the block for `edge`; throws if absent.
  std::size_t block_of_edge(std::size_t edge) const;
};

/// One 0/1 vertex per network: block e holds the unit vector of the
/// character on edge e (characters in canonical order, trivial first).
ModelPolytope build_polytope(const Tree& tree, const GroupModel& model, std::size_t cap = kDefaultVertexCap);

/// Sums, within each block, the coordinates of characters lying in one dual
/// orbit (orbits ordered by minimal member) and drops repeated images.
/// Identity on projected input.
ModelPolytope project_orbits(const ModelPolytope& polytope, const GroupModel& model);

/// Relabels the listed blocks of an abelian polytope by chi -> -chi, the
/// effect of reversing those edges.
ModelPolytope negate_blocks(const ModelPolytope& polytope, const CyclicFactorization& group,
                            const std::set<std::size_t>& edges);

/// Gives block i the edge label new_edges[i], then reorders the coordinate
/// blocks by increasing edge label.
ModelPolytope permute_blocks(const ModelPolytope& polytope, const std::vector<std::size_t>& new_edges);

/// Reads a vertex back as a network (abelian flavor only).
Network decode_vertex(const ModelPolytope& polytope, const Point& vertex);

/// Writes the vertex file: a "# group=.. tree=.. flavor=.. dim=.. count=.."
/// header, then one space-separated vertex per line in lexicographic order.
void write_vertex_file(std::ostream& os, const ModelPolytope& polytope);

/// Parses vertex lines (ignores blank lines and '#' lines); entries may be
/// separated by spaces or commas.
std::vector<Point> parse_vertex_lines(std::string_view text);

}  // namespace phylotoric
