#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "phylotoric/error.hpp"
#include "phylotoric/trees.hpp"

using namespace phylotoric;

namespace {

std::set<std::pair<std::size_t, std::size_t>> undirected(const Tree& t) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : t.edges()) out.insert(std::minmax(e.parent, e.child));
  return out;
}

std::size_t parse_error_offset(const char* text) {
  try {
    parse_newick(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("claw and quartet") {
  const Tree claw = parse_newick("(A,B,C);");
  CHECK(claw.num_vertices() == 4);
  CHECK(claw.num_edges() == 3);
  CHECK(claw.inner() == std::vector<std::size_t>{0});
  CHECK(claw.leaves().size() == 3);
  CHECK(claw.label(1) == "A");
  CHECK(claw.to_newick() == "(A,B,C);");

  const Tree quartet = parse_newick("((A,B),(C,D));");
  CHECK(quartet.num_edges() == 6);
  CHECK(quartet.inner().size() == 3);
  const Tree unrooted = parse_newick("((A,B),C,D);");
  CHECK(unrooted.num_edges() == 5);
  CHECK(unrooted.inner().size() == 2);
  for (std::size_t e = 0; e < quartet.num_edges(); ++e) CHECK(quartet.edge(e).child == e + 1);
}

TEST_CASE("edge count and connectivity") {
  for (const char* text : {"(A,B,C);", "((A,B),(C,D));", "((A,B),C,(D,E));", "(A,(B,(C,(D,E))));", "(A)B;",
                           "(A,B,C,D,E,F);"}) {
    const Tree t = parse_newick(text);
    CHECK(t.num_edges() == t.num_vertices() - 1);
    CHECK(t.topological_order().size() == t.num_vertices());
    CHECK(parse_newick(t.to_newick()).edges() == t.edges());
  }
}

TEST_CASE("single-edge tree") {
  const Tree t = parse_newick("(A)B;");
  CHECK(t.num_edges() == 1);
  CHECK(t.leaves().size() == 2);
  CHECK(t.inner().empty());
  CHECK(t.is_leaf(t.root()));
  CHECK(t.to_newick() == "(A)B;");
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_WITH_AS(parse_newick("(A,B,"), doctest::Contains("unbalanced"), ParseError);
  CHECK(parse_error_offset("(A,B,") == 5);
  CHECK_THROWS_AS(parse_newick("(A,,B);"), ParseError);
  CHECK_THROWS_AS(parse_newick("();"), ParseError);
  CHECK_THROWS_WITH_AS(parse_newick("(A,A);"), doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_AS(parse_newick("(A,B)"), ParseError);
  CHECK_THROWS_AS(parse_newick("(A:0.1,B);"), ParseError);
  CHECK_THROWS_AS(parse_newick("(A,B));"), ParseError);
  CHECK_THROWS_AS(parse_newick("A;"), ParseError);
}

TEST_CASE("reorient") {
  const Tree claw = parse_newick("(A,B,C);");
  CHECK(reorient(claw, 0).edges() == claw.edges());

  const Tree t = parse_newick("((A,B),C,D);");
  // vertex 1 is the other inner vertex
  const Tree r = reorient(t, 1);
  CHECK(r.root() == 1);
  CHECK(undirected(r) == undirected(t));
  CHECK(r.edge(0).parent == 1);
  CHECK(r.edge(0).child == 0);
  for (std::size_t e = 1; e < t.num_edges(); ++e) CHECK(r.edge(e) == t.edge(e));
  CHECK(reorient(r, 0).edges() == t.edges());

  for (std::size_t v = 0; v < t.num_vertices(); ++v) CHECK(undirected(reorient(t, v)) == undirected(t));
  CHECK_THROWS_AS(reorient(t, 99), TreeError);
}

TEST_CASE("chosen edges") {
  const Tree t = parse_newick("((A,B),(C,D));");
  const EdgeSelection chosen = choose_edges(t);
  CHECK(chosen.size() == t.inner().size());
  std::set<std::size_t> distinct;
  for (const auto& [v, e] : chosen) {
    CHECK(t.edge(e).parent == v);
    distinct.insert(e);
  }
  CHECK(distinct.size() == chosen.size());
  CHECK(chosen.at(0) == 0);
}

TEST_CASE("gluing claws") {
  const Tree claw = parse_newick("(A,B,C);");
  const GlueResult g = glue(claw, claw.vertex_by_label("C"), claw, claw.vertex_by_label("A"));
  CHECK(g.tree.num_edges() == 5);
  CHECK(g.tree.leaves().size() == 4);
  CHECK(g.tree.inner().size() == 2);
  CHECK(g.first_edges[2] == g.glued_edge);
  CHECK(g.second_edges[0] == g.glued_edge);
  std::set<std::size_t> image(g.first_edges.begin(), g.first_edges.end());
  image.insert(g.second_edges.begin(), g.second_edges.end());
  CHECK(image.size() == 5);
  // labels stay unique
  std::set<std::string> labels;
  for (std::size_t v : g.tree.leaves()) labels.insert(g.tree.label(v));
  CHECK(labels.size() == 4);
  CHECK_NOTHROW(parse_newick(g.tree.to_newick()));
  CHECK_THROWS_AS(glue(claw, 0, claw, 1), TreeError);
}

TEST_CASE("glue keeps the leaf count") {
  const std::vector<Tree> trees = {parse_newick("(A,B,C);"), parse_newick("((A,B),(C,D));"),
                                   parse_newick("(A)B;"), parse_newick("((A,B),C,(D,E));")};
  for (const auto& t1 : trees)
    for (const auto& t2 : trees)
      for (std::size_t l1 : t1.leaves())
        for (std::size_t l2 : t2.leaves()) {
          const GlueResult g = glue(t1, l1, t2, l2);
          CHECK(g.tree.leaves().size() == t1.leaves().size() + t2.leaves().size() - 2);
          CHECK(g.tree.num_edges() == t1.num_edges() + t2.num_edges() - 1);
        }
}

TEST_CASE("two single edges glue to a single edge") {
  const Tree e = parse_newick("(A)B;");
  const GlueResult g = glue(e, e.vertex_by_label("A"), e, e.vertex_by_label("B"));
  CHECK(g.tree.num_edges() == 1);
  CHECK(g.tree.leaves().size() == 2);
}

TEST_CASE("caterpillar from claws") {
  const Tree claw = parse_newick("(A,B,C);");
  GlueResult g = glue(claw, 3, claw, 1);
  g = glue(g.tree, g.tree.vertex_by_label("C"), claw, 1);
  CHECK(g.tree.leaves().size() == 5);
  CHECK(g.tree.num_edges() == 7);
  std::size_t cherries = 0;
  for (std::size_t v : g.tree.inner()) {
    std::size_t leaf_neighbours = 0;
    for (std::size_t e = 0; e < g.tree.num_edges(); ++e) {
      const auto& edge = g.tree.edge(e);
      if (edge.parent == v && g.tree.is_leaf(edge.child)) ++leaf_neighbours;
      if (edge.child == v && g.tree.is_leaf(edge.parent)) ++leaf_neighbours;
    }
    CHECK(g.tree.degree(v) == 3);
    if (leaf_neighbours == 2) ++cherries;
  }
  CHECK(cherries == 2);
}
