#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "phylotoric/error.hpp"
#include "phylotoric/lattice.hpp"

using namespace phylotoric;

namespace {

std::set<Point> as_set(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

BigVector big(std::initializer_list<long> xs) {
  BigVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::set<Point> pair_sums(const std::vector<Point>& pts) {
  std::set<Point> out;
  for (const auto& a : pts)
    for (const auto& b : pts) {
      Point s(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
      out.insert(s);
    }
  return out;
}

const Point kK2pWitness = {1, 0, 1, 1, 0, 1, 1, 0, 1};

}  // namespace

TEST_CASE("Hermite normal form") {
  std::vector<std::size_t> pivots;
  const auto h = hermite_normal_form({big({2, 4}), big({0, 6}), big({2, 10})}, &pivots);
  CHECK(h == std::vector<BigVector>{big({2, 4}), big({0, 6})});
  CHECK(pivots == std::vector<std::size_t>{0, 1});

  const auto g = hermite_normal_form({big({3, 1}), big({1, 2})});
  CHECK(g == std::vector<BigVector>{big({1, 2}), big({0, 5})});
  CHECK(hermite_normal_form({big({0, 0})}).empty());
}

TEST_CASE("spanned lattice") {
  const AffineLattice l = spanned_lattice({{1, 1}, {3, 1}, {1, 5}});
  CHECK(l.anchor == Point{1, 1});
  CHECK(l.rank() == 2);
  CHECK(l.contains({5, 9}));
  CHECK_FALSE(l.contains({2, 1}));
  CHECK(l.contains({2, 2}, 2));

  for (const char* g : {"K3P", "Z4"}) {
    const auto p = build_polytope(parse_newick("((A,B),C,D);"), parse_group_spec(g));
    const AffineLattice lat = spanned_lattice(p.vertices);
    for (const auto& v : p.vertices) {
      const auto y = lat.coordinates(v);
      REQUIRE(y.has_value());
      std::vector<std::int64_t> yi;
      for (const auto& c : *y) yi.push_back(c.get_si());
      CHECK(lat.point(yi) == v);
    }
  }
}

TEST_CASE("facets of small polytopes") {
  const HRep seg = facet_description({{0, 0}, {2, 0}});
  CHECK(seg.inequalities.size() == 2);
  CHECK(seg.equalities.size() == 1);
  CHECK(seg.contains({1, 0}));
  CHECK_FALSE(seg.contains({3, 0}));
  CHECK_FALSE(seg.contains({1, 1}));

  const HRep tri = facet_description({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}});
  CHECK(tri.inequalities.size() == 3);
  CHECK(tri.contains({1, 1, 2}, 2));
  CHECK_FALSE(tri.contains({1, 1, 1}, 1));

  const HRep cube = facet_description(oracle::box_points(3, 0, 1, [](const Point&) { return true; }));
  CHECK(cube.inequalities.size() == 6);
  CHECK(cube.equalities.empty());
}

TEST_CASE("K3P facets are supported by enough vertices") {
  const auto p = build_polytope(parse_newick("(A,B,C);"), presets::k3p());
  const LatticePolytope lp(p.vertices);
  CHECK(lp.dimension() == 9);
  for (const auto& f : lp.hrep().inequalities) {
    std::size_t tight = 0;
    for (const auto& v : p.vertices) {
      mpz_class s = 0;
      for (std::size_t i = 0; i < v.size(); ++i) s += f.normal[i] * v[i];
      CHECK(s <= f.offset);
      if (s == f.offset) ++tight;
    }
    CHECK(tight >= lp.dimension());
  }
  for (const auto& v : p.vertices) CHECK(lp.hrep().contains(v));
}

TEST_CASE("dilates") {
  CHECK(lattice_points_in_dilate({{0}, {1}}, 2) == std::vector<Point>{{0}, {1}, {2}});
  CHECK(lattice_points_in_dilate({{0}, {2}}, 1) == std::vector<Point>{{0}, {2}});

  for (const char* g : {"CFN", "K3P", "Z3"}) {
    const auto p = build_polytope(parse_newick("(A,B,C);"), parse_group_spec(g));
    CHECK(LatticePolytope(p.vertices).lattice_points(1) == p.vertices);
  }
  const auto k2p = project_orbits(build_polytope(parse_newick("(A,B,C);"), presets::k3p()), presets::k2p());
  CHECK(LatticePolytope(k2p.vertices).lattice_points(1) == k2p.vertices);
}

TEST_CASE("dilate enumeration against a box search") {
  const auto cfn = build_polytope(parse_newick("(A,B,C);"), presets::cfn());
  const LatticePolytope lp(cfn.vertices);
  const HRep& h = lp.hrep();
  const auto box = oracle::box_points(6, 0, 2, [&](const Point& x) { return h.contains(x, 2) && lp.lattice().contains(x, 2); });
  CHECK(as_set(lp.lattice_points(2)) == as_set(box));
  // CFN claw is a unimodular simplex: 2P is covered by pair sums
  CHECK(as_set(box) == pair_sums(cfn.vertices));

  const auto k2p = project_orbits(build_polytope(parse_newick("(A,B,C);"), presets::k3p()), presets::k2p());
  const LatticePolytope lk(k2p.vertices);
  const auto box2 = oracle::box_points(9, 0, 2, [&](const Point& x) {
    return lk.hrep().contains(x, 2) && lk.lattice().contains(x, 2);
  });
  const auto enumerated = lk.lattice_points(2);
  CHECK(as_set(enumerated) == as_set(box2));
  const auto sums = pair_sums(k2p.vertices);
  std::vector<Point> extra;
  for (const auto& q : enumerated)
    if (!sums.count(q)) extra.push_back(q);
  CHECK_FALSE(extra.empty());
  CHECK(std::find(extra.begin(), extra.end(), kK2pWitness) != extra.end());
}

TEST_CASE("IDP verdicts") {
  for (const char* g : {"Z2", "Z3", "Z2xZ2", "Z4"}) {
    const auto p = build_polytope(parse_newick("(A,B,C);"), parse_group_spec(g));
    const IdpReport r = idp_check(LatticePolytope(p.vertices));
    CAPTURE(g);
    CHECK(r.normal);
    CHECK(r.max_degree == std::max<long>(2, static_cast<long>(r.dimension) - 1));
    CHECK(r.counts.front() == p.vertices.size());
  }
  const auto k2p = project_orbits(build_polytope(parse_newick("(A,B,C);"), presets::k3p()), presets::k2p());
  const LatticePolytope lk(k2p.vertices);
  const IdpReport r = idp_check(lk);
  CHECK_FALSE(r.normal);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness_degree == 2);
  CHECK_FALSE(oracle::sum_of_two(*r.witness, k2p.vertices));
  CHECK(lk.hrep().contains(*r.witness, 2));
  CHECK(lk.lattice().contains(*r.witness, 2));
  CHECK(r.to_text().rfind("verdict: NotNormal", 0) == 0);
}

TEST_CASE("decompose") {
  const auto cfn = build_polytope(parse_newick("(A,B,C);"), presets::cfn());
  const LatticePolytope lp(cfn.vertices);
  const Point& v0 = cfn.vertices[0];
  const Point& v1 = cfn.vertices[1];
  Point twice(v0.size()), mixed(v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    twice[i] = 2 * v0[i];
    mixed[i] = v0[i] + v1[i];
  }
  const auto d1 = decompose(twice, 2, lp);
  REQUIRE(d1.summands.has_value());
  CHECK(*d1.summands == std::vector<Point>{v0, v0});
  const auto d2 = decompose(mixed, 2, lp);
  REQUIRE(d2.summands.has_value());
  CHECK(as_set(*d2.summands) == std::set<Point>{v0, v1});

  const auto k2p = project_orbits(build_polytope(parse_newick("(A,B,C);"), presets::k3p()), presets::k2p());
  const auto none = decompose(kK2pWitness, 2, LatticePolytope(k2p.vertices));
  CHECK_FALSE(none.summands.has_value());
  CHECK(none.nodes > 0);
}

TEST_CASE("fiber product of claws") {
  const Tree claw = parse_newick("(A,B,C);");
  const auto z2 = build_polytope(claw, parse_group_spec("Z2"));
  const ModelPolytope fp = fiber_product(z2, 2, z2, 0);
  CHECK(fp.vertices.size() == 8);
  CHECK(fp.ambient_dim() == 10);
  for (const auto& v : fp.vertices) CHECK(v.size() == 10);

  const auto cfn_proj = project_orbits(build_polytope(claw, presets::k3p()), presets::k2p());
  CHECK_THROWS_AS(fiber_product(z2, 0, cfn_proj, 0), FiberProductError);
  try {
    fiber_product(z2, 0, cfn_proj, 0);
  } catch (const FiberProductError& e) {
    CHECK(e.kind() == FiberProductError::Kind::BlockWidthMismatch);
  }
  // a block whose projection is not a simplex vertex set
  ModelPolytope odd = z2;
  odd.vertices = {{1, 1, 1, 0, 1, 0}};
  try {
    fiber_product(odd, 0, z2, 0);
    FAIL("expected FiberProductError");
  } catch (const FiberProductError& e) {
    CHECK(e.kind() == FiberProductError::Kind::ProjectionNotInSimplex);
  }
}

TEST_CASE("gluing matches the direct construction") {
  const Tree claw = parse_newick("(A,B,C);");
  for (const char* g : {"Z2", "Z3", "Z2xZ2"}) {
    const GroupModel model = parse_group_spec(g);
    const auto p = build_polytope(claw, model);
    for (std::size_t l1 : claw.leaves())
      for (std::size_t l2 : claw.leaves()) {
        const GlueResult tree = glue(claw, l1, claw, l2);
        const auto glued = glue_polytopes(claw, l1, p, claw, l2, p, model.abelian());
        CHECK(glued.vertices == build_polytope(tree.tree, model).vertices);
      }
  }
  const Tree e = parse_newick("(A)B;");
  const auto pe = build_polytope(e, presets::cfn());
  const auto ge = glue_polytopes(e, 1, pe, e, 0, pe, presets::cfn().abelian());
  CHECK(ge.vertices == pe.vertices);

  // a caterpillar assembled from a claw and a quartet-shaped tree
  const Tree four = parse_newick("((A,B),C,D);");
  const GroupModel z3 = parse_group_spec("Z3");
  const std::size_t leaf = four.vertex_by_label("D");
  const auto glued = glue_polytopes(four, leaf, build_polytope(four, z3), claw, 1, build_polytope(claw, z3), z3.abelian());
  CHECK(glued.vertices == build_polytope(glue(four, leaf, claw, 1).tree, z3).vertices);
}

TEST_CASE("normal factors give a normal fiber product") {
  const Tree claw = parse_newick("(A,B,C);");
  const Tree four = parse_newick("((A,B),C,D);");
  for (const char* g : {"Z2", "Z3"}) {
    const auto model = parse_group_spec(g);
    const auto p = build_polytope(claw, model);
    REQUIRE(idp_check(LatticePolytope(p.vertices)).normal);
    const auto fp = fiber_product(p, 2, p, 0);
    CHECK(idp_check(LatticePolytope(fp.vertices)).normal);
  }
  const auto cfn = presets::cfn();
  const auto pc = build_polytope(claw, cfn);
  const auto pf = build_polytope(four, cfn);
  REQUIRE(idp_check(LatticePolytope(pf.vertices)).normal);
  CHECK(idp_check(LatticePolytope(fiber_product(pc, 0, pf, 4).vertices)).normal);
}
