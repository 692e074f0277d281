#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phylotoric/error.hpp"
#include "phylotoric/fourier.hpp"

using namespace phylotoric;

namespace {

ExactMatrix int_matrix(const std::vector<std::vector<long>>& rows) {
  ExactMatrix m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

std::vector<GroupModel> all_presets() {
  return {presets::cfn(), presets::jc(), presets::k2p(), presets::k3p(), parse_group_spec("Z3"),
          parse_group_spec("Z4")};
}

ParamVector random_params(const GroupModel& model, std::size_t edges, std::mt19937_64& rng, bool orbit) {
  ParamVector p;
  p.flavor = orbit ? ParamFlavor::Orbit : ParamFlavor::Abelian;
  const std::size_t width = orbit ? model.dual_orbits().size() : model.abelian().order();
  std::uniform_int_distribution<long> dist(-4, 4);
  for (std::size_t e = 0; e < edges; ++e) {
    ExactVector v;
    for (std::size_t i = 0; i < width; ++i) v.emplace_back(dist(rng));
    p.values.push_back(std::move(v));
  }
  return p;
}

}  // namespace

TEST_CASE("w vectors") {
  const GroupModel cfn = presets::cfn();
  CHECK(w_chi(cfn, 0) == ExactVector{1, 1});
  CHECK(w_chi(cfn, 1) == ExactVector{1, -1});
  for (const auto& model : all_presets()) {
    ExactMatrix w;
    for (std::size_t chi = 0; chi < model.abelian().order(); ++chi) w.push_back(w_chi(model, chi));
    CHECK(exact_rank(w) == model.num_states());
  }
}

TEST_CASE("l_f examples") {
  const GroupModel cfn = presets::cfn();
  CHECK(l_f(cfn, ExactVector{1, 1}) == int_matrix({{1, 1}, {1, 1}}));
  CHECK(l_chi(cfn, 1) == int_matrix({{1, -1}, {-1, 1}}));
  // character (1,0): -1 on (13)(24) and (14)(23)
  CHECK(l_chi(presets::k3p(), 2) ==
        int_matrix({{1, 1, -1, -1}, {1, 1, -1, -1}, {-1, -1, 1, 1}, {-1, -1, 1, 1}}));
}

TEST_CASE("orbit functions") {
  const GroupModel k2p = presets::k2p();
  CHECK(f_o(k2p, 0).matrix == int_matrix({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}}));
  const std::size_t pair = k2p.dual_orbit_of(1);
  REQUIRE(k2p.dual_orbits()[pair].size() == 2);
  const OrbitFunction f = f_o(k2p, pair);
  CHECK(f.values == ExactVector{2, -2, 0, 0});
  CHECK(f.matrix == int_matrix({{2, -2, 0, 0}, {-2, 2, 0, 0}, {0, 0, 2, -2}, {0, 0, -2, 2}}));

  for (const auto& model : all_presets())
    for (std::size_t o = 0; o < model.dual_orbits().size(); ++o) {
      const OrbitFunction fo = f_o(model, o);
      CHECK(g_invariance_check(model, fo.matrix));
      for (const auto& orbit : model.conj_orbits())
        for (std::size_t h : orbit) CHECK(fo.values[h] == fo.values[orbit.front()]);
      // coordinate copying: l_{f_o} is the sum of l_chi over the orbit
      ExactMatrix sum = int_matrix(std::vector<std::vector<long>>(model.num_states(),
                                                                  std::vector<long>(model.num_states(), 0)));
      for (std::size_t chi : model.dual_orbits()[o]) {
        const ExactMatrix l = l_chi(model, chi);
        for (std::size_t a = 0; a < sum.size(); ++a)
          for (std::size_t b = 0; b < sum.size(); ++b) sum[a][b] += l[a][b];
      }
      CHECK(sum == fo.matrix);
    }
}

TEST_CASE("G-invariance") {
  const GroupModel k2p = presets::k2p();
  const ExactMatrix id = int_matrix({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  for (const auto& model : all_presets())
    if (model.num_states() == 4) CHECK(g_invariance_check(model, id));
  ExactMatrix l1 = l_chi(k2p, 1), l3 = l_chi(k2p, 3);
  CHECK_FALSE(g_invariance_check(k2p, l1));
  CHECK_FALSE(g_invariance_check(k2p, l3));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) l1[a][b] += l3[a][b];
  CHECK(g_invariance_check(k2p, l1));
}

TEST_CASE("independence of the base state") {
  for (const auto& model : all_presets())
    for (std::size_t base = 0; base < model.num_states(); ++base) {
      const GroupModel moved = model.with_base_state(base);
      for (std::size_t chi = 0; chi < model.abelian().order(); ++chi) CHECK(l_chi(moved, chi) == l_chi(model, chi));
      for (std::size_t o = 0; o < model.dual_orbits().size(); ++o)
        CHECK(f_o(moved, o).matrix == f_o(model, o).matrix);
    }
}

TEST_CASE("dimension of invariant matrices") {
  const std::pair<const char*, std::size_t> cases[] = {{"CFN", 2}, {"JC", 2}, {"K2P", 3}, {"K3P", 4}, {"Z3", 3}};
  for (const auto& [name, dim] : cases) {
    const DimensionReport r = what_dimension(parse_group_spec(name));
    CHECK(r.dimension() == dim);
    CHECK(r.fixed_space_dim == dim);
    CHECK(r.rank_orbit_matrices == dim);
    CHECK(r.joint_rank == dim);
    CHECK(r.consistent());
  }
}

TEST_CASE("raw leaf tensor") {
  const GroupModel cfn = presets::cfn();
  const Tree edge = parse_newick("(A)B;");
  const ExactMatrix m = int_matrix({{3, -1}, {2, 5}});
  // leaves() puts the root leaf B first, so the tensor reads M row-major
  const LeafTensor single = raw_leaf_tensor(cfn, edge, {m});
  CHECK(single.values == ExactVector{3, -1, 2, 5});

  const Tree claw = parse_newick("(A,B,C);");
  const GroupModel z3 = parse_group_spec("Z3");
  const ExactMatrix id = int_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const LeafTensor diag = raw_leaf_tensor(z3, claw, {id, id, id});
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) CHECK(diag.values[diag.index({a, b, c})] == ((a == b && b == c) ? 1 : 0));

  CHECK_THROWS_AS(raw_leaf_tensor(z3, claw, {id, id}), ShapeMismatch);
  CHECK_THROWS_AS(raw_leaf_tensor(cfn, claw, {id, id, id}), ShapeMismatch);

  std::mt19937_64 rng(7);
  for (int draw = 0; draw < 20; ++draw) {
    const auto mats = edge_matrices_from_params(cfn, random_params(cfn, 3, rng, false));
    CHECK(raw_leaf_tensor(cfn, claw, mats).values == oracle::leaf_tensor(cfn, claw, mats));
  }
  for (const char* t : {"((A,B),C,D);", "((A,B),(C,D));", "(A)B;"})
    for (const char* g : {"K2P", "Z3", "Z4"}) {
      const Tree tree = parse_newick(t);
      const GroupModel model = parse_group_spec(g);
      const auto mats = edge_matrices_from_params(
          model, random_params(model, tree.num_edges(), rng, !model.is_abelian_model()));
      CHECK(raw_leaf_tensor(model, tree, mats).values == oracle::leaf_tensor(model, tree, mats));
    }
}

TEST_CASE("socket coordinates") {
  const GroupModel cfn = presets::cfn();
  const Tree claw = parse_newick("(A,B,C);");
  LeafTensor ones{2, 3, ExactVector(8, CyclotomicInt(1))};
  const SocketVector c = socket_coordinates(cfn, ones);
  CHECK(c.size() == 4);
  for (const auto& [s, v] : c) CHECK(v.is_zero() == (s.characters != std::vector<std::size_t>{0, 0, 0}));

  LeafTensor spike{2, 3, ExactVector(8, CyclotomicInt(0))};
  spike.values[0] = 1;
  CHECK_THROWS_AS(socket_coordinates(cfn, spike), NotInvariant);

  std::mt19937_64 rng(11);
  const auto mats = edge_matrices_from_params(cfn, random_params(cfn, 3, rng, false));
  CHECK(socket_coordinates(cfn, raw_leaf_tensor(cfn, claw, mats)).size() == 4);
}

TEST_CASE("monomial socket vector") {
  const Tree claw = parse_newick("(A,B,C);");
  const GroupModel cfn = presets::cfn();
  ParamVector ones{ParamFlavor::Abelian, std::vector<ExactVector>(3, ExactVector(2, CyclotomicInt(1)))};
  const SocketVector all = monomial_socket_vector(cfn, claw, ones);
  CHECK(all.size() == 4);
  for (const auto& [s, v] : all) CHECK(v == 1);

  ParamVector sign{ParamFlavor::Abelian, std::vector<ExactVector>(3, ExactVector{0, 1})};
  for (const auto& [s, v] : monomial_socket_vector(cfn, claw, sign)) CHECK(v.is_zero());

  const GroupModel k3p = presets::k3p();
  ParamVector hot{ParamFlavor::Abelian, std::vector<ExactVector>(3, ExactVector(4, CyclotomicInt(0)))};
  hot.values[0][1] = 1;
  hot.values[1][2] = 1;
  hot.values[2][3] = 1;
  const SocketVector v11 = monomial_socket_vector(k3p, claw, hot);
  CHECK(v11.size() == 16);
  for (const auto& [s, v] : v11) CHECK(v == (s.characters == std::vector<std::size_t>{1, 2, 3} ? 1 : 0));
}

TEST_CASE("Fourier coordinates match the monomial map") {
  const std::pair<const char*, const char*> cases[] = {
      {"Z2", "(A,B,C);"},   {"Z2", "((A,B),C,D);"}, {"Z3", "(A,B,C);"}, {"Z3", "((A,B),(C,D));"},
      {"Z4", "(A,B,C);"},   {"K3P", "(A)B;"},       {"K2P", "(A,B,C);"}, {"JC", "(A,B,C);"},
      {"Z2xZ2", "((A,B),C,D);"}, {"Z2", "((A,B),C,(D,E));"}};
  for (const auto& [g, t] : cases) {
    const OracleReport r = oracle_check(parse_group_spec(g), parse_newick(t), 5, 3);
    CAPTURE(g);
    CAPTURE(t);
    CHECK(r.agree);
    CHECK(r.failure.empty());
    CHECK_FALSE(r.scalar.empty());
  }
  CHECK(oracle_check(parse_group_spec("Z2"), parse_newick("(A,B,C);"), 4, 1).scalar == "16");
}

TEST_CASE("Z4 circulant demonstration") {
  const AppendixReport r = appendix_demo();
  CHECK(r.transform_matches);
  CHECK(r.relation_vanishes);
  CHECK(r.all_pairs_separated);
  CHECK(r.separations.size() == 6);
  for (const auto& s : r.separations) CHECK(s.xj != s.xk);
  CHECK(to_string(r.transform[0], r.variables) == "a + 2*b + d");
  // a = 1, b = c = d = 0 gives (1,1,1,1)
  for (const auto& form : r.transform) CHECK(form.coefficients[0] == 1);
}
