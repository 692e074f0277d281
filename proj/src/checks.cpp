#include "phylotoric/checks.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "phylotoric/error.hpp"
#include "phylotoric/fourier.hpp"
#include "phylotoric/lattice.hpp"

#ifndef PHYLOTORIC_DATA_DIR
#define PHYLOTORIC_DATA_DIR "data"
#endif

namespace phylotoric {

namespace {

class Expect {
public:
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

private:
  std::vector<std::string> failures_;
};

std::set<Point> read_golden(const std::string& dir, const std::string& file, Expect& expect) {
  std::ifstream in(dir + "/" + file);
  if (!in) {
    expect(false, "cannot read golden file " + dir + "/" + file);
    return {};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    const auto points = parse_vertex_lines(ss.str());
    return {points.begin(), points.end()};
  } catch (const InputError& e) {
    expect(false, "golden file " + file + ": " + e.what());
    return {};
  }
}

std::set<Point> as_set(const std::vector<Point>& v) { return {v.begin(), v.end()}; }

std::size_t element_with_image(const GroupModel& model, const char* cycles) {
  const Permutation target = Permutation::parse_cycles(cycles, static_cast<unsigned>(model.num_states()));
  for (std::size_t h = 0; h < model.abelian().order(); ++h)
    if (model.image(h) == target) return h;
  throw std::logic_error(std::string("no element with image ") + cycles);
}

ExactMatrix integer_matrix(const std::vector<std::vector<long>>& rows) {
  ExactMatrix m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

const Tree& claw() {
  static const Tree t = parse_newick("(A,B,C);");
  return t;
}

void check_groups(const CheckOptions&, Expect& expect) {
  const auto d8 = close_group({Permutation::parse_cycles("(1,2)(3,4)", 4), Permutation::parse_cycles("(1,3)(2,4)", 4),
                               Permutation::parse_cycles("(3,4)", 4)});
  expect(d8.size() == 8, "closure of V4 and (3,4) has " + std::to_string(d8.size()) + " elements, expected 8");

  const GroupModel cfn = presets::cfn();
  expect(cfn.dual_orbits().size() == 2 && cfn.conj_orbits().size() == 2, "binary model should have 2 singleton orbits");

  const GroupModel k2p = presets::k2p();
  std::vector<std::size_t> sizes;
  for (const auto& o : k2p.dual_orbits()) sizes.push_back(o.size());
  std::sort(sizes.begin(), sizes.end());
  expect(sizes == std::vector<std::size_t>{1, 1, 2}, "2-Kimura dual orbit sizes should be 1,1,2");
  expect(k2p.dual_orbits().front() == std::vector<std::size_t>{0}, "trivial character should form its own orbit");
  // the character that is -1 exactly on (1,3)(2,4) and (1,4)(2,3) is fixed
  const std::size_t h12 = element_with_image(k2p, "(1,2)(3,4)");
  const std::size_t h13 = element_with_image(k2p, "(1,3)(2,4)");
  bool found = false;
  for (const auto& o : k2p.dual_orbits()) {
    if (o.size() != 1) continue;
    const std::size_t chi = o.front();
    if (character_eval(k2p.abelian(), chi, h12) == CyclotomicInt(1) &&
        character_eval(k2p.abelian(), chi, h13) == CyclotomicInt(-1))
      found = true;
  }
  expect(found, "2-Kimura: the character -1 on (1,3)(2,4),(1,4)(2,3) should be alone in its orbit");
  expect(k2p.conj_orbits().size() == 3, "2-Kimura should have 3 conjugation orbits");

  const CyclicFactorization z4({4});
  expect(character_eval(z4, 1, 1) == CyclotomicInt::root_of_unity(4, 1), "Z4: chi_1(1) should be i");
}

void check_polytope(const CheckOptions& options, Expect& expect) {
  const auto golden = read_golden(options.golden_dir, "k3p_claw.txt", expect);
  const ModelPolytope p = build_polytope(claw(), presets::k3p());
  expect(p.vertices.size() == 16, "3-Kimura claw should have 16 vertices, got " + std::to_string(p.vertices.size()));
  expect(!golden.empty() && as_set(p.vertices) == golden, "3-Kimura claw vertices differ from the golden list");
  const Point eleven{0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
  expect(as_set(p.vertices).count(eleven) == 1, "vertex 0,0,1,0,0,1,0,0,0,0,0,1 missing");
}

void check_projection(const CheckOptions& options, Expect& expect) {
  const auto golden = read_golden(options.golden_dir, "k2p_claw_projected.txt", expect);
  const ModelPolytope p = build_polytope(claw(), presets::k3p());
  const ModelPolytope q = project_orbits(p, presets::k2p());
  expect(q.vertices.size() == 10, "projection should leave 10 vertices, got " + std::to_string(q.vertices.size()));
  expect(!golden.empty() && as_set(q.vertices) == golden, "projected 2-Kimura vertices differ from the golden list");
}

void check_fourier(const CheckOptions&, Expect& expect) {
  const GroupModel k3p = presets::k3p();
  const std::size_t h12 = element_with_image(k3p, "(1,2)(3,4)");
  const std::size_t h13 = element_with_image(k3p, "(1,3)(2,4)");
  std::size_t chi = k3p.abelian().order();
  for (std::size_t c = 0; c < k3p.abelian().order(); ++c)
    if (character_eval(k3p.abelian(), c, h12) == CyclotomicInt(1) &&
        character_eval(k3p.abelian(), c, h13) == CyclotomicInt(-1))
      chi = c;
  expect(chi < k3p.abelian().order() &&
             l_chi(k3p, chi) == integer_matrix({{1, 1, -1, -1}, {1, 1, -1, -1}, {-1, -1, 1, 1}, {-1, -1, 1, 1}}),
         "3-Kimura basis matrix for the character -1 on (1,3)(2,4),(1,4)(2,3) is wrong");

  const GroupModel k2p = presets::k2p();
  bool found = false;
  for (std::size_t o = 0; o < k2p.dual_orbits().size(); ++o) {
    if (k2p.dual_orbits()[o].size() != 2) continue;
    found = true;
    const OrbitFunction f = f_o(k2p, o);
    const std::size_t id = element_with_image(k2p, "()");
    const std::size_t h12b = element_with_image(k2p, "(1,2)(3,4)");
    bool values = true;
    for (std::size_t h = 0; h < 4; ++h) {
      const long expected = h == id ? 2 : h == h12b ? -2 : 0;
      values = values && f.values[h] == CyclotomicInt(expected);
    }
    expect(values, "2-Kimura orbit function should be 2, -2, 0, 0");
    expect(f.matrix == integer_matrix({{2, -2, 0, 0}, {-2, 2, 0, 0}, {0, 0, 2, -2}, {0, 0, -2, 2}}),
           "2-Kimura orbit matrix is wrong");
    expect(g_invariance_check(k2p, f.matrix), "2-Kimura orbit matrix is not invariant");
  }
  expect(found, "2-Kimura has no two-element orbit");

  // one-hot parameters on the network ((0,1),(1,0),(1,1)) give the indicator of its socket
  ParamVector params;
  const Network net{{1, 2, 3}};
  for (std::size_t e = 0; e < 3; ++e) {
    ExactVector v(4, CyclotomicInt(0));
    v[net.characters[e]] = 1;
    params.values.push_back(v);
  }
  const SocketVector mono = monomial_socket_vector(k3p, claw(), params);
  const Socket target = socket_of(claw(), k3p.abelian(), net);
  bool indicator = true;
  for (const auto& [s, value] : mono) indicator = indicator && value == CyclotomicInt(s == target ? 1 : 0);
  expect(indicator, "monomial map of the one-hot network is not the indicator of its socket");
}

void check_dimension(const CheckOptions&, Expect& expect) {
  const std::pair<const char*, std::size_t> cases[] = {{"CFN", 2}, {"JC", 2}, {"K2P", 3}, {"K3P", 4}};
  for (const auto& [name, dim] : cases) {
    const DimensionReport r = what_dimension(parse_group_spec(name));
    expect(r.dimension() == dim && r.consistent(),
           std::string(name) + ": dimension " + std::to_string(r.dimension()) + ", fixed space " +
               std::to_string(r.fixed_space_dim) + ", expected " + std::to_string(dim));
  }
}

void check_normality(const CheckOptions&, Expect& expect) {
  for (const char* name : {"Z2", "Z2xZ2", "Z3", "Z4"}) {
    const ModelPolytope p = build_polytope(claw(), parse_group_spec(name));
    const IdpReport r = idp_check(LatticePolytope(p.vertices));
    expect(r.normal, std::string(name) + " claw polytope reported not normal");
  }
}

void check_non_normality(const CheckOptions&, Expect& expect) {
  const GroupModel k2p = presets::k2p();
  const ModelPolytope p = project_orbits(build_polytope(claw(), k2p), k2p);
  const LatticePolytope lp(p.vertices);
  const IdpReport r = idp_check(lp);
  expect(!r.normal && r.witness_degree == 2, "2-Kimura claw should fail at degree 2");
  const Point known_point{1, 0, 1, 1, 0, 1, 1, 0, 1};
  expect(lp.lattice().contains(known_point, 2), "(1,0,1,1,0,1,1,0,1) should lie in the doubled lattice translate");
  expect(lp.hrep().contains(known_point, 2), "(1,0,1,1,0,1,1,0,1) should lie in 2P");
  expect(!decompose(known_point, 2, lp).summands, "(1,0,1,1,0,1,1,0,1) should not be a sum of two points");
}

void check_appendix(const CheckOptions&, Expect& expect) {
  const AppendixReport r = appendix_demo();
  expect(r.transform_matches, "transformed tuple differs from (a+2b+d, a+(i-1)b-id, a-d, a-(i+1)b+id)");
  expect(r.relation_vanishes, "(1+i)x1 - 2i x2 + (i-1)x3 does not vanish");
  expect(r.all_pairs_separated, "some coordinate equality holds on the image");
}

void check_counting(const CheckOptions&, Expect& expect) {
  const CyclicFactorization z3({3});
  expect(enumerate_sockets(claw(), z3).size() == 9, "Z3 claw should have 9 sockets");
  expect(enumerate_sockets(parse_newick("((A,B),(C,D));"), z3).size() == 27, "Z3 4-leaf tree should have 27 sockets");
  expect(build_polytope(claw(), presets::k3p()).vertices.size() == 16, "3-Kimura claw should have 4^(3-1) vertices");
}

using CheckFn = std::function<void(const CheckOptions&, Expect&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"groups", check_groups},           {"polytope", check_polytope},
      {"projection", check_projection},   {"fourier", check_fourier},
      {"dimension", check_dimension},     {"normality", check_normality},
      {"non-normality", check_non_normality}, {"appendix", check_appendix},
      {"counting", check_counting},
  };
  return checks;
}

}  // namespace

std::string default_golden_dir() { return std::string(PHYLOTORIC_DATA_DIR) + "/golden"; }

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<CheckResult> run_checks(const CheckOptions& options, const std::vector<std::string>& only) {
  for (const auto& name : only)
    if (std::none_of(registry().begin(), registry().end(), [&](const auto& c) { return c.first == name; }))
      throw InputError("unknown check '" + name + "'");
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Expect expect;
    CheckResult result{name, false, "", 0};
    try {
      fn(options, expect);
      result.passed = expect.ok();
      result.detail = expect.detail();
    } catch (const std::exception& e) {
      result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace phylotoric
