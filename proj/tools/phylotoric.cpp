// Command-line front end: polytopes, projections, normality checks, gluing,
// the parameterization oracle and the bundled reference checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "phylotoric/checks.hpp"
#include "phylotoric/error.hpp"
#include "phylotoric/fourier.hpp"
#include "phylotoric/lattice.hpp"

using namespace phylotoric;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kResourceLimit = 3;

struct RunConfig {
  std::string group;
  std::string group_file;
  std::vector<std::string> trees;
  std::vector<std::string> tree_files;
  std::vector<std::string> leaves;
  std::string flavor = "abelian";
  std::string vertices_file;
  long max_degree = 0;
  std::size_t vertex_cap = kDefaultVertexCap;
  std::uint64_t seed = 1;
  std::size_t draws = 20;
  std::string out;
  std::vector<std::string> only;
  std::string golden_dir;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GroupModel load_model(const RunConfig& cfg) {
  if (!cfg.group.empty() && !cfg.group_file.empty()) throw InputError("give either --group or --group-file");
  if (!cfg.group_file.empty()) return parse_group_file(slurp(cfg.group_file));
  if (cfg.group.empty()) throw InputError("--group or --group-file is required");
  return parse_group_spec(cfg.group);
}

std::string group_label(const RunConfig& cfg, const GroupModel& model) {
  return cfg.group.empty() ? model.abelian().to_string() : cfg.group;
}

std::vector<Tree> load_trees(const RunConfig& cfg) {
  std::vector<Tree> out;
  for (const auto& t : cfg.trees) out.push_back(parse_newick(t));
  for (const auto& f : cfg.tree_files) {
    std::string text = slurp(f);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    out.push_back(parse_newick(text));
  }
  return out;
}

Tree load_tree(const RunConfig& cfg) {
  auto trees = load_trees(cfg);
  if (trees.size() != 1) throw InputError("exactly one tree is required");
  return trees.front();
}

Flavor parse_flavor(const std::string& s) {
  if (s == "abelian") return Flavor::Abelian;
  if (s == "projected") return Flavor::Projected;
  throw InputError("--flavor must be abelian or projected");
}

ModelPolytope model_polytope(const RunConfig& cfg, const GroupModel& model, const Tree& tree) {
  const Flavor flavor = parse_flavor(cfg.flavor);
  if (flavor == Flavor::Projected && model.is_abelian_model())
    throw InputError("projected flavor requires a model with G larger than H");
  ModelPolytope p = build_polytope(tree, model, cfg.vertex_cap);
  p.group = group_label(cfg, model);
  if (flavor == Flavor::Projected) p = project_orbits(p, model);
  return p;
}

// Writes to --out if given, else stdout.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

int cmd_polytope(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  const ModelPolytope p = model_polytope(cfg, model, load_tree(cfg));
  Output out(cfg.out);
  write_vertex_file(out.stream(), p);
  return kOk;
}

int cmd_project(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  ModelPolytope p;
  if (!cfg.vertices_file.empty()) {
    const std::string text = slurp(cfg.vertices_file);
    p.vertices = parse_vertex_lines(text);
    p.group = group_label(cfg, model);
    const std::size_t width = model.abelian().order();
    const std::size_t dim = p.vertices.empty() ? 0 : p.vertices.front().size();
    if (dim == 0 || dim % width != 0) throw InputError("vertex dimension is not a multiple of |H|");
    for (const auto& v : p.vertices)
      if (v.size() != dim) throw InputError("vertices differ in dimension");
    for (std::size_t e = 0; e < dim / width; ++e) p.blocks.push_back({e, width});
    const auto pos = text.find("tree=");
    if (pos != std::string::npos) p.tree = text.substr(pos + 5, text.find_first_of(" \n", pos) - pos - 5);
    std::sort(p.vertices.begin(), p.vertices.end());
    p.vertices.erase(std::unique(p.vertices.begin(), p.vertices.end()), p.vertices.end());
  } else {
    p = build_polytope(load_tree(cfg), model, cfg.vertex_cap);
    p.group = group_label(cfg, model);
  }
  Output out(cfg.out);
  write_vertex_file(out.stream(), project_orbits(p, model));
  return kOk;
}

int cmd_normality(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  const ModelPolytope p = model_polytope(cfg, model, load_tree(cfg));
  const LatticePolytope lp(p.vertices);
  const IdpReport report = idp_check(lp, cfg.max_degree);
  Output out(cfg.out);
  out.stream() << report.to_text();
  return report.normal ? kOk : kNegative;
}

int cmd_glue(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  const auto trees = load_trees(cfg);
  if (trees.size() != 2) throw InputError("glue needs two trees (--tree or --tree-file, twice)");
  if (cfg.leaves.size() != 2) throw InputError("glue needs two --leaf labels, one per tree");
  const std::size_t l1 = trees[0].vertex_by_label(cfg.leaves[0]);
  const std::size_t l2 = trees[1].vertex_by_label(cfg.leaves[1]);
  const GlueResult g = glue(trees[0], l1, trees[1], l2);

  const ModelPolytope p1 = build_polytope(trees[0], model, cfg.vertex_cap);
  const ModelPolytope p2 = build_polytope(trees[1], model, cfg.vertex_cap);
  ModelPolytope glued = glue_polytopes(trees[0], l1, p1, trees[1], l2, p2, model.abelian());
  glued.group = group_label(cfg, model);
  const ModelPolytope direct = build_polytope(g.tree, model, cfg.vertex_cap);
  const bool same = glued.vertices == direct.vertices;

  Output out(cfg.out);
  write_vertex_file(out.stream(), glued);
  std::cerr << "glued tree: " << g.tree.to_newick() << '\n'
            << "fiber product matches direct construction: " << (same ? "yes" : "no") << '\n';
  return same ? kOk : kNegative;
}

int cmd_oracle_test(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  const Tree tree = load_tree(cfg);
  if (tree.leaves().size() > 5) throw InputError("oracle test supports at most 5 leaves");
  if (model.abelian().order() > 4) throw InputError("oracle test supports |H| <= 4");
  const OracleReport r = oracle_check(model, tree, cfg.draws, cfg.seed);
  Output out(cfg.out);
  out.stream() << "draws: " << r.draws << '\n'
               << "sockets: " << r.sockets << '\n'
               << "agreement: " << (r.agree ? "yes" : "no") << '\n';
  if (r.agree) out.stream() << "scalar: " << r.scalar << '\n';
  if (!r.failure.empty()) out.stream() << "failure: " << r.failure << '\n';
  return r.agree ? kOk : kNegative;
}

int cmd_dim_what(const RunConfig& cfg) {
  const GroupModel model = load_model(cfg);
  const DimensionReport r = what_dimension(model);
  Output out(cfg.out);
  out.stream() << "dimension: " << r.dimension() << '\n'
               << "conjugation orbits: " << r.conj_orbit_count << '\n'
               << "rank of orbit matrices: " << r.rank_orbit_matrices << '\n'
               << "fixed space dimension: " << r.fixed_space_dim << '\n'
               << "orbits on state pairs: " << r.pair_orbit_count << '\n'
               << "joint rank: " << r.joint_rank << '\n'
               << "orbit matrices invariant: " << (r.all_invariant ? "yes" : "no") << '\n'
               << "consistent: " << (r.consistent() ? "yes" : "no") << '\n';
  return r.consistent() ? kOk : kNegative;
}

int cmd_appendix_demo(const RunConfig& cfg) {
  const AppendixReport r = appendix_demo();
  Output out(cfg.out);
  out.stream() << r.to_text();
  return r.passed() ? kOk : kNegative;
}

int cmd_verify(const RunConfig& cfg) {
  CheckOptions options;
  options.golden_dir = cfg.golden_dir.empty() ? default_golden_dir() : cfg.golden_dir;
  std::vector<std::string> only;
  for (const auto& item : cfg.only) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) only.push_back(name);
  }
  const auto results = run_checks(options, only);
  Output out(cfg.out);
  bool all = true;
  for (const auto& r : results) {
    out.stream() << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) out.stream() << ": " << r.detail;
    out.stream() << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytopes of group-based models on trees"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "CFN, JC, K2P, K3P or an abelian group such as Z2xZ4");
    sub->add_option("--group-file", cfg.group_file, "model description file");
  };
  auto add_tree = [&](CLI::App* sub) {
    sub->add_option("--tree", cfg.trees, "Newick tree");
    sub->add_option("--tree-file", cfg.tree_files, "file containing a Newick tree");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--vertex-cap", cfg.vertex_cap, "maximum number of networks");
  };

  std::map<CLI::App*, std::function<int(const RunConfig&)>> handlers;

  auto* polytope = app.add_subcommand("polytope", "write the vertex file of a model polytope");
  add_group(polytope);
  add_tree(polytope);
  add_common(polytope);
  polytope->add_option("--flavor", cfg.flavor, "abelian or projected");
  handlers[polytope] = cmd_polytope;

  auto* project = app.add_subcommand("project", "project an abelian polytope through the dual orbits");
  add_group(project);
  add_tree(project);
  add_common(project);
  project->add_option("--vertices", cfg.vertices_file, "abelian vertex file to project instead of --tree");
  handlers[project] = cmd_project;

  auto* normality = app.add_subcommand("normality", "integer decomposition check");
  add_group(normality);
  add_tree(normality);
  add_common(normality);
  normality->add_option("--flavor", cfg.flavor, "abelian or projected");
  normality->add_option("--max-degree", cfg.max_degree, "highest dilation checked (default max(2, dim-1))");
  handlers[normality] = cmd_normality;

  auto* glue_cmd = app.add_subcommand("glue", "glue two trees at leaves and build the fiber product");
  add_group(glue_cmd);
  add_tree(glue_cmd);
  add_common(glue_cmd);
  glue_cmd->add_option("--leaf", cfg.leaves, "leaf label, once per tree");
  handlers[glue_cmd] = cmd_glue;

  auto* oracle = app.add_subcommand("oracle-test", "compare the monomial map with the brute-force tensor");
  add_group(oracle);
  add_tree(oracle);
  oracle->add_option("--out", cfg.out, "output file (default stdout)");
  oracle->add_option("--seed", cfg.seed, "random seed");
  oracle->add_option("--draws", cfg.draws, "number of random parameter draws");
  handlers[oracle] = cmd_oracle_test;

  auto* dim = app.add_subcommand("dim-what", "dimension of the invariant transition matrices");
  add_group(dim);
  dim->add_option("--out", cfg.out, "output file (default stdout)");
  handlers[dim] = cmd_dim_what;

  auto* appendix = app.add_subcommand("appendix-demo", "Z4 Fourier transform under b = c");
  appendix->add_option("--out", cfg.out, "output file (default stdout)");
  handlers[appendix] = cmd_appendix_demo;

  auto* verify = app.add_subcommand("verify-paper", "run the bundled reference checks");
  verify->add_option("--only", cfg.only, "comma-separated check names");
  verify->add_option("--golden-dir", cfg.golden_dir, "directory of golden vertex lists");
  verify->add_option("--out", cfg.out, "output file (default stdout)");
  handlers[verify] = cmd_verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    for (auto& [sub, handler] : handlers)
      if (sub->parsed()) return handler(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kNegative;
  }
  return kInputError;
}
