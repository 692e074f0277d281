#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PHYLOTORIC_CLI
#error "PHYLOTORIC_CLI must name the command-line binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PHYLOTORIC_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const std::string& s, bool skip_comments = true) {
  std::istringstream is(s);
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && !(skip_comments && line[0] == '#')) ++n;
  return n;
}

bool has_line(const std::string& s, const std::string& wanted) {
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);)
    if (line == wanted) return true;
  return false;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "phylotoric_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("polytope and project") {
  const Run k3p = run("polytope --group K3P --tree '(A,B,C);'");
  CHECK(k3p.code == 0);
  CHECK(count_lines(k3p.out) == 16);
  CHECK(k3p.out.rfind("# group=K3P tree=(A,B,C); flavor=abelian dim=12 count=16\n", 0) == 0);

  const Run k2p = run("project --group K2P --tree '(A,B,C);'");
  CHECK(k2p.code == 0);
  CHECK(count_lines(k2p.out) == 10);
  CHECK(has_line(k2p.out, "1 0 0 1 0 0 1 0 0"));

  const Run proj = run("polytope --group K2P --flavor projected --tree '(A,B,C);'");
  CHECK(proj.code == 0);
  CHECK(proj.out == k2p.out);

  const auto dir = temp_dir();
  CHECK(run("polytope --group K3P --tree '(A,B,C);' --out " + (dir / "k3p.txt").string()).code == 0);
  const Run again = run("project --group K2P --vertices " + (dir / "k3p.txt").string());
  CHECK(again.code == 0);
  CHECK(count_lines(again.out) == 10);

  std::ofstream(dir / "tree.nwk") << "((A,B),C,(D,E));\n";
  const Run file = run("polytope --group Z3 --tree-file " + (dir / "tree.nwk").string());
  CHECK(file.code == 0);
  CHECK(count_lines(file.out) == 81);

  std::ofstream(dir / "k3p.model") << "states: A C G T\nabelian: Z2xZ2\nh: (1,3)(2,4)\nh: (1,2)(3,4)\n";
  const Run model = run("polytope --group-file " + (dir / "k3p.model").string() + " --tree '(A,B,C);'");
  CHECK(model.code == 0);
  CHECK(count_lines(model.out) == 16);
}

TEST_CASE("normality") {
  const Run normal = run("normality --group Z3 --tree '(A,B,C);'");
  CHECK(normal.code == 0);
  CHECK(has_line(normal.out, "verdict: Normal"));

  const Run k2p = run("normality --group K2P --flavor projected --tree '(A,B,C);'");
  CHECK(k2p.code == 1);
  CHECK(has_line(k2p.out, "verdict: NotNormal"));
  CHECK(has_line(k2p.out, "witness: 1 0 1 1 0 1 1 0 1"));

  CHECK(run("normality --group Z2 --tree '(A,B,C);' --max-degree 3").code == 0);
}

TEST_CASE("glue") {
  const Run g = run("glue --group Z2 --tree '(A,B,C);' --tree '(A,B,C);' --leaf C --leaf A");
  CHECK(g.code == 0);
  CHECK(count_lines(g.out) == 8);
  const Run gg = run("glue --group Z2xZ2 --tree '(A,B,C);' --tree '(A,B,C);' --leaf C --leaf A");
  CHECK(gg.code == 0);
  CHECK(count_lines(gg.out) == 64);
  CHECK(run("glue --group Z2 --tree '(A,B,C);' --tree '(A,B,C);' --leaf X --leaf A").code == 2);
}

TEST_CASE("Fourier commands") {
  const Run o = run("oracle-test --group Z3 --tree '(A,B,C);' --seed 5");
  CHECK(o.code == 0);
  CHECK(has_line(o.out, "agreement: yes"));
  CHECK(has_line(o.out, "sockets: 9"));
  CHECK(run("oracle-test --group Z2 --tree '(A,B,C,D,E,F);'").code == 2);

  const Run d = run("dim-what --group K3P");
  CHECK(d.code == 0);
  CHECK(has_line(d.out, "dimension: 4"));
  CHECK(has_line(d.out, "consistent: yes"));

  const Run a = run("appendix-demo");
  CHECK(a.code == 0);
  CHECK(has_line(a.out, "x0 = a + 2*b + d"));
}

TEST_CASE("verify-paper") {
  const Run all = run("verify-paper");
  CHECK(all.code == 0);
  CHECK(count_lines(all.out) == 9);
  CHECK(all.out.find("FAIL") == std::string::npos);

  const Run one = run("verify-paper --only appendix");
  CHECK(one.code == 0);
  CHECK(one.out == "PASS appendix\n");

  // a missing golden directory must make the comparison checks fail
  const Run bad = run("verify-paper --golden-dir /nonexistent/golden --only polytope,projection");
  CHECK(bad.code == 1);
  CHECK(count_lines(bad.out) == 2);
  CHECK(bad.out.find("PASS") == std::string::npos);

  CHECK(run("verify-paper --only nosuchcheck").code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run("polytope --group Q8 --tree '(A,B,C);'").code == 2);
  CHECK(run("polytope --group Z2 --tree '(A,B'").code == 2);
  CHECK(run("polytope --tree '(A,B,C);'").code == 2);
  CHECK(run("nosuchcommand").code == 2);
  CHECK(run("polytope --group Z4 --tree '((A,B),C,(D,E));' --vertex-cap 10").code == 3);
  CHECK(run("--help").code == 0);
}
