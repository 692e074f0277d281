#include "phylotoric/fourier.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "phylotoric/error.hpp"

namespace phylotoric {

namespace {

mpz_class row_content(const ExactVector& row) {
  mpz_class g = 0;
  for (const auto& x : row)
    for (const auto& c : x.coefficients()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return g;
    }
  return g;
}

ExactVector flatten(const ExactMatrix& m) {
  ExactVector out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

ExactMatrix zero_matrix(std::size_t n) { return ExactMatrix(n, ExactVector(n, CyclotomicInt(0))); }

}  // namespace

std::size_t exact_rank(ExactMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const CyclotomicInt p = rows[rank][c];
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c].is_zero()) continue;
      const CyclotomicInt factor = rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] = p * rows[r][k] - factor * rows[rank][k];
      const mpz_class g = row_content(rows[r]);
      if (g > 1)
        for (auto& x : rows[r]) x = x.divided_exactly(g);
    }
    ++rank;
  }
  return rank;
}

ExactVector w_chi(const GroupModel& model, std::size_t chi) {
  ExactVector w;
  for (std::size_t a = 0; a < model.num_states(); ++a)
    w.push_back(character_eval(model.abelian(), chi, model.element_of_state(a)));
  return w;
}

ExactMatrix l_f(const GroupModel& model, const ExactVector& f) {
  const std::size_t n = model.num_states();
  if (f.size() != model.abelian().order()) throw ShapeMismatch("function must have one value per element of H");
  ExactMatrix m = zero_matrix(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) m[a][b] = f[unique_transporter(model, a, b)];
  return m;
}

ExactMatrix l_chi(const GroupModel& model, std::size_t chi) {
  ExactVector f;
  for (std::size_t h = 0; h < model.abelian().order(); ++h) f.push_back(character_eval(model.abelian(), chi, h));
  return l_f(model, f);
}

OrbitFunction f_o(const GroupModel& model, std::size_t orbit) {
  const auto& group = model.abelian();
  OrbitFunction out;
  out.values.assign(group.order(), CyclotomicInt(0));
  for (std::size_t chi : model.dual_orbits().at(orbit))
    for (std::size_t h = 0; h < group.order(); ++h) out.values[h] += character_eval(group, chi, h);
  out.matrix = l_f(model, out.values);
  return out;
}

bool g_invariance_check(const GroupModel& model, const ExactMatrix& m) {
  const std::size_t n = model.num_states();
  if (m.size() != n) throw ShapeMismatch("matrix size does not match the state set");
  for (const auto& g : model.g_generators())
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b)
        if (m[g[a]][g[b]] != m[a][b]) return false;
  return true;
}

bool DimensionReport::consistent() const {
  return all_invariant && conj_orbit_count == orbit_count && rank_orbit_matrices == orbit_count &&
         fixed_space_dim == orbit_count && pair_orbit_count == orbit_count && joint_rank == orbit_count;
}

DimensionReport what_dimension(const GroupModel& model) {
  const std::size_t n = model.num_states();
  DimensionReport report;
  report.orbit_count = model.dual_orbits().size();
  report.conj_orbit_count = model.conj_orbits().size();

  ExactMatrix orbit_rows;
  report.all_invariant = true;
  for (std::size_t o = 0; o < report.orbit_count; ++o) {
    const OrbitFunction f = f_o(model, o);
    report.all_invariant = report.all_invariant && g_invariance_check(model, f.matrix);
    orbit_rows.push_back(flatten(f.matrix));
  }
  report.rank_orbit_matrices = exact_rank(orbit_rows);

  const auto generators = model.g_generators();
  ExactMatrix constraints;
  for (const auto& g : generators)
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) {
        const std::size_t from = a * n + b;
        const std::size_t to = g[a] * n + g[b];
        if (from == to) continue;
        ExactVector row(n * n, CyclotomicInt(0));
        row[from] = 1;
        row[to] = -1;
        constraints.push_back(std::move(row));
      }
  report.fixed_space_dim = n * n - exact_rank(constraints);

  // orbits of G on pairs of states
  std::vector<std::size_t> parent(n * n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : generators)
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) parent[find(a * n + b)] = find(g[a] * n + g[b]);
  std::map<std::size_t, ExactVector> indicators;
  for (std::size_t p = 0; p < n * n; ++p) {
    auto [it, fresh] = indicators.try_emplace(find(p), ExactVector(n * n, CyclotomicInt(0)));
    it->second[p] = 1;
  }
  report.pair_orbit_count = indicators.size();
  ExactMatrix joint = orbit_rows;
  for (auto& [root, row] : indicators) joint.push_back(row);
  report.joint_rank = exact_rank(joint);
  return report;
}

ParamVector expand_params(const GroupModel& model, const ParamVector& params) {
  if (params.flavor == ParamFlavor::Abelian) return params;
  ParamVector out;
  out.flavor = ParamFlavor::Abelian;
  for (const auto& edge : params.values) {
    if (edge.size() != model.dual_orbits().size()) throw ShapeMismatch("orbit parameters need one value per orbit");
    ExactVector expanded;
    for (std::size_t chi = 0; chi < model.abelian().order(); ++chi) expanded.push_back(edge[model.dual_orbit_of(chi)]);
    out.values.push_back(std::move(expanded));
  }
  return out;
}

std::vector<ExactMatrix> edge_matrices_from_params(const GroupModel& model, const ParamVector& params) {
  const ParamVector p = expand_params(model, params);
  const std::size_t n = model.num_states();
  std::vector<ExactMatrix> basis;
  for (std::size_t chi = 0; chi < model.abelian().order(); ++chi) basis.push_back(l_chi(model, chi));
  std::vector<ExactMatrix> out;
  for (const auto& edge : p.values) {
    if (edge.size() != basis.size()) throw ShapeMismatch("abelian parameters need one value per character");
    ExactMatrix m = zero_matrix(n);
    for (std::size_t chi = 0; chi < basis.size(); ++chi) {
      if (edge[chi].is_zero()) continue;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m[a][b] += edge[chi] * basis[chi][a][b];
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::size_t LeafTensor::index(const std::vector<std::size_t>& states) const {
  std::size_t idx = 0;
  for (std::size_t s : states) idx = idx * num_states + s;
  return idx;
}

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

// Function of (state of the vertex, states of `leaves`), state most significant.
struct Message {
  std::vector<std::size_t> leaves;
  ExactVector data;
};

Message combine(const Message& x, const Message& y, std::size_t n) {
  Message out;
  out.leaves = x.leaves;
  out.leaves.insert(out.leaves.end(), y.leaves.begin(), y.leaves.end());
  const std::size_t nx = power(n, x.leaves.size());
  const std::size_t ny = power(n, y.leaves.size());
  out.data.assign(n * nx * ny, CyclotomicInt(0));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < nx; ++i) {
      const auto& a = x.data[s * nx + i];
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < ny; ++j) out.data[(s * nx + i) * ny + j] = a * y.data[s * ny + j];
    }
  return out;
}

Message through_edge(const Message& child, const ExactMatrix& m, std::size_t n) {
  Message out;
  out.leaves = child.leaves;
  const std::size_t k = power(n, child.leaves.size());
  out.data.assign(n * k, CyclotomicInt(0));
  for (std::size_t sp = 0; sp < n; ++sp)
    for (std::size_t sc = 0; sc < n; ++sc) {
      if (m[sp][sc].is_zero()) continue;
      for (std::size_t i = 0; i < k; ++i)
        if (!child.data[sc * k + i].is_zero()) out.data[sp * k + i] += m[sp][sc] * child.data[sc * k + i];
    }
  return out;
}

}  // namespace

LeafTensor raw_leaf_tensor(const GroupModel& model, const Tree& tree, const std::vector<ExactMatrix>& edge_matrices) {
  const std::size_t n = model.num_states();
  if (edge_matrices.size() != tree.num_edges()) throw ShapeMismatch("need one matrix per edge");
  for (const auto& m : edge_matrices) {
    if (m.size() != n) throw ShapeMismatch("edge matrix has the wrong size");
    for (const auto& row : m)
      if (row.size() != n) throw ShapeMismatch("edge matrix has the wrong size");
  }

  std::vector<Message> messages(tree.num_vertices());
  const auto order = tree.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    Message msg;
    if (tree.is_leaf(v)) {
      msg.leaves = {v};
      msg.data.assign(n * n, CyclotomicInt(0));
      for (std::size_t s = 0; s < n; ++s) msg.data[s * n + s] = 1;
    } else {
      msg.data.assign(n, CyclotomicInt(1));
    }
    for (std::size_t e : tree.outgoing_edges(v)) {
      msg = combine(msg, through_edge(messages[tree.edge(e).child], edge_matrices[e], n), n);
      messages[tree.edge(e).child] = {};
    }
    messages[v] = std::move(msg);
  }

  const Message& root = messages[tree.root()];
  const std::size_t k = power(n, root.leaves.size());
  ExactVector summed(k, CyclotomicInt(0));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < k; ++i) summed[i] += root.data[s * k + i];

  // reorder axes from message order to tree.leaves() order
  LeafTensor t;
  t.num_states = n;
  t.num_leaves = tree.leaves().size();
  t.values.assign(k, CyclotomicInt(0));
  std::vector<std::size_t> axis_of(tree.num_vertices());
  for (std::size_t i = 0; i < tree.leaves().size(); ++i) axis_of[tree.leaves()[i]] = i;
  std::vector<std::size_t> states(root.leaves.size()), ordered(t.num_leaves);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t rest = i;
    for (std::size_t j = root.leaves.size(); j-- > 0;) {
      states[j] = rest % n;
      rest /= n;
    }
    for (std::size_t j = 0; j < root.leaves.size(); ++j) ordered[axis_of[root.leaves[j]]] = states[j];
    t.values[t.index(ordered)] = summed[i];
  }
  return t;
}

SocketVector socket_coordinates(const GroupModel& model, const LeafTensor& t) {
  const auto& group = model.abelian();
  const std::size_t n = model.num_states();
  if (t.num_states != n || t.values.size() != power(n, t.num_leaves))
    throw ShapeMismatch("leaf tensor does not match the model");

  // conj chi(h_a) = chi(-h_a)
  std::vector<ExactVector> table(n, ExactVector(n));
  for (std::size_t chi = 0; chi < n; ++chi)
    for (std::size_t a = 0; a < n; ++a) table[chi][a] = character_eval(group, chi, group.negate(model.element_of_state(a)));

  ExactVector cur = t.values;
  for (std::size_t axis = 0; axis < t.num_leaves; ++axis) {
    const std::size_t inner = power(n, t.num_leaves - 1 - axis);
    const std::size_t outer = cur.size() / (inner * n);
    ExactVector next(cur.size(), CyclotomicInt(0));
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t chi = 0; chi < n; ++chi)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t i = 0; i < inner; ++i) {
            const auto& x = cur[(o * n + a) * inner + i];
            if (!x.is_zero()) next[(o * n + chi) * inner + i] += x * table[chi][a];
          }
    cur = std::move(next);
  }

  SocketVector out;
  std::vector<std::size_t> chars(t.num_leaves);
  for (std::size_t i = 0; i < cur.size(); ++i) {
    std::size_t rest = i;
    for (std::size_t j = t.num_leaves; j-- > 0;) {
      chars[j] = rest % n;
      rest /= n;
    }
    Socket s{chars};
    if (is_socket(group, s))
      out.emplace(std::move(s), cur[i]);
    else if (!cur[i].is_zero())
      throw NotInvariant("leaf tensor has a nonzero coefficient outside the sockets");
  }
  return out;
}

SocketVector monomial_socket_vector(const GroupModel& model, const Tree& tree, const ParamVector& params) {
  const ParamVector p = expand_params(model, params);
  if (p.values.size() != tree.num_edges()) throw ShapeMismatch("need parameters for every edge");
  const auto& group = model.abelian();
  SocketVector out;
  for (auto& s : enumerate_sockets(tree, group)) out.emplace(std::move(s), CyclotomicInt(0));
  for_each_network(tree, group, [&](const Network& network) {
    CyclotomicInt term = 1;
    for (std::size_t e = 0; e < tree.num_edges(); ++e) term *= p.values[e].at(network.characters[e]);
    out[socket_of(tree, group, network)] += term;
  });
  return out;
}

OracleReport oracle_check(const GroupModel& model, const Tree& tree, std::size_t draws, std::uint64_t seed) {
  OracleReport report;
  report.draws = draws;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> magnitude(1, 5);
  std::bernoulli_distribution negative(0.5);
  const bool abelian = model.is_abelian_model();
  const std::size_t width = abelian ? model.abelian().order() : model.dual_orbits().size();

  bool have_reference = false;
  CyclotomicInt c0, m0;
  for (std::size_t d = 0; d < draws; ++d) {
    ParamVector params;
    params.flavor = abelian ? ParamFlavor::Abelian : ParamFlavor::Orbit;
    for (std::size_t e = 0; e < tree.num_edges(); ++e) {
      ExactVector edge;
      for (std::size_t i = 0; i < width; ++i) {
        const long x = magnitude(rng);
        edge.emplace_back(negative(rng) ? -x : x);
      }
      params.values.push_back(std::move(edge));
    }
    const SocketVector coords =
        socket_coordinates(model, raw_leaf_tensor(model, tree, edge_matrices_from_params(model, params)));
    const SocketVector monomials = monomial_socket_vector(model, tree, params);
    report.sockets = coords.size();
    if (coords.size() != monomials.size()) {
      report.failure = "socket sets differ";
      return report;
    }
    for (const auto& [socket, m] : monomials) {
      const CyclotomicInt& c = coords.at(socket);
      if (!have_reference && !m.is_zero()) {
        c0 = c;
        m0 = m;
        have_reference = true;
        if (c0.is_zero()) {
          report.failure = "coordinate vanishes where the monomial does not";
          return report;
        }
      }
      if (have_reference ? c * m0 != c0 * m : !c.is_zero()) {
        std::ostringstream os;
        os << "draw " << d << ": socket (";
        for (std::size_t i = 0; i < socket.characters.size(); ++i) os << (i ? "," : "") << socket.characters[i];
        os << ") has coordinate " << c << " against monomial " << m;
        report.failure = os.str();
        return report;
      }
    }
  }
  report.agree = true;
  if (have_reference) {
    if (c0.is_integer() && m0.is_integer() && c0.to_integer() % m0.to_integer() == 0)
      report.scalar = mpz_class(c0.to_integer() / m0.to_integer()).get_str();
    else
      report.scalar = "(" + c0.to_string() + ") / (" + m0.to_string() + ")";
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string to_string(const LinearForm& form, const std::vector<std::string>& variables) {
  std::string out;
  for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
    const CyclotomicInt& c = form.coefficients[i];
    if (c.is_zero()) continue;
    std::string coeff = c.to_string();
    if (c.order() == 4) std::replace(coeff.begin(), coeff.end(), 'z', 'i');
    std::string term;
    bool negative = false;
    if (c.is_integer()) {
      mpz_class v = c.to_integer();
      negative = v < 0;
      if (negative) v = -v;
      term = (v == 1 ? "" : v.get_str() + "*") + variables[i];
    } else {
      term = "(" + coeff + ")*" + variables[i];
    }
    if (out.empty())
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

std::string AppendixReport::to_text() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < transform.size(); ++k)
    os << "x" << k << " = " << to_string(transform[k], variables) << '\n';
  os << "transform matches expected tuple: " << (transform_matches ? "yes" : "no") << '\n';
  os << "(1+i)x1 - 2i*x2 + (i-1)x3 = " << to_string(relation, variables) << '\n';
  for (const auto& s : separations) {
    std::string xj = s.xj.to_string(), xk = s.xk.to_string();
    if (s.xj.order() == 4) std::replace(xj.begin(), xj.end(), 'z', 'i');
    if (s.xk.order() == 4) std::replace(xk.begin(), xk.end(), 'z', 'i');
    os << "x" << s.j << " != x" << s.k << " at (";
    for (std::size_t i = 0; i < variables.size(); ++i)
      os << (i ? ", " : "") << variables[i] << "=" << s.point[i];
    os << "): " << xj << " vs " << xk << '\n';
  }
  os << "image is cut out by no coordinate equality: " << (all_pairs_separated ? "yes" : "no") << '\n';
  return os.str();
}

AppendixReport appendix_demo() {
  const CyclicFactorization z4({4});
  const CyclotomicInt i = CyclotomicInt::root_of_unity(4, 1);
  AppendixReport report;
  report.variables = {"a", "b", "d"};

  // x_k = sum_h chi_k(h) f(h) with f = (a, b, c, d), then c := b
  for (std::size_t k = 0; k < 4; ++k) {
    ExactVector full;
    for (std::size_t h = 0; h < 4; ++h) full.push_back(character_eval(z4, k, h));
    report.transform.push_back({{full[0], full[1] + full[2], full[3]}});
  }
  report.expected = {
      {{1, 2, 1}},
      {{1, i - 1, -i}},
      {{1, 0, -1}},
      {{1, -(i + 1), i}},
  };
  report.transform_matches = true;
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t v = 0; v < 3; ++v)
      report.transform_matches =
          report.transform_matches && report.transform[k].coefficients[v] == report.expected[k].coefficients[v];

  report.relation.coefficients.assign(3, CyclotomicInt(0));
  const CyclotomicInt weights[4] = {0, 1 + i, CyclotomicInt(-2) * i, i - 1};
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t v = 0; v < 3; ++v) report.relation.coefficients[v] += weights[k] * report.transform[k].coefficients[v];
  report.relation_vanishes = std::all_of(report.relation.coefficients.begin(), report.relation.coefficients.end(),
                                         [](const CyclotomicInt& c) { return c.is_zero(); });

  auto evaluate = [](const LinearForm& f, const std::vector<long>& point) {
    CyclotomicInt sum = 0;
    for (std::size_t v = 0; v < point.size(); ++v) sum += f.coefficients[v] * CyclotomicInt(point[v]);
    return sum;
  };
  report.all_pairs_separated = true;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j + 1; k < 4; ++k) {
      bool found = false;
      for (std::size_t v = 0; v < 3 && !found; ++v) {
        std::vector<long> point(3, 0);
        point[v] = 1;
        const CyclotomicInt xj = evaluate(report.transform[j], point);
        const CyclotomicInt xk = evaluate(report.transform[k], point);
        if (xj != xk) {
          report.separations.push_back({j, k, point, xj, xk});
          found = true;
        }
      }
      report.all_pairs_separated = report.all_pairs_separated && found;
    }
  return report;
}

}  // namespace phylotoric
