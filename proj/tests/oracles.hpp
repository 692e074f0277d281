#pragma once

// Brute-force reference computations used by the tests. They follow the
// definitions directly and share no code paths with the library beyond the
// basic data types.

#include <algorithm>
#include <set>
#include <vector>

#include "phylotoric/fourier.hpp"
#include "phylotoric/lattice.hpp"

namespace oracle {

using namespace phylotoric;

inline std::vector<unsigned> add_tuples(const std::vector<unsigned>& a, const std::vector<unsigned>& b,
                                        const std::vector<unsigned>& orders, bool subtract = false) {
  std::vector<unsigned> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = subtract ? (a[i] + orders[i] - b[i]) % orders[i] : (a[i] + b[i]) % orders[i];
  return r;
}

/// Every edge assignment, filtered by the vertex condition written out on
/// exponent tuples.
inline std::set<Network> networks(const Tree& tree, const CyclicFactorization& group) {
  std::set<Network> out;
  const std::size_t m = tree.num_edges();
  const std::size_t n = group.order();
  std::vector<std::size_t> assign(m, 0);
  const std::vector<unsigned> zero(group.rank(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t v : tree.inner()) {
      std::vector<unsigned> sum = zero;
      for (std::size_t e = 0; e < m; ++e) {
        if (tree.edge(e).child == v) sum = add_tuples(sum, group.character(assign[e]).exponents, group.orders());
        if (tree.edge(e).parent == v)
          sum = add_tuples(sum, group.character(assign[e]).exponents, group.orders(), true);
      }
      if (sum != zero) ok = false;
    }
    if (ok) out.insert(Network{assign});
    std::size_t pos = m;
    while (pos > 0 && ++assign[pos - 1] == n) assign[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

/// Leaf tensor as the sum over all vertex-state assignments.
inline ExactVector leaf_tensor(const GroupModel& model, const Tree& tree, const std::vector<ExactMatrix>& mats) {
  const std::size_t n = model.num_states();
  const std::size_t nv = tree.num_vertices();
  std::size_t leaf_count = tree.leaves().size();
  std::size_t size = 1;
  for (std::size_t i = 0; i < leaf_count; ++i) size *= n;
  ExactVector out(size, CyclotomicInt(0));
  std::vector<std::size_t> state(nv, 0);
  for (;;) {
    CyclotomicInt term = 1;
    for (std::size_t e = 0; e < tree.num_edges() && !term.is_zero(); ++e)
      term *= mats[e][state[tree.edge(e).parent]][state[tree.edge(e).child]];
    std::size_t idx = 0;
    for (std::size_t leaf : tree.leaves()) idx = idx * n + state[leaf];
    out[idx] += term;
    std::size_t pos = nv;
    while (pos > 0 && ++state[pos - 1] == n) state[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

/// Whether q is a sum of two of the given points.
inline bool sum_of_two(const Point& q, const std::vector<Point>& points) {
  for (const auto& a : points)
    for (const auto& b : points) {
      bool same = true;
      for (std::size_t i = 0; i < q.size() && same; ++i) same = a[i] + b[i] == q[i];
      if (same) return true;
    }
  return false;
}

/// Integer points of the box [lo, hi]^d passing `keep`.
template <class Keep>
std::vector<Point> box_points(std::size_t d, std::int64_t lo, std::int64_t hi, Keep keep) {
  std::vector<Point> out;
  Point p(d, lo);
  for (;;) {
    if (keep(p)) out.push_back(p);
    std::size_t pos = d;
    while (pos > 0 && ++p[pos - 1] > hi) p[--pos] = lo;
    if (pos == 0) break;
  }
  return out;
}

}  // namespace oracle
