#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phylotoric/cyclotomic.hpp"
#include "phylotoric/groups.hpp"
#include "phylotoric/polytope.hpp"
#include "phylotoric/trees.hpp"

namespace phylotoric {

using ExactVector = std::vector<CyclotomicInt>;
/// Row-major; rows and columns of transition matrices are indexed by states.
using ExactMatrix = std::vector<ExactVector>;

/// Rank over the cyclotomic field, by fraction-free elimination.
std::size_t exact_rank(ExactMatrix rows);

/// w_chi: entry chi(h_a) at state a.
ExactVector w_chi(const GroupModel& model, std::size_t chi);

/// Entry (a, b) is f(h_b - h_a); f is given on H element indices.
ExactMatrix l_f(const GroupModel& model, const ExactVector& f);
ExactMatrix l_chi(const GroupModel& model, std::size_t chi);

struct OrbitFunction {
  ExactVector values;  // on H element indices
  ExactMatrix matrix;  // l_f of values
};

/// Sum of the characters in dual orbit `orbit` (index into dual_orbits()).
OrbitFunction f_o(const GroupModel& model, std::size_t orbit);

/// True iff M[g(a)][g(b)] = M[a][b] for every generator g of G.
bool g_invariance_check(const GroupModel& model, const ExactMatrix& m);

struct DimensionReport {
  std::size_t orbit_count = 0;       // |dual orbits|
  std::size_t conj_orbit_count = 0;  // |conjugation orbits|
  std::size_t rank_orbit_matrices = 0;  // rank of {l_{f_o}}
  std::size_t fixed_space_dim = 0;   // kernel of the constraints M = P_g M P_g^T
  std::size_t pair_orbit_count = 0;  // G-orbits on A x A
  std::size_t joint_rank = 0;        // rank of {l_{f_o}} together with the pair-orbit indicators
  bool all_invariant = false;        // every l_{f_o} passes g_invariance_check

  bool consistent() const;
  std::size_t dimension() const { return orbit_count; }
};

/// Dimension of the space of G-invariant transition matrices, cross-checked
/// against an exact kernel computation and a span comparison.
DimensionReport what_dimension(const GroupModel& model);

enum class ParamFlavor { Abelian, Orbit };

/// Per-edge coefficients: indexed by character (abelian) or dual orbit.
struct ParamVector {
  ParamFlavor flavor = ParamFlavor::Abelian;
  std::vector<ExactVector> values;
};

/// Orbit coefficients copied onto every character of the orbit.
ParamVector expand_params(const GroupModel& model, const ParamVector& params);

/// M_e = sum_chi p[e][chi] l_chi.
std::vector<ExactMatrix> edge_matrices_from_params(const GroupModel& model, const ParamVector& params);

/// Values on leaf-state assignments, lexicographic with the first leaf (in
/// tree.leaves() order) most significant.
struct LeafTensor {
  std::size_t num_states = 0;
  std::size_t num_leaves = 0;
  ExactVector values;

  std::size_t index(const std::vector<std::size_t>& states) const;
};

/// Sum over all vertex-state assignments extending each leaf assignment of
/// the product of edge-matrix entries, by eliminating vertices leaves first.
/// Throws ShapeMismatch.
LeafTensor raw_leaf_tensor(const GroupModel& model, const Tree& tree, const std::vector<ExactMatrix>& edge_matrices);

using SocketVector = std::map<Socket, CyclotomicInt>;

/// Coefficients of t in the basis of tensor products of w_chi, each scaled by
/// |H|^|L| so that they stay in Z[zeta]: c(chi) = sum_a t(a) prod_l conj chi_l(h_{a_l}).
/// Every socket appears in the result. Throws NotInvariant if a coefficient
/// outside the sockets is nonzero.
SocketVector socket_coordinates(const GroupModel& model, const LeafTensor& t);

/// Value at socket s: sum over networks restricting to s of prod_e p[e][chi_e].
SocketVector monomial_socket_vector(const GroupModel& model, const Tree& tree, const ParamVector& params);

struct OracleReport {
  std::size_t draws = 0;
  std::size_t sockets = 0;
  bool agree = false;
  /// Global ratio coordinates / monomials, e.g. "64"; empty if undefined.
  std::string scalar;
  std::string failure;
};

/// Draws `draws` random nonzero integer parameter vectors and checks that
/// socket_coordinates(raw_leaf_tensor(..)) is one fixed multiple of
/// monomial_socket_vector(..). Orbit-flavor parameters are used for models
/// with G != H.
OracleReport oracle_check(const GroupModel& model, const Tree& tree, std::size_t draws, std::uint64_t seed);

/// Linear form over named variables with exact coefficients.
struct LinearForm {
  ExactVector coefficients;
};

struct AppendixReport {
  std::vector<std::string> variables;       // a, b, d after imposing b = c
  std::vector<LinearForm> transform;        // x0..x3
  std::vector<LinearForm> expected;         // the stated tuple
  bool transform_matches = false;
  LinearForm relation;                      // (1+i)x1 - 2i x2 + (i-1)x3
  bool relation_vanishes = false;
  struct Separation {
    std::size_t j, k;
    std::vector<long> point;  // values of the variables
    CyclotomicInt xj, xk;
  };
  std::vector<Separation> separations;      // one per pair j < k
  bool all_pairs_separated = false;

  bool passed() const { return transform_matches && relation_vanishes && all_pairs_separated; }
  std::string to_text() const;
};

/// Fourier transform of circulant Z4 parameters under b = c.
AppendixReport appendix_demo();

std::string to_string(const LinearForm& form, const std::vector<std::string>& variables);

}  // namespace phylotoric
