#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "phylotoric/cyclotomic.hpp"

namespace phylotoric {

/// Element of Z_{m1} x ... x Z_{mk}, as residues 0 <= r_i < m_i.
struct AbelianElement {
  std::vector<unsigned> residues;

  auto operator<=>(const AbelianElement&) const = default;
};

/// Character chi_u of Z_{m1} x ... x Z_{mk}, as exponents 0 <= u_i < m_i.
/// chi_u(r) = zeta_m^{sum_i u_i * r_i * (m / m_i)} with m the group exponent.
struct DualCharacter {
  std::vector<unsigned> exponents;

  auto operator<=>(const DualCharacter&) const = default;
};

/// A finite abelian group written as a product of cyclic factors.
///
/// Elements and characters are both enumerated in lexicographic order of
/// their tuples (first factor most significant), so index 0 is always the
/// identity, respectively the trivial character. Most of the library works
/// with these indices directly.
class CyclicFactorization {
public:
  CyclicFactorization() = default;
  explicit CyclicFactorization(std::vector<unsigned> orders);

  /// Parses "Z2", "Z2xZ4", ... ("Z1" and "" denote the trivial group).
  static CyclicFactorization parse(std::string_view spec);

  const std::vector<unsigned>& orders() const noexcept { return orders_; }
  std::size_t rank() const noexcept { return orders_.size(); }
  unsigned exponent() const noexcept { return exponent_; }
  std::size_t order() const noexcept { return order_; }

  AbelianElement element(std::size_t index) const;
  std::size_t index(const AbelianElement& h) const;
  DualCharacter character(std::size_t index) const;
  std::size_t index(const DualCharacter& chi) const;

  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t negate(std::size_t a) const;
  std::size_t subtract(std::size_t a, std::size_t b) const { return add(a, negate(b)); }

  /// Exponent k with chi(h) = zeta_m^k, 0 <= k < exponent(). Indices address
  /// the character and the element in canonical order.
  unsigned pairing_exponent(std::size_t chi, std::size_t h) const;

  /// Character addition and negation coincide with element arithmetic on indices.
  std::size_t add_characters(std::size_t a, std::size_t b) const { return add(a, b); }
  std::size_t negate_character(std::size_t a) const { return negate(a); }

  /// "Z2xZ4" style description; "Z1" for the trivial group.
  std::string to_string() const;

private:
  std::vector<unsigned> orders_;
  unsigned exponent_ = 1;
  std::size_t order_ = 1;
};

/// Exact value chi(h).
CyclotomicInt character_eval(const CyclicFactorization& group, const DualCharacter& chi,
                             const AbelianElement& h);
CyclotomicInt character_eval(const CyclicFactorization& group, std::size_t chi, std::size_t h);

/// Permutation of state indices 0..n-1. Products compose right to left:
/// (p * q)(x) = p(q(x)).
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::vector<unsigned> images);

  static Permutation identity(unsigned degree);
  /// Parses cycle notation with 1-based points, e.g. "(1,3)(2,4)"; "()" is the identity.
  static Permutation parse_cycles(std::string_view text, unsigned degree);

  unsigned degree() const noexcept { return static_cast<unsigned>(images_.size()); }
  unsigned operator[](unsigned x) const { return images_[x]; }
  const std::vector<unsigned>& images() const noexcept { return images_; }

  bool is_identity() const;
  Permutation inverse() const;
  Permutation operator*(const Permutation& rhs) const;

  /// 1-based cycle notation, "()" for the identity.
  std::string to_cycle_string() const;

  auto operator<=>(const Permutation&) const = default;

private:
  std::vector<unsigned> images_;
};

/// All elements of the group generated by `generators`, sorted by image array.
/// Throws CapExceeded once the closure grows beyond `cap` elements.
std::vector<Permutation> close_group(const std::vector<Permutation>& generators,
                                     std::size_t cap = 10'000);

/// Partition of 0..n-1 into orbits, each sorted, orbits sorted by minimal member.
using Partition = std::vector<std::vector<std::size_t>>;

/// Input to build_model.
struct ModelSpec {
  std::vector<std::string> states;
  CyclicFactorization abelian;
  /// Image of the i-th unit generator of `abelian` in Sym(states).
  std::vector<Permutation> abelian_generators;
  /// Generators of G beyond those of H.
  std::vector<Permutation> extra_generators;
  std::size_t base_state = 0;
  std::size_t group_cap = 10'000;
};

/// Data of a group-based model: an abelian group H acting freely and
/// transitively on a finite state set, normal in an overgroup G of
/// permutations, together with the derived orbit structure.
class GroupModel {
public:
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t num_states() const noexcept { return states_.size(); }
  const CyclicFactorization& abelian() const noexcept { return abelian_; }
  std::size_t base_state() const noexcept { return base_state_; }

  /// Permutation image of the H element with canonical index h.
  const Permutation& image(std::size_t h) const { return h_images_[h]; }
  const std::vector<Permutation>& h_generators() const noexcept { return h_generators_; }
  const std::vector<Permutation>& extra_generators() const noexcept { return extra_generators_; }
  /// All generators of G (those of H first).
  std::vector<Permutation> g_generators() const;
  const std::vector<Permutation>& g_elements() const noexcept { return g_elements_; }

  /// Index of h_a, the element of H sending the base state to a.
  std::size_t element_of_state(std::size_t a) const { return state_to_element_[a]; }
  /// State h(base).
  std::size_t state_of_element(std::size_t h) const { return element_to_state_[h]; }

  const Partition& conj_orbits() const noexcept { return conj_orbits_; }
  const Partition& dual_orbits() const noexcept { return dual_orbits_; }
  /// Position in dual_orbits() of the orbit containing character index chi.
  std::size_t dual_orbit_of(std::size_t chi) const { return dual_orbit_index_[chi]; }

  /// True when G = H, i.e. every dual orbit is a singleton.
  bool is_abelian_model() const noexcept { return dual_orbits_.size() == abelian_.order(); }

  std::size_t state_index(std::string_view name) const;

  /// The same model with a different distinguished state.
  GroupModel with_base_state(std::size_t base) const;

  const ModelSpec& spec() const noexcept { return spec_; }

private:
  friend GroupModel build_model(const ModelSpec& spec);

  ModelSpec spec_;
  std::vector<std::string> states_;
  CyclicFactorization abelian_;
  std::size_t base_state_ = 0;
  std::vector<Permutation> h_generators_;
  std::vector<Permutation> extra_generators_;
  std::vector<Permutation> h_images_;
  std::vector<Permutation> g_elements_;
  std::vector<std::size_t> state_to_element_;
  std::vector<std::size_t> element_to_state_;
  Partition conj_orbits_;
  Partition dual_orbits_;
  std::vector<std::size_t> dual_orbit_index_;
};

/// Validates the model hypotheses and derives the orbit data.
/// Throws ModelError (NotTransitive, NotFree, NotNormal, InvalidEmbedding).
GroupModel build_model(const ModelSpec& spec);

/// The unique element of H mapping state a to state b (= h_b - h_a).
std::size_t unique_transporter(const GroupModel& model, std::size_t a, std::size_t b);

/// Orbits of G acting on H by conjugation, as H element indices.
Partition conjugation_orbits(const GroupModel& model);
/// Orbits of G acting on characters of H by (g, chi)(h) = chi(g h g^-1).
Partition dual_orbits(const GroupModel& model);

namespace presets {

/// Binary model: Z2 acting on {0,1}.
GroupModel cfn();
/// 3-parameter Kimura: V4 = Z2xZ2 on {A,C,G,T}, G = H.
GroupModel k3p();
/// 2-parameter Kimura: V4 inside the dihedral group generated with (3,4).
GroupModel k2p();
/// Jukes-Cantor: V4 inside S4.
GroupModel jc();

}  // namespace presets

/// Regular action of an abelian group on itself, G = H.
GroupModel abelian_model(const CyclicFactorization& group);

/// Preset name ("CFN", "JC", "K2P", "K3P") or abelian spec ("Z3", "Z2xZ4").
/// Throws InputError on anything else.
GroupModel parse_group_spec(std::string_view spec);

/// Reads the model description format:
///
///     states: A C G T
///     abelian: Z2xZ2
///     h: (1,3)(2,4)
///     h: (1,2)(3,4)
///     g: (3,4)
///     base: A
///
/// Cycle notation uses 1-based state positions; '#' starts a comment.
GroupModel parse_group_file(std::string_view text);

}  // namespace phylotoric
