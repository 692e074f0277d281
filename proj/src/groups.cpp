#include "phylotoric/groups.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "phylotoric/error.hpp"

namespace phylotoric {

// ---------------------------------------------------------------------------
// CyclicFactorization

CyclicFactorization::CyclicFactorization(std::vector<unsigned> orders) : orders_(std::move(orders)) {
  for (unsigned m : orders_) {
    if (m < 2) throw InputError("cyclic factor orders must be at least 2");
    exponent_ = std::lcm(exponent_, m);
    order_ *= m;
  }
}

CyclicFactorization CyclicFactorization::parse(std::string_view spec) {
  std::vector<unsigned> orders;
  if (spec.empty() || spec == "Z1") return CyclicFactorization{};
  std::size_t pos = 0;
  while (pos < spec.size()) {
    if (spec[pos] != 'Z' && spec[pos] != 'z') throw ParseError("expected 'Z' in group spec", pos);
    ++pos;
    std::size_t start = pos;
    unsigned long value = 0;
    while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos]))) {
      value = value * 10 + static_cast<unsigned>(spec[pos] - '0');
      if (value > 1'000'000) throw ParseError("cyclic factor too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError("expected cyclic order after 'Z'", pos);
    if (value < 2) throw ParseError("cyclic factor order must be at least 2", start);
    orders.push_back(static_cast<unsigned>(value));
    if (pos == spec.size()) break;
    if (spec[pos] != 'x' && spec[pos] != 'X') throw ParseError("expected 'x' between factors", pos);
    ++pos;
    if (pos == spec.size()) throw ParseError("dangling 'x' in group spec", pos);
  }
  return CyclicFactorization(std::move(orders));
}

AbelianElement CyclicFactorization::element(std::size_t index) const {
  AbelianElement h{std::vector<unsigned>(orders_.size())};
  for (std::size_t i = orders_.size(); i-- > 0;) {
    h.residues[i] = static_cast<unsigned>(index % orders_[i]);
    index /= orders_[i];
  }
  return h;
}

std::size_t CyclicFactorization::index(const AbelianElement& h) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) index = index * orders_[i] + h.residues.at(i) % orders_[i];
  return index;
}

DualCharacter CyclicFactorization::character(std::size_t index) const {
  return DualCharacter{element(index).residues};
}

std::size_t CyclicFactorization::index(const DualCharacter& chi) const {
  return index(AbelianElement{chi.exponents});
}

std::size_t CyclicFactorization::add(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const unsigned m = orders_[i];
    const std::size_t ra = a % m;
    const std::size_t rb = b % m;
    out += ((ra + rb) % m) * stride;
    stride *= m;
    a /= m;
    b /= m;
  }
  return out;
}

std::size_t CyclicFactorization::negate(std::size_t a) const {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const unsigned m = orders_[i];
    out += ((m - a % m) % m) * stride;
    stride *= m;
    a /= m;
  }
  return out;
}

unsigned CyclicFactorization::pairing_exponent(std::size_t chi, std::size_t h) const {
  unsigned long long total = 0;
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const unsigned m = orders_[i];
    total += static_cast<unsigned long long>(chi % m) * (h % m) * (exponent_ / m);
    chi /= m;
    h /= m;
  }
  return static_cast<unsigned>(total % exponent_);
}

std::string CyclicFactorization::to_string() const {
  if (orders_.empty()) return "Z1";
  std::string out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) out += 'x';
    out += 'Z' + std::to_string(orders_[i]);
  }
  return out;
}

CyclotomicInt character_eval(const CyclicFactorization& group, std::size_t chi, std::size_t h) {
  return CyclotomicInt::root_of_unity(group.exponent(), group.pairing_exponent(chi, h));
}

CyclotomicInt character_eval(const CyclicFactorization& group, const DualCharacter& chi,
                             const AbelianElement& h) {
  return character_eval(group, group.index(chi), group.index(h));
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<unsigned> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (unsigned x : images_) {
    if (x >= images_.size() || seen[x]) throw InputError("not a permutation");
    seen[x] = true;
  }
}

Permutation Permutation::identity(unsigned degree) {
  std::vector<unsigned> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  return Permutation(std::move(images));
}

Permutation Permutation::parse_cycles(std::string_view text, unsigned degree) {
  std::vector<unsigned> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(degree, false);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(') throw ParseError("expected '(' in cycle notation", pos);
    ++pos;
    std::vector<unsigned> cycle;
    skip_space();
    while (pos < text.size() && text[pos] != ')') {
      const std::size_t start = pos;
      unsigned long value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<unsigned>(text[pos] - '0');
        if (value > degree) break;
        ++pos;
      }
      if (pos == start) throw ParseError("expected point in cycle", pos);
      if (value < 1 || value > degree) throw ParseError("cycle point out of range", start);
      const unsigned point = static_cast<unsigned>(value - 1);
      if (used[point]) throw ParseError("point repeated in cycle notation", start);
      used[point] = true;
      cycle.push_back(point);
      skip_space();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        skip_space();
      }
    }
    if (pos == text.size()) throw ParseError("unterminated cycle", pos);
    ++pos;  // ')'
    for (std::size_t i = 0; i < cycle.size(); ++i) images[cycle[i]] = cycle[(i + 1) % cycle.size()];
    skip_space();
  }
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const {
  for (unsigned i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<unsigned> inv(images_.size());
  for (unsigned i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (rhs.degree() != degree()) throw InputError("permutation degree mismatch");
  std::vector<unsigned> out(images_.size());
  for (unsigned i = 0; i < images_.size(); ++i) out[i] = images_[rhs.images_[i]];
  Permutation p;
  p.images_ = std::move(out);
  return p;
}

std::string Permutation::to_cycle_string() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (unsigned start = 0; start < images_.size(); ++start) {
    if (seen[start] || images_[start] == start) continue;
    out += '(';
    unsigned x = start;
    bool first = true;
    while (!seen[x]) {
      seen[x] = true;
      if (!first) out += ',';
      out += std::to_string(x + 1);
      first = false;
      x = images_[x];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::vector<Permutation> close_group(const std::vector<Permutation>& generators, std::size_t cap) {
  if (generators.empty()) throw InputError("close_group: no generators");
  const unsigned degree = generators.front().degree();
  for (const auto& g : generators)
    if (g.degree() != degree) throw InputError("close_group: generators act on different state sets");

  std::set<Permutation> seen{Permutation::identity(degree)};
  std::queue<Permutation> frontier;
  frontier.push(Permutation::identity(degree));
  while (!frontier.empty()) {
    const Permutation current = frontier.front();
    frontier.pop();
    for (const auto& g : generators) {
      Permutation next = g * current;
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw CapExceeded("group closure exceeds cap of " + std::to_string(cap) + " elements");
        frontier.push(std::move(next));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// GroupModel

namespace {

Partition canonical_partition(const std::vector<std::size_t>& parent) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < parent.size(); ++i) groups[parent[i]].push_back(i);
  Partition out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::size_t> roots() {
    std::vector<std::size_t> out(parent.size());
    for (std::size_t i = 0; i < parent.size(); ++i) out[i] = find(i);
    return out;
  }
};

Permutation power(const Permutation& p, unsigned k) {
  Permutation out = Permutation::identity(p.degree());
  for (unsigned i = 0; i < k; ++i) out = p * out;
  return out;
}

// Index map h -> g h g^-1 on canonical H indices, for each generator of G.
std::vector<std::vector<std::size_t>> conjugation_maps(const GroupModel& model) {
  std::map<Permutation, std::size_t> index_of;
  for (std::size_t h = 0; h < model.abelian().order(); ++h) index_of.emplace(model.image(h), h);
  std::vector<std::vector<std::size_t>> maps;
  for (const auto& g : model.g_generators()) {
    const Permutation g_inv = g.inverse();
    std::vector<std::size_t> map(model.abelian().order());
    for (std::size_t h = 0; h < map.size(); ++h) {
      auto it = index_of.find(g * model.image(h) * g_inv);
      if (it == index_of.end())
        throw ModelError(ModelError::Kind::NotNormal, "H is not normal in G: conjugating " +
                                                          model.image(h).to_cycle_string() + " by " +
                                                          g.to_cycle_string() + " leaves H");
      map[h] = it->second;
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

}  // namespace

std::vector<Permutation> GroupModel::g_generators() const {
  std::vector<Permutation> out = h_generators_;
  out.insert(out.end(), extra_generators_.begin(), extra_generators_.end());
  return out;
}

std::size_t GroupModel::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return i;
  throw InputError("unknown state '" + std::string(name) + "'");
}

GroupModel GroupModel::with_base_state(std::size_t base) const {
  ModelSpec spec = spec_;
  spec.base_state = base;
  return build_model(spec);
}

GroupModel build_model(const ModelSpec& spec) {
  using Kind = ModelError::Kind;
  const std::size_t n = spec.states.size();
  if (n == 0) throw ModelError(Kind::InvalidEmbedding, "empty state set");
  if (spec.base_state >= n) throw ModelError(Kind::InvalidEmbedding, "base state out of range");
  if (spec.abelian_generators.size() != spec.abelian.rank())
    throw ModelError(Kind::InvalidEmbedding, "need one generator image per cyclic factor of H");
  for (const auto& p : spec.abelian_generators)
    if (p.degree() != n) throw ModelError(Kind::InvalidEmbedding, "H generator acts on the wrong number of states");
  for (const auto& p : spec.extra_generators)
    if (p.degree() != n) throw ModelError(Kind::InvalidEmbedding, "G generator acts on the wrong number of states");

  const auto& gens = spec.abelian_generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!power(gens[i], spec.abelian.orders()[i]).is_identity())
      throw ModelError(Kind::InvalidEmbedding, "generator " + gens[i].to_cycle_string() +
                                                   " does not have order dividing " +
                                                   std::to_string(spec.abelian.orders()[i]));
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (gens[i] * gens[j] != gens[j] * gens[i])
        throw ModelError(Kind::InvalidEmbedding, "H generators do not commute");
  }

  GroupModel model;
  model.spec_ = spec;
  model.states_ = spec.states;
  model.abelian_ = spec.abelian;
  model.base_state_ = spec.base_state;
  model.h_generators_ = spec.abelian_generators;
  model.extra_generators_ = spec.extra_generators;

  const std::size_t order = spec.abelian.order();
  model.h_images_.reserve(order);
  for (std::size_t h = 0; h < order; ++h) {
    const AbelianElement element = spec.abelian.element(h);
    Permutation image = Permutation::identity(static_cast<unsigned>(n));
    for (std::size_t i = 0; i < gens.size(); ++i) image = power(gens[i], element.residues[i]) * image;
    model.h_images_.push_back(std::move(image));
  }

  for (std::size_t h = 1; h < order; ++h)
    for (unsigned a = 0; a < n; ++a)
      if (model.h_images_[h][a] == a)
        throw ModelError(Kind::NotFree, "H does not act freely: " + model.h_images_[h].to_cycle_string() +
                                            " fixes state " + spec.states[a]);

  model.state_to_element_.assign(n, order);
  model.element_to_state_.resize(order);
  for (std::size_t h = 0; h < order; ++h) {
    const unsigned a = model.h_images_[h][static_cast<unsigned>(spec.base_state)];
    model.state_to_element_[a] = h;
    model.element_to_state_[h] = a;
  }
  for (std::size_t a = 0; a < n; ++a)
    if (model.state_to_element_[a] == order)
      throw ModelError(Kind::NotTransitive, "H does not act transitively: state " + spec.states[a] +
                                                " is not reachable from " + spec.states[spec.base_state]);

  auto maps = conjugation_maps(model);  // throws NotNormal
  std::vector<Permutation> all_gens = model.g_generators();
  if (all_gens.empty()) all_gens.push_back(Permutation::identity(static_cast<unsigned>(n)));
  model.g_elements_ = close_group(all_gens, spec.group_cap);

  UnionFind conj(order);
  for (const auto& map : maps)
    for (std::size_t h = 0; h < order; ++h) conj.unite(h, map[h]);
  model.conj_orbits_ = canonical_partition(conj.roots());

  // Dual action: chi -> chi o c_g, matched exactly against the character table.
  const CyclicFactorization& group = spec.abelian;
  std::map<std::vector<unsigned>, std::size_t> table;
  for (std::size_t chi = 0; chi < order; ++chi) {
    std::vector<unsigned> row(order);
    for (std::size_t h = 0; h < order; ++h) row[h] = group.pairing_exponent(chi, h);
    table.emplace(std::move(row), chi);
  }
  UnionFind dual(order);
  for (const auto& map : maps) {
    for (std::size_t chi = 0; chi < order; ++chi) {
      std::vector<unsigned> row(order);
      for (std::size_t h = 0; h < order; ++h) row[h] = group.pairing_exponent(chi, map[h]);
      auto it = table.find(row);
      if (it == table.end()) throw std::logic_error("conjugated character is not a character");
      dual.unite(chi, it->second);
    }
  }
  model.dual_orbits_ = canonical_partition(dual.roots());
  model.dual_orbit_index_.resize(order);
  for (std::size_t o = 0; o < model.dual_orbits_.size(); ++o)
    for (std::size_t chi : model.dual_orbits_[o]) model.dual_orbit_index_[chi] = o;
  return model;
}

std::size_t unique_transporter(const GroupModel& model, std::size_t a, std::size_t b) {
  if (a >= model.num_states() || b >= model.num_states()) throw InputError("state out of range");
  return model.abelian().subtract(model.element_of_state(b), model.element_of_state(a));
}

Partition conjugation_orbits(const GroupModel& model) { return model.conj_orbits(); }

Partition dual_orbits(const GroupModel& model) { return model.dual_orbits(); }

// ---------------------------------------------------------------------------
// Presets and parsing

namespace {

GroupModel nucleotide_model(std::vector<std::string> extra_cycles) {
  ModelSpec spec;
  spec.states = {"A", "C", "G", "T"};
  spec.abelian = CyclicFactorization({2, 2});
  // Canonical element order (0,0),(0,1),(1,0),(1,1) maps onto
  // (), (1,2)(3,4), (1,3)(2,4), (1,4)(2,3).
  spec.abelian_generators = {Permutation::parse_cycles("(1,3)(2,4)", 4),
                             Permutation::parse_cycles("(1,2)(3,4)", 4)};
  for (const auto& c : extra_cycles) spec.extra_generators.push_back(Permutation::parse_cycles(c, 4));
  return build_model(spec);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

namespace presets {

GroupModel cfn() {
  ModelSpec spec;
  spec.states = {"0", "1"};
  spec.abelian = CyclicFactorization({2});
  spec.abelian_generators = {Permutation::parse_cycles("(1,2)", 2)};
  return build_model(spec);
}

GroupModel k3p() { return nucleotide_model({}); }

GroupModel k2p() { return nucleotide_model({"(3,4)"}); }

GroupModel jc() { return nucleotide_model({"(3,4)", "(2,3)"}); }

}  // namespace presets

GroupModel abelian_model(const CyclicFactorization& group) {
  ModelSpec spec;
  spec.abelian = group;
  const std::size_t order = group.order();
  for (std::size_t h = 0; h < order; ++h) {
    const auto residues = group.element(h).residues;
    std::string name;
    for (std::size_t i = 0; i < residues.size(); ++i) {
      if (i) name += '.';
      name += std::to_string(residues[i]);
    }
    spec.states.push_back(name.empty() ? "0" : name);
  }
  for (std::size_t i = 0; i < group.rank(); ++i) {
    std::vector<unsigned> unit(group.rank(), 0);
    unit[i] = 1;
    const std::size_t step = group.index(AbelianElement{unit});
    std::vector<unsigned> images(order);
    for (std::size_t h = 0; h < order; ++h) images[h] = static_cast<unsigned>(group.add(h, step));
    spec.abelian_generators.emplace_back(std::move(images));
  }
  return build_model(spec);
}

GroupModel parse_group_spec(std::string_view spec) {
  const std::string name = upper(trim_view(spec));
  if (name == "CFN") return presets::cfn();
  if (name == "JC") return presets::jc();
  if (name == "K2P") return presets::k2p();
  if (name == "K3P") return presets::k3p();
  if (!name.empty() && name.front() == 'Z') return abelian_model(CyclicFactorization::parse(name));
  throw InputError("unknown group spec '" + std::string(spec) + "'");
}

GroupModel parse_group_file(std::string_view text) {
  std::vector<std::string> states;
  std::optional<CyclicFactorization> abelian;
  std::vector<std::pair<std::string, std::size_t>> h_cycles;
  std::vector<std::pair<std::string, std::size_t>> g_cycles;
  std::string base;
  std::size_t base_offset = 0;

  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::size_t line_offset = offset;
    offset = end + 1;
    line = trim_view(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_offset);
    const std::string key = upper(trim_view(line.substr(0, colon)));
    const std::string_view value = trim_view(line.substr(colon + 1));
    if (key == "STATES") {
      std::istringstream in{std::string(value)};
      for (std::string s; in >> s;) states.push_back(s);
    } else if (key == "ABELIAN") {
      abelian = CyclicFactorization::parse(value);
    } else if (key == "H") {
      h_cycles.emplace_back(std::string(value), line_offset);
    } else if (key == "G") {
      g_cycles.emplace_back(std::string(value), line_offset);
    } else if (key == "BASE") {
      base = std::string(value);
      base_offset = line_offset;
    } else {
      throw ParseError("unknown key '" + key + "'", line_offset);
    }
  }
  if (states.empty()) throw ParseError("missing 'states' line", 0);
  if (!abelian) throw ParseError("missing 'abelian' line", 0);

  ModelSpec spec;
  spec.states = states;
  spec.abelian = *abelian;
  const auto degree = static_cast<unsigned>(states.size());
  auto parse_at = [&](const std::pair<std::string, std::size_t>& c) {
    try {
      return Permutation::parse_cycles(c.first, degree);
    } catch (const ParseError& e) {
      throw ParseError("bad cycle notation '" + c.first + "'", c.second + e.offset());
    }
  };
  for (const auto& c : h_cycles) spec.abelian_generators.push_back(parse_at(c));
  for (const auto& c : g_cycles) spec.extra_generators.push_back(parse_at(c));
  if (!base.empty()) {
    auto it = std::find(states.begin(), states.end(), base);
    if (it == states.end()) throw ParseError("base state '" + base + "' is not listed", base_offset);
    spec.base_state = static_cast<std::size_t>(it - states.begin());
  }
  return build_model(spec);
}

}  // namespace phylotoric
