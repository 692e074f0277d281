#include "phylotoric/lattice.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "phylotoric/error.hpp"

namespace phylotoric {

namespace {

using Int128 = __int128;
using Coords = std::vector<std::int64_t>;

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void make_primitive(BigVector& v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

std::int64_t to_int64(const mpz_class& x) {
  if (!x.fits_slong_p()) throw ScaleExceeded("coordinate does not fit in 64 bits");
  return x.get_si();
}

mpz_class dot(const BigVector& a, const Point& x) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += a[i] * mpz_class(static_cast<long>(x[i]));
  return s;
}

// ---------------------------------------------------------------------------
// Double description for the facets of a full-dimensional polytope.

class Bits {
public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void resize(std::size_t n) { words_.resize((n + 63) / 64, 0); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  bool contains(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((o.words_[i] & ~words_[i]) != 0) return false;
    return true;
  }

private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  BigVector h;
  Bits zeros;
};

// Facets a . y <= b of conv(points), which must span R^dim affinely.
std::vector<std::pair<BigVector, mpz_class>> hull_facets(const std::vector<Coords>& points, std::size_t dim,
                                                          const ScaleLimits& limits) {
  if (points.size() > limits.max_points)
    throw ScaleExceeded("hull input has " + std::to_string(points.size()) + " points, cap " +
                        std::to_string(limits.max_points));
  const std::size_t d = dim + 1;
  const std::size_t m = points.size();
  std::vector<BigVector> rows;
  for (const auto& p : points) {
    BigVector r{1};
    for (auto x : p) r.emplace_back(static_cast<long>(x));
    rows.push_back(std::move(r));
  }

  // greedy choice of d linearly independent rows
  std::vector<std::size_t> chosen;
  std::vector<BigVector> echelon;
  std::vector<std::size_t> echelon_pivot;
  for (std::size_t i = 0; i < m && chosen.size() < d; ++i) {
    BigVector v = rows[i];
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const std::size_t c = echelon_pivot[k];
      if (v[c] == 0) continue;
      const mpz_class f = v[c], p = echelon[k][c];
      for (std::size_t j = 0; j < d; ++j) v[j] = p * v[j] - f * echelon[k][j];
      make_primitive(v);
    }
    auto it = std::find_if(v.begin(), v.end(), [](const mpz_class& x) { return x != 0; });
    if (it == v.end()) continue;
    echelon_pivot.push_back(static_cast<std::size_t>(it - v.begin()));
    echelon.push_back(std::move(v));
    chosen.push_back(i);
  }
  if (chosen.size() != d) throw std::logic_error("hull_facets: points are not full-dimensional");

  // initial rays: columns of the inverse of the chosen rows
  std::vector<std::vector<mpq_class>> aug(d, std::vector<mpq_class>(2 * d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug[i][j] = rows[chosen[i]][j];
    aug[i][d + i] = 1;
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (aug[p][c] == 0) ++p;
    std::swap(aug[p], aug[c]);
    const mpq_class inv = 1 / aug[c][c];
    for (auto& x : aug[c]) x *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || aug[r][c] == 0) continue;
      const mpq_class f = aug[r][c];
      for (std::size_t j = 0; j < 2 * d; ++j) aug[r][j] -= f * aug[c][j];
    }
  }
  std::vector<Ray> rays;
  std::vector<bool> processed(m, false);
  for (std::size_t j = 0; j < d; ++j) {
    mpz_class lcm = 1;
    for (std::size_t i = 0; i < d; ++i) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), aug[i][d + j].get_den_mpz_t());
    Ray ray{BigVector(d), Bits(m)};
    for (std::size_t i = 0; i < d; ++i) ray.h[i] = mpz_class(aug[i][d + j] * lcm);
    make_primitive(ray.h);
    for (std::size_t k = 0; k < d; ++k)
      if (k != j) ray.zeros.set(chosen[k]);
    rays.push_back(std::move(ray));
  }
  for (std::size_t c : chosen) processed[c] = true;

  auto evaluate = [&](const BigVector& row, const BigVector& h) {
    mpz_class s = 0;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * h[j];
    return s;
  };

  for (std::size_t i = 0; i < m; ++i) {
    if (processed[i]) continue;
    processed[i] = true;
    std::vector<mpz_class> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = evaluate(rows[i], rays[r].h);
      if (value[r] > 0)
        pos.push_back(r);
      else if (value[r] < 0)
        neg.push_back(r);
      else
        rays[r].zeros.set(i);
    }
    if (neg.empty()) continue;

    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (value[r] >= 0) next.push_back(rays[r]);
    for (std::size_t p : pos)
      for (std::size_t q : neg) {
        const Bits common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < d) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != q && rays[r].zeros.contains(common)) adjacent = false;
        if (!adjacent) continue;
        Ray ray{BigVector(d), common};
        for (std::size_t j = 0; j < d; ++j) ray.h[j] = value[p] * rays[q].h[j] - value[q] * rays[p].h[j];
        make_primitive(ray.h);
        ray.zeros.set(i);
        next.push_back(std::move(ray));
        if (next.size() > limits.max_rays)
          throw ScaleExceeded("double description exceeded " + std::to_string(limits.max_rays) + " rays");
      }
    rays = std::move(next);
  }

  // h0 + h . y >= 0  <=>  (-h) . y <= h0
  std::vector<std::pair<BigVector, mpz_class>> facets;
  for (const auto& ray : rays) {
    BigVector a(dim);
    bool zero = true;
    for (std::size_t j = 0; j < dim; ++j) {
      a[j] = -ray.h[j + 1];
      zero = zero && a[j] == 0;
    }
    if (zero) continue;
    facets.emplace_back(std::move(a), ray.h[0]);
  }
  std::sort(facets.begin(), facets.end());
  return facets;
}

std::vector<Point> distinct(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<BigVector> hermite_normal_form(std::vector<BigVector> rows, std::vector<std::size_t>* pivots) {
  std::vector<std::size_t> found;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r)
        if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const mpz_class q = floor_div(rows[r][c], rows[top][c]);
        for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[top][j];
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][c] == 0) continue;
    if (rows[top][c] < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t r = 0; r < top; ++r) {
      const mpz_class q = floor_div(rows[r][c], rows[top][c]);
      if (q != 0)
        for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[top][j];
    }
    found.push_back(c);
    ++top;
  }
  rows.resize(top);
  if (pivots) *pivots = std::move(found);
  return rows;
}

std::optional<BigVector> AffineLattice::coordinates(const Point& p, long scale) const {
  if (p.size() != anchor.size()) throw ShapeMismatch("point has the wrong dimension");
  BigVector v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    v[i] = mpz_class(static_cast<long>(p[i])) - mpz_class(scale) * mpz_class(static_cast<long>(anchor[i]));
  BigVector y(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::size_t c = pivots[i];
    if (!mpz_divisible_p(v[c].get_mpz_t(), basis[i][c].get_mpz_t())) return std::nullopt;
    y[i] = v[c] / basis[i][c];
    if (y[i] != 0)
      for (std::size_t j = c; j < v.size(); ++j) v[j] -= y[i] * basis[i][j];
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return y;
}

Point AffineLattice::point(const std::vector<std::int64_t>& y, long scale) const {
  BigVector v(anchor.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = mpz_class(scale) * mpz_class(static_cast<long>(anchor[j]));
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (y[i] != 0)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += mpz_class(static_cast<long>(y[i])) * basis[i][j];
  Point out;
  for (const auto& x : v) out.push_back(to_int64(x));
  return out;
}

AffineLattice spanned_lattice(const std::vector<Point>& input) {
  if (input.empty()) throw InputError("spanned_lattice needs at least one point");
  const std::vector<Point> points = distinct(input);
  AffineLattice lattice;
  lattice.anchor = points.front();
  std::vector<BigVector> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != lattice.anchor.size()) throw ShapeMismatch("points differ in dimension");
    BigVector d(lattice.anchor.size());
    for (std::size_t j = 0; j < d.size(); ++j)
      d[j] = mpz_class(static_cast<long>(points[i][j])) - mpz_class(static_cast<long>(lattice.anchor[j]));
    diffs.push_back(std::move(d));
  }
  lattice.basis = hermite_normal_form(std::move(diffs), &lattice.pivots);
  return lattice;
}

bool HRep::contains(const Point& x, long n) const {
  for (const auto& e : equalities)
    if (dot(e.normal, x) != mpz_class(n) * e.offset) return false;
  for (const auto& h : inequalities)
    if (dot(h.normal, x) > mpz_class(n) * h.offset) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

// Ambient H-representation from facets a . y <= b in lattice coordinates.
HRep ambient_hrep(const AffineLattice& lattice, const std::vector<std::pair<BigVector, mpz_class>>& facets) {
  const std::size_t r = lattice.rank();
  const std::size_t dim = lattice.ambient_dim();
  HRep hrep;

  // On the affine hull, x_piv - anchor_piv = y * U with U upper triangular.
  auto solve_upper = [&](const BigVector& a) {
    // c with U c = a
    std::vector<mpq_class> c(r);
    for (std::size_t i = r; i-- > 0;) {
      mpq_class s = a[i];
      for (std::size_t j = i + 1; j < r; ++j) s -= mpq_class(lattice.basis[i][lattice.pivots[j]]) * c[j];
      c[i] = s / mpq_class(lattice.basis[i][lattice.pivots[i]]);
    }
    return c;
  };

  for (const auto& [a, b] : facets) {
    const auto c = solve_upper(a);
    mpz_class lcm = 1;
    for (const auto& x : c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    HalfSpace h{BigVector(dim, 0), b * lcm};
    for (std::size_t i = 0; i < r; ++i) h.normal[lattice.pivots[i]] = mpz_class(c[i] * lcm);
    h.offset += dot(h.normal, lattice.anchor);
    BigVector all = h.normal;
    all.push_back(h.offset);
    make_primitive(all);
    h.offset = all.back();
    all.pop_back();
    h.normal = std::move(all);
    hrep.inequalities.push_back(std::move(h));
  }

  // Equalities from the kernel of the basis: one per non-pivot column.
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t p : lattice.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> z(dim, 0);
    z[f] = 1;
    for (std::size_t i = r; i-- > 0;) {
      mpq_class s = 0;
      for (std::size_t j = lattice.pivots[i] + 1; j < dim; ++j) s += mpq_class(lattice.basis[i][j]) * z[j];
      z[lattice.pivots[i]] = -s / mpq_class(lattice.basis[i][lattice.pivots[i]]);
    }
    mpz_class lcm = 1;
    for (const auto& x : z) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    HalfSpace e{BigVector(dim), 0};
    for (std::size_t j = 0; j < dim; ++j) e.normal[j] = mpz_class(z[j] * lcm);
    make_primitive(e.normal);
    e.offset = dot(e.normal, lattice.anchor);
    hrep.equalities.push_back(std::move(e));
  }
  return hrep;
}

}  // namespace

HRep facet_description(const std::vector<Point>& points, const ScaleLimits& limits) {
  return LatticePolytope(points, limits).hrep();
}

LatticePolytope::LatticePolytope(std::vector<Point> points, ScaleLimits limits)
    : points_(distinct(std::move(points))), limits_(limits) {
  if (points_.empty()) throw InputError("polytope needs at least one point");
  lattice_ = spanned_lattice(points_);
  const std::size_t r = lattice_.rank();
  for (const auto& p : points_) {
    const auto y = lattice_.coordinates(p);
    Coords c;
    for (const auto& x : *y) c.push_back(to_int64(x));
    coords_.push_back(std::move(c));
  }

  std::vector<std::pair<BigVector, mpz_class>> facets;
  if (r > 0) facets = hull_facets(coords_, r, limits_);
  hrep_ = ambient_hrep(lattice_, facets);
  for (const auto& [a, b] : facets) {
    Coords n;
    for (const auto& x : a) n.push_back(to_int64(x));
    facet_normals_.push_back(std::move(n));
    facet_offsets_.push_back(to_int64(b));
  }

  // bounds for coordinate k from the facets of the projection to coordinates 0..k
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<Coords> projected;
    for (const auto& c : coords_) projected.emplace_back(c.begin(), c.begin() + static_cast<long>(k) + 1);
    std::sort(projected.begin(), projected.end());
    projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
    Projection proj;
    for (const auto& [a, b] : hull_facets(projected, k + 1, limits_)) {
      if (a[k] == 0) continue;
      Coords n;
      for (const auto& x : a) n.push_back(to_int64(x));
      proj.normals.push_back(std::move(n));
      proj.offsets.push_back(to_int64(b));
    }
    prefixes_.push_back(std::move(proj));
  }
}

bool LatticePolytope::contains_coordinates(const std::vector<std::int64_t>& y, long n) const {
  for (std::size_t f = 0; f < facet_normals_.size(); ++f) {
    std::int64_t s = 0;
    const auto& a = facet_normals_[f];
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * y[i];
    if (s > n * facet_offsets_[f]) return false;
  }
  return true;
}

void LatticePolytope::for_each_lattice_point(long n, const std::function<void(const std::vector<std::int64_t>&)>& visit) const {
  const std::size_t r = lattice_.rank();
  Coords y(r, 0);
  std::size_t emitted = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == r) {
      if (++emitted > limits_.max_lattice_points)
        throw ScaleExceeded("dilate has more than " + std::to_string(limits_.max_lattice_points) + " lattice points");
      visit(y);
      return;
    }
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    const Projection& proj = prefixes_[k];
    for (std::size_t f = 0; f < proj.normals.size(); ++f) {
      const auto& a = proj.normals[f];
      std::int64_t rest = n * proj.offsets[f];
      for (std::size_t i = 0; i < k; ++i) rest -= a[i] * y[i];
      const std::int64_t ak = a[k];
      // ak * y_k <= rest
      if (ak > 0) {
        std::int64_t q = rest / ak;
        if (rest % ak != 0 && rest < 0) --q;
        hi = std::min(hi, q);
      } else {
        const std::int64_t m = -ak;  // y_k >= -rest / m
        std::int64_t q = (-rest) / m;
        if ((-rest) % m != 0 && -rest > 0) ++q;
        lo = std::max(lo, q);
      }
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      y[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
}

std::vector<Point> LatticePolytope::lattice_points(long n) const {
  std::vector<Point> out;
  for_each_lattice_point(n, [&](const Coords& y) { out.push_back(lattice_.point(y, n)); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Point> lattice_points_in_dilate(const std::vector<Point>& points, long n, const ScaleLimits& limits) {
  if (n < 1) throw InputError("dilation factor must be at least 1");
  return LatticePolytope(points, limits).lattice_points(n);
}

// ---------------------------------------------------------------------------

namespace {

// Mixed-radix keys for lattice coordinates, first coordinate most
// significant, so lexicographic enumeration yields sorted keys.
class KeyCodec {
public:
  KeyCodec(const std::vector<Coords>& coords, std::size_t r, long max_degree) : offset_(r), radix_(r) {
    Int128 total = 1;
    const Int128 limit = (Int128{1} << 120);
    for (std::size_t i = 0; i < r; ++i) {
      std::int64_t lo = 0, hi = 0;
      for (const auto& c : coords) {
        lo = std::min(lo, c[i]);
        hi = std::max(hi, c[i]);
      }
      offset_[i] = -lo * max_degree;
      radix_[i] = (hi - lo) * max_degree + 1;
      total *= radix_[i];
      if (total > limit) throw ScaleExceeded("lattice coordinates span too large a box");
    }
  }

  std::optional<Int128> key(const Coords& y) const {
    Int128 k = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const std::int64_t v = y[i] + offset_[i];
      if (v < 0 || v >= radix_[i]) return std::nullopt;
      k = k * radix_[i] + v;
    }
    return k;
  }

private:
  std::vector<std::int64_t> offset_;
  std::vector<std::int64_t> radix_;
};

std::string join(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
  return s;
}

}  // namespace

std::string IdpReport::to_text() const {
  std::ostringstream os;
  os << "verdict: " << (normal ? "Normal" : "NotNormal") << '\n';
  os << "dimension: " << dimension << '\n';
  if (normal) {
    os << "degrees: 2.." << max_degree << '\n';
  } else if (witness) {
    os << "witness: " << join(*witness) << '\n';
    os << "witness degree: " << witness_degree << '\n';
  }
  for (std::size_t i = 0; i < counts.size(); ++i) os << "degree " << i + 1 << ": " << counts[i] << " points\n";
  return os.str();
}

IdpReport idp_check(const LatticePolytope& polytope, long max_degree) {
  const std::size_t r = polytope.dimension();
  IdpReport report;
  report.dimension = r;
  report.max_degree = max_degree > 0 ? max_degree : std::max<long>(2, static_cast<long>(r) - 1);

  std::vector<Coords> level_one;
  polytope.for_each_lattice_point(1, [&](const Coords& y) { level_one.push_back(y); });
  report.counts.push_back(level_one.size());
  if (r == 0) return report;

  const KeyCodec codec(polytope.point_coordinates(), r, report.max_degree);
  std::vector<Int128> previous;
  for (const auto& y : level_one) previous.push_back(*codec.key(y));

  Coords diff(r);
  for (long n = 2; n <= report.max_degree; ++n) {
    std::vector<Int128> current;
    bool failed = false;
    polytope.for_each_lattice_point(n, [&](const Coords& q) {
      current.push_back(*codec.key(q));
      if (failed) return;
      for (const auto& p : level_one) {
        for (std::size_t i = 0; i < r; ++i) diff[i] = q[i] - p[i];
        const auto k = codec.key(diff);
        if (k && std::binary_search(previous.begin(), previous.end(), *k)) return;
      }
      failed = true;
      report.normal = false;
      report.witness = polytope.lattice().point(q, n);
      report.witness_degree = n;
    });
    report.counts.push_back(current.size());
    if (failed) return report;
    previous = std::move(current);
  }
  return report;
}

Decomposition decompose(const Point& q, long n, const LatticePolytope& polytope) {
  Decomposition result;
  if (n < 1) throw InputError("decomposition length must be at least 1");
  const auto coords = polytope.lattice().coordinates(q, n);
  if (!coords) return result;
  Coords y;
  for (const auto& x : *coords) y.push_back(to_int64(x));
  if (!polytope.contains_coordinates(y, n)) return result;

  std::vector<Coords> level_one;
  polytope.for_each_lattice_point(1, [&](const Coords& p) { level_one.push_back(p); });
  const std::size_t r = y.size();

  std::vector<std::size_t> chosen;
  std::function<bool(const Coords&, long, std::size_t)> search = [&](const Coords& rest, long k,
                                                                     std::size_t start) -> bool {
    ++result.nodes;
    if (k == 1) {
      auto it = std::lower_bound(level_one.begin() + static_cast<long>(start), level_one.end(), rest);
      if (it == level_one.end() || *it != rest) return false;
      chosen.push_back(static_cast<std::size_t>(it - level_one.begin()));
      return true;
    }
    Coords next(r);
    for (std::size_t j = start; j < level_one.size(); ++j) {
      for (std::size_t i = 0; i < r; ++i) next[i] = rest[i] - level_one[j][i];
      if (!polytope.contains_coordinates(next, k - 1)) continue;
      chosen.push_back(j);
      if (search(next, k - 1, j)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (search(y, n, 0)) {
    std::vector<Point> summands;
    for (std::size_t j : chosen) summands.push_back(polytope.lattice().point(level_one[j]));
    result.summands = std::move(summands);
  }
  return result;
}

// ---------------------------------------------------------------------------

ModelPolytope fiber_product(const ModelPolytope& p1, std::size_t block1, const ModelPolytope& p2, std::size_t block2) {
  if (block1 >= p1.blocks.size() || block2 >= p2.blocks.size()) throw InputError("no such coordinate block");
  const std::size_t width = p1.blocks[block1].width;
  if (p2.blocks[block2].width != width)
    throw FiberProductError(FiberProductError::Kind::BlockWidthMismatch, "fibered blocks have different widths");

  auto simplex_index = [&](const ModelPolytope& p, std::size_t block, const Point& v) {
    const std::size_t offset = p.block_offset(block);
    std::size_t index = width;
    for (std::size_t i = 0; i < width; ++i) {
      const auto x = v[offset + i];
      if (x == 0) continue;
      if (x != 1 || index != width)
        throw FiberProductError(FiberProductError::Kind::ProjectionNotInSimplex,
                                "block projection is not a vertex of the standard simplex");
      index = i;
    }
    if (index == width)
      throw FiberProductError(FiberProductError::Kind::ProjectionNotInSimplex,
                              "block projection is not a vertex of the standard simplex");
    return index;
  };

  std::vector<std::vector<const Point*>> by_index(width);
  for (const auto& v : p2.vertices) by_index[simplex_index(p2, block2, v)].push_back(&v);

  ModelPolytope out;
  out.flavor = p1.flavor;
  out.group = p1.group;
  out.tree = p1.tree + " x " + p2.tree;
  out.blocks = p1.blocks;
  for (std::size_t b = 0; b < p2.blocks.size(); ++b)
    if (b != block2) out.blocks.push_back(p2.blocks[b]);
  const std::size_t skip_begin = p2.block_offset(block2);
  const std::size_t skip_end = skip_begin + width;
  for (const auto& v1 : p1.vertices)
    for (const Point* v2 : by_index[simplex_index(p1, block1, v1)]) {
      Point merged = v1;
      for (std::size_t i = 0; i < v2->size(); ++i)
        if (i < skip_begin || i >= skip_end) merged.push_back((*v2)[i]);
      out.vertices.push_back(std::move(merged));
    }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  return out;
}

ModelPolytope glue_polytopes(const Tree& t1, std::size_t leaf1, const ModelPolytope& p1, const Tree& t2,
                             std::size_t leaf2, const ModelPolytope& p2, const CyclicFactorization& group) {
  const GlueResult g = glue(t1, leaf1, t2, leaf2);
  std::set<std::size_t> flipped1, flipped2;
  for (std::size_t e = 0; e < t1.num_edges(); ++e)
    if (g.first_flipped[e]) flipped1.insert(e);
  for (std::size_t e = 0; e < t2.num_edges(); ++e)
    if (g.second_flipped[e]) flipped2.insert(e);
  const ModelPolytope a = negate_blocks(p1, group, flipped1);
  const ModelPolytope b = negate_blocks(p2, group, flipped2);
  const std::size_t block1 = a.block_of_edge(t1.leaf_edge(leaf1));
  const std::size_t block2 = b.block_of_edge(t2.leaf_edge(leaf2));
  ModelPolytope product = fiber_product(a, block1, b, block2);

  std::vector<std::size_t> new_edges;
  for (const auto& blk : a.blocks) new_edges.push_back(g.first_edges[blk.edge]);
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    if (i != block2) new_edges.push_back(g.second_edges[b.blocks[i].edge]);
  ModelPolytope out = permute_blocks(product, new_edges);
  out.tree = g.tree.to_newick();
  return out;
}

}  // namespace phylotoric
