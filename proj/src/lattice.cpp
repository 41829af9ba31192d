#include "armwind/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "armwind/rng.hpp"

namespace armwind {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateDomain: return "degenerate-domain";
    case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::UnsupportedSequence: return "unsupported-sequence";
    case ErrorKind::InstanceTooLarge: return "instance-too-large";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::IntegrationFailure: return "integration-failure";
    case ErrorKind::InvalidInput: return "invalid-input";
  }
  return "unknown";
}

Point Vertex::position() const {
  constexpr double kHalfSqrt3 = 0.86602540378443864676;
  return {(p + 0.5 * q) / 3.0, kHalfSqrt3 * q / 3.0};
}

double Vertex::abs() const { return std::sqrt(static_cast<double>(norm9())) / 3.0; }

std::array<Vertex, 6> hexagon_vertices(SiteCoord s) {
  std::array<Vertex, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = triangle_vertex(s, k);
  return out;
}

double hexagon_max_abs(SiteCoord s) {
  std::int64_t best = 0;
  for (const Vertex& v : hexagon_vertices(s)) best = std::max(best, v.norm9());
  return std::sqrt(static_cast<double>(best)) / 3.0;
}

namespace {

double segment_distance(Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? -(a.real() * ab.real() + a.imag() * ab.imag()) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * ab);
}

}  // namespace

double hexagon_min_abs(SiteCoord s) {
  if (s == SiteCoord{0, 0}) return 0.0;
  const auto vs = hexagon_vertices(s);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k) {
    best = std::min(best, segment_distance(vs[k].position(), vs[(k + 1) % 6].position()));
  }
  return best;
}

DomainPtr build_disc_domain(int radius_sites) {
  require(radius_sites >= 2, ErrorKind::InvalidParameter, "domain radius must be >= 2");
  require(radius_sites <= 20000, ErrorKind::InstanceTooLarge, "domain radius too large");

  auto d = std::make_shared<DiscreteDomain>();
  const int R = radius_sites;
  // Axial coordinates of disc points reach 2R/sqrt(3).
  const int W = int(std::ceil(2.0 * R / std::sqrt(3.0))) + 3;
  const int S = 2 * W + 1;
  d->radius_ = R;
  d->half_width_ = W;
  d->stride_ = S;
  d->offsets_ = {1, S, S - 1, -1, -S, 1 - S};
  const std::size_t n = std::size_t(S) * S;
  d->state_.assign(n, DiscreteDomain::kOutside);

  // Closed hexagon inside the closed disc iff every corner is.
  const std::int64_t limit = 9LL * R * R;
  std::vector<std::uint8_t> fits(n, 0);
  for (int j = -W; j <= W; ++j) {
    for (int i = -W; i <= W; ++i) {
      const SiteCoord s{i, j};
      bool ok = true;
      for (const Vertex& v : hexagon_vertices(s)) ok = ok && v.norm9() <= limit;
      fits[d->index(s)] = ok;
    }
  }

  auto interior = [&](int idx) {
    const SiteCoord c = d->coord(idx);
    return c.i > -W && c.i < W && c.j > -W && c.j < W;
  };

  // Component of the origin.
  std::vector<std::uint8_t> in(n, 0);
  std::vector<int> stack{d->origin()};
  in[d->origin()] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int k = 0; k < 6; ++k) {
      const int y = x + d->offsets_[k];
      if (fits[y] && !in[y]) {
        in[y] = 1;
        stack.push_back(y);
      }
    }
  }

  // Fill holes: complement cells not reachable from the grid border.
  std::vector<std::uint8_t> outer(n, 0);
  for (int idx = 0; idx < int(n); ++idx) {
    if (!interior(idx) && !in[idx]) {
      outer[idx] = 1;
      stack.push_back(idx);
    }
  }
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (!interior(x)) {
      const SiteCoord c = d->coord(x);
      for (int k = 0; k < 6; ++k) {
        const SiteCoord yc = c + kDirections[k];
        if (!d->in_grid(yc)) continue;
        const int y = d->index(yc);
        if (!in[y] && !outer[y]) {
          outer[y] = 1;
          stack.push_back(y);
        }
      }
      continue;
    }
    for (int k = 0; k < 6; ++k) {
      const int y = x + d->offsets_[k];
      if (!in[y] && !outer[y]) {
        outer[y] = 1;
        stack.push_back(y);
      }
    }
  }

  d->mask_.assign(d->word_count(), 0);
  for (int idx = 0; idx < int(n); ++idx) {
    if (outer[idx]) continue;
    d->state_[idx] = DiscreteDomain::kInside;
    d->mask_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    d->sites_.push_back(idx);
  }
  for (int idx : d->sites_) {
    for (int k = 0; k < 6; ++k) {
      const int y = idx + d->offsets_[k];
      if (d->state_[y] == DiscreteDomain::kOutside) d->state_[y] = DiscreteDomain::kSBoundary;
    }
  }

  // Boundary edge cycle: walk with "blue = not in the domain" starting at the
  // edge east of the rightmost site on the real axis.
  int i0 = 0;
  while (d->contains(SiteCoord{i0 + 1, 0})) ++i0;
  const DirectedEdge start{d->index({i0 + 1, 0}), 3};
  DirectedEdge e = start;
  do {
    d->boundary_edges_.push_back(e);
    const int x = e.site + d->offsets_[rotate_dir(e.dir, -1)];
    if (!d->contains(x)) {
      d->e_vertices_.push_back({d->head(e), d->boundary_edges_.size() - 1});
      e = {x, rotate_dir(e.dir, 1)};
    } else {
      e = {e.site, rotate_dir(e.dir, -1)};
    }
    require(d->boundary_edges_.size() <= 12 * n, ErrorKind::DegenerateDomain,
            "boundary walk did not close");
  } while (!(e == start));

  // Circuit of outside hexagons; each must appear as one contiguous run.
  const auto& edges = d->boundary_edges_;
  std::size_t first = 0;
  while (first < edges.size() && edges[first].site == edges.back().site) ++first;
  require(first < edges.size(), ErrorKind::DegenerateDomain, "boundary has a single hexagon");
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t m = 0; m < edges.size(); ++m) {
    const int site = edges[(first + m) % edges.size()].site;
    if (!d->s_boundary_.empty() && d->s_boundary_.back() == site) continue;
    require(!seen[site], ErrorKind::DegenerateDomain, "s-boundary is not a simple circuit");
    seen[site] = 1;
    d->s_boundary_.push_back(site);
  }
  require(d->e_vertices_.size() >= 2, ErrorKind::DegenerateDomain, "fewer than two e-vertices");
  return d;
}

namespace {

// Angle in [0, 2pi) from `from` going counterclockwise to `to`.
double ccw_offset(double from, double to) {
  constexpr double kTwoPi = 2 * std::numbers::pi;
  double x = std::fmod(to - from, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

EVertex closest_e_vertex(const DiscreteDomain& domain, double angle, bool clockwise) {
  const double R = domain.radius();
  const Point target = std::polar(R, angle);
  const auto ev = domain.e_vertices();
  double best = std::numeric_limits<double>::infinity();
  for (const EVertex& e : ev) best = std::min(best, std::abs(e.v.position() - target));
  const double tol = 1e-9 * std::max(1.0, R);
  const EVertex* pick = nullptr;
  double pick_offset = std::numeric_limits<double>::infinity();
  for (const EVertex& e : ev) {
    if (std::abs(e.v.position() - target) > best + tol) continue;
    const double phi = std::arg(e.v.position());
    const double off = clockwise ? ccw_offset(phi, angle) : ccw_offset(angle, phi);
    if (off < pick_offset) {
      pick_offset = off;
      pick = &e;
    }
  }
  return *pick;
}

}  // namespace

EVertexPair select_e_vertices(const DiscreteDomain& domain, double angle_a, double angle_b) {
  require(std::isfinite(angle_a) && std::isfinite(angle_b), ErrorKind::InvalidParameter,
          "boundary angles must be finite");
  const double sep = ccw_offset(angle_a, angle_b);
  require(sep > 1e-12 && sep < 2 * std::numbers::pi - 1e-12, ErrorKind::InvalidParameter,
          "boundary points must differ");
  require(domain.e_vertices().size() >= 2, ErrorKind::DegenerateDomain,
          "fewer than two e-vertices");
  EVertexPair out{closest_e_vertex(domain, angle_a, true), closest_e_vertex(domain, angle_b, false)};
  require(!(out.a.v == out.b.v), ErrorKind::DegenerateDomain,
          "boundary points map to the same e-vertex");
  return out;
}

Configuration::Configuration(DomainPtr domain, std::vector<std::uint64_t> bits, std::uint64_t seed)
    : domain_(std::move(domain)), bits_(std::move(bits)), seed_(seed) {
  require(domain_ != nullptr, ErrorKind::InvalidInput, "configuration without domain");
  require(bits_.size() == domain_->word_count(), ErrorKind::InvalidInput,
          "configuration size does not match domain");
  const auto m = domain_->mask();
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= m[w];
}

std::size_t Configuration::count_blue() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

Configuration Configuration::from_function(DomainPtr domain,
                                           const std::function<Color(SiteCoord)>& f) {
  std::vector<std::uint64_t> bits(domain->word_count(), 0);
  for (int idx : domain->sites()) {
    if (f(domain->coord(idx)) == Color::Blue) bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  }
  return Configuration(std::move(domain), std::move(bits), 0);
}

Configuration Configuration::uniform(DomainPtr domain, Color c) {
  std::vector<std::uint64_t> bits(domain->word_count(), c == Color::Blue ? ~std::uint64_t{0} : 0);
  return Configuration(std::move(domain), std::move(bits), 0);
}

Configuration Configuration::with_swapped_colors() const {
  std::vector<std::uint64_t> bits(bits_.size());
  for (std::size_t w = 0; w < bits.size(); ++w) bits[w] = ~bits_[w];
  return Configuration(domain_, std::move(bits), seed_);
}

Configuration Configuration::conjugated() const {
  const DiscreteDomain& d = *domain_;
  std::vector<std::uint64_t> bits(bits_.size(), 0);
  for (int idx : d.sites()) {
    if (!is_blue(idx)) continue;
    const SiteCoord m = conjugate(d.coord(idx));
    require(d.contains(m), ErrorKind::DegenerateDomain, "domain is not mirror symmetric");
    const int t = d.index(m);
    bits[t >> 6] |= std::uint64_t{1} << (t & 63);
  }
  return Configuration(domain_, std::move(bits), seed_);
}

Configuration Configuration::restricted_to(DomainPtr sub) const {
  std::vector<std::uint64_t> bits(sub->word_count(), 0);
  for (int idx : sub->sites()) {
    const SiteCoord c = sub->coord(idx);
    require(domain_->contains(c), ErrorKind::InvalidInput, "subdomain is not contained in domain");
    if (is_blue(domain_->index(c))) bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  }
  return Configuration(std::move(sub), std::move(bits), seed_);
}

void fill_random_bits(std::span<std::uint64_t> bits, std::span<const std::uint64_t> mask,
                      std::uint64_t seed) {
  Xoshiro256 rng(seed);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    if (mask[w] == 0) continue;
    bits[w] = (bits[w] & ~mask[w]) | (rng() & mask[w]);
  }
}

Configuration sample_configuration(DomainPtr domain, std::uint64_t seed) {
  std::vector<std::uint64_t> bits(domain->word_count(), 0);
  fill_random_bits(bits, domain->mask(), seed);
  return Configuration(std::move(domain), std::move(bits), seed);
}

BoundaryColoring monochromatic_blue_boundary(const DiscreteDomain& domain) {
  std::vector<std::uint64_t> bits(domain.word_count(), 0);
  for (int idx : domain.s_boundary()) bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  return BoundaryColoring(std::move(bits));
}

BoundaryColoring split_boundary(const DiscreteDomain& domain, const EVertexPair& ends) {
  const auto edges = domain.boundary_edges();
  const std::size_t n = edges.size();
  std::vector<std::int8_t> color(domain.grid_size(), -1);
  // Edges strictly after a's arriving edge up to and including b's arriving edge.
  std::size_t m = (ends.a.edge + 1) % n;
  const std::size_t stop = (ends.b.edge + 1) % n;
  std::vector<std::uint8_t> right(n, 0);
  while (m != stop) {
    right[m] = 1;
    m = (m + 1) % n;
  }
  for (std::size_t e = 0; e < n; ++e) {
    const int site = edges[e].site;
    const std::int8_t c = right[e] ? 1 : 0;
    if (color[site] >= 0 && color[site] != c) {
      throw Error(ErrorKind::DegenerateDomain, "s-boundary hexagon on both arcs");
    }
    color[site] = c;
  }
  std::vector<std::uint64_t> bits(domain.word_count(), 0);
  for (int idx : domain.s_boundary()) {
    if (color[idx] == 1) bits[idx >> 6] |= std::uint64_t{1} << (idx & 63);
  }
  return BoundaryColoring(std::move(bits));
}

Annulus::Annulus(DomainPtr domain, double r, double R)
    : domain_(std::move(domain)), r_(r), R_(R), flags_(domain_->grid_size(), 0) {
  const DiscreteDomain& d = *domain_;
  for (int idx : d.sites()) {
    const SiteCoord c = d.coord(idx);
    const double lo = hexagon_min_abs(c);
    const double hi = hexagon_max_abs(c);
    if (hi < r) {
      flags_[idx] = kHole;
      hole_.push_back(idx);
    } else if (lo <= R) {
      flags_[idx] = kMember;
      sites_.push_back(idx);
    }
  }
  for (int idx : sites_) {
    for (int k = 0; k < 6; ++k) {
      const int y = d.neighbor(idx, k);
      if (flags_[y] & kHole) flags_[idx] |= kInner;
      if (!(flags_[y] & (kHole | kMember))) flags_[idx] |= kOuter;
    }
  }
}

Annulus annulus_sites(DomainPtr domain, double r, double R) {
  require(domain != nullptr, ErrorKind::InvalidInput, "annulus without domain");
  require(r >= 0 && r < R, ErrorKind::InvalidParameter, "annulus needs 0 <= r < R");
  return Annulus(std::move(domain), r, R);
}

}  // namespace armwind
