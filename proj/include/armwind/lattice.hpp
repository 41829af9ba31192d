#pragma once

// Triangular lattice / hexagonal dual geometry.
//
// Sites use axial coordinates (i, j) with embedding i + j*e^{i*pi/3} in
// lattice units (the mesh eta = 1/R_lat is applied only when reporting
// continuum quantities). Each site is the center of a hexagon of side 1/sqrt(3)
// with two sides parallel to the imaginary axis. Hexagon corners (vertices of
// the hexagonal lattice) are centroids of lattice triangles and are stored
// exactly as axial coordinates scaled by 3.

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "armwind/error.hpp"

namespace armwind {

using Point = std::complex<double>;

struct SiteCoord {
  int i = 0;
  int j = 0;
  friend constexpr auto operator<=>(const SiteCoord&, const SiteCoord&) = default;
  constexpr SiteCoord operator+(const SiteCoord& o) const { return {i + o.i, j + o.j}; }
};

/// Neighbor offsets, counterclockwise starting at angle 0.
inline constexpr std::array<SiteCoord, 6> kDirections = {
    SiteCoord{1, 0}, SiteCoord{0, 1}, SiteCoord{-1, 1},
    SiteCoord{-1, 0}, SiteCoord{0, -1}, SiteCoord{1, -1}};

constexpr int rotate_dir(int dir, int by) { return ((dir + by) % 6 + 6) % 6; }

/// Hexagonal-lattice vertex in axial coordinates scaled by 3.
struct Vertex {
  int p = 0;
  int q = 0;
  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;

  /// 9 * |v|^2, exact.
  constexpr std::int64_t norm9() const {
    return std::int64_t(p) * p + std::int64_t(p) * q + std::int64_t(q) * q;
  }
  Point position() const;
  double abs() const;
};

inline Point embed(SiteCoord s) {
  constexpr double kHalfSqrt3 = 0.86602540378443864676;
  return {s.i + 0.5 * s.j, kHalfSqrt3 * s.j};
}

/// The six corners of a hexagon, counterclockwise from angle pi/6.
std::array<Vertex, 6> hexagon_vertices(SiteCoord s);

/// Largest |z| over the closed hexagon of `s` (attained at a corner).
double hexagon_max_abs(SiteCoord s);
/// Smallest |z| over the closed hexagon of `s` (0 if it contains the origin).
double hexagon_min_abs(SiteCoord s);

/// Vertex of the lattice triangle {s, s+d[dir_a], s+d[dir_a+1]}.
constexpr Vertex triangle_vertex(SiteCoord s, int dir_a) {
  const SiteCoord a = kDirections[dir_a];
  const SiteCoord b = kDirections[rotate_dir(dir_a, 1)];
  return {3 * s.i + a.i + b.i, 3 * s.j + a.j + b.j};
}

/// Mirror across the real axis: conj(i + j w) = (i + j) - j w.
constexpr SiteCoord conjugate(SiteCoord s) { return {s.i + s.j, -s.j}; }
constexpr Vertex conjugate(Vertex v) { return {v.p + v.q, -v.q}; }

enum class Color : std::uint8_t { Yellow = 0, Blue = 1 };

constexpr Color opposite(Color c) { return c == Color::Blue ? Color::Yellow : Color::Blue; }

/// A directed hexagonal edge: `site` is the hexagon on the right, the hexagon on
/// the left is site + d[dir]. This is the state of every interface walker.
struct DirectedEdge {
  int site = 0;  // grid index
  int dir = 0;
  friend constexpr bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// An e-vertex of the domain boundary, with the index of the boundary edge
/// (in the counterclockwise cycle) that arrives at it.
struct EVertex {
  Vertex v;
  std::size_t edge = 0;
  friend constexpr bool operator==(const EVertex&, const EVertex&) = default;
};

/// Discretized Jordan domain D^eta for the disc of radius R_lat lattice units.
///
/// Sites live on a square axial grid of half-width ceil(2 R_lat / sqrt 3) + 3,
/// large enough to hold the domain, its s-boundary and one more layer. Grid
/// indices are row-major: idx = (j + W) * stride + (i + W).
class DiscreteDomain {
 public:
  int radius() const { return radius_; }
  double mesh() const { return 1.0 / radius_; }
  int half_width() const { return half_width_; }
  int stride() const { return stride_; }
  std::size_t grid_size() const { return std::size_t(stride_) * stride_; }
  std::size_t word_count() const { return (grid_size() + 63) / 64; }

  bool in_grid(SiteCoord s) const {
    return s.i >= -half_width_ && s.i <= half_width_ && s.j >= -half_width_ && s.j <= half_width_;
  }
  int index(SiteCoord s) const { return (s.j + half_width_) * stride_ + (s.i + half_width_); }
  SiteCoord coord(int idx) const {
    return {idx % stride_ - half_width_, idx / stride_ - half_width_};
  }
  int offset(int dir) const { return offsets_[dir]; }
  int neighbor(int idx, int dir) const { return idx + offsets_[dir]; }
  int origin() const { return index({0, 0}); }

  bool contains(int idx) const { return (mask_[idx >> 6] >> (idx & 63)) & 1U; }
  bool contains(SiteCoord s) const { return in_grid(s) && contains(index(s)); }
  bool is_s_boundary(int idx) const { return state_[idx] == kSBoundary; }
  /// Sites of the domain or its s-boundary; these are the only sites an
  /// interface walker may inspect.
  bool is_colorable(int idx) const { return state_[idx] != kOutside; }

  std::span<const int> sites() const { return sites_; }
  std::span<const std::uint64_t> mask() const { return mask_; }
  /// s-boundary hexagons in counterclockwise circuit order.
  std::span<const int> s_boundary() const { return s_boundary_; }
  /// Boundary edges of the domain as a counterclockwise cycle; the outside
  /// hexagon is on the right of each edge, the domain hexagon on the left.
  std::span<const DirectedEdge> boundary_edges() const { return boundary_edges_; }
  std::span<const EVertex> e_vertices() const { return e_vertices_; }

  /// Vertex reached when traversing `e`.
  Vertex head(DirectedEdge e) const { return triangle_vertex(coord(e.site), rotate_dir(e.dir, -1)); }
  /// Vertex where `e` starts.
  Vertex tail(DirectedEdge e) const { return triangle_vertex(coord(e.site), e.dir); }

 private:
  friend std::shared_ptr<const DiscreteDomain> build_disc_domain(int radius_sites);
  static constexpr std::uint8_t kOutside = 0, kInside = 1, kSBoundary = 2;

  int radius_ = 0;
  int half_width_ = 0;
  int stride_ = 0;
  std::array<int, 6> offsets_{};
  std::vector<std::uint8_t> state_;
  std::vector<std::uint64_t> mask_;
  std::vector<int> sites_;
  std::vector<int> s_boundary_;
  std::vector<DirectedEdge> boundary_edges_;
  std::vector<EVertex> e_vertices_;
};

using DomainPtr = std::shared_ptr<const DiscreteDomain>;

/// D^eta for the unit disc at mesh 1/radius_sites: hexagons whose closure lies
/// in the disc, restricted to the component of the origin, holes filled.
DomainPtr build_disc_domain(int radius_sites);

struct EVertexPair {
  EVertex a;
  EVertex b;
};

/// E-vertices closest to the boundary points e^{i angle_a} and e^{i angle_b}
/// (continuum unit circle). Ties go to the first vertex clockwise from a and
/// the first counterclockwise from b.
EVertexPair select_e_vertices(const DiscreteDomain& domain, double angle_a, double angle_b);

/// Immutable site coloring of a domain; one bit per grid site (1 = blue),
/// bits outside the domain are zero.
class Configuration {
 public:
  Configuration(DomainPtr domain, std::vector<std::uint64_t> bits, std::uint64_t seed);

  const DiscreteDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const std::uint64_t> bits() const { return bits_; }

  bool is_blue(int idx) const { return (bits_[idx >> 6] >> (idx & 63)) & 1U; }
  Color color(int idx) const { return is_blue(idx) ? Color::Blue : Color::Yellow; }
  Color color(SiteCoord s) const { return color(domain_->index(s)); }
  std::size_t count_blue() const;

  /// Deterministic coloring from a predicate on site coordinates.
  static Configuration from_function(DomainPtr domain, const std::function<Color(SiteCoord)>& f);
  static Configuration uniform(DomainPtr domain, Color c);

  Configuration with_swapped_colors() const;
  /// Reflection across the real axis.
  Configuration conjugated() const;
  /// Same colors on the sites of a smaller domain (which must be a subset).
  Configuration restricted_to(DomainPtr sub) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.bits_ == b.bits_;
  }

 private:
  DomainPtr domain_;
  std::vector<std::uint64_t> bits_;
  std::uint64_t seed_ = 0;
};

/// I.i.d. fair colors from a xoshiro256** stream seeded with `seed`.
Configuration sample_configuration(DomainPtr domain, std::uint64_t seed);

/// Fill `bits` (grid layout) with fair colors on the sites selected by `mask`,
/// leaving other bits untouched.
void fill_random_bits(std::span<std::uint64_t> bits, std::span<const std::uint64_t> mask,
                      std::uint64_t seed);

/// Colors painted on s-boundary hexagons for one experiment; grid layout.
class BoundaryColoring {
 public:
  explicit BoundaryColoring(std::vector<std::uint64_t> blue_bits) : blue_(std::move(blue_bits)) {}
  std::span<const std::uint64_t> blue_bits() const { return blue_; }

 private:
  std::vector<std::uint64_t> blue_;
};

/// Every s-boundary hexagon blue.
BoundaryColoring monochromatic_blue_boundary(const DiscreteDomain& domain);
/// Right s-boundary (adjacent to the counterclockwise arc a -> b) blue, the rest yellow.
BoundaryColoring split_boundary(const DiscreteDomain& domain, const EVertexPair& ends);

/// Combined color lookup for domain sites and painted s-boundary sites.
class ColorView {
 public:
  ColorView(const Configuration& config, const BoundaryColoring& boundary)
      : config_(config.bits().data()), boundary_(boundary.blue_bits().data()) {}
  ColorView(const std::uint64_t* config_bits, const std::uint64_t* boundary_bits)
      : config_(config_bits), boundary_(boundary_bits) {}

  bool is_blue(int idx) const {
    return ((config_[idx >> 6] | boundary_[idx >> 6]) >> (idx & 63)) & 1U;
  }

 private:
  const std::uint64_t* config_;
  const std::uint64_t* boundary_;
};

/// Sites of the domain meeting the closed annulus {r <= |z| <= R} (lattice
/// units). Sites whose hexagon lies in the open disc of radius r form the hole.
/// A site touches the inner boundary if it shares an edge with a hole site and
/// the outer boundary if it shares an edge with a site that is neither in the
/// annulus nor in the hole (beyond R, or outside the domain).
class Annulus {
 public:
  static constexpr std::uint8_t kMember = 1, kHole = 2, kInner = 4, kOuter = 8;

  Annulus(DomainPtr domain, double r, double R);

  const DiscreteDomain& domain() const { return *domain_; }
  double inner_radius() const { return r_; }
  double outer_radius() const { return R_; }
  std::span<const int> sites() const { return sites_; }
  std::span<const int> hole() const { return hole_; }

  bool contains(int idx) const { return flags_[idx] & kMember; }
  bool in_hole(int idx) const { return flags_[idx] & kHole; }
  bool touches_inner(int idx) const { return flags_[idx] & kInner; }
  bool touches_outer(int idx) const { return flags_[idx] & kOuter; }

 private:
  DomainPtr domain_;
  double r_;
  double R_;
  std::vector<std::uint8_t> flags_;
  std::vector<int> sites_;
  std::vector<int> hole_;
};

/// Convenience wrapper with the argument checks of the public operation.
Annulus annulus_sites(DomainPtr domain, double r, double R);

}  // namespace armwind
