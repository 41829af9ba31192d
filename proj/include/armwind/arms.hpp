#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "armwind/exploration.hpp"
#include "armwind/lattice.hpp"

namespace armwind {

/// Cyclic color sequence of an arm event. Supported: monochromatic of any
/// length, (B,Y) and (B,Y,B,Y) up to rotation.
class ColorSequence {
 public:
  explicit ColorSequence(std::vector<Color> colors);
  /// Letters B/Y, optionally comma separated, case-insensitive.
  static ColorSequence parse(std::string_view text);

  std::span<const Color> colors() const { return colors_; }
  std::size_t size() const { return colors_.size(); }
  bool monochromatic() const;
  bool alternating() const;
  std::string str() const;

 private:
  std::vector<Color> colors_;
};

/// Interface piece inside an annulus between two boundary contacts.
/// `vertices[0]` is the tail of `edges[0]`; vertices[k+1] is the head of edges[k].
struct Strand {
  std::vector<DirectedEdge> edges;
  std::vector<Vertex> vertices;
  bool starts_inner = false;
  bool ends_inner = false;
  bool crossing() const { return starts_inner != ends_inner; }
};

/// All interfaces of the annulus sites that end on the annulus boundary,
/// colors outside the annulus ignored.
std::vector<Strand> interface_strands(const Configuration& config, const Annulus& annulus);

/// Strands joining the inner and outer boundary; always even.
int count_interface_crossings(const Configuration& config, const Annulus& annulus);

/// Some path of `color` sites crossing the annulus.
bool has_crossing(const Configuration& config, const Annulus& annulus, Color color);

/// Maximum number of site-disjoint crossings of one color (vertex-disjoint
/// max-flow), capped at `limit`.
int max_monochromatic_crossings(const Configuration& config, const Annulus& annulus, Color color,
                                int limit = 1 << 30);

bool detect_arms(const Configuration& config, const Annulus& annulus, const ColorSequence& sigma);

enum class OracleMode { Blue, Yellow, Alternating };

inline constexpr std::size_t kMaxFlowOracleSites = 4096;
inline constexpr std::size_t kAlternatingOracleSites = 24;

/// Exact maximum number of disjoint crossings. Alternating mode searches all
/// minimal monochromatic crossings for the largest set with colors
/// alternating in cyclic order (an even number; 0 if none).
int max_disjoint_crossings_oracle(const Configuration& config, const Annulus& annulus,
                                  OracleMode mode);

/// Blue/yellow circuit around the inner disc of an A(R, 2R) annulus, built
/// from the two crossing interfaces of the good-faces event.
struct Faces {
  DomainPtr domain;
  double radius = 0.0;  // inner radius R, lattice units
  std::vector<int> blue_arc;
  std::vector<int> yellow_arc;
  Vertex x1;  // inner end of the interface in the right cone
  Vertex x2;  // inner end of the interface in the left cone
  double quality = 0.0;
  /// Last edge of the inward interface; the interface inside the faces
  /// continues from its head and ends at `finish`.
  DirectedEdge start_edge;
  Vertex finish;
  /// Domain sites strictly inside the circuit, as grid bits.
  std::vector<std::uint64_t> interior;

  bool inside(int idx) const { return (interior[idx >> 6] >> (idx & 63)) & 1U; }
};

/// Faces if the good-faces event holds on `annulus` (expected A(R, 2R)).
std::optional<Faces> detect_good_faces(const Configuration& config, const Annulus& annulus);

/// Blue arm from the blue arc and yellow arm from the yellow arc, through the
/// interior, to sites adjacent to the disc of radius r (lattice units).
bool detect_arms_to_faces(const Configuration& config, const Faces& faces, double r);

/// Interface inside the faces from the inward interface's inner end toward
/// the other end, stopped on the origin hexagon.
ExplorationPath trace_faces_interface(const Configuration& config, const Faces& faces);

/// Maximum number of disjoint `color` paths crossing the sector
/// {r <= |z| <= R, |arg z| < half_angle} from its lower to its upper side.
int max_sector_crossings(const Configuration& config, double r, double R, double half_angle,
                         Color color);

struct ArmProbabilityRow {
  std::string sigma;
  double r = 0.0;
  double R = 0.0;
  int R_lat = 0;
  std::int64_t n_trials = 0;
  std::int64_t n_hits = 0;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of P[arm event on A(r, R)] (lattice units) in the disc
/// domain of radius R_lat; trial t uses stream derive_seed(seed, t).
ArmProbabilityRow estimate_arm_probability(const ColorSequence& sigma, double r, double R,
                                           int R_lat, std::int64_t n_trials, std::uint64_t seed,
                                           int threads);

std::string arm_csv_header();
std::string to_csv(const ArmProbabilityRow& row);

}  // namespace armwind
