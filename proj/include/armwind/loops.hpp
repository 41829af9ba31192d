#pragma once

#include <iosfwd>
#include <vector>

#include "armwind/lattice.hpp"

namespace armwind {

/// Closed interface with blue on the right of every edge. Counterclockwise
/// loops are outer boundaries of yellow clusters.
struct Loop {
  std::vector<DirectedEdge> edges;
  /// vertices[k] is the head of edges[k].
  std::vector<Vertex> vertices;
  double winding = 0.0;
  bool counterclockwise = false;
  bool surrounds_origin = false;
};

struct LoopEnsemble {
  DomainPtr domain;
  std::vector<Loop> loops;
  std::size_t edge_count() const;
};

/// All interfaces of the configuration with the whole s-boundary painted blue.
LoopEnsemble extract_loop_ensemble(const Configuration& config);

/// Number of adjacent blue/yellow pairs among domain and (blue) s-boundary sites.
std::size_t count_bichromatic_pairs(const Configuration& config);

/// Loop characterization of arm events in the annulus:
///  k = 1: no counterclockwise loop around the origin inside the annulus that
///         avoids the inner boundary;
///  k = 2: some counterclockwise loop touches both boundaries;
///  k = 4: two such loops, or one that alternates between the boundaries twice.
/// A loop vertex touches the inner (outer) boundary when one of its three
/// hexagons is a hole site (a site beyond the annulus).
/// Meaningful for annuli reaching the domain boundary.
bool loop_arm_event(const LoopEnsemble& ensemble, const Annulus& annulus, int k);

/// One JSON object per line: {"ccw":..,"surrounds_origin":..,"vertices":[[x,y],..]}.
void write_loops_jsonl(std::ostream& out, const LoopEnsemble& ensemble);

}  // namespace armwind
