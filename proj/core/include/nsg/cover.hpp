#pragma once

#include <cstdint>
#include <vector>

#include "nsg/linalg.hpp"
#include "nsg/rng.hpp"

namespace nsg {

/// A finite set of unit vectors intended to be within `radius` of every
/// direction on S^{d-1}.
struct SphereCover {
  int dimension = 0;
  double radius = 0.5;
  std::vector<Vector> points;
};

inline constexpr int kMaxCoverDimension = 12;

/// Random greedy maximal 1/2-packing of S^{d-1}. Uniform candidates are kept
/// when they are at least 1/2 from every kept point; construction stops after
/// `rejection_limit` consecutive rejections, then a certification pass adds
/// any uncovered probe direction and restarts the count. For d = 1 returns
/// {+1, -1}. Throws ResourceError for d > 12.
SphereCover build_half_cover(int d, SeedStream stream, std::uint64_t rejection_limit = 100000);

struct CoverDiagnostics {
  /// Largest distance from a probe direction to its nearest cover point.
  double covering_radius = 0.0;
  /// Smallest pairwise distance between cover points.
  double min_separation = 0.0;
  std::uint64_t uncovered = 0;
  std::uint64_t probes = 0;
};

/// Probes `directions` fresh uniform directions against the cover.
CoverDiagnostics certify_cover(const SphereCover& cover, SeedStream stream, std::uint64_t directions = 10000);

/// 2 max_i <v_i, x>; lies in [|x|, 2|x|] for a 1/2-cover.
double norm_via_cover(const Vector& x, const SphereCover& cover);

/// base^d exp(-d t^2 / (8 sigma^2)). base = 4 follows the covering-number
/// estimate used for the isotropic case; 5 is the volumetric (1 + 2/eps)^d.
double union_tail_bound(int d, double sigma, double t, double cover_size_base = 4.0);

/// nSG parameter 2 sqrt(2) sigma of a (sigma / sqrt d)-subGaussian vector.
double subgaussian_to_nsg(double sigma);

}  // namespace nsg
