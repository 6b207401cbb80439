#include "nsg/cover.hpp"

#include <cmath>
#include <limits>

#include "nsg/errors.hpp"

namespace nsg {

namespace {

double nearest_distance_sq(const SphereCover& cover, const Vector& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : cover.points) best = std::min(best, (p - v).squaredNorm());
  return best;
}

}  // namespace

SphereCover build_half_cover(int d, SeedStream stream, std::uint64_t rejection_limit) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (d > kMaxCoverDimension) throw ResourceError("cover construction is limited to d <= 12");
  SphereCover cover{d, 0.5, {}};
  if (d == 1) {
    cover.points.push_back(Vector::Constant(1, 1.0));
    cover.points.push_back(Vector::Constant(1, -1.0));
    return cover;
  }
  const double separation_sq = cover.radius * cover.radius;
  RandomSource source(stream);
  RandomSource probe_source(stream.substream(1ULL << 32));
  for (;;) {
    std::uint64_t rejections = 0;
    while (rejections < rejection_limit) {
      Vector candidate = source.unit_vector(d);
      if (nearest_distance_sq(cover, candidate) >= separation_sq) {
        cover.points.push_back(std::move(candidate));
        rejections = 0;
      } else {
        ++rejections;
      }
    }
    // Uncovered probes are more than 1/2 from every point, so adding them
    // keeps the packing property.
    bool extended = false;
    for (int i = 0; i < 10000; ++i) {
      Vector probe = probe_source.unit_vector(d);
      if (nearest_distance_sq(cover, probe) > separation_sq) {
        cover.points.push_back(std::move(probe));
        extended = true;
      }
    }
    if (!extended) return cover;
  }
}

CoverDiagnostics certify_cover(const SphereCover& cover, SeedStream stream, std::uint64_t directions) {
  if (cover.points.empty()) throw ValidationError("empty cover");
  CoverDiagnostics diag;
  diag.probes = directions;
  RandomSource source(stream);
  for (std::uint64_t i = 0; i < directions; ++i) {
    const Vector v = source.unit_vector(cover.dimension);
    const double dist = std::sqrt(nearest_distance_sq(cover, v));
    diag.covering_radius = std::max(diag.covering_radius, dist);
    if (dist > cover.radius) ++diag.uncovered;
  }
  diag.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cover.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.points.size(); ++j) {
      diag.min_separation = std::min(diag.min_separation, (cover.points[i] - cover.points[j]).norm());
    }
  }
  return diag;
}

double norm_via_cover(const Vector& x, const SphereCover& cover) {
  if (x.size() != cover.dimension) throw ValidationError("vector dimension does not match cover");
  if (cover.points.empty()) throw ValidationError("empty cover");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : cover.points) best = std::max(best, p.dot(x));
  return 2.0 * best;
}

double union_tail_bound(int d, double sigma, double t, double cover_size_base) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (!(t >= 0.0)) throw ValidationError("t must be nonnegative");
  return std::pow(cover_size_base, d) * std::exp(-d * t * t / (8.0 * sigma * sigma));
}

double subgaussian_to_nsg(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  return 2.0 * std::sqrt(2.0) * sigma;
}

}  // namespace nsg
