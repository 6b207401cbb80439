#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace nsg {

/// Identifies one reproducible random stream. Equal values give
/// bit-identical sequences; distinct stream indices are independent.
struct SeedStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;

  SeedStream substream(std::uint64_t offset) const { return {seed, stream_index + offset}; }
  friend bool operator==(const SeedStream&, const SeedStream&) = default;
};

using Engine = std::mt19937_64;

Engine make_engine(SeedStream stream);

/// Engine plus the two base variates every sampler needs.
class RandomSource {
 public:
  explicit RandomSource(SeedStream stream) : engine_(make_engine(stream)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Uniform direction on the unit sphere S^{d-1}.
  Eigen::VectorXd unit_vector(int d);
  void fill_normal(Eigen::Ref<Eigen::VectorXd> out);

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

}  // namespace nsg
