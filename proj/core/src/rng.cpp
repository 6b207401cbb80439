#include "nsg/rng.hpp"

namespace nsg {

Engine make_engine(SeedStream stream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(stream.seed), hi(stream.seed), lo(stream.stream_index),
                    hi(stream.stream_index), 0x6e5347u};
  return Engine(seq);
}

void RandomSource::fill_normal(Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal_(engine_);
}

Eigen::VectorXd RandomSource::unit_vector(int d) {
  Eigen::VectorXd v(d);
  double norm = 0.0;
  // Rejecting tiny norms keeps normalization well conditioned; the
  // event has negligible probability except at d = 1.
  do {
    fill_normal(v);
    norm = v.norm();
  } while (norm < 1e-300);
  return v / norm;
}

}  // namespace nsg
