#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nsg/distributions.hpp"
#include "nsg/parallel.hpp"

namespace nsg {

/// Monte Carlo run parameters. Draws are grouped in fixed-size blocks and
/// block b uses stream (seed, stream_base + b), so results do not depend on
/// `threads`.
struct TrialConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  double alpha = 1e-3;
  unsigned threads = 0;
  std::uint64_t stream_base = 0;

  void validate() const;
};

inline constexpr std::uint64_t kSampleBlock = 4096;

/// Folds `config.trials` draws from `spec` into an accumulator. `visit(acc,
/// x)` consumes one draw; per-block accumulators are merged in block order.
template <class Acc, class Visit, class Merge>
Acc accumulate_samples(const DistributionSpec& spec, const TrialConfig& config, const Acc& init, Visit visit,
                       Merge merge) {
  config.validate();
  spec.validate();
  const std::uint64_t blocks = (config.trials + kSampleBlock - 1) / kSampleBlock;
  std::vector<Acc> partial(blocks, init);
  parallel_for(blocks, config.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Eigen::VectorXd x(spec.dimension);
    for (std::uint64_t b = begin; b < end; ++b) {
      Sampler sampler(spec, {config.seed, config.stream_base + b});
      const std::uint64_t first = b * kSampleBlock;
      const std::uint64_t last = std::min(config.trials, first + kSampleBlock);
      for (std::uint64_t i = first; i < last; ++i) {
        sampler.draw_into(x);
        visit(partial[b], x);
      }
    }
  });
  Acc total = init;
  for (const auto& p : partial) merge(total, p);
  return total;
}

/// ||X|| for `config.trials` draws, in draw order.
std::vector<double> sample_norms(const DistributionSpec& spec, const TrialConfig& config);

/// <v, X> for `config.trials` draws, in draw order.
std::vector<double> sample_projections(const DistributionSpec& spec, const Eigen::VectorXd& v,
                                       const TrialConfig& config);

}  // namespace nsg
