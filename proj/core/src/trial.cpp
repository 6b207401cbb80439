#include "nsg/trial.hpp"

#include "nsg/errors.hpp"

namespace nsg {

void TrialConfig::validate() const {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

namespace {

template <class Statistic>
std::vector<double> sample_statistic(const DistributionSpec& spec, const TrialConfig& config, Statistic stat) {
  config.validate();
  spec.validate();
  std::vector<double> out(config.trials);
  const std::uint64_t blocks = (config.trials + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, config.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Eigen::VectorXd x(spec.dimension);
    for (std::uint64_t b = begin; b < end; ++b) {
      Sampler sampler(spec, {config.seed, config.stream_base + b});
      const std::uint64_t first = b * kSampleBlock;
      const std::uint64_t last = std::min(config.trials, first + kSampleBlock);
      for (std::uint64_t i = first; i < last; ++i) {
        sampler.draw_into(x);
        out[i] = stat(x);
      }
    }
  });
  return out;
}

}  // namespace

std::vector<double> sample_norms(const DistributionSpec& spec, const TrialConfig& config) {
  return sample_statistic(spec, config, [](const Eigen::VectorXd& x) { return x.norm(); });
}

std::vector<double> sample_projections(const DistributionSpec& spec, const Eigen::VectorXd& v,
                                       const TrialConfig& config) {
  if (v.size() != spec.dimension) throw ValidationError("direction dimension does not match d");
  return sample_statistic(spec, config, [&v](const Eigen::VectorXd& x) { return v.dot(x); });
}

}  // namespace nsg
