#include "nsg/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "nsg/dilation.hpp"
#include "nsg/errors.hpp"

namespace nsg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be a positive finite real");
}

// Runs one path; `on_step` sees every realized step.
template <class OnStep>
void run_path(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n, SeedStream stream,
              OnStep on_step) {
  validate(rule);
  require_unit_base(base);
  Sampler sampler(base, stream);
  RuleState state;
  Vector x(base.dimension);
  Vector sum = Vector::Zero(base.dimension);
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = next_sigma(rule, state);
    sampler.draw_into(x);
    x *= sigma;
    sum += x;
    state.advance(sum);
    on_step(sigma, x, sum);
  }
}

}  // namespace

void validate(const AdaptiveRule& rule) {
  std::visit(overloaded{
                 [](const ConstantRule& r) { require_positive(r.sigma, "constant rule sigma"); },
                 [](const DoubleOnThreshold& r) {
                   require_positive(r.base, "doubling rule base sigma");
                   for (double t : r.thresholds) {
                     if (!std::isfinite(t) || t < 0.0) throw ValidationError("thresholds must be nonnegative");
                   }
                 },
                 [](const HistoryNormScaled& r) {
                   require_positive(r.floor, "history rule floor");
                   require_positive(r.cap, "history rule cap");
                   if (r.cap < r.floor) throw ValidationError("history rule needs cap >= floor");
                   if (!std::isfinite(r.gain) || r.gain < 0.0) throw ValidationError("history rule gain must be >= 0");
                 },
             },
             rule);
}

void RuleState::advance(const Vector& partial_sum) {
  sum_norm = partial_sum.norm();
  max_sum_norm = std::max(max_sum_norm, sum_norm);
}

double next_sigma(const AdaptiveRule& rule, const RuleState& state) {
  const double sigma = std::visit(
      overloaded{
          [](const ConstantRule& r) { return r.sigma; },
          [&state](const DoubleOnThreshold& r) {
            const auto reached = std::count_if(r.thresholds.begin(), r.thresholds.end(),
                                               [&state](double t) { return state.max_sum_norm >= t; });
            return std::ldexp(r.base, static_cast<int>(reached));
          },
          [&state](const HistoryNormScaled& r) { return std::clamp(r.gain * state.sum_norm, r.floor, r.cap); },
      },
      rule);
  require_positive(sigma, "rule output sigma_i");
  return sigma;
}

void require_unit_base(const DistributionSpec& base) {
  base.validate();
  if (base.sigma != 1.0) throw ValidationError("martingale base law must be at unit scale (sigma = 1)");
}

MartingalePath simulate_path(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n,
                             SeedStream stream) {
  MartingalePath path{base.dimension, {}};
  path.steps.reserve(n);
  run_path(rule, base, n, stream, [&path](double sigma, const Vector& x, const Vector& sum) {
    path.steps.push_back({sigma, x, sum});
  });
  return path;
}

PathSummary simulate_summary(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n,
                             SeedStream stream) {
  PathSummary summary;
  double last_norm = 0.0;
  run_path(rule, base, n, stream, [&](double sigma, const Vector&, const Vector& sum) {
    summary.sigma_sq_sum += sigma * sigma;
    last_norm = sum.norm();
  });
  summary.sum_norm = last_norm;
  return summary;
}

PathSummary path_statistic(const MartingalePath& path) {
  PathSummary summary;
  for (const auto& step : path.steps) summary.sigma_sq_sum += step.sigma * step.sigma;
  if (!path.steps.empty()) summary.sum_norm = path.steps.back().partial_sum.norm();
  return summary;
}

bool audit_path(const MartingalePath& path, const AdaptiveRule& rule) {
  RuleState state;
  Vector sum = Vector::Zero(path.dimension);
  for (const auto& step : path.steps) {
    if (next_sigma(rule, state) != step.sigma) return false;
    sum += step.x;
    if (sum != step.partial_sum) return false;
    state.advance(step.partial_sum);
  }
  return true;
}

std::vector<EnumeratedPath> enumerate_paths(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n) {
  validate(rule);
  require_unit_base(base);
  if (base.family != Family::FiniteSupport) throw ValidationError("path enumeration needs a finite_support base");
  std::vector<const Atom*> atoms;
  for (const auto& atom : base.support) {
    if (atom.probability > 0.0) atoms.push_back(&atom);
  }
  double count = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    count *= static_cast<double>(atoms.size());
    if (count > static_cast<double>(kMaxEnumeratedPaths)) throw ResourceError("path enumeration exceeds 10^6 paths");
  }

  std::vector<EnumeratedPath> out;
  out.reserve(static_cast<std::size_t>(count));
  EnumeratedPath current{{base.dimension, {}}, 1.0};
  auto visit = [&](auto&& self, const RuleState& state) -> void {
    if (current.path.steps.size() == n) {
      out.push_back(current);
      return;
    }
    const double sigma = next_sigma(rule, state);
    const Vector previous =
        current.path.steps.empty() ? Vector::Zero(base.dimension) : current.path.steps.back().partial_sum;
    const double probability = current.probability;
    for (const Atom* atom : atoms) {
      Vector x = sigma * atom->point;
      Vector sum = previous + x;
      RuleState next = state;
      next.advance(sum);
      current.path.steps.push_back({sigma, std::move(x), std::move(sum)});
      current.probability = probability * atom->probability;
      self(self, next);
      current.path.steps.pop_back();
    }
    current.probability = probability;
  };
  visit(visit, RuleState{});
  return out;
}

void write_path_csv(std::ostream& out, const MartingalePath& path) {
  out << "step,sigma";
  for (int k = 1; k <= path.dimension; ++k) out << ",x_" << k;
  out << ",sumnorm\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);  // prints -0 as 0
    out << ',' << buf;
  };
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& step = path.steps[i];
    out << (i + 1);
    put(step.sigma);
    for (Eigen::Index k = 0; k < step.x.size(); ++k) put(step.x[k]);
    put(step.partial_sum.norm());
    out << '\n';
  }
}

}  // namespace nsg
