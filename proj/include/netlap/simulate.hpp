#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netlap/core.hpp"
#include "netlap/markov.hpp"

namespace netlap {

/// SplitMix64: state += 0x9E3779B97F4A7C15, output is the standard
/// xor-shift-multiply finaliser of the new state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Seed of trial `trial` under base seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial);

/// Inverse-CDF sampler over the rows of P.
class StepSampler {
 public:
  explicit StepSampler(const TransitionSystem& ts);
  Index step(Index x, SplitMix64& rng) const;

 private:
  std::vector<std::vector<std::pair<double, Index>>> rows_;
};

/// One draw from row x of P.
Index sample_step(const TransitionSystem& ts, Index x, SplitMix64& rng);

inline constexpr std::uint64_t kStepCap = 100'000'000;

struct Estimate {
  std::string key;
  Index row = 0;
  Index col = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct EstimateReport {
  std::vector<Estimate> entries;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  const Estimate& at(Index row, Index col) const;
};

/// Law of the first boundary vertex hit from x in X°; entries (x, y) for y in dX.
EstimateReport estimate_hitting(const TransitionSystem& ts, Index x, std::uint64_t trials,
                                std::uint64_t seed);

/// Mean number of visits to y (time 0 included) before leaving A, from x.
EstimateReport estimate_green(const TransitionSystem& ts, const VertexSet& a, Index x, Index y,
                              std::uint64_t trials, std::uint64_t seed);

/// First-return law on dX from each boundary vertex; `trials` per start.
EstimateReport estimate_boundary_chain(const TransitionSystem& ts, std::uint64_t trials,
                                       std::uint64_t seed);

/// Long-run fraction of boundary visits spent at each boundary vertex,
/// standard errors by batch means over `batches` batches.
EstimateReport estimate_boundary_occupation(const TransitionSystem& ts, std::uint64_t visits,
                                            std::uint64_t seed, std::uint64_t batches = 100);

}  // namespace netlap
