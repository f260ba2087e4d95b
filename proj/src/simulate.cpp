#include "netlap/simulate.hpp"

#include <cmath>

namespace netlap {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

std::string label(const TransitionSystem& ts, Index x) {
  return x < ts.labels.size() ? ts.labels[x] : std::to_string(x);
}

/// Running mean / variance (Welford).
struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  void add(double v) {
    n += 1.0;
    double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  double se() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

/// Walks from x (one step at least) until `stop(state)`; returns the stop state.
template <class Stop, class Visit>
Index walk(const StepSampler& sampler, Index x, SplitMix64& rng, Stop stop, Visit visit) {
  for (std::uint64_t k = 0; k < kStepCap; ++k) {
    x = sampler.step(x, rng);
    if (stop(x)) return x;
    visit(x);
  }
  throw ResidualError("random walk exceeded the step cap");
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 mix(seed ^ (trial * 0xD1B54A32D192ED03ULL));
  mix.next();
  return mix.next();
}

StepSampler::StepSampler(const TransitionSystem& ts) : rows_(ts.size()) {
  for (Index x = 0; x < ts.size(); ++x) {
    double acc = 0.0;
    for (Index y = 0; y < ts.size(); ++y) {
      double p = ts.p(ei(x), ei(y));
      if (p > 0.0) {
        acc += p;
        rows_[x].emplace_back(acc, y);
      }
    }
    rows_[x].back().first = 1.0;
  }
}

Index StepSampler::step(Index x, SplitMix64& rng) const {
  const double u = rng.uniform();
  for (const auto& [cum, y] : rows_[x]) {
    if (u < cum) return y;
  }
  return rows_[x].back().second;
}

Index sample_step(const TransitionSystem& ts, Index x, SplitMix64& rng) {
  return StepSampler(ts).step(x, rng);
}

const Estimate& EstimateReport::at(Index row, Index col) const {
  for (const auto& e : entries) {
    if (e.row == row && e.col == col) return e;
  }
  throw InputError("no estimate for the requested entry");
}

EstimateReport estimate_hitting(const TransitionSystem& ts, Index x, std::uint64_t trials,
                                std::uint64_t seed) {
  if (x >= ts.size() || set_contains(ts.boundary, x)) throw InputError("hitting estimate needs an interior start");
  const StepSampler sampler(ts);
  const auto& b = ts.boundary;
  std::vector<Moments> m(b.size());
  auto on_boundary = [&](Index z) { return set_contains(b, z); };
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    Index hit = walk(sampler, x, rng, on_boundary, [](Index) {});
    for (std::size_t j = 0; j < b.size(); ++j) m[j].add(b[j] == hit ? 1.0 : 0.0);
  }
  EstimateReport r{{}, trials, seed};
  for (std::size_t j = 0; j < b.size(); ++j) {
    r.entries.push_back({"nu_" + label(ts, x) + "(" + label(ts, b[j]) + ")", x, b[j], m[j].mean, m[j].se()});
  }
  return r;
}

EstimateReport estimate_green(const TransitionSystem& ts, const VertexSet& a_in, Index x, Index y,
                              std::uint64_t trials, std::uint64_t seed) {
  const VertexSet a = make_set(a_in);
  if (a.size() >= ts.size() || !set_contains(a, x) || !set_contains(a, y)) {
    throw InputError("Green estimate needs x, y in a strict subset A");
  }
  const StepSampler sampler(ts);
  Moments m;
  auto outside = [&](Index z) { return !set_contains(a, z); };
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    double visits = x == y ? 1.0 : 0.0;
    walk(sampler, x, rng, outside, [&](Index z) { visits += z == y ? 1.0 : 0.0; });
    m.add(visits);
  }
  EstimateReport r{{}, trials, seed};
  r.entries.push_back({"G(" + label(ts, x) + "," + label(ts, y) + ")", x, y, m.mean, m.se()});
  return r;
}

EstimateReport estimate_boundary_chain(const TransitionSystem& ts, std::uint64_t trials,
                                       std::uint64_t seed) {
  const StepSampler sampler(ts);
  const auto& b = ts.boundary;
  auto on_boundary = [&](Index z) { return set_contains(b, z); };
  EstimateReport r{{}, trials, seed};
  for (std::size_t i = 0; i < b.size(); ++i) {
    std::vector<Moments> m(b.size());
    for (std::uint64_t t = 0; t < trials; ++t) {
      SplitMix64 rng(derive_seed(seed, i * trials + t));
      Index hit = walk(sampler, b[i], rng, on_boundary, [](Index) {});
      for (std::size_t j = 0; j < b.size(); ++j) m[j].add(b[j] == hit ? 1.0 : 0.0);
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      r.entries.push_back({"q(" + label(ts, b[i]) + "," + label(ts, b[j]) + ")", b[i], b[j], m[j].mean,
                           m[j].se()});
    }
  }
  return r;
}

EstimateReport estimate_boundary_occupation(const TransitionSystem& ts, std::uint64_t visits,
                                            std::uint64_t seed, std::uint64_t batches) {
  if (batches < 2 || visits < batches) throw InputError("occupation estimate needs at least two batches");
  const StepSampler sampler(ts);
  const auto& b = ts.boundary;
  auto on_boundary = [&](Index z) { return set_contains(b, z); };
  SplitMix64 rng(derive_seed(seed, 0));
  const std::uint64_t per_batch = visits / batches;
  std::vector<Moments> m(b.size());
  Index state = b.front();
  for (std::uint64_t k = 0; k < batches; ++k) {
    std::vector<double> count(b.size(), 0.0);
    for (std::uint64_t v = 0; v < per_batch; ++v) {
      state = walk(sampler, state, rng, on_boundary, [](Index) {});
      count[position_in(b, state)] += 1.0;
    }
    for (std::size_t j = 0; j < b.size(); ++j) m[j].add(count[j] / static_cast<double>(per_batch));
  }
  EstimateReport r{{}, per_batch * batches, seed};
  for (std::size_t j = 0; j < b.size(); ++j) {
    r.entries.push_back({"occupation(" + label(ts, b[j]) + ")", b[j], b[j], m[j].mean, m[j].se()});
  }
  return r;
}

}  // namespace netlap
