#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netlap/markov.hpp"
#include "netlap/network.hpp"

namespace netlap {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tol = 0.0;
};

/// Strongly connected network on n >= 3 vertices: a random Hamiltonian cycle
/// plus extra random edges, weights in [0.5, 2], random non-empty boundary
/// leaving at least one interior vertex.
Network random_network(std::size_t n, std::uint64_t seed);

/// Uniform complex values with real and imaginary parts in [-1, 1].
Vector random_values(std::size_t n, std::uint64_t seed);

/// Algebraic identities and solver residuals on `ts` with random data.
std::vector<CheckResult> identity_suite(const TransitionSystem& ts, std::uint64_t seed,
                                        const Tolerances& tol = {});

/// Monte Carlo estimates against the analytic kernels, 4 standard errors.
std::vector<CheckResult> montecarlo_suite(const TransitionSystem& ts, std::uint64_t seed,
                                          std::uint64_t trials);

}  // namespace netlap
