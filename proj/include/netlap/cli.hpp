#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netlap/core.hpp"
#include "netlap/laplace.hpp"
#include "netlap/network.hpp"

namespace netlap::cli {

/// Parsed problem document. Vertex names are resolved against a network.
struct ProblemSpec {
  std::string kind;
  std::map<std::string, Field> data;
  std::optional<Index> ground;
  std::optional<Index> anchor;
  Scalar c{0.0, 0.0};
  VertexSet dirichlet;
  VertexSet neumann;
  VertexSet y;
  std::map<Index, RealVector> rows;
  std::optional<NormalKind> normal;
};

/// Names accepted in the "kind" field.
const std::vector<std::string>& problem_kinds();

ProblemSpec parse_problem(std::string_view text, const Network& net);

NormalKind parse_normal(const std::string& name);

/// Complex values: plain numbers or {"re": .., "im": ..}.
Scalar parse_scalar(const nlohmann::json& j);
nlohmann::json scalar_json(Scalar z);

/// Runs the problem and builds the output document
/// {solution, residuals, degrees_of_freedom, condition_report, metadata}.
nlohmann::json solve_problem(const Network& net, const ProblemSpec& spec, const Tolerances& tol);

/// Description of the network (sizes, pi, boundaries,
/// reversibility, invertibility verdicts).
nlohmann::json analyze_network(const Network& net, const Tolerances& tol);

/// Closed-form expectations for the built-in examples.
nlohmann::json path_expectations(int n);
nlohmann::json funnel_expectations(const std::vector<double>& p);
nlohmann::json cycle_expectations(int length);

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netlap::cli
