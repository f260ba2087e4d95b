#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "netlap/cli.hpp"
#include "netlap/markov.hpp"
#include "netlap/verify.hpp"

namespace netlap::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

json matrix_json(const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                 const std::vector<std::vector<double>>& values) {
  return json{{"rows", rows}, {"cols", cols}, {"values", values}};
}

std::vector<std::string> labels(int from, int to) {
  std::vector<std::string> out;
  for (int k = from; k <= to; ++k) out.push_back(std::to_string(k));
  return out;
}

void print_table(const json& doc, std::ostream& out, const std::string& indent = "") {
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object() && !(value.contains("re") && value.size() == 2)) {
      out << indent << key << ":\n";
      print_table(value, out, indent + "  ");
    } else if (value.is_boolean() && (key == "singular")) {
      out << indent << key << ": " << (value.get<bool>() ? "SINGULAR" : "regular") << "\n";
    } else if (value.is_boolean()) {
      out << indent << key << ": " << (value.get<bool>() ? "yes" : "no") << "\n";
    } else {
      out << indent << key << ": " << value.dump() << "\n";
    }
  }
}

/// One-line verdicts for analyze in table form.
void print_analysis(const json& a, std::ostream& out) {
  out << "vertices: " << a["vertices"] << "\n";
  out << "edges: " << a["edges"] << "\n";
  out << "boundary: " << a["boundary"].dump() << "\n";
  out << "interior: " << a["interior"].dump() << "\n";
  out << "root: " << a["root"].get<std::string>() << "\n";
  out << "strongly connected: " << (a["strongly_connected"].get<bool>() ? "yes" : "no") << "\n";
  out << std::setprecision(17);
  out << "pi:";
  for (const auto& [k, v] : a["pi"].items()) out << " " << k << "=" << v.get<double>();
  out << "\n";
  out << "reversible: " << (a["reversible"].get<bool>() ? "yes" : "no") << "\n";
  if (a.contains("exit_boundary")) {
    auto braces = [](const json& arr) {
      std::string s = "{";
      for (std::size_t i = 0; i < arr.size(); ++i) s += (i ? ", " : "") + arr[i].get<std::string>();
      return s + "}";
    };
    out << "exit boundary: " << braces(a["exit_boundary"]) << "\n";
    out << "entrance boundary: " << braces(a["entrance_boundary"]) << "\n";
    for (const char* m : {"S", "I + R"}) {
      const auto& e = a[m];
      out << m << ": " << (e["singular"].get<bool>() ? "SINGULAR" : "regular")
          << " (condition " << e["condition"].get<double>() << ", min pivot "
          << e["min_pivot"].get<double>() << ")\n";
    }
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

int report_error(std::ostream& err, const std::exception& e) {
  if (auto* s = dynamic_cast<const SolvabilityError*>(&e)) {
    err << "error: " << s->what() << "\nresidual: " << std::setprecision(17) << s->residual() << "\n";
    return 2;
  }
  if (auto* s = dynamic_cast<const SingularError*>(&e)) {
    err << "error: " << s->what() << "\ncondition: " << std::setprecision(17) << s->condition() << "\n";
    return 3;
  }
  if (dynamic_cast<const ResidualError*>(&e)) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  err << "error: " << e.what() << "\n";
  return dynamic_cast<const InputError*>(&e) ? 1 : 4;
}

}  // namespace

json path_expectations(int n) {
  if (n < 2) throw InputError("pathA: N must be >= 2");
  const double dn = n;
  json e;
  json pi = json::object();
  for (int k = 0; k <= n; ++k) pi[std::to_string(k)] = (k == 0 || k == n) ? 1.0 / (2.0 * dn) : 1.0 / dn;
  e["pi"] = pi;
  std::vector<std::vector<double>> g0, go, nu;
  for (int k = 1; k <= n; ++k) {
    std::vector<double> row;
    for (int m = 1; m <= n; ++m) row.push_back(m < n ? 2.0 * std::min(k, m) : k);
    g0.push_back(row);
  }
  for (int k = 1; k < n; ++k) {
    std::vector<double> row;
    for (int m = 1; m < n; ++m) row.push_back(2.0 * std::min(k, m) * (n - std::max(k, m)) / dn);
    go.push_back(row);
    nu.push_back({(n - k) / dn, k / dn});
  }
  const std::vector<std::string> bd = {"0", std::to_string(n)};
  e["green_X_minus_0"] = matrix_json(labels(1, n), labels(1, n), g0);
  e["green_interior"] = matrix_json(labels(1, n - 1), labels(1, n - 1), go);
  e["hitting"] = matrix_json(labels(1, n - 1), bd, nu);
  e["Q"] = matrix_json(bd, bd, {{(dn - 1) / dn, 1 / dn}, {1 / dn, (dn - 1) / dn}});
  const double r = (dn - 1) / (3 * dn);
  e["R"] = matrix_json(bd, bd, {{r * (2 * dn - 1), r * (dn + 1)}, {r * (dn + 1), r * (2 * dn - 1)}});
  const double d = dn * dn * dn + 2 * dn;
  e["I_plus_R_inverse"] =
      matrix_json(bd, bd, {{(2 * dn * dn + 1) / d, (1 - dn * dn) / d}, {(1 - dn * dn) / d, (2 * dn * dn + 1) / d}});
  const double t = 3 / (dn * dn + 2);
  e["T"] = matrix_json(bd, bd, {{t, -t}, {-t, t}});
  e["reversible"] = true;
  return e;
}

json funnel_expectations(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  if (n < 3) throw InputError("funnelB: N must be >= 3");
  double mean = 0.0;
  for (int m = 1; m <= n; ++m) mean += m * p[static_cast<std::size_t>(m - 1)];
  std::vector<double> pi(static_cast<std::size_t>(n) + 1, 0.0);  // 1-based
  for (int k = n; k >= 1; --k) {
    pi[static_cast<std::size_t>(k)] = (k < n ? pi[static_cast<std::size_t>(k + 1)] * mean : 0.0);
    pi[static_cast<std::size_t>(k)] = (pi[static_cast<std::size_t>(k)] + p[static_cast<std::size_t>(k - 1)]) / mean;
  }
  auto P = [&](int k) { return p[static_cast<std::size_t>(k - 1)]; };
  auto Pi = [&](int k) { return pi[static_cast<std::size_t>(k)]; };
  json e;
  json jpi = json::object();
  for (int k = 1; k <= n; ++k) jpi[std::to_string(k)] = Pi(k);
  e["pi"] = jpi;
  std::vector<std::vector<double>> g1, go, nu;
  for (int k = 2; k <= n; ++k) {
    std::vector<double> row;
    for (int m = 2; m <= n; ++m) row.push_back(m <= k ? 1.0 : 0.0);
    g1.push_back(row);
  }
  const double b = Pi(n - 1);
  const double tail = P(n - 1) + P(n);
  for (int k = 1; k <= n - 2; ++k) {
    std::vector<double> row;
    for (int m = 1; m <= n - 2; ++m) row.push_back(m <= k ? Pi(m) / b : (Pi(m) - b) / b);
    go.push_back(row);
    nu.push_back({P(n - 1) / tail, P(n) / tail});
  }
  const std::vector<std::string> bd = {std::to_string(n - 1), std::to_string(n)};
  e["green_X_minus_1"] = matrix_json(labels(2, n), labels(2, n), g1);
  e["green_interior"] = matrix_json(labels(1, n - 2), labels(1, n - 2), go);
  e["hitting"] = matrix_json(labels(1, n - 2), bd, nu);
  e["Q"] = matrix_json(bd, bd, {{P(n - 1) / tail, P(n) / tail}, {1.0, 0.0}});
  const double c = Pi(1) * (1 - Pi(n - 1) - Pi(n)) / (b * b);
  e["R"] = matrix_json(bd, bd, {{c * P(n - 1), c * P(n)}, {0.0, 0.0}});
  const double a = Pi(n);
  const double d = (a - a * a) / (a * a - a + b);
  e["T"] = matrix_json(bd, bd, {{d, -d}, {-1.0, 1.0}});
  e["D"] = d;
  e["exit_boundary"] = bd;
  e["entrance_boundary"] = std::vector<std::string>{std::to_string(n - 1)};
  e["reversible"] = false;
  return e;
}

json cycle_expectations(int length) {
  if (length < 4 || length % 2 != 0) throw InputError("cycle: length must be even and >= 4");
  json e;
  json pi = json::object();
  for (int k = 0; k < length; ++k) pi[std::to_string(k)] = 1.0 / length;
  e["pi"] = pi;
  const bool singular = (length / 2) % 2 == 0;
  e["S_singular"] = singular;
  e["I_plus_R_singular"] = singular;
  return e;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplace and bi-Laplace boundary value problems on directed networks"};
  app.require_subcommand(1);
  app.fallthrough();
  double tol_residual = 1e-9;
  std::string output = "json";
  app.add_option("--tol", tol_residual, "Residual gate")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"json", "table"}));

  auto* analyze = app.add_subcommand("analyze", "Describe a network");
  std::string net_path;
  analyze->add_option("network", net_path, "Network file")->required();

  auto* solve = app.add_subcommand("solve", "Solve a boundary value problem");
  std::string problem_path, ground, anchor, normal;
  solve->add_option("network", net_path, "Network file")->required();
  solve->add_option("problem", problem_path, "Problem file")->required();
  solve->add_option("--ground", ground, "Ground vertex");
  solve->add_option("--anchor", anchor, "Anchor boundary vertex");
  solve->add_option("--normal", normal, "Normal derivative variant")
      ->check(CLI::IsMember({"standard", "reversed", "subnetwork", "star", "override"}));

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite = "identities";
  std::uint64_t seed = 0, trials = 100000;
  verify->add_option("network", net_path, "Network file")->required();
  verify->add_option("--suite", suite, "Suite")->check(CLI::IsMember({"identities", "montecarlo"}));
  verify->add_option("--seed", seed, "Random seed")->required();
  verify->add_option("--trials", trials, "Monte Carlo trials per estimate");

  auto* example = app.add_subcommand("example", "Emit a built-in example network");
  std::string kind, p_list, network_out;
  int n = 4, length = 8;
  bool fold = false;
  example->add_option("kind", kind, "pathA, funnelB, cycle or random")
      ->required()
      ->check(CLI::IsMember({"pathA", "funnelB", "cycle", "random"}));
  example->add_option("--n", n, "N for pathA, vertex count for random");
  example->add_option("--p", p_list, "funnelB probabilities, comma separated");
  example->add_option("--length", length, "Cycle length");
  example->add_option("--seed", seed, "Seed for random");
  example->add_flag("--allow-loop-fold", fold, "Take p_1..p_N and fold the loop at vertex 1");
  example->add_option("--network-out", network_out, "Write the network file here");

  std::vector<std::string> argv_storage = {"netlap"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  Tolerances tol;
  tol.residual = tol_residual;
  auto print = [&](const json& doc) {
    if (output == "table") {
      print_table(doc, out);
    } else {
      out << doc.dump(2) << "\n";
    }
  };

  try {
    if (analyze->parsed()) {
      json a = analyze_network(parse_network(read_file(net_path)), tol);
      if (output == "table") {
        print_analysis(a, out);
      } else {
        out << a.dump(2) << "\n";
      }
      return 0;
    }
    if (solve->parsed()) {
      Network net = parse_network(read_file(net_path));
      ProblemSpec spec = parse_problem(read_file(problem_path), net);
      auto lookup = [&](const std::string& name) {
        auto idx = net.find(name);
        if (!idx) throw InputError("unknown vertex '" + name + "'");
        return *idx;
      };
      if (!ground.empty()) spec.ground = lookup(ground);
      if (!anchor.empty()) spec.anchor = lookup(anchor);
      if (!normal.empty()) spec.normal = parse_normal(normal);
      print(solve_problem(net, spec, tol));
      return 0;
    }
    if (verify->parsed()) {
      Network net = parse_network(read_file(net_path));
      TransitionSystem ts = TransitionSystem::from_network(net);
      std::vector<CheckResult> results =
          suite == "identities" ? identity_suite(ts, seed, tol) : montecarlo_suite(ts, seed, trials);
      bool all = true;
      out << std::setprecision(6);
      for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " value=" << r.value << " tol=" << r.tol << "\n";
        all = all && r.passed;
      }
      out << (all ? "PASS" : "FAIL") << " suite " << suite << " (" << results.size() << " checks, seed " << seed
          << ")\n";
      return all ? 0 : 4;
    }
    if (example->parsed()) {
      Network net = path_network(2);
      json expect = json::object();
      if (kind == "pathA") {
        net = path_network(n);
        expect = path_expectations(n);
      } else if (kind == "funnelB") {
        std::vector<double> p = parse_list(p_list.empty() ? "0.5,0.25,0.25" : p_list);
        if (fold) {
          net = funnel_network_folded(p);
          expect = funnel_expectations(p);
        } else {
          net = funnel_network(p);
          double total = 0.0;
          for (double q : p) total += q;
          std::vector<double> full = {0.0};
          for (double q : p) full.push_back(q / total);
          expect = funnel_expectations(full);
        }
      } else if (kind == "cycle") {
        net = cycle_network(length);
        expect = cycle_expectations(length);
      } else {
        net = random_network(static_cast<std::size_t>(n), seed);
      }
      const std::string text = serialize_network(net);
      if (!network_out.empty()) {
        write_file(network_out, text);
        out << expect.dump(2) << "\n";
      } else {
        json doc{{"network", json::parse(text)}, {"expectations", expect}};
        out << doc.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
  return 1;
}

}  // namespace netlap::cli
