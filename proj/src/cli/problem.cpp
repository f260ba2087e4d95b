#include <algorithm>
#include <limits>
#include <cmath>
#include <set>

#include "netlap/bilaplace.hpp"
#include "netlap/cli.hpp"
#include "netlap/linalg.hpp"
#include "netlap/markov.hpp"

namespace netlap::cli {

using nlohmann::json;

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

Index resolve(const Network& net, const json& name, const std::string& where) {
  if (!name.is_string()) throw InputError(where + ": vertex names must be strings");
  auto idx = net.find(name.get<std::string>());
  if (!idx) throw InputError(where + ": unknown vertex '" + name.get<std::string>() + "'");
  return *idx;
}

VertexSet resolve_set(const Network& net, const json& arr, const std::string& where) {
  if (!arr.is_array()) throw InputError(where + " must be an array of vertex names");
  VertexSet out;
  for (const auto& v : arr) out.push_back(resolve(net, v, where));
  return make_set(out);
}

Field parse_function(const Network& net, const json& obj, const std::string& name) {
  if (!obj.is_object()) throw InputError("function '" + name + "' must be an object {vertex: value}");
  std::vector<std::pair<Index, Scalar>> entries;
  for (const auto& [key, value] : obj.items()) {
    entries.emplace_back(resolve(net, json(key), "function '" + name + "'"), parse_scalar(value));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  VertexSet support;
  Vector values(ei(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    support.push_back(entries[i].first);
    values(ei(i)) = entries[i].second;
  }
  return Field::on(std::move(support), std::move(values));
}

json field_json(const Network& net, const VertexSet& support, const Vector& values) {
  json out = json::object();
  for (std::size_t i = 0; i < support.size(); ++i) {
    out[net.vertices()[support[i]]] = scalar_json(values(ei(i)));
  }
  return out;
}

json names(const Network& net, const VertexSet& s) {
  json out = json::array();
  for (Index x : s) out.push_back(net.vertices()[x]);
  return out;
}

double finite_or_max(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::max(); }

}  // namespace

const std::vector<std::string>& problem_kinds() {
  static const std::vector<std::string> kinds = {
      "poisson",          "neumann",     "dirichlet",   "mixed",          "robin",
      "poisson-potential", "dirichlet-potential", "balayage", "d2n",      "normal",
      "iterated-poisson", "bineumann",   "bidirichlet", "plate1",         "plate2",
      "iterated-dirichlet", "bi-d2n",    "bi-n2d"};
  return kinds;
}

Scalar parse_scalar(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "re" && key != "im") throw InputError("complex value has unknown field '" + key + "'");
      if (!value.is_number()) throw InputError("complex parts must be numbers");
    }
    double re = j.contains("re") ? j["re"].get<double>() : 0.0;
    double im = j.contains("im") ? j["im"].get<double>() : 0.0;
    return {re, im};
  }
  throw InputError("expected a number or {\"re\": .., \"im\": ..}");
}

json scalar_json(Scalar z) {
  if (z.imag() == 0.0) return z.real();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

NormalKind parse_normal(const std::string& name) {
  if (name == "standard") return NormalKind::standard;
  if (name == "reversed") return NormalKind::reversed;
  if (name == "subnetwork") return NormalKind::subnetwork;
  if (name == "star") return NormalKind::exterior_star;
  if (name == "override") return NormalKind::overridden;
  throw InputError("unknown normal derivative variant '" + name + "'");
}

ProblemSpec parse_problem(std::string_view text, const Network& net) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("problem file: syntax error at byte ") + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw InputError("problem file must be a JSON object");
  static const std::set<std::string> functions = {"f", "g", "g1", "g2", "v", "alpha", "beta", "u"};
  static const std::set<std::string> options = {"kind", "ground", "anchor", "c", "D", "N", "Y", "rows", "normal"};
  ProblemSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (functions.count(key)) {
      spec.data.emplace(key, parse_function(net, value, key));
    } else if (!options.count(key)) {
      throw InputError("unknown field '" + key + "' in problem file");
    }
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw InputError("problem file needs a string 'kind'");
  spec.kind = doc["kind"].get<std::string>();
  const auto& kinds = problem_kinds();
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end()) {
    throw InputError("unknown problem kind '" + spec.kind + "'");
  }
  if (doc.contains("ground")) spec.ground = resolve(net, doc["ground"], "ground");
  if (doc.contains("anchor")) spec.anchor = resolve(net, doc["anchor"], "anchor");
  if (doc.contains("c")) spec.c = parse_scalar(doc["c"]);
  if (doc.contains("D")) spec.dirichlet = resolve_set(net, doc["D"], "D");
  if (doc.contains("N")) spec.neumann = resolve_set(net, doc["N"], "N");
  if (doc.contains("Y")) spec.y = resolve_set(net, doc["Y"], "Y");
  if (doc.contains("normal")) {
    if (!doc["normal"].is_string()) throw InputError("'normal' must be a string");
    spec.normal = parse_normal(doc["normal"].get<std::string>());
  }
  if (doc.contains("rows")) {
    const auto& rows = doc["rows"];
    if (!rows.is_object()) throw InputError("'rows' must map boundary vertices to probability rows");
    for (const auto& [key, row] : rows.items()) {
      Index x = resolve(net, json(key), "rows");
      if (!row.is_object()) throw InputError("each override row must be an object {vertex: probability}");
      RealVector r = RealVector::Zero(ei(net.size()));
      for (const auto& [to, prob] : row.items()) {
        if (!prob.is_number()) throw InputError("override probabilities must be numbers");
        r(ei(resolve(net, json(to), "rows"))) = prob.get<double>();
      }
      spec.rows.emplace(x, r);
    }
  }
  return spec;
}

namespace {

struct Context {
  const Network& net;
  const ProblemSpec& spec;
  const Tolerances& tol;
  TransitionSystem ts;

  const Field& need(const std::string& name) const {
    auto it = spec.data.find(name);
    if (it == spec.data.end()) throw InputError("problem '" + spec.kind + "' needs function '" + name + "'");
    return it->second;
  }
  /// Optional source term, zero when omitted.
  Field source(const VertexSet& support) const {
    auto it = spec.data.find("f");
    return it == spec.data.end() ? Field::zero(support) : it->second;
  }
};

/// Chain to solve Neumann-type problems against, honouring the normal variant.
TransitionSystem neumann_system(const Context& c) {
  NormalKind kind = c.spec.normal.value_or(NormalKind::standard);
  switch (kind) {
    case NormalKind::standard:
      if (!c.spec.rows.empty()) throw InputError("'rows' needs normal = override");
      return c.ts;
    case NormalKind::reversed:
      return with_reversed_boundary_rows(c.ts);
    case NormalKind::overridden:
      if (c.spec.rows.empty()) throw InputError("normal = override needs 'rows'");
      return c.ts.with_boundary_overrides(c.spec.rows);
    default:
      throw InputError("this problem supports only standard, reversed or override normal derivatives");
  }
}

json condition_report(const TransitionSystem& ts, bool bi, const Tolerances& tol) {
  json rep = json::object();
  const VertexSet in = ts.interior();
  if (in.empty()) return rep;
  LuSolver lu(Matrix(Matrix::Identity(ei(in.size()), ei(in.size())) - block(ts.pc(), in, in)), tol);
  rep["I - P_interior"] = finite_or_max(lu.condition());
  if (bi) {
    BiLaplaceBlocks bl = bi_blocks(ts, tol);
    rep["S"] = finite_or_max(bl.s_condition);
    rep["I + R"] = finite_or_max(bl.ir_condition);
  }
  return rep;
}

json residuals_json(const Solution& s) {
  json out = json::object();
  for (const auto& [name, value] : s.residuals) out[name] = value;
  return out;
}

}  // namespace

json solve_problem(const Network& net, const ProblemSpec& spec, const Tolerances& tol) {
  Context c{net, spec, tol, TransitionSystem::from_network(net)};
  const TransitionSystem& ts = c.ts;
  const VertexSet all = all_vertices(net.size());
  const VertexSet in = ts.interior();
  const VertexSet& b = ts.boundary;
  const Index ground = spec.ground.value_or(net.root());
  const std::string& k = spec.kind;

  json out;
  out["metadata"] = {{"kind", k}, {"vertices", net.size()}};
  bool bi = false;
  auto emit = [&](const Solution& s) {
    out["solution"] = field_json(net, all, s.u);
    out["residuals"] = residuals_json(s);
    out["degrees_of_freedom"] = s.degrees_of_freedom;
  };
  auto emit_field = [&](const Field& f) {
    out["solution"] = field_json(net, f.support, f.values);
    out["residuals"] = json::object();
    out["degrees_of_freedom"] = 0;
  };

  if (k == "poisson") {
    emit(solve_poisson(ts, c.need("f"), ground, tol));
  } else if (k == "neumann") {
    emit(solve_neumann(neumann_system(c).with_root(ground), c.source(in), c.need("g"), tol));
  } else if (k == "dirichlet") {
    emit(solve_dirichlet(ts, c.source(in), c.need("g"), tol));
  } else if (k == "mixed") {
    emit(solve_mixed(neumann_system(c), c.source(in), c.need("g"), spec.dirichlet, spec.neumann, tol));
  } else if (k == "robin") {
    emit(solve_robin(neumann_system(c), c.source(in), c.need("g"), c.need("alpha"), c.need("beta"), tol));
  } else if (k == "poisson-potential") {
    emit(solve_poisson_potential(ts, c.source(all), c.need("v"), tol));
  } else if (k == "dirichlet-potential") {
    emit(solve_dirichlet_potential(ts, c.source(in), c.need("g"), c.need("v"), tol));
  } else if (k == "balayage") {
    BalayageResult r = balayage(ts, c.need("f"), spec.y, ground, tol);
    out["solution"] = field_json(net, all, r.reduite);
    out["balayee"] = field_json(net, all, r.balayee);
    out["potential"] = field_json(net, all, r.potential.u);
    out["residuals"] = residuals_json(r.potential);
    out["degrees_of_freedom"] = 1;
  } else if (k == "d2n") {
    emit_field(dirichlet_to_neumann(ts, c.need("g"), tol));
  } else if (k == "normal") {
    NormalDerivativeSpec nd;
    nd.kind = spec.normal.value_or(NormalKind::standard);
    nd.y = spec.y;
    nd.rows = spec.rows;
    emit_field(normal_derivative(ts, c.need("u").restrict_to(all), nd));
  } else if (k == "iterated-poisson") {
    bi = true;
    emit(solve_iterated_poisson(ts, c.need("f"), ground, tol));
  } else if (k == "bineumann") {
    bi = true;
    TransitionSystem grounded = ts.with_root(ground);
    Scalar cond = bineumann_condition(grounded, c.source(in), c.need("g"), tol);
    out["condition_value"] = scalar_json(cond);
    emit(solve_bineumann(grounded, c.source(in), c.need("g"), tol));
  } else if (k == "bidirichlet") {
    bi = true;
    emit(solve_bidirichlet(ts, c.source(in), c.need("g"), tol));
  } else if (k == "plate1") {
    bi = true;
    emit(solve_plate1(ts, c.source(in), c.need("g1"), c.need("g2"), tol));
  } else if (k == "plate2") {
    bi = true;
    const VertexSet yo = set_difference(in, induced_boundary(ts, in));
    emit(solve_plate2(ts, c.source(yo), c.need("g1"), c.need("g2"), tol));
  } else if (k == "iterated-dirichlet") {
    bi = true;
    const VertexSet yo = set_difference(in, induced_boundary(ts, in));
    emit(solve_iterated_dirichlet(ts, c.source(yo), c.need("g1"), c.need("g2"), tol));
  } else if (k == "bi-d2n") {
    bi = true;
    emit_field(bi_d2n(ts, c.need("g2"), c.source(in), tol));
  } else if (k == "bi-n2d") {
    bi = true;
    if (!spec.anchor) throw InputError("bi-n2d needs an 'anchor' boundary vertex");
    emit_field(bi_n2d(ts, c.need("g1"), c.source(in), *spec.anchor, spec.c, tol));
  }
  out["condition_report"] = condition_report(ts, bi, tol);
  return out;
}

json analyze_network(const Network& net, const Tolerances& tol) {
  TransitionSystem ts = TransitionSystem::from_network(net);
  json out;
  out["vertices"] = net.size();
  out["edges"] = net.edges().size();
  out["boundary"] = names(net, ts.boundary);
  out["interior"] = names(net, ts.interior());
  out["root"] = net.vertices()[net.root()];
  out["strongly_connected"] = strongly_connected(net);
  json pi = json::object();
  for (Index x = 0; x < net.size(); ++x) pi[net.vertices()[x]] = ts.pi(ei(x));
  out["pi"] = pi;
  out["reversible"] = ts.reversible();
  if (!ts.interior().empty()) {
    BoundaryApparatus ap = boundary_chain(ts, tol);
    out["exit_boundary"] = names(net, ap.exit);
    out["entrance_boundary"] = names(net, ap.entrance);
    BiLaplaceBlocks bl = bi_blocks(ts, tol);
    out["S"] = {{"singular", !bl.s_invertible}, {"condition", finite_or_max(bl.s_condition)},
                {"min_pivot", bl.s_min_pivot}};
    out["I + R"] = {{"singular", !bl.ir_invertible}, {"condition", finite_or_max(bl.ir_condition)},
                    {"min_pivot", bl.ir_min_pivot}};
  }
  return out;
}

}  // namespace netlap::cli
