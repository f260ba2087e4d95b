#include "netlap/network.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace netlap {

namespace {

std::vector<std::vector<Index>> adjacency(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::vector<Index>> adj(n);
  for (const auto& e : edges) adj[e.from].push_back(e.to);
  return adj;
}

}  // namespace

std::vector<VertexSet> strong_components(std::size_t n, std::span<const Edge> edges) {
  const auto adj = adjacency(n, edges);
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> number(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Index> stack;
  std::vector<VertexSet> components;
  std::size_t counter = 0;

  // Iterative Tarjan: frames hold (vertex, next successor position).
  std::vector<std::pair<Index, std::size_t>> frames;
  for (Index start = 0; start < n; ++start) {
    if (number[start] != kUnvisited) continue;
    frames.emplace_back(start, 0);
    number[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        Index w = adj[v][pos++];
        if (number[w] == kUnvisited) {
          number[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], number[w]);
        }
        continue;
      }
      if (low[v] == number[v]) {
        VertexSet comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      Index finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        Index parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return components;
}

bool strongly_connected(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) return false;
  return strong_components(n, edges).size() == 1;
}

bool strongly_connected(const Network& net) {
  return strongly_connected(net.size(), net.edges());
}

Network Network::create(std::vector<std::string> vertices, std::vector<Edge> edges,
                        VertexSet boundary, Index root) {
  const std::size_t n = vertices.size();
  if (n == 0) throw InputError("network has no vertices");
  {
    std::unordered_map<std::string, Index> seen;
    for (Index i = 0; i < n; ++i) {
      if (!seen.emplace(vertices[i], i).second) {
        throw InputError("duplicate vertex '" + vertices[i] + "'");
      }
    }
  }
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n) throw InputError("unknown vertex in edge");
    if (e.from == e.to) throw InputError("loop edge at vertex '" + vertices[e.from] + "'");
    if (!std::isfinite(e.weight)) {
      throw InputError("non-finite weight on edge '" + vertices[e.from] + "' -> '" +
                       vertices[e.to] + "'");
    }
    if (!(e.weight > 0.0)) {
      throw InputError("non-positive weight on edge '" + vertices[e.from] + "' -> '" +
                       vertices[e.to] + "'");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].from == edges[i - 1].from && edges[i].to == edges[i - 1].to) {
      throw InputError("duplicate edge '" + vertices[edges[i].from] + "' -> '" +
                       vertices[edges[i].to] + "'");
    }
  }
  if (boundary.empty()) throw InputError("empty boundary");
  for (Index b : boundary) {
    if (b >= n) throw InputError("unknown vertex in boundary");
  }
  boundary = make_set(std::move(boundary));
  if (root >= n) throw InputError("unknown root vertex");
  if (!strongly_connected(n, edges)) throw InputError("not strongly connected");

  Network net;
  net.vertices_ = std::move(vertices);
  net.edges_ = std::move(edges);
  net.boundary_ = std::move(boundary);
  net.root_ = root;
  net.row_start_.assign(n + 1, 0);
  for (const auto& e : net.edges_) ++net.row_start_[e.from + 1];
  std::partial_sum(net.row_start_.begin(), net.row_start_.end(), net.row_start_.begin());
  return net;
}

std::optional<Index> Network::find(std::string_view name) const {
  for (Index i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == name) return i;
  }
  return std::nullopt;
}

std::span<const Edge> Network::out_edges(Index x) const {
  return std::span<const Edge>(edges_).subspan(row_start_[x], row_start_[x + 1] - row_start_[x]);
}

double Network::weight(Index x, Index y) const {
  for (const auto& e : out_edges(x)) {
    if (e.to == y) return e.weight;
  }
  return 0.0;
}

RealMatrix Network::conductances() const {
  const auto n = static_cast<Eigen::Index>(size());
  RealMatrix a = RealMatrix::Zero(n, n);
  for (const auto& e : edges_) {
    a(static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) = e.weight;
  }
  return a;
}

// ---------------------------------------------------------------------------
// JSON

Network parse_network(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("syntax error at byte ") + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw InputError("network document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "vertices" && key != "edges" && key != "boundary" && key != "root") {
      throw InputError("unknown field '" + key + "' in network document");
    }
  }
  for (const char* key : {"vertices", "edges", "boundary", "root"}) {
    if (!doc.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  }

  const auto& jv = doc["vertices"];
  if (!jv.is_array()) throw InputError("'vertices' must be an array of strings");
  std::vector<std::string> vertices;
  for (const auto& v : jv) {
    if (!v.is_string()) throw InputError("'vertices' must be an array of strings");
    vertices.push_back(v.get<std::string>());
  }
  std::unordered_map<std::string, Index> index;
  for (Index i = 0; i < vertices.size(); ++i) {
    if (!index.emplace(vertices[i], i).second) {
      throw InputError("duplicate vertex '" + vertices[i] + "'");
    }
  }
  auto lookup = [&](const json& name, const char* where) -> Index {
    if (!name.is_string()) throw InputError(std::string("vertex name in ") + where + " must be a string");
    auto it = index.find(name.get<std::string>());
    if (it == index.end()) {
      throw InputError(std::string("unknown vertex '") + name.get<std::string>() + "' in " + where);
    }
    return it->second;
  };

  const auto& je = doc["edges"];
  if (!je.is_array()) throw InputError("'edges' must be an array");
  std::vector<Edge> edges;
  for (const auto& e : je) {
    if (!e.is_object()) throw InputError("edge entries must be objects");
    for (const auto& [key, value] : e.items()) {
      if (key != "from" && key != "to" && key != "weight") {
        throw InputError("unknown field '" + key + "' in edge");
      }
    }
    if (!e.contains("from") || !e.contains("to") || !e.contains("weight")) {
      throw InputError("edge needs 'from', 'to' and 'weight'");
    }
    if (!e["weight"].is_number()) throw InputError("edge weight must be a number");
    edges.push_back({lookup(e["from"], "edge"), lookup(e["to"], "edge"), e["weight"].get<double>()});
  }

  const auto& jb = doc["boundary"];
  if (!jb.is_array()) throw InputError("'boundary' must be an array");
  VertexSet boundary;
  for (const auto& b : jb) boundary.push_back(lookup(b, "boundary"));
  Index root = lookup(doc["root"], "root");
  return Network::create(std::move(vertices), std::move(edges), std::move(boundary), root);
}

std::string serialize_network(const Network& net) {
  using nlohmann::json;
  auto name = [&](Index i) { return json(net.vertices()[i]).dump(); };
  std::ostringstream out;
  out << std::setprecision(17);
  out << "{\n  \"vertices\": [";
  for (Index i = 0; i < net.size(); ++i) out << (i ? ", " : "") << name(i);
  out << "],\n  \"edges\": [";
  const auto& edges = net.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    out << (k ? ",\n" : "\n") << "    {\"from\": " << name(edges[k].from)
        << ", \"to\": " << name(edges[k].to) << ", \"weight\": " << edges[k].weight << "}";
  }
  out << (edges.empty() ? "" : "\n  ") << "],\n  \"boundary\": [";
  const auto& b = net.boundary();
  for (std::size_t k = 0; k < b.size(); ++k) out << (k ? ", " : "") << name(b[k]);
  out << "],\n  \"root\": " << name(net.root()) << "\n}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Sub-networks

bool SubNetwork::strongly_connected() const {
  std::vector<Edge> induced;
  for (Index x : members) {
    for (const auto& e : parent->out_edges(x)) {
      if (set_contains(members, e.to)) {
        induced.push_back({position_in(members, x), position_in(members, e.to), e.weight});
      }
    }
  }
  return netlap::strongly_connected(members.size(), induced);
}

SubNetwork make_subnetwork(const Network& net, const VertexSet& y) {
  VertexSet members = make_set(y);
  if (members.empty()) throw InputError("sub-network: Y is empty");
  for (Index x : members) {
    if (x >= net.size()) throw InputError("sub-network: unknown vertex");
  }
  if (members.size() == net.size()) throw InputError("sub-network: Y must be a strict subset");
  SubNetwork sub;
  sub.parent = std::make_shared<const Network>(net);
  for (Index x : members) {
    bool leaves = false;
    for (const auto& e : net.out_edges(x)) {
      if (!set_contains(members, e.to)) {
        leaves = true;
        break;
      }
    }
    (leaves ? sub.boundary : sub.interior).push_back(x);
  }
  sub.members = std::move(members);
  return sub;
}

// ---------------------------------------------------------------------------
// Built-in examples

Network path_network(int n) {
  if (n < 2) throw InputError("pathA: N must be >= 2");
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (int k = 0; k <= n; ++k) names.push_back(std::to_string(k));
  for (int k = 0; k < n; ++k) {
    auto a = static_cast<Index>(k), b = static_cast<Index>(k + 1);
    edges.push_back({a, b, 1.0});
    edges.push_back({b, a, 1.0});
  }
  return Network::create(std::move(names), std::move(edges), {0, static_cast<Index>(n)}, 0);
}

namespace {

Network funnel_from_row(std::span<const double> row_weights) {
  // row_weights[j] is the weight of 1 -> j+2.
  const std::size_t n = row_weights.size() + 1;
  if (n < 3) throw InputError("funnelB: N must be >= 3");
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= n; ++k) names.push_back(std::to_string(k));
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < row_weights.size(); ++j) edges.push_back({0, j + 1, row_weights[j]});
  for (std::size_t k = 1; k < n; ++k) edges.push_back({k, k - 1, 1.0});
  return Network::create(std::move(names), std::move(edges), {n - 2, n - 1}, 0);
}

}  // namespace

Network funnel_network(std::span<const double> tail) {
  double total = 0.0;
  for (double p : tail) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("funnelB: probabilities must be positive");
    total += p;
  }
  std::vector<double> row;
  for (double p : tail) row.push_back(p / total);
  return funnel_from_row(row);
}

Network funnel_network_folded(std::span<const double> p) {
  if (p.size() < 3) throw InputError("funnelB: N must be >= 3");
  double total = 0.0;
  for (double q : p) {
    if (!(q > 0.0) || !std::isfinite(q)) throw InputError("funnelB: probabilities must be positive");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("funnelB: probabilities must sum to 1");
  std::vector<double> row;
  for (std::size_t k = 1; k < p.size(); ++k) row.push_back(p[k] / (1.0 - p[0]));
  return funnel_from_row(row);
}

Network cycle_network(int length) {
  if (length < 4 || length % 2 != 0) throw InputError("cycle: length must be even and >= 4");
  std::vector<std::string> names;
  std::vector<Edge> edges;
  VertexSet boundary;
  for (int k = 0; k < length; ++k) {
    names.push_back(std::to_string(k));
    edges.push_back({static_cast<Index>(k), static_cast<Index>((k + 1) % length), 1.0});
    if (k % 2 == 1) boundary.push_back(static_cast<Index>(k));
  }
  return Network::create(std::move(names), std::move(edges), std::move(boundary), 0);
}

}  // namespace netlap
