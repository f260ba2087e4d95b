#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netlap/bilaplace.hpp"
#include "netlap/laplace.hpp"
#include "netlap/markov.hpp"
#include "netlap/network.hpp"
#include "netlap/simulate.hpp"
#include "netlap/verify.hpp"

namespace py = pybind11;
using namespace netlap;

namespace {

using FieldMap = std::map<Index, Scalar>;

Field to_field(const FieldMap& m) {
  VertexSet s;
  Vector v(static_cast<Eigen::Index>(m.size()));
  Eigen::Index i = 0;
  for (const auto& [x, z] : m) {
    s.push_back(x);
    v(i++) = z;
  }
  return Field::on(std::move(s), std::move(v));
}

FieldMap from_field(const Field& f) {
  FieldMap out;
  for (std::size_t i = 0; i < f.support.size(); ++i) out[f.support[i]] = f.values(static_cast<Eigen::Index>(i));
  return out;
}

py::dict solution(const Solution& s) {
  py::dict d;
  d["u"] = s.u;
  d["degrees_of_freedom"] = s.degrees_of_freedom;
  d["residuals"] = s.residuals;
  return d;
}

TransitionSystem chain(const Network& net) { return TransitionSystem::from_network(net); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Laplace and bi-Laplace problems on directed networks";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<SolvabilityError>(m, "SolvabilityError", base);
  py::register_exception<SingularError>(m, "SingularError", base);
  py::register_exception<ResidualError>(m, "ResidualError", base);

  py::class_<Network>(m, "Network")
      .def_static("parse", [](const std::string& text) { return parse_network(text); })
      .def("to_json", [](const Network& n) { return serialize_network(n); })
      .def_property_readonly("size", &Network::size)
      .def_property_readonly("vertices", &Network::vertices)
      .def_property_readonly("boundary", &Network::boundary)
      .def_property_readonly("interior", &Network::interior)
      .def_property_readonly("root", &Network::root)
      .def("__len__", &Network::size);

  m.def("path_network", &path_network, py::arg("n"));
  m.def("funnel_network", [](const std::vector<double>& tail) { return funnel_network(tail); }, py::arg("tail"));
  m.def("funnel_network_folded", [](const std::vector<double>& p) { return funnel_network_folded(p); },
        py::arg("p"));
  m.def("cycle_network", &cycle_network, py::arg("length"));
  m.def("random_network", &random_network, py::arg("n"), py::arg("seed"));

  m.def("transition_matrix", [](const Network& n) { return chain(n).p; });
  m.def("stationary", [](const Network& n) { return chain(n).pi; });
  m.def("reversible", [](const Network& n) { return chain(n).reversible(); });
  m.def("reversed_transition_matrix", [](const Network& n) { return reverse(chain(n)).p; });
  m.def("green", [](const Network& n, const VertexSet& a, Scalar lambda) {
    return green_restricted(chain(n), a, lambda).matrix;
  }, py::arg("network"), py::arg("subset"), py::arg("lam") = Scalar(1.0));
  m.def("hitting_matrix", [](const Network& n, Scalar lambda) { return hitting_matrix(chain(n), lambda); },
        py::arg("network"), py::arg("lam") = Scalar(1.0));
  m.def("boundary_q", [](const Network& n, Scalar lambda) { return boundary_q(chain(n), lambda); },
        py::arg("network"), py::arg("lam") = Scalar(1.0));
  m.def("boundary_r", [](const Network& n, Scalar lambda) { return boundary_r(chain(n), lambda); },
        py::arg("network"), py::arg("lam") = Scalar(1.0));
  m.def("laplacian", [](const Network& n, const Vector& u) { return apply_laplacian(chain(n), u); });

  m.def("bi_blocks", [](const Network& n) {
    BiLaplaceBlocks b = bi_blocks(chain(n));
    py::dict d;
    d["G"] = b.green;
    d["Upsilon"] = b.hitting;
    d["Q"] = b.q;
    d["R"] = b.r;
    d["S"] = b.s;
    d["S_prime"] = b.s_prime;
    d["U"] = b.u;
    d["U_prime"] = b.u_prime;
    d["S_invertible"] = b.s_invertible;
    d["I_plus_R_invertible"] = b.ir_invertible;
    return d;
  });
  m.def("transfer_matrix", [](const Network& n) { return transfer_matrix(chain(n)); });

  m.def("solve_poisson", [](const Network& n, const FieldMap& f, Index ground) {
    return solution(solve_poisson(chain(n), to_field(f), ground));
  }, py::arg("network"), py::arg("f"), py::arg("ground"));
  m.def("solve_neumann", [](const Network& n, const FieldMap& f, const FieldMap& g) {
    return solution(solve_neumann(chain(n), to_field(f), to_field(g)));
  }, py::arg("network"), py::arg("f"), py::arg("g"));
  m.def("solve_dirichlet", [](const Network& n, const FieldMap& f, const FieldMap& g) {
    return solution(solve_dirichlet(chain(n), to_field(f), to_field(g)));
  }, py::arg("network"), py::arg("f"), py::arg("g"));
  m.def("dirichlet_to_neumann", [](const Network& n, const FieldMap& g) {
    return from_field(dirichlet_to_neumann(chain(n), to_field(g)));
  }, py::arg("network"), py::arg("g"));
  m.def("solve_bidirichlet", [](const Network& n, const FieldMap& f, const FieldMap& g) {
    return solution(solve_bidirichlet(chain(n), to_field(f), to_field(g)));
  }, py::arg("network"), py::arg("f"), py::arg("g"));
  m.def("solve_bineumann", [](const Network& n, const FieldMap& f, const FieldMap& g) {
    return solution(solve_bineumann(chain(n), to_field(f), to_field(g)));
  }, py::arg("network"), py::arg("f"), py::arg("g"));
  m.def("solve_plate1", [](const Network& n, const FieldMap& f, const FieldMap& g1, const FieldMap& g2) {
    return solution(solve_plate1(chain(n), to_field(f), to_field(g1), to_field(g2)));
  }, py::arg("network"), py::arg("f"), py::arg("g1"), py::arg("g2"));
  m.def("bi_d2n", [](const Network& n, const FieldMap& g2, const FieldMap& f) {
    return from_field(bi_d2n(chain(n), to_field(g2), to_field(f)));
  }, py::arg("network"), py::arg("g2"), py::arg("f"));
  m.def("bi_n2d", [](const Network& n, const FieldMap& g1, const FieldMap& f, Index anchor, Scalar c) {
    return from_field(bi_n2d(chain(n), to_field(g1), to_field(f), anchor, c));
  }, py::arg("network"), py::arg("g1"), py::arg("f"), py::arg("anchor"), py::arg("c"));

  m.def("estimate_hitting", [](const Network& n, Index x, std::uint64_t trials, std::uint64_t seed) {
    std::map<Index, std::pair<double, double>> out;
    for (const Estimate& e : estimate_hitting(chain(n), x, trials, seed).entries) out[e.col] = {e.mean, e.se};
    return out;
  }, py::arg("network"), py::arg("x"), py::arg("trials"), py::arg("seed"));
}
