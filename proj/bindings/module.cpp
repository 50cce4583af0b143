// Python bindings for the main operations: alcove reduction, the model
// connection, the presentation varieties, framing data, and the trinion
// counts.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/local_model.hpp"
#include "moduli/plucker.hpp"
#include "moduli/rep_variety.hpp"
#include "moduli/trinion.hpp"

namespace py = pybind11;
using namespace moduli;

namespace {

alcove::AlcovePoint to_alcove(const RealVector& v) { return alcove::AlcovePoint(v); }

alcove::MultiplicityPattern to_pattern(const std::vector<int>& indices, int k) {
  return alcove::MultiplicityPattern::from_indices(indices, k);
}

local_model::Gauge gauge_of(const std::string& name) {
  if (name == "unitary") return local_model::Gauge::unitary;
  if (name == "holomorphic") return local_model::Gauge::holomorphic;
  if (name == "blowup1") return local_model::Gauge::blowup_patch_1;
  if (name == "blowup2") return local_model::Gauge::blowup_patch_2;
  throw std::invalid_argument("unknown gauge " + name);
}

local_model::PathOnQuadric path_of(const std::string& kind, cplx t, double r) {
  if (kind == "gamma") return local_model::PathOnQuadric::gamma_loop(t, r);
  if (kind == "x-loop")
    return local_model::PathOnQuadric::x_axis_loop(r, std::abs(t) > 0 ? t / r : cplx(0.5, 0.0));
  if (kind == "y-loop")
    return local_model::PathOnQuadric::y_axis_loop(std::abs(t) > 0 ? t / r : cplx(0.5, 0.0), r);
  throw std::invalid_argument("unknown path " + kind);
}

}  // namespace

PYBIND11_MODULE(modulilab, m) {
  m.doc() = "flat SU(n) connections on degenerating curves: alcove reduction, "
            "model holonomy, presentation varieties, framing data, trinion counts";

  // ---- lie_core ----
  m.def("exp_map",
        [](const Matrix& x) { return lie_core::exp_map(lie_core::LieAlgebraElement(x)).matrix(); },
        py::arg("x"), "matrix exponential of a traceless skew-Hermitian matrix");
  m.def("log_map",
        [](const Matrix& u) { return lie_core::log_map(lie_core::GroupElement(u)).matrix(); },
        py::arg("u"));
  m.def("project_to_alcove",
        [](const Matrix& a) {
          auto [alpha, u] = lie_core::project_to_alcove(lie_core::GroupElement(a));
          return py::make_tuple(alpha.vec(), u.matrix());
        },
        py::arg("a"),
        "returns (alpha, U) with U A U^{-1} = exp(-2 pi i diag(alpha)), alpha in the simplex");
  m.def("stabilizer_pattern",
        [](const RealVector& alpha, double tol) {
          auto p = lie_core::stabilizer_pattern(to_alcove(alpha), tol);
          return py::make_tuple(p.indices(), p.k());
        },
        py::arg("alpha"), py::arg("tol") = tol::kEquality);
  m.def("commutator_subgroup_dim",
        [](const std::vector<int>& indices, int k) {
          return lie_core::commutator_subgroup_dim(to_pattern(indices, k));
        },
        py::arg("I"), py::arg("k"));
  m.def("random_su",
        [](std::uint64_t seed, int n) { return lie_core::random_group_element(seed, n).matrix(); },
        py::arg("seed"), py::arg("n"), "Haar sample of the special unitary group");

  // ---- alcove ----
  m.def("enumerate_faces", [](int n) {
    std::vector<py::tuple> out;
    for (const auto& f : alcove::enumerate_faces(n))
      out.push_back(py::make_tuple(f.indices(), f.k()));
    return out;
  });
  m.def("reversal",
        [](const RealVector& alpha) { return alcove::reversal(to_alcove(alpha)).vec(); });
  m.def("torsion_shift", [](const std::vector<int>& indices, int k, const RealVector& alpha) {
    auto shift = alcove::torsion_shift(to_pattern(indices, k), to_alcove(alpha));
    py::dict d;
    d["t1"] = shift.t1;
    d["t2"] = shift.t2;
    d["shifted_degree"] = shift.shifted_degree;
    d["shifted_dims1"] = shift.shifted_dims1;
    d["shifted_dims2"] = shift.shifted_dims2;
    d["shifted_weights1"] = shift.shifted_weights1;
    d["shifted_weights2"] = shift.shifted_weights2;
    return d;
  });
  m.def("random_alcove_point", [](std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    return alcove::random_alcove_point(rng, n).vec();
  });

  // ---- local_model ----
  m.def("holonomy",
        [](const RealVector& alpha, cplx t, const std::string& path, const std::string& gauge,
           double radius, int steps) {
          local_model::ModelConnection conn(to_alcove(alpha), gauge_of(gauge));
          const double r = radius > 0 ? radius : std::sqrt(std::abs(t) > 0 ? std::abs(t) : 0.25);
          return local_model::transport(conn, path_of(path, t, r), steps);
        },
        py::arg("alpha"), py::arg("t") = cplx(0.25, 0.0), py::arg("path") = "gamma",
        py::arg("gauge") = "unitary", py::arg("radius") = 0.0, py::arg("steps") = 4096);
  m.def("gauge_transform_check",
        [](const RealVector& alpha, int grid) {
          return local_model::gauge_transform_check(to_alcove(alpha), grid);
        },
        py::arg("alpha"), py::arg("grid") = 50);
  m.def("residue",
        [](const RealVector& alpha, const std::string& which, double radius) {
          if (which == "blowup1")
            return local_model::residue(
                local_model::ModelConnection(to_alcove(alpha), local_model::Gauge::blowup_patch_1),
                local_model::Divisor::proper_y, radius);
          if (which == "blowup2")
            return local_model::residue(
                local_model::ModelConnection(to_alcove(alpha), local_model::Gauge::blowup_patch_2),
                local_model::Divisor::proper_x, radius);
          throw std::invalid_argument("which must be blowup1 or blowup2");
        },
        py::arg("alpha"), py::arg("which"), py::arg("radius") = 0.3);

  // ---- rep_variety ----
  py::class_<rep_variety::RepPoint>(m, "RepPoint")
      .def_property_readonly("alpha",
                             [](const rep_variety::RepPoint& p) { return p.alpha.vec(); })
      .def_property_readonly("b1", [](const rep_variety::RepPoint& p) { return p.b1.matrix(); })
      .def_property_readonly("b2", [](const rep_variety::RepPoint& p) { return p.b2.matrix(); })
      .def_property_readonly("handles",
                             [](const rep_variety::RepPoint& p) {
                               std::vector<std::pair<Matrix, Matrix>> out;
                               for (const auto& [c, d] : p.handles)
                                 out.emplace_back(c.matrix(), d.matrix());
                               return out;
                             })
      .def_property_readonly("t", [](const rep_variety::RepPoint& p) { return p.t; })
      .def_property_readonly("split", [](const rep_variety::RepPoint& p) { return p.split; })
      .def_property_readonly("genus", &rep_variety::RepPoint::genus);

  m.def("solve_relation",
        [](std::uint64_t seed, int g, int n, const RealVector& alpha, cplx t) {
          return rep_variety::solve_relation(seed, g, n, to_alcove(alpha), t);
        },
        py::arg("seed"), py::arg("g"), py::arg("n"), py::arg("alpha"), py::arg("t") = cplx(0.0));
  m.def("build_disconnected",
        [](std::uint64_t seed, int h, int g, int n, const RealVector& alpha) {
          return rep_variety::build_disconnected(seed, h, g, n, to_alcove(alpha));
        },
        py::arg("seed"), py::arg("h"), py::arg("g"), py::arg("n"), py::arg("alpha"));
  m.def("relation_residual", &rep_variety::relation_residual);
  m.def("tangent_dimension", &rep_variety::tangent_dimension, py::arg("p"),
        py::arg("rank_rel_tol") = tol::kRankRel);
  m.def("moment_map", [](const rep_variety::RepPoint& p) {
    auto [a, b] = rep_variety::moment_map(p);
    return py::make_tuple(a.vec(), b.vec());
  });
  m.def("torus_act", [](const rep_variety::RepPoint& p, const Vector& t1, const Vector& t2) {
    return rep_variety::torus_act(p, lie_core::TorusElement(t1), lie_core::TorusElement(t2));
  });
  m.def("antidiagonal_reduce", &rep_variety::antidiagonal_reduce);
  m.def("implode_equivalent",
        [](const rep_variety::RepPoint& p, const rep_variety::RepPoint& q, int budget) {
          auto res = rep_variety::implode_equivalent(p, q, budget);
          py::dict d;
          d["equivalent"] = res.equivalent;
          d["distance"] = res.distance;
          d["starts_used"] = res.starts_used;
          d["confidence"] = res.confidence;
          return d;
        },
        py::arg("p"), py::arg("q"), py::arg("budget") = 50);

  // ---- plucker ----
  m.def("beta_pairings",
        [](std::uint64_t seed, const std::vector<int>& indices, int k) {
          std::mt19937_64 rng(seed);
          auto b = plucker::random_betas(rng, to_pattern(indices, k));
          return plucker::antidiagonal_identify(b);
        },
        py::arg("seed"), py::arg("I"), py::arg("k"),
        "antidiagonal pairings of a random framing datum on the stratum");

  // ---- trinion ----
  m.def("count_lattice_points",
        [](int vertices, const std::vector<std::pair<int, int>>& edges, int k) {
          return trinion::count_lattice_points(trinion::TrinionGraph(vertices, edges), k);
        },
        py::arg("vertices"), py::arg("edges"), py::arg("k"));
  m.def("verlinde_closed_form", &trinion::verlinde_closed_form, py::arg("g"), py::arg("k"));
  m.def("verlinde_crosscheck", [](int g, int k) {
    auto check = trinion::verlinde_crosscheck(g, k);
    py::dict d;
    d["count"] = check.count;
    d["closed_form"] = check.closed_form;
    d["agree"] = check.agree;
    d["per_graph"] = check.per_graph;
    return d;
  });
  m.def("quotient_dimension_bookkeeping", [](int g, int n) {
    auto bk = trinion::quotient_dimension_bookkeeping(g, n);
    py::dict d;
    d["torus_dim"] = bk.torus_dim;
    d["trinion_count"] = bk.trinion_count;
    d["puncture_count"] = bk.puncture_count;
    d["target_dim"] = bk.target_dim;
    std::vector<std::pair<std::string, long long>> ledger;
    for (const auto& e : bk.ledger) ledger.emplace_back(e.label, e.value);
    d["ledger"] = ledger;
    d["ledger_sum"] = bk.ledger_sum;
    return d;
  });

  py::register_exception<RankAmbiguous>(m, "RankAmbiguous");
  py::register_exception<NoConvergence>(m, "NoConvergence");
  py::register_exception<AlcoveAmbiguity>(m, "AlcoveAmbiguity");
}
