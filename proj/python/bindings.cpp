// bindings.cpp - pybind11 module exposing the main operations

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "supq/dynamics.hpp"
#include "supq/interferometer.hpp"
#include "supq/io.hpp"
#include "supq/secondq.hpp"

namespace py = pybind11;
using namespace supq;

namespace {

Decomposition to_decomposition(const std::vector<int>& dims) { return Decomposition(dims); }

ScenarioKind to_kind(const std::string& name) {
    if (name == "f1") return ScenarioKind::NonlocalF1;
    if (name == "f2") return ScenarioKind::LocalF2;
    if (name == "f3") return ScenarioKind::Mixture;
    fail(Errc::ParseError, "scenario must be f1|f2|f3");
}

py::dict timeseries_to_dict(const TimeSeries& ts) {
    py::dict out;
    out["t"] = ts.times;
    py::list kyfan;
    for (const auto& row : ts.kyfan) kyfan.append(row);
    out["kyfan"] = kyfan;
    out["a_s"] = ts.relEntropy;
    out["predictability"] = ts.predictability;
    out["csv"] = ts.to_csv();
    return out;
}

}  // namespace

PYBIND11_MODULE(_supq, m) {
    m.doc() = "superposition measures for finite-dimensional mixed states";

    py::register_exception<Error>(m, "SupqError");

    py::class_<DensityOperator>(m, "DensityOperator")
        .def_property_readonly("dim", &DensityOperator::dim)
        .def_property_readonly("matrix", [](const DensityOperator& r) { return Matrix(r.matrix()); })
        .def("__repr__", [](const DensityOperator& r) {
            return "DensityOperator(dim=" + std::to_string(r.dim()) + ")";
        });

    m.def("make_density", &make_density, py::arg("entries"),
          "validated density operator from a complex square matrix");
    m.def(
        "pinch",
        [](const DensityOperator& rho, const std::vector<int>& dims) {
            return pinch(rho, to_decomposition(dims));
        },
        py::arg("rho"), py::arg("dims"));
    m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
    m.def("relative_entropy", &relative_entropy, py::arg("rho"), py::arg("sigma"));
    m.def(
        "singular_values", [](const Matrix& c) { return RealVector(singular_values(c)); },
        py::arg("operator"));

    m.def(
        "a_s",
        [](const DensityOperator& rho, const std::vector<int>& dims) {
            return a_s(rho, to_decomposition(dims)).value;
        },
        py::arg("rho"), py::arg("dims"));
    m.def(
        "a_f",
        [](const DensityOperator& rho, const std::vector<int>& dims, int starts,
           std::uint64_t seed) {
            AfOptions opts;
            opts.starts = starts;
            opts.seed = seed;
            const auto rep = a_f(rho, to_decomposition(dims), opts);
            return py::make_tuple(rep.value, rep.converged);
        },
        py::arg("rho"), py::arg("dims"), py::arg("starts") = 16, py::arg("seed") = 20240915);
    m.def(
        "kyfan_measure",
        [](const DensityOperator& rho, const std::vector<int>& dims, int k) {
            return kyfan_measure(rho, to_decomposition(dims), k);
        },
        py::arg("rho"), py::arg("dims"), py::arg("k"));
    m.def(
        "trace_measure",
        [](const DensityOperator& rho, const std::vector<int>& dims) {
            return trace_measure(rho, to_decomposition(dims));
        },
        py::arg("rho"), py::arg("dims"));
    m.def(
        "schatten_measure",
        [](const DensityOperator& rho, const std::vector<int>& dims, double p) {
            return norm_measure(rho, to_decomposition(dims), NormSpec::schatten(p));
        },
        py::arg("rho"), py::arg("dims"), py::arg("p"));
    m.def(
        "predictability",
        [](const DensityOperator& rho, const std::vector<int>& dims) {
            return predictability(rho, to_decomposition(dims));
        },
        py::arg("rho"), py::arg("dims"));
    m.def(
        "kyfan_bound",
        [](const DensityOperator& rho, const std::vector<int>& dims, int k) {
            return kyfan_bound(rho, to_decomposition(dims), k);
        },
        py::arg("rho"), py::arg("dims"), py::arg("k"));
    m.def("sharp_state", &sharp_state, py::arg("p1"), py::arg("spectrum1"), py::arg("spectrum2"));

    m.def(
        "lift_isometry",
        [](const std::vector<int>& dims) { return Matrix(build_lift(to_decomposition(dims)).isometry); },
        py::arg("dims"), "occupation-representation isometry for the decomposition");
    m.def(
        "lift_state",
        [](const DensityOperator& rho, const std::vector<int>& dims) {
            const LiftMap lift = build_lift(to_decomposition(dims));
            return lift_state(lift, rho);
        },
        py::arg("rho"), py::arg("dims"));
    m.def("wootters_ef", &wootters_ef, py::arg("rho2q"));

    m.def(
        "apply_channel",
        [](const std::vector<Matrix>& kraus, const DensityOperator& rho) {
            return apply(KrausChannel::from_kraus(kraus), rho);
        },
        py::arg("kraus"), py::arg("rho"));
    m.def(
        "is_sp",
        [](const std::vector<Matrix>& kraus, const std::vector<int>& dims) {
            return is_sp(KrausChannel::from_kraus(kraus), to_decomposition(dims));
        },
        py::arg("kraus"), py::arg("dims"));
    m.def(
        "is_block_preserving",
        [](const std::vector<Matrix>& kraus, const std::vector<int>& dims) {
            return is_block_preserving(KrausChannel::from_kraus(kraus), to_decomposition(dims));
        },
        py::arg("kraus"), py::arg("dims"));

    m.def("analytic_nonlocal", &analytic_nonlocal, py::arg("levels"), py::arg("g"), py::arg("t"),
          py::arg("k"));
    m.def("analytic_local", &analytic_local, py::arg("levels"), py::arg("g"), py::arg("t"),
          py::arg("k"));
    m.def("initial_state", &initial_state, py::arg("levels"));
    m.def(
        "run_timeseries",
        [](const std::string& scenario, int levels, const std::vector<double>& grid, double simpleG,
           std::uint64_t seed) {
            const Scenario s = simpleG > 0.0 ? Scenario::simple(to_kind(scenario), levels, simpleG)
                                             : Scenario::randomized(to_kind(scenario), levels, seed);
            return timeseries_to_dict(run_timeseries(s, grid));
        },
        py::arg("scenario"), py::arg("levels"), py::arg("grid"), py::arg("simple_g") = 0.0,
        py::arg("seed") = 0);

    m.def(
        "optimal_uv",
        [](const DensityOperator& rho, int k) {
            const auto [u, v, value] = optimal_uv(rho, k);
            return py::make_tuple(Matrix(u), Matrix(v), value);
        },
        py::arg("rho"), py::arg("k"));
    m.def(
        "run_protocol",
        [](const DensityOperator& rho, const Matrix& u, const Matrix& v, const Matrix& filter) {
            const auto out = run_protocol(rho, u, v, filter);
            py::dict d;
            d["p1"] = out.p1;
            d["p2"] = out.p2;
            d["q1"] = out.q1;
            d["q2"] = out.q2;
            d["r"] = out.r;
            return d;
        },
        py::arg("rho"), py::arg("u"), py::arg("v"), py::arg("filter"));

    m.def("density_to_json", &density_to_json, py::arg("rho"));
    m.def("density_from_json", &density_from_json, py::arg("text"));
}
