#include "lplab/combinatorics.hpp"
#include "lplab/errors.hpp"
#include "lplab/fourier_probe.hpp"
#include "lplab/report.hpp"
#include "lplab/set_io.hpp"
#include "lplab/set_model.hpp"
#include "lplab/thickness.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lplab;

namespace {

py::tuple pair(const Interval& i) { return py::make_tuple(i.lo, i.hi); }

std::vector<py::tuple> pairs(const std::vector<Interval>& v) {
    std::vector<py::tuple> out;
    for (const auto& i : v) out.push_back(pair(i));
    return out;
}

py::dict fit_dict(const ExponentFit& f) {
    py::dict d;
    d["exponent"] = f.exponent;
    d["constant"] = f.constant;
    d["r2"] = f.r2;
    d["points_used"] = f.points_used();
    return d;
}

} // namespace

PYBIND11_MODULE(_lplab, m) {
    m.doc() = "C++ core of lplab";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ReliabilityError>(m, "ReliabilityError", PyExc_RuntimeError);

    py::class_<GapSet>(m, "GapSet")
        .def_static(
            "from_gaps",
            [](std::pair<double, double> window, const std::vector<std::pair<double, double>>& gaps, int depth,
               double resolution) {
                std::vector<Interval> g;
                for (const auto& [a, b] : gaps) g.push_back({a, b});
                GapSetMeta meta;
                meta.resolution = resolution;
                return GapSet::from_gaps({window.first, window.second}, std::move(g), depth, meta);
            },
            py::arg("window"), py::arg("gaps"), py::arg("depth") = 0, py::arg("resolution") = -1.0)
        .def_static(
            "from_points",
            [](std::vector<double> pts) {
                GapSetMeta meta;
                meta.family = "points";
                meta.resolution = 0.0;
                return GapSet::from_points(std::move(pts), 0, meta);
            },
            py::arg("points"))
        .def_property_readonly("window", [](const GapSet& s) { return pair(s.window()); })
        .def_property_readonly("gaps", [](const GapSet& s) { return pairs(s.gaps()); })
        .def_property_readonly("depth", &GapSet::depth)
        .def_property_readonly("residual", &GapSet::residual)
        .def_property_readonly("resolution", &GapSet::resolution)
        .def_property_readonly("family", &GapSet::family)
        .def_property_readonly("reliable_delta", &GapSet::reliable_delta)
        .def("components", [](const GapSet& s) { return pairs(s.components()); })
        .def("component_count", &GapSet::component_count)
        .def("contains", &GapSet::contains)
        .def("gap_containing", &GapSet::gap_containing)
        .def("__repr__", [](const GapSet& s) {
            return "<GapSet " + s.family() + " components=" + std::to_string(s.component_count()) + ">";
        });

    m.def("cantor_triadic", [](int depth) { return cantor_triadic(depth); }, py::arg("depth"));
    m.def("dyadic_set", &dyadic_set, py::arg("k_min"), py::arg("k_max"));
    m.def("sum_set", [](const std::vector<double>& l) { return sum_set(l); }, py::arg("lengths"));
    m.def(
        "generated_set",
        [](const std::vector<double>& deltas, int depth) {
            return generated_set(GapSequence::explicit_terms(deltas), depth);
        },
        py::arg("deltas"), py::arg("depth"));
    m.def(
        "generated_geometric",
        [](double rate, int depth) { return generated_set(GapSequence::normalized_geometric(rate), depth); },
        py::arg("rate"), py::arg("depth"), "Generated set for delta_k = (e^b - 1) e^{-k b}.");
    m.def("load_set", &load_set, py::arg("path"));
    m.def("save_set", &save_set, py::arg("set"), py::arg("path"));

    m.def("neighborhood_measure", &neighborhood_measure, py::arg("set"), py::arg("delta"));
    m.def(
        "portion_neighborhood",
        [](const GapSet& s, std::pair<double, double> I, double delta) {
            return portion_neighborhood(s, {I.first, I.second}, delta).measure;
        },
        py::arg("set"), py::arg("portion"), py::arg("delta"));
    m.def(
        "porosity_estimate",
        [](const GapSet& s, int resolution) {
            const auto e = porosity_estimate(s, resolution);
            py::dict d;
            d["c_hat"] = e.c_hat;
            d["witness"] = pair(e.witness);
            d["scanned"] = e.scanned;
            return d;
        },
        py::arg("set"), py::arg("resolution") = 12);
    m.def("box_count", &box_count, py::arg("set"), py::arg("scale"));
    m.def(
        "box_counting",
        [](const GapSet& s, const std::vector<double>& scales) {
            const auto f = box_counting(s, scales);
            py::dict d;
            d["slope"] = f.slope;
            d["r2"] = f.r2;
            d["counts"] = f.counts;
            d["points_used"] = f.points_used;
            return d;
        },
        py::arg("set"), py::arg("scales"));

    m.def(
        "max_splitting_subset",
        [](const GapSet& s, double a, double d, long N) {
            const auto r = max_splitting_subset(s, APSpec{a, d, N});
            return py::make_tuple(r.nu, r.subset, r.gaps);
        },
        py::arg("set"), py::arg("a"), py::arg("d"), py::arg("N"));
    m.def(
        "splits", [](const std::vector<double>& pts, const GapSet& s) { return splits(pts, s).valid; },
        py::arg("points"), py::arg("set"));
    m.def(
        "find_chain",
        [](const std::vector<double>& pts, int n, bool heuristic) -> py::object {
            const auto r = find_chain(pts, n, heuristic ? ChainSearch::Heuristic : ChainSearch::Exact);
            if (!r.chain) return py::none();
            return py::make_tuple(r.chain->base, r.chain->lengths);
        },
        py::arg("points"), py::arg("n"), py::arg("heuristic") = false);

    m.def(
        "lp_norm",
        [](const std::vector<std::pair<long, std::complex<double>>>& terms, double p, std::size_t M) {
            return lp_norm(TrigPolynomial(terms), p, M);
        },
        py::arg("terms"), py::arg("p"), py::arg("M") = 0);
    m.def(
        "dirichlet_scaling",
        [](double p, const std::vector<long>& Ns) { return fit_dict(dirichlet_scaling(p, Ns).fit); },
        py::arg("p"), py::arg("N_list"));
    m.def(
        "frame_probe",
        [](const GapSet& s, double p, long trials, std::size_t M, std::uint64_t seed, double freq_scale) {
            const auto f = frame_probe(s, p, trials, M, seed, freq_scale);
            return py::make_tuple(f.c1_hat, f.c2_hat);
        },
        py::arg("set"), py::arg("p"), py::arg("trials") = 20, py::arg("M") = 1024, py::arg("seed") = 0,
        py::arg("freq_scale") = 1.0);
    m.def(
        "khintchine_ratio",
        [](const std::vector<double>& c, double p) { return khintchine_ratio(c, p).ratio; },
        py::arg("coefficients"), py::arg("p"));
    m.def("khintchine_constant", &khintchine_constant, py::arg("p"));
    m.def("binomial_norm", &binomial_norm, py::arg("p"));
    m.def(
        "lemma4_growth", [](const std::vector<int>& ns, double p) { return lemma4_growth(ns, p).R_n; },
        py::arg("n_list"), py::arg("p"));

    m.def(
        "run_json",
        [](const std::string& config) {
            const auto c = RunConfig::from_json(nlohmann::json::parse(config));
            return run(c).report.dump();
        },
        py::arg("config"), "Run a JSON configuration; returns the report as JSON text.");
}
