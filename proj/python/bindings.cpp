// Python bindings for the virtual tube toolkit. Mirrors the C++ API where a
// python caller would plausibly reach for it: tube construction and I/O, DOF
// reports, the oracle suite, swarm campaigns and SVG rendering.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tubeflow/canonical.hpp"
#include "tubeflow/dof.hpp"
#include "tubeflow/svg.hpp"
#include "tubeflow/swarm.hpp"
#include "tubeflow/tube_io.hpp"
#include "tubeflow/verify.hpp"

namespace py = pybind11;
using namespace tubeflow;

PYBIND11_MODULE(_tubeflow, m) {
    m.doc() = "minimum-energy transport through planar virtual tubes";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("norm", &Vec2::norm)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + format_number(v.x) + ", " + format_number(v.y) + ")";
        });

    py::enum_<Side>(m, "Side")
        .value("upper", Side::upper)
        .value("lower", Side::lower);

    py::class_<FlowParams>(m, "FlowParams")
        .def(py::init([](double cross_speed, double resistance, double total_mass) {
                 return FlowParams{cross_speed, resistance, total_mass};
             }),
             py::arg("cross_speed") = 1.0, py::arg("resistance") = 0.5,
             py::arg("total_mass") = 1.0)
        .def_readwrite("cross_speed", &FlowParams::cross_speed)
        .def_readwrite("resistance", &FlowParams::resistance)
        .def_readwrite("total_mass", &FlowParams::total_mass);

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](int n_s, int n_lambda) {
                 return QuadratureSpec{n_s, n_lambda};
             }),
             py::arg("n_s") = QuadratureSpec{}.n_s,
             py::arg("n_lambda") = QuadratureSpec{}.n_lambda)
        .def_readwrite("n_s", &QuadratureSpec::n_s)
        .def_readwrite("n_lambda", &QuadratureSpec::n_lambda);

    py::class_<VirtualTube>(m, "VirtualTube")
        .def_property_readonly("name", &VirtualTube::name)
        .def_property_readonly("s_begin", &VirtualTube::s_begin)
        .def_property_readonly("s_end", &VirtualTube::s_end)
        .def("radius", &VirtualTube::radius, py::arg("s"), py::arg("side"))
        .def("width", &VirtualTube::width, py::arg("s"))
        .def("point_at", &VirtualTube::point_at, py::arg("s"), py::arg("side"),
             py::arg("lambda_"))
        .def("boundary_point", &VirtualTube::boundary_point, py::arg("s"),
             py::arg("side"))
        .def("validate", &VirtualTube::validate, py::arg("n_samples") = 2001)
        .def("__repr__", [](const VirtualTube& t) {
            return "<VirtualTube '" + t.name() + "' s in [" + format_number(t.s_begin()) +
                   ", " + format_number(t.s_end()) + "]>";
        });

    m.def("canonical_tubes", &canonical_tubes, "the five built-in tubes A-E");
    m.def("canonical_tube", &canonical_tube, py::arg("name"),
          "one built-in tube by letter");
    m.def("load_tube", &load_tube, py::arg("file"));
    m.def("save_tube", &save_tube, py::arg("tube"), py::arg("file"));
    m.def("tube_from_json", &tube_from_json, py::arg("text"),
          py::arg("origin") = "tube");
    m.def("tube_to_json", &tube_to_json, py::arg("tube"));
    m.def("resolve_tube_ref", &resolve_tube_ref, py::arg("ref"),
          py::arg("base_dir") = std::filesystem::path("."));
    m.def("average_width", &average_width, py::arg("tube"),
          py::arg("quadrature") = QuadratureSpec{});
    m.def(
        "modify_tube",
        [](const VirtualTube& tube, double alpha, double beta, double step) {
            return modify_tube(tube, ModificationParams{alpha, beta}, step);
        },
        py::arg("tube"), py::arg("alpha") = 1.3, py::arg("beta") = 0.05,
        py::arg("step") = 0.0, "rate-limited widening of both radius profiles");

    py::class_<ElementEnergy>(m, "ElementEnergy")
        .def_readonly("side", &ElementEnergy::side)
        .def_readonly("lambda_center", &ElementEnergy::lambda_center)
        .def_readonly("energy", &ElementEnergy::energy);

    py::class_<DofReport>(m, "DofReport")
        .def_readonly("tube_name", &DofReport::tube_name)
        .def_readonly("energy", &DofReport::energy)
        .def_readonly("average_width", &DofReport::average_width)
        .def_readonly("dof", &DofReport::dof)
        .def_readonly("per_element_energy", &DofReport::per_element_energy)
        .def("__repr__", [](const DofReport& r) {
            return "<DofReport '" + r.tube_name + "' energy=" + format_number(r.energy) +
                   " dof=" + format_number(r.dof) + ">";
        });

    static py::exception<ConvergenceError> convergence_error(m, "ConvergenceError",
                                                             PyExc_RuntimeError);

    m.def("total_energy", &total_energy, py::arg("tube"),
          py::arg("params") = FlowParams{}, py::arg("quadrature") = QuadratureSpec{});
    m.def("compute_dof", &compute_dof, py::arg("tube"),
          py::arg("params") = FlowParams{}, py::arg("quadrature") = QuadratureSpec{},
          py::arg("check_convergence") = false);
    m.def("dof_report_to_json", &dof_report_to_json, py::arg("report"));
    m.def("dof_report_to_csv", &dof_report_to_csv, py::arg("report"));

    py::class_<ValidationOptions>(m, "ValidationOptions")
        .def(py::init([](int grid_s_samples, int grid_lambda_samples, int random_tubes,
                         int random_trapezoids, double min_separation, std::uint64_t seed) {
                 return ValidationOptions{grid_s_samples, grid_lambda_samples,
                                          random_tubes,   random_trapezoids,
                                          min_separation, seed};
             }),
             py::arg("grid_s_samples") = ValidationOptions{}.grid_s_samples,
             py::arg("grid_lambda_samples") = ValidationOptions{}.grid_lambda_samples,
             py::arg("random_tubes") = ValidationOptions{}.random_tubes,
             py::arg("random_trapezoids") = ValidationOptions{}.random_trapezoids,
             py::arg("min_separation") = ValidationOptions{}.min_separation,
             py::arg("seed") = ValidationOptions{}.seed)
        .def_readwrite("grid_s_samples", &ValidationOptions::grid_s_samples)
        .def_readwrite("grid_lambda_samples", &ValidationOptions::grid_lambda_samples)
        .def_readwrite("random_tubes", &ValidationOptions::random_tubes)
        .def_readwrite("random_trapezoids", &ValidationOptions::random_trapezoids)
        .def_readwrite("min_separation", &ValidationOptions::min_separation)
        .def_readwrite("seed", &ValidationOptions::seed);

    py::class_<ValidationCheck>(m, "ValidationCheck")
        .def_readonly("name", &ValidationCheck::name)
        .def_readonly("passed", &ValidationCheck::passed)
        .def_readonly("detail", &ValidationCheck::detail);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("all_passed", &ValidationReport::all_passed)
        .def_readonly("seed", &ValidationReport::seed)
        .def_readonly("checks", &ValidationReport::checks);

    m.def("run_validation", &run_validation, py::arg("tubes"),
          py::arg("options") = ValidationOptions{},
          "no-intersection and energy-swap oracles over the given tubes");

    py::class_<ControllerGains>(m, "ControllerGains")
        .def(py::init([](double k_line, double k_avoid, double k_keep,
                         double safety_radius, double avoidance_radius,
                         double weight_cap, double weight_floor) {
                 return ControllerGains{k_line,       k_avoid,          k_keep,
                                        safety_radius, avoidance_radius, weight_cap,
                                        weight_floor};
             }),
             py::arg("k_line") = ControllerGains{}.k_line,
             py::arg("k_avoid") = ControllerGains{}.k_avoid,
             py::arg("k_keep") = ControllerGains{}.k_keep,
             py::arg("safety_radius") = ControllerGains{}.safety_radius,
             py::arg("avoidance_radius") = ControllerGains{}.avoidance_radius,
             py::arg("weight_cap") = ControllerGains{}.weight_cap,
             py::arg("weight_floor") = ControllerGains{}.weight_floor)
        .def_readwrite("k_line", &ControllerGains::k_line)
        .def_readwrite("k_avoid", &ControllerGains::k_avoid)
        .def_readwrite("k_keep", &ControllerGains::k_keep)
        .def_readwrite("safety_radius", &ControllerGains::safety_radius)
        .def_readwrite("avoidance_radius", &ControllerGains::avoidance_radius)
        .def_readwrite("weight_cap", &ControllerGains::weight_cap)
        .def_readwrite("weight_floor", &ControllerGains::weight_floor);

    py::class_<CampaignOptions>(m, "CampaignOptions")
        .def(py::init([](int n_robots, int trials, std::uint64_t seed, double dt,
                         double t_max, ControllerGains gains, FlowParams flow,
                         QuadratureSpec quadrature, bool record_trajectories,
                         bool keep_trials) {
                 return CampaignOptions{n_robots, trials,     seed,
                                        dt,       t_max,      gains,
                                        flow,     quadrature, record_trajectories,
                                        keep_trials};
             }),
             py::arg("n_robots") = CampaignOptions{}.n_robots,
             py::arg("trials") = CampaignOptions{}.trials,
             py::arg("seed") = CampaignOptions{}.seed,
             py::arg("dt") = CampaignOptions{}.dt,
             py::arg("t_max") = CampaignOptions{}.t_max,
             py::arg("gains") = ControllerGains{}, py::arg("flow") = FlowParams{},
             py::arg("quadrature") = QuadratureSpec{},
             py::arg("record_trajectories") = false, py::arg("keep_trials") = true)
        .def_readwrite("n_robots", &CampaignOptions::n_robots)
        .def_readwrite("trials", &CampaignOptions::trials)
        .def_readwrite("seed", &CampaignOptions::seed)
        .def_readwrite("dt", &CampaignOptions::dt)
        .def_readwrite("t_max", &CampaignOptions::t_max)
        .def_readwrite("gains", &CampaignOptions::gains)
        .def_readwrite("flow", &CampaignOptions::flow)
        .def_readwrite("quadrature", &CampaignOptions::quadrature)
        .def_readwrite("record_trajectories", &CampaignOptions::record_trajectories)
        .def_readwrite("keep_trials", &CampaignOptions::keep_trials);

    py::class_<TubeSummary>(m, "TubeSummary")
        .def_readonly("tube_name", &TubeSummary::tube_name)
        .def_readonly("dof", &TubeSummary::dof)
        .def_readonly("mean_crossing_time", &TubeSummary::mean_crossing_time)
        .def_readonly("stdev_crossing_time", &TubeSummary::stdev_crossing_time)
        .def_readonly("timed_out_total", &TubeSummary::timed_out_total)
        .def_readonly("containment_violations_total",
                      &TubeSummary::containment_violations_total)
        .def_readonly("safety_breaches_total", &TubeSummary::safety_breaches_total);

    py::class_<CampaignResult>(m, "CampaignResult")
        .def_readonly("tubes", &CampaignResult::tubes)
        .def_readonly("spearman_dof_time", &CampaignResult::spearman_dof_time);

    m.def("run_campaign", &run_campaign, py::arg("tubes"),
          py::arg("options") = CampaignOptions{},
          "swarm crossing trials over the given tubes, correlated with DOF");
    m.def("spearman", &spearman, py::arg("a"), py::arg("b"));

    m.def("render_tube_svg", &render_tube_svg, py::arg("tube"));
    m.def("render_field_svg", &render_field_svg, py::arg("tube"),
          py::arg("params") = FlowParams{}, py::arg("n_s") = 25,
          py::arg("n_lambda") = 3, py::arg("arrow_seconds") = 1.2);
}
