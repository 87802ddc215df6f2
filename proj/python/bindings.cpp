#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fieldroad/config.hpp"
#include "fieldroad/dispersion.hpp"
#include "fieldroad/fronts.hpp"
#include "fieldroad/kernel.hpp"
#include "fieldroad/nonlinearity.hpp"
#include "fieldroad/simulator.hpp"
#include "fieldroad/version.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace fieldroad;

namespace {

LineBoundary boundary_from_name(const std::string& name) {
    if (name == "periodic") return LineBoundary::Periodic;
    if (name == "zero") return LineBoundary::ZeroOutside;
    if (name == "extend") return LineBoundary::ExtendEdge;
    throw std::invalid_argument("boundary must be periodic|zero|extend");
}

py::array_t<double> field_array(const SimState& s) {
    py::array_t<double> out({s.ny_, s.nx_});
    std::copy(s.v.begin(), s.v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spreading speeds and simulation for reaction-diffusion fields "
              "coupled to a line with nonlocal dispersal";
    m.attr("__version__") = version;

    py::class_<Kernel>(m, "Kernel")
        .def(py::init([](const std::string& profile, double L) {
                 return Kernel(kernel_profile_from_name(profile), L);
             }),
             "profile"_a, "L"_a)
        .def_property_readonly("L", &Kernel::L)
        .def_property_readonly("profile",
                               [](const Kernel& k) {
                                   return std::string(
                                       kernel_profile_name(k.profile()));
                               })
        .def("eval", py::vectorize(&Kernel::eval), "x"_a)
        .def("phi", py::vectorize(&Kernel::phi), "a"_a)
        .def("phi_second", py::vectorize(&Kernel::phi_second), "a"_a)
        .def("second_moment", &Kernel::second_moment)
        .def("mass_defect", &Kernel::mass_defect);

    m.def(
        "apply_J",
        [](const Kernel& k, const std::vector<double>& u, double dx,
           const std::string& boundary) {
            return apply_J(k, u, dx, boundary_from_name(boundary));
        },
        "kernel"_a, "u"_a, "dx"_a, "boundary"_a = "periodic");

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("kpp", &Nonlinearity::kpp, "r"_a)
        .def_static("sir", &Nonlinearity::sir, "S0"_a, "beta"_a, "alpha"_a)
        .def("__call__", py::vectorize(&Nonlinearity::eval), "v"_a)
        .def("eval", py::vectorize(&Nonlinearity::eval), "v"_a)
        .def("fprime", py::vectorize(&Nonlinearity::fprime), "v"_a)
        .def("fprime0", &Nonlinearity::fprime0)
        .def("v_star", &Nonlinearity::v_star)
        .def("is_sir", &Nonlinearity::is_sir)
        .def("r0", &Nonlinearity::r0);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, Kernel, double, double, Nonlinearity,
                      double>(),
             "d"_a, "D"_a, "kernel"_a, "mu"_a, "nu"_a, "f"_a, "q"_a = 0.0)
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("D", &ModelParams::D)
        .def_readwrite("kernel", &ModelParams::kernel)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("nu", &ModelParams::nu)
        .def_readwrite("f", &ModelParams::f)
        .def_readwrite("q", &ModelParams::q)
        .def("validate", &ModelParams::validate);

    py::enum_<SpeedRegime>(m, "SpeedRegime")
        .value("FieldDominated", SpeedRegime::FieldDominated)
        .value("LineBoosted", SpeedRegime::LineBoosted);

    py::class_<DispersionResult>(m, "DispersionResult")
        .def_readonly("c_star", &DispersionResult::c_star)
        .def_readonly("regime", &DispersionResult::regime)
        .def_readonly("a", &DispersionResult::a)
        .def_readonly("b", &DispersionResult::b)
        .def_readonly("gamma", &DispersionResult::gamma)
        .def_readonly("residual_line", &DispersionResult::residual_line)
        .def_readonly("residual_field", &DispersionResult::residual_field)
        .def("__repr__", [](const DispersionResult& r) {
            return "DispersionResult(c_star=" + std::to_string(r.c_star) +
                   (r.regime == SpeedRegime::FieldDominated ? ", field)"
                                                            : ", boosted)");
        });

    py::class_<DecayResult>(m, "DecayResult")
        .def_readonly("a_star", &DecayResult::a_star)
        .def_readonly("b_star", &DecayResult::b_star)
        .def_readonly("gamma_star", &DecayResult::gamma_star)
        .def_readonly("baseline_u", &DecayResult::baseline_u)
        .def_readonly("baseline_v", &DecayResult::baseline_v)
        .def_readonly("residual_line", &DecayResult::residual_line)
        .def_readonly("residual_circle", &DecayResult::residual_circle);

    py::class_<BenchmarkSpeed>(m, "BenchmarkSpeed")
        .def_readonly("c", &BenchmarkSpeed::c)
        .def_readonly("a_min", &BenchmarkSpeed::a_min)
        .def_readonly("stationarity_residual",
                      &BenchmarkSpeed::stationarity_residual);

    py::class_<TransportSpeeds>(m, "TransportSpeeds")
        .def_readonly("c_plus", &TransportSpeeds::c_plus)
        .def_readonly("c_minus", &TransportSpeeds::c_minus);

    m.def("c_field", &c_field, "params"_a);
    m.def("c_benchmark", &c_benchmark, "params"_a);
    m.def("D_threshold", &D_threshold, "params"_a);
    m.def("G1", &G1, "params"_a, "c"_a, "a"_a);
    m.def("a_plus_infty", &a_plus_infty, "params"_a, "c"_a);
    m.def("a_zero", &a_zero, "params"_a, "c"_a);
    m.def("c_star", &c_star, "params"_a);
    m.def("w_star_reduced", &w_star_reduced, "mu_over_f"_a, "d"_a, "fprime0"_a,
          "nu"_a = 1.0);
    m.def("decay_rates", &decay_rates, "params"_a);
    m.def("transport_speeds", &transport_speeds, "params"_a);
    m.def("kappa_star", &kappa_star, "params"_a);
    m.def(
        "omega_sirt_reduced",
        [](double D_nd, double Lambda, double R0, double mu_bar, double nu_bar,
           const std::string& profile) {
            return omega_sirt_reduced(D_nd, Lambda, R0, mu_bar, nu_bar,
                                      kernel_profile_from_name(profile));
        },
        "D_nd"_a, "Lambda"_a, "R0"_a, "mu_bar"_a, "nu_bar"_a,
        "profile"_a = "epanechnikov");

    py::enum_<XBoundary>(m, "XBoundary")
        .value("Neumann", XBoundary::Neumann)
        .value("Periodic", XBoundary::Periodic);
    py::enum_<YTop>(m, "YTop")
        .value("Dirichlet0", YTop::Dirichlet0)
        .value("Neumann", YTop::Neumann);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double X, double Y, double dx, double dy, double dt,
                         XBoundary xb, YTop yt) {
                 GridSpec g{X, Y, dx, dy, dt, xb, yt};
                 return g;
             }),
             "X"_a, "Y"_a, "dx"_a, "dy"_a, "dt"_a = 0.0,
             "x_boundary"_a = XBoundary::Neumann, "y_top"_a = YTop::Dirichlet0)
        .def_readwrite("X", &GridSpec::X)
        .def_readwrite("Y", &GridSpec::Y)
        .def_readwrite("dx", &GridSpec::dx)
        .def_readwrite("dy", &GridSpec::dy)
        .def_readwrite("dt", &GridSpec::dt)
        .def_readwrite("x_boundary", &GridSpec::x_boundary)
        .def_readwrite("y_top", &GridSpec::y_top)
        .def("nx", &GridSpec::nx)
        .def("ny", &GridSpec::ny)
        .def("x", &GridSpec::x, "i"_a)
        .def("y", &GridSpec::y, "j"_a)
        .def("cfl_limit", &GridSpec::cfl_limit, "params"_a)
        .def("monotone_dt", &GridSpec::monotone_dt, "params"_a);

    py::class_<BumpSpec>(m, "BumpSpec")
        .def(py::init([](double height, double radius, double x0, double y0) {
                 return BumpSpec{height, radius, x0, y0};
             }),
             "height"_a = 1.0, "radius"_a = 1.0, "x0"_a = 0.0, "y0"_a = 0.0)
        .def_readwrite("height", &BumpSpec::height)
        .def_readwrite("radius", &BumpSpec::radius)
        .def_readwrite("x0", &BumpSpec::x0)
        .def_readwrite("y0", &BumpSpec::y0)
        .def("eval", &BumpSpec::eval, "x"_a, "y"_a)
        .def("mass", &BumpSpec::mass);

    py::class_<SimState>(m, "SimState")
        .def_readonly("t", &SimState::t)
        .def_property_readonly(
            "u", [](const SimState& s) { return py::array_t<double>(
                     static_cast<py::ssize_t>(s.u.size()), s.u.data()); })
        .def_property_readonly("v", &field_array)
        .def_property_readonly("nx", [](const SimState& s) { return s.nx_; })
        .def_property_readonly("ny", [](const SimState& s) { return s.ny_; });

    m.def("init_invasion", &init_invasion, "grid"_a, "params"_a, "v0"_a);
    m.def("init_sirt", &init_sirt, "grid"_a, "params"_a, "I0"_a);
    m.def("step", &step, "state"_a);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("t", &Snapshot::t)
        .def_readonly("u", &Snapshot::u)
        .def_readonly("v_road", &Snapshot::v_road)
        .def_readonly("v_probes", &Snapshot::v_probes)
        .def_readonly("u_max", &Snapshot::u_max)
        .def_readonly("v_max", &Snapshot::v_max)
        .def_readonly("mass", &Snapshot::mass);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("xs", &Trajectory::xs)
        .def_readonly("probe_heights", &Trajectory::probe_heights)
        .def_readonly("snaps", &Trajectory::snaps);

    m.def("run", &run, "state"_a, "t_end"_a, "snapshot_every"_a,
          "probe_heights"_a = std::vector<double>{0.0});

    py::class_<SteadyStateResult>(m, "SteadyStateResult")
        .def_readonly("u", &SteadyStateResult::u)
        .def_readonly("v", &SteadyStateResult::v)
        .def_readonly("t", &SteadyStateResult::t)
        .def_readonly("converged", &SteadyStateResult::converged)
        .def_readonly("last_change", &SteadyStateResult::last_change);

    m.def("steady_state", &steady_state, "state"_a, "tol"_a, "t_max"_a);

    py::class_<FrontCrossing>(m, "FrontCrossing")
        .def_readonly("left", &FrontCrossing::left)
        .def_readonly("right", &FrontCrossing::right);

    m.def(
        "front_position",
        [](const std::vector<double>& xs, const std::vector<double>& trace,
           double level, double limit_value) {
            return front_position(xs, trace, level, limit_value);
        },
        "xs"_a, "trace"_a, "level"_a, "limit_value"_a);

    py::class_<SpeedFit>(m, "SpeedFit")
        .def_readonly("c_hat", &SpeedFit::c_hat)
        .def_readonly("stderr", &SpeedFit::stderr_)
        .def_readonly("n_points", &SpeedFit::n_points);

    m.def(
        "estimate_speed",
        [](const std::vector<double>& times, const std::vector<double>& pos,
           double fit_window) { return estimate_speed(times, pos, fit_window); },
        "times"_a, "positions"_a, "fit_window"_a = 0.4);

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("rate", &DecayFit::rate)
        .def_readonly("stderr", &DecayFit::stderr_)
        .def_readonly("n_points", &DecayFit::n_points);

    m.def(
        "estimate_decay",
        [](const std::vector<double>& xs, const std::vector<double>& field,
           double baseline, double x_lo, double x_hi) {
            return estimate_decay(xs, field, baseline, x_lo, x_hi);
        },
        "xs"_a, "field"_a, "baseline"_a, "x_lo"_a, "x_hi"_a);

    py::class_<FrontTrace>(m, "FrontTrace")
        .def_readonly("times", &FrontTrace::times)
        .def_readonly("positions_right", &FrontTrace::positions_right)
        .def_readonly("positions_left", &FrontTrace::positions_left)
        .def_readonly("level", &FrontTrace::level)
        .def_readonly("probe_y", &FrontTrace::probe_y);

    m.def("track_front", &track_front, "trajectory"_a, "probe_index"_a,
          "level"_a, "limit_value"_a);
}
