#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "caskit/cli.hpp"
#include "caskit/dipoles.hpp"
#include "caskit/lifshitz.hpp"
#include "caskit/units.hpp"

namespace py = pybind11;
using namespace caskit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "dispersion-force toolkit: coupled dipoles and Lifshitz planar media "
              "(natural units hbar = c = kB = 1 unless stated otherwise)";

    // units
    py::class_<units::NaturalScale>(m, "NaturalScale")
        .def(py::init([](double L0_m) { return units::NaturalScale{L0_m}; }), py::arg("L0_m"))
        .def_readwrite("L0_m", &units::NaturalScale::L0_m)
        .def("length", &units::NaturalScale::length)
        .def("frequency", &units::NaturalScale::frequency)
        .def("temperature", &units::NaturalScale::temperature)
        .def("pressure_si", &units::NaturalScale::pressure_si)
        .def("energy_si", &units::NaturalScale::energy_si)
        .def("energy_per_area_si", &units::NaturalScale::energy_per_area_si)
        .def("energy_density_si", &units::NaturalScale::energy_density_si);
    m.def("matsubara_si", &units::matsubara_si, py::arg("T_K"), py::arg("n"),
          "Matsubara frequency 2 pi n kB T / hbar in rad/s");

    // quadrature
    py::class_<quad::QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("rel_tol", &quad::QuadratureSpec::rel_tol)
        .def_readwrite("abs_tol", &quad::QuadratureSpec::abs_tol)
        .def_readwrite("max_panel_depth", &quad::QuadratureSpec::max_panel_depth)
        .def_readwrite("matsubara_rel_tail", &quad::QuadratureSpec::matsubara_rel_tail);

    // dielectric
    py::class_<dielectric::OscillatorParams>(m, "OscillatorParams")
        .def(py::init([](double coupling, double resonance, double damping) {
                 dielectric::OscillatorParams o{coupling, resonance, damping};
                 o.validate();
                 return o;
             }),
             py::arg("coupling"), py::arg("resonance"), py::arg("damping"))
        .def_readwrite("coupling", &dielectric::OscillatorParams::coupling)
        .def_readwrite("resonance", &dielectric::OscillatorParams::resonance)
        .def_readwrite("damping", &dielectric::OscillatorParams::damping);

    py::class_<dielectric::PermittivityModel>(m, "PermittivityModel")
        .def_static("vacuum", &dielectric::PermittivityModel::vacuum)
        .def_static("lorentz", &dielectric::PermittivityModel::lorentz)
        .def_static("drude", &dielectric::PermittivityModel::drude, py::arg("coupling"),
                    py::arg("damping"))
        .def_static("ideal_mirror", &dielectric::PermittivityModel::ideal_mirror,
                    py::arg("scale") = 1.0e6)
        .def_static(
            "tabulated",
            [](std::vector<std::pair<double, double>> rows, bool tails) {
                return dielectric::PermittivityModel::tabulated(std::move(rows),
                                                                dielectric::TableTails{tails});
            },
            py::arg("xi_eps"), py::arg("tails") = false);
    m.def("eps_real_axis", &dielectric::eps_real_axis);
    m.def("eps_imag_axis", &dielectric::eps_imag_axis);
    m.def("polarizability", &dielectric::polarizability);
    m.def("kk_consistency_residual", &dielectric::kk_consistency_residual);

    // green
    py::enum_<green::Axis>(m, "Axis").value("Real", green::Axis::Real).value("Imaginary",
                                                                             green::Axis::Imaginary);
    py::enum_<green::Polarization>(m, "Polarization")
        .value("TE", green::Polarization::TE)
        .value("TM", green::Polarization::TM);
    py::class_<green::SpectralPoint>(m, "SpectralPoint")
        .def(py::init([](green::Axis axis, double frequency, double k_par) {
                 green::SpectralPoint p{axis, frequency, k_par};
                 p.validate();
                 return p;
             }),
             py::arg("axis"), py::arg("frequency"), py::arg("k_par") = 0.0)
        .def_readwrite("axis", &green::SpectralPoint::axis)
        .def_readwrite("frequency", &green::SpectralPoint::frequency)
        .def_readwrite("k_par", &green::SpectralPoint::k_par);
    py::class_<green::PlanarStack>(m, "PlanarStack")
        .def(py::init([](dielectric::PermittivityModel e1, dielectric::PermittivityModel e2,
                         dielectric::PermittivityModel e3, double gap) {
                 green::PlanarStack s{std::move(e1), std::move(e2), std::move(e3), gap};
                 s.validate();
                 return s;
             }),
             py::arg("eps1"), py::arg("eps2"), py::arg("eps3"), py::arg("gap"))
        .def_readwrite("gap", &green::PlanarStack::gap);
    py::class_<green::GreenTrace>(m, "GreenTrace")
        .def_readonly("re", &green::GreenTrace::re)
        .def_readonly("im", &green::GreenTrace::im);
    m.def("kappa", &green::kappa);
    m.def("fresnel", &green::fresnel);
    m.def("homogeneous_green_trace", &green::homogeneous_green_trace);
    m.def("free_space_dyadic", &green::free_space_dyadic);
    m.def(
        "planar_scattering_trace",
        [](const green::PlanarStack& s, double z, const green::SpectralPoint& f,
           const quad::QuadratureSpec& spec) { return green::planar_scattering_trace(s, z, f, spec); },
        py::arg("stack"), py::arg("z"), py::arg("freq"), py::arg("spec"));

    // dipoles
    py::class_<dipoles::DipoleSystem>(m, "DipoleSystem")
        .def(py::init([](std::vector<Eigen::Vector3d> pos, dielectric::OscillatorParams osc,
                         double strength) {
                 dipoles::DipoleSystem s{std::move(pos), osc, strength};
                 s.validate();
                 return s;
             }),
             py::arg("positions"), py::arg("oscillator"), py::arg("strength"))
        .def_readwrite("positions", &dipoles::DipoleSystem::positions)
        .def_readwrite("strength", &dipoles::DipoleSystem::strength);
    m.def("build_interaction_matrix", &dipoles::build_interaction_matrix);
    m.def("vdw_energy", &dipoles::vdw_energy);
    m.def("pairwise_vdw_energy", &dipoles::pairwise_vdw_energy);
    m.def("vdw_force", &dipoles::vdw_force, py::arg("system"), py::arg("atom_index"),
          py::arg("spec"), py::arg("step_fraction") = 1.0e-3);
    m.def("pair_vdw_energy", &dipoles::pair_vdw_energy);
    m.def("pair_vdw_radial_force", &dipoles::pair_vdw_radial_force);

    // lifshitz
    py::class_<lifshitz::ThermalState>(m, "ThermalState")
        .def(py::init([](double T) {
                 lifshitz::ThermalState t{T};
                 t.validate();
                 return t;
             }),
             py::arg("T") = 0.0)
        .def_readwrite("T", &lifshitz::ThermalState::T);
    py::class_<lifshitz::ForceResult>(m, "ForceResult")
        .def_readonly("pressure", &lifshitz::ForceResult::pressure)
        .def_readonly("te", &lifshitz::ForceResult::te)
        .def_readonly("tm", &lifshitz::ForceResult::tm)
        .def_readonly("n0_term", &lifshitz::ForceResult::n0_term)
        .def_readonly("err_estimate", &lifshitz::ForceResult::err_estimate);
    py::class_<lifshitz::FreeEnergyResult>(m, "FreeEnergyResult")
        .def_readonly("value", &lifshitz::FreeEnergyResult::value)
        .def_readonly("te", &lifshitz::FreeEnergyResult::te)
        .def_readonly("tm", &lifshitz::FreeEnergyResult::tm)
        .def_readonly("err_estimate", &lifshitz::FreeEnergyResult::err_estimate);
    py::class_<lifshitz::SurfaceForceJumps>(m, "SurfaceForceJumps")
        .def_readonly("interface_0", &lifshitz::SurfaceForceJumps::interface_0)
        .def_readonly("interface_d", &lifshitz::SurfaceForceJumps::interface_d)
        .def_readonly("total", &lifshitz::SurfaceForceJumps::total)
        .def_readonly("err_estimate", &lifshitz::SurfaceForceJumps::err_estimate);
    py::class_<lifshitz::BulkSpectralDensity>(m, "BulkSpectralDensity")
        .def_readonly("closed_form", &lifshitz::BulkSpectralDensity::closed_form)
        .def_readonly("general_split", &lifshitz::BulkSpectralDensity::general_split)
        .def_readonly("defect", &lifshitz::BulkSpectralDensity::defect);
    m.def("matsubara_frequencies", [](double T, int n_max) {
        std::vector<std::pair<double, double>> out;
        for (const auto& t : lifshitz::matsubara_frequencies(T, n_max))
            out.emplace_back(t.xi, t.weight);
        return out;
    });
    m.def("force_per_area", &lifshitz::force_per_area);
    m.def("force_per_area_real_axis", &lifshitz::force_per_area_real_axis);
    m.def("free_energy_per_area", &lifshitz::free_energy_per_area);
    m.def("force_per_area_dilute", &lifshitz::force_per_area_dilute);
    m.def("surface_force_jumps", &lifshitz::surface_force_jumps);
    m.def(
        "energy_density_profile",
        [](const lifshitz::PlanarStack& s, double z, const lifshitz::ThermalState& t,
           const quad::QuadratureSpec& spec) {
            return lifshitz::energy_density_profile(s, z, t, spec);
        },
        py::arg("stack"), py::arg("z"), py::arg("thermal"), py::arg("spec"));
    m.def("bulk_spectral_energy_density", &lifshitz::bulk_spectral_energy_density);
    m.def("noise_energy_spectral_density", &lifshitz::noise_energy_spectral_density);
    m.def("absorption_rate_spectral_density", &lifshitz::absorption_rate_spectral_density);
    m.def("local_dos", &lifshitz::local_dos);

    // cli passthrough for scripted runs
    m.def("run_config", [](const std::string& config_json, int threads) {
        const auto cfg = cli::parse_config(config_json);
        const auto outcome = cli::run(cfg, threads);
        py::dict d;
        d["exit_code"] = outcome.exit_code;
        d["columns"] = outcome.table.columns;
        d["rows"] = outcome.table.rows;
        d["status"] = outcome.table.status;
        d["csv"] = cli::emit(outcome.table, "csv");
        return d;
    }, py::arg("config_json"), py::arg("threads") = 1);
}
