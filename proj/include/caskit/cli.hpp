#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caskit/dipoles.hpp"
#include "caskit/lifshitz.hpp"
#include "caskit/units.hpp"

// Batch front end: JSON experiment configs in, machine-readable tables out.
// SI units at this boundary, natural units inside.

namespace caskit::cli {

enum class Mode { ForceCurve, FreeEnergy, EnergyProfile, Ldos, Dipoles, Validate };

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

struct ExperimentConfig {
    Mode mode = Mode::ForceCurve;
    units::NaturalScale scale;                        // reference_length_m
    std::map<std::string, std::string> material_json; // name -> raw JSON
    // stack geometry (material names resolve into material_json)
    std::string stack_eps1, stack_eps2, stack_eps3;
    double gap_m = 0.0;
    std::string dipoles_json; // raw JSON for dipole geometry
    // sweep grids in SI units; exactly one present per mode
    std::vector<double> grid_d_m;
    std::vector<double> grid_T_K; // alternative sweep for the stack modes
    std::vector<double> grid_z_m;
    std::vector<double> grid_nu_rad_s;
    std::vector<double> grid_scale;
    double temperature_K = 0.0;
    quad::QuadratureSpec quadrature;
    std::string output_path; // empty = stdout
    std::string format = "csv";
    std::uint64_t config_hash = 0; // over semantically meaningful fields

    lifshitz::PlanarStack resolve_stack() const;
    dipoles::DipoleSystem resolve_dipoles() const;
};

// Parses and schema-validates a config document; throws ConfigError naming
// the offending field.
ExperimentConfig parse_config(const std::string& json_text);

struct ResultTable {
    std::vector<std::string> columns; // names carry units, e.g. "pressure[Pa]"
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status; // per row: "ok" or "error: ..."
    std::uint64_t config_hash = 0;
    std::string mode;
    std::string version;
    std::string unit_system;
};

struct RunOutcome {
    ResultTable table;
    int exit_code = 0; // 0 ok, 2 config error, 3 numerical nonconvergence
};

// Dispatches the config over its grid; rows appear in grid order regardless
// of worker count, so output bytes are reproducible.
RunOutcome run(const ExperimentConfig& config, int threads = 1);

// csv: header row with units, LF endings, full round-trip precision.
// json: array with the metadata object first, then one object per row.
std::string emit(const ResultTable& table, const std::string& format);

std::uint64_t hash_semantic_fields(const std::string& json_text);

} // namespace caskit::cli
