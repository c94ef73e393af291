#include "caskit/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

namespace caskit::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "caskit 0.1.0";
constexpr const char* kUnitSystem = "SI at I/O, hbar=c=kB=1 internally";

Mode parse_mode(const std::string& s) {
    if (s == "force-curve") return Mode::ForceCurve;
    if (s == "free-energy") return Mode::FreeEnergy;
    if (s == "energy-profile") return Mode::EnergyProfile;
    if (s == "ldos") return Mode::Ldos;
    if (s == "dipoles") return Mode::Dipoles;
    if (s == "validate") return Mode::Validate;
    throw ConfigError("unknown mode: " + s);
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::ForceCurve: return "force-curve";
        case Mode::FreeEnergy: return "free-energy";
        case Mode::EnergyProfile: return "energy-profile";
        case Mode::Ldos: return "ldos";
        case Mode::Dipoles: return "dipoles";
        case Mode::Validate: return "validate";
    }
    return "?";
}

std::vector<double> grid_field(const json& j, const char* name) {
    std::vector<double> g = j.at(name).get<std::vector<double>>();
    if (g.empty()) throw ConfigError(std::string("grid.") + name + " must be nonempty");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1]))
            throw ConfigError(std::string("grid.") + name + " must be strictly increasing");
    return g;
}

// FNV-1a over the canonical (sorted-key) dump.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// full round-trip precision, locale-independent
std::string fmt_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

struct RowResult {
    std::vector<double> values;
    std::string status = "ok";
    bool nonconvergent = false;
};

// Evaluates rows over a worker pool; output keeps grid order.
std::vector<RowResult> map_rows(std::size_t n, int threads,
                                const std::function<RowResult(std::size_t)>& eval) {
    std::vector<RowResult> out(n);
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = eval(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                out[i] = eval(i);
            }
        });
    for (auto& t : pool) t.join();
    return out;
}

RowResult guard(const std::function<std::vector<double>(void)>& f, std::size_t ncols) {
    RowResult r;
    try {
        r.values = f();
    } catch (const quad::NonConvergenceError& e) {
        r.values.assign(ncols, std::nan(""));
        r.status = std::string("error: ") + e.what();
        r.nonconvergent = true;
    } catch (const std::exception& e) {
        r.values.assign(ncols, std::nan(""));
        r.status = std::string("error: ") + e.what();
        r.nonconvergent = true;
    }
    return r;
}

} // namespace

std::uint64_t hash_semantic_fields(const std::string& json_text) {
    json j = json::parse(json_text);
    j.erase("output");
    return fnv1a(j.dump());
}

lifshitz::PlanarStack ExperimentConfig::resolve_stack() const {
    const double f2n = scale.L0_m / units::c_m_per_s;
    auto lookup = [&](const std::string& name) {
        const auto it = material_json.find(name);
        if (it == material_json.end()) throw ConfigError("material not defined: " + name);
        return dielectric::model_from_json(it->second, f2n);
    };
    lifshitz::PlanarStack stack;
    stack.eps1 = lookup(stack_eps1);
    stack.eps2 = lookup(stack_eps2);
    stack.eps3 = lookup(stack_eps3);
    stack.gap = scale.length(gap_m);
    stack.validate();
    return stack;
}

dipoles::DipoleSystem ExperimentConfig::resolve_dipoles() const {
    if (dipoles_json.empty()) throw ConfigError("geometry.dipoles missing");
    const double f2n = scale.L0_m / units::c_m_per_s;
    return dipoles::system_from_json(dipoles_json, 1.0 / scale.L0_m, f2n);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.mode = parse_mode(j.at("mode").get<std::string>());
        c.scale.L0_m = j.value("reference_length_m", 1.0e-6);
        if (!(c.scale.L0_m > 0.0)) throw ConfigError("reference_length_m must be > 0");
        c.temperature_K = j.value("temperature_K", 0.0);
        if (c.temperature_K < 0.0) throw ConfigError("temperature_K must be >= 0");

        if (j.contains("materials"))
            for (const auto& [name, body] : j.at("materials").items())
                c.material_json[name] = body.dump();

        const bool needs_stack = c.mode == Mode::ForceCurve || c.mode == Mode::FreeEnergy ||
                                 c.mode == Mode::EnergyProfile || c.mode == Mode::Validate;
        if (needs_stack) {
            if (!j.contains("geometry") || !j.at("geometry").contains("stack"))
                throw ConfigError("geometry.stack missing");
            const auto& st = j.at("geometry").at("stack");
            c.stack_eps1 = st.at("eps1").get<std::string>();
            c.stack_eps2 = st.at("eps2").get<std::string>();
            c.stack_eps3 = st.at("eps3").get<std::string>();
            if (!st.contains("gap_d")) throw ConfigError("geometry.stack.gap_d missing");
            c.gap_m = st.at("gap_d").get<double>();
            if (!(c.gap_m > 0.0)) throw ConfigError("geometry.stack.gap_d must be > 0");
        }
        if (c.mode == Mode::Dipoles) {
            if (!j.contains("geometry") || !j.at("geometry").contains("dipoles"))
                throw ConfigError("geometry.dipoles missing");
            c.dipoles_json = j.at("geometry").at("dipoles").dump();
        }

        const auto& grid = j.contains("grid") ? j.at("grid") : json::object();
        switch (c.mode) {
            case Mode::ForceCurve:
            case Mode::FreeEnergy:
                if (grid.contains("d") && grid.contains("T"))
                    throw ConfigError("grid: choose one sweep, d or T");
                if (grid.contains("T")) {
                    c.grid_T_K = grid_field(grid, "T");
                    if (!c.grid_T_K.empty() && c.grid_T_K.front() < 0.0)
                        throw ConfigError("grid.T must be >= 0");
                } else {
                    c.grid_d_m = grid.contains("d") ? grid_field(grid, "d")
                                                    : std::vector<double>{c.gap_m};
                }
                break;
            case Mode::EnergyProfile:
                c.grid_z_m = grid_field(grid, "z");
                break;
            case Mode::Ldos:
                c.grid_nu_rad_s = grid_field(grid, "nu");
                break;
            case Mode::Dipoles:
                c.grid_scale = grid.contains("scale") ? grid_field(grid, "scale")
                                                      : std::vector<double>{1.0};
                break;
            case Mode::Validate:
                break;
        }
        if (c.mode == Mode::Ldos) {
            // ldos needs one material: reuse eps1 slot
            if (!j.contains("geometry") || !j.at("geometry").contains("material"))
                throw ConfigError("geometry.material missing for ldos mode");
            c.stack_eps1 = j.at("geometry").at("material").get<std::string>();
        }

        if (j.contains("quadrature")) {
            const auto& q = j.at("quadrature");
            c.quadrature.rel_tol = q.value("rel_tol", c.quadrature.rel_tol);
            c.quadrature.abs_tol = q.value("abs_tol", c.quadrature.abs_tol);
            c.quadrature.max_panel_depth = q.value("max_panel_depth", c.quadrature.max_panel_depth);
            c.quadrature.matsubara_rel_tail =
                q.value("matsubara_rel_tail", c.quadrature.matsubara_rel_tail);
            c.quadrature.validate();
        }
        if (j.contains("output")) {
            c.output_path = j.at("output").value("path", "");
            c.format = j.at("output").value("format", "csv");
            if (c.format != "csv" && c.format != "json")
                throw ConfigError("output.format must be csv or json");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config schema: ") + e.what());
    }
    c.config_hash = hash_semantic_fields(json_text);
    return c;
}

RunOutcome run(const ExperimentConfig& config, int threads) {
    RunOutcome out;
    ResultTable& t = out.table;
    t.config_hash = config.config_hash;
    t.mode = mode_name(config.mode);
    t.version = kVersion;
    t.unit_system = kUnitSystem;

    const auto& sc = config.scale;
    const lifshitz::ThermalState thermal{sc.temperature(config.temperature_K)};
    const auto& spec = config.quadrature;

    std::vector<RowResult> rows;
    switch (config.mode) {
        case Mode::ForceCurve: {
            // pressure < 0 means attraction; |F|/A is emitted alongside
            t.columns = {"d[m]",       "T[K]",         "pressure[Pa]",
                         "te[Pa]",     "tm[Pa]",       "n0_term[Pa]",
                         "err_estimate[Pa]", "abs_force[Pa]"};
            const lifshitz::PlanarStack base = config.resolve_stack();
            const bool sweep_T = !config.grid_T_K.empty();
            const std::size_t n = sweep_T ? config.grid_T_K.size() : config.grid_d_m.size();
            rows = map_rows(n, threads, [&](std::size_t i) {
                return guard(
                    [&]() -> std::vector<double> {
                        lifshitz::PlanarStack st = base;
                        const double d_m = sweep_T ? config.gap_m : config.grid_d_m[i];
                        const double T_K = sweep_T ? config.grid_T_K[i] : config.temperature_K;
                        st.gap = sc.length(d_m);
                        const auto f =
                            lifshitz::force_per_area(st, {sc.temperature(T_K)}, spec);
                        const double p = sc.pressure_si(f.pressure);
                        return {d_m,                  T_K,
                                p,                    sc.pressure_si(f.te),
                                sc.pressure_si(f.tm), sc.pressure_si(f.n0_term),
                                sc.pressure_si(f.err_estimate), std::abs(p)};
                    },
                    8);
            });
            break;
        }
        case Mode::FreeEnergy: {
            t.columns = {"d[m]", "T[K]", "free_energy[J/m^2]", "te[J/m^2]", "tm[J/m^2]",
                         "err_estimate[J/m^2]"};
            const lifshitz::PlanarStack base = config.resolve_stack();
            const bool sweep_T = !config.grid_T_K.empty();
            const std::size_t n = sweep_T ? config.grid_T_K.size() : config.grid_d_m.size();
            rows = map_rows(n, threads, [&](std::size_t i) {
                return guard(
                    [&]() -> std::vector<double> {
                        lifshitz::PlanarStack st = base;
                        const double d_m = sweep_T ? config.gap_m : config.grid_d_m[i];
                        const double T_K = sweep_T ? config.grid_T_K[i] : config.temperature_K;
                        st.gap = sc.length(d_m);
                        const auto e =
                            lifshitz::free_energy_per_area(st, {sc.temperature(T_K)}, spec);
                        return {d_m, T_K,
                                sc.energy_per_area_si(e.value), sc.energy_per_area_si(e.te),
                                sc.energy_per_area_si(e.tm),
                                sc.energy_per_area_si(e.err_estimate)};
                    },
                    6);
            });
            break;
        }
        case Mode::EnergyProfile: {
            t.columns = {"z[m]", "T[K]", "u[J/m^3]"};
            const lifshitz::PlanarStack st = config.resolve_stack();
            rows = map_rows(config.grid_z_m.size(), threads, [&](std::size_t i) {
                return guard(
                    [&]() -> std::vector<double> {
                        const double z = sc.length(config.grid_z_m[i]);
                        const double u = lifshitz::energy_density_profile(st, z, thermal, spec);
                        return {config.grid_z_m[i], config.temperature_K,
                                sc.energy_density_si(u)};
                    },
                    3);
            });
            break;
        }
        case Mode::Ldos: {
            t.columns = {"nu[rad/s]", "ldos[s/m^2]"};
            const double f2n = sc.L0_m / units::c_m_per_s;
            const auto it = config.material_json.find(config.stack_eps1);
            if (it == config.material_json.end())
                throw ConfigError("material not defined: " + config.stack_eps1);
            const auto model = dielectric::model_from_json(it->second, f2n);
            rows = map_rows(config.grid_nu_rad_s.size(), threads, [&](std::size_t i) {
                return guard(
                    [&]() -> std::vector<double> {
                        const double nu = sc.frequency(config.grid_nu_rad_s[i]);
                        return {config.grid_nu_rad_s[i], sc.ldos_si(lifshitz::local_dos(model, nu))};
                    },
                    2);
            });
            break;
        }
        case Mode::Dipoles: {
            t.columns = {"scale[1]", "energy[J]", "pairwise_energy[J]"};
            const dipoles::DipoleSystem base = config.resolve_dipoles();
            rows = map_rows(config.grid_scale.size(), threads, [&](std::size_t i) {
                return guard(
                    [&]() -> std::vector<double> {
                        dipoles::DipoleSystem s = base;
                        for (auto& p : s.positions) p *= config.grid_scale[i];
                        const double e = dipoles::vdw_energy(s, spec);
                        const double e2 = dipoles::pairwise_vdw_energy(s, spec);
                        return {config.grid_scale[i], sc.energy_si(e), sc.energy_si(e2)};
                    },
                    3);
            });
            break;
        }
        case Mode::Validate: {
            t.columns = {"value", "threshold", "pass"};
            // row labels go through status; see below
            const lifshitz::PlanarStack st = config.resolve_stack();
            std::vector<std::pair<std::string, std::function<std::pair<double, double>()>>>
                checks;
            const double f2n = sc.L0_m / units::c_m_per_s;
            for (const auto& [name, body] : config.material_json) {
                const auto model = dielectric::model_from_json(body, f2n);
                if (model.variant() == dielectric::Variant::LorentzSum ||
                    model.variant() == dielectric::Variant::Drude) {
                    checks.emplace_back("kk_residual:" + name, [model, &spec] {
                        const double r = dielectric::kk_consistency_residual(
                            model, {0.1, 1.0, 10.0}, spec);
                        return std::pair<double, double>{r, 1e-6};
                    });
                }
            }
            const bool lossy =
                !(st.eps1.lossless() && st.eps2.lossless() && st.eps3.lossless());
            if (lossy) {
                checks.emplace_back("wick_rotation", [st, thermal, &spec] {
                    const auto a = lifshitz::force_per_area(st, thermal, spec);
                    const auto b = lifshitz::force_per_area_real_axis(st, thermal, spec);
                    const double rel =
                        std::abs(a.pressure - b.pressure) / std::abs(a.pressure);
                    return std::pair<double, double>{rel, 1e-2};
                });
            }
            rows = map_rows(checks.size(), threads, [&](std::size_t i) {
                RowResult r = guard(
                    [&]() -> std::vector<double> {
                        const auto [v, thr] = checks[i].second();
                        return {v, thr, v < thr ? 1.0 : 0.0};
                    },
                    3);
                if (r.status == "ok")
                    r.status = checks[i].first + ":" +
                               (r.values[2] == 1.0 ? "pass" : "fail");
                else
                    r.status = checks[i].first + ":" + r.status;
                return r;
            });
            break;
        }
    }

    bool any_nonconv = false;
    for (auto& r : rows) {
        t.rows.push_back(std::move(r.values));
        t.status.push_back(std::move(r.status));
        any_nonconv = any_nonconv || r.nonconvergent;
    }
    if (config.mode == Mode::Validate)
        for (const auto& s : t.status)
            if (s.find(":fail") != std::string::npos || s.find("error") != std::string::npos)
                any_nonconv = true;
    out.exit_code = any_nonconv ? 3 : 0;
    return out;
}

std::string emit(const ResultTable& table, const std::string& format) {
    if (format == "csv") {
        std::string s;
        s += "# " + table.version + " mode=" + table.mode +
             " config_hash=" + std::to_string(table.config_hash) +
             " units=" + table.unit_system + "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            s += table.columns[c];
            s += (c + 1 < table.columns.size()) ? "," : ",status\n";
        }
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (double v : table.rows[r]) {
                s += fmt_double(v);
                s += ',';
            }
            s += table.status[r];
            s += '\n';
        }
        return s;
    }
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        nlohmann::json meta;
        meta["version"] = table.version;
        meta["mode"] = table.mode;
        meta["config_hash"] = table.config_hash;
        meta["unit_system"] = table.unit_system;
        meta["columns"] = table.columns;
        arr.push_back(meta);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            nlohmann::json row;
            for (std::size_t c = 0; c < table.columns.size(); ++c)
                row[table.columns[c]] = table.rows[r][c];
            row["status"] = table.status[r];
            arr.push_back(row);
        }
        return arr.dump(2) + "\n";
    }
    throw ConfigError("emit: format must be csv or json");
}

} // namespace caskit::cli
