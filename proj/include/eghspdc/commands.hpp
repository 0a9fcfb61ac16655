#pragma once

// Subcommand bodies. Each takes a parsed RunConfig and an output directory,
// writes its files in one piece and returns their paths. Errors propagate
// as ConfigError (bad input, exit 2) or NumericalError (exit 3).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eghspdc/biphoton.hpp"
#include "eghspdc/config.hpp"
#include "eghspdc/csv.hpp"
#include "eghspdc/modes.hpp"
#include "eghspdc/optimizer.hpp"
#include "eghspdc/transforms.hpp"
#include "eghspdc/validation.hpp"

namespace eghspdc {

using ordered_json = nlohmann::ordered_json;

namespace command_detail {

inline void check_budget(std::size_t points, const RunConfig& cfg, const char* what) {
    if (points > cfg.max_grid_points)
        throw ConfigError(std::string(what) + " has " + std::to_string(points) +
                          " points, above max_grid_points = " + std::to_string(cfg.max_grid_points));
}

inline std::string prepare(const std::filesystem::path& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return (dir / name).string();
}

inline ordered_json complex_json(complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

inline ordered_json coefficients_json(const CoefficientMap& coeffs) {
    ordered_json arr = ordered_json::array();
    for (const auto& [idx, c] : coeffs) arr.push_back({{"n", idx.n}, {"m", idx.m}, {"re", c.real()}, {"im", c.imag()}});
    return arr;
}

inline ordered_json axis_json(const AxisSpec& a) { return {{"min", a.min}, {"max", a.max}, {"count", a.count}}; }

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace command_detail

/// Samples each requested mode on the x/y/z grid and its transverse
/// transform on the nu_x/nu_y/z grid; also the pump superposition when the
/// config carries an expansion.
inline std::vector<std::string> cmd_modes(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    using namespace command_detail;
    if (!cfg.modes_grid) throw ConfigError("config field /modes_grid is required for the modes command");
    const ModesGridConfig& g = *cfg.modes_grid;
    const PumpGeometry geom = cfg.geometry();
    std::vector<ModeIndex> modes = g.modes;
    if (modes.empty() && cfg.expansion)
        for (const auto& [idx, c] : cfg.expansion->coefficients()) modes.push_back(idx);
    if (modes.empty()) throw ConfigError("config field /modes_grid/modes: no modes requested and no /pump/modes");
    check_budget(static_cast<std::size_t>(g.x.count) * g.y.count * g.z.size(), cfg, "mode grid");
    check_budget(static_cast<std::size_t>(g.nu_x.count) * g.nu_y.count * g.z.size(), cfg, "spectrum grid");

    const std::vector<double> xs = g.x.samples(), ys = g.y.samples();
    const std::vector<double> nxs = g.nu_x.samples(), nys = g.nu_y.samples();
    std::vector<std::string> written;
    auto real_space = [&](const std::string& name, auto&& field) {
        CsvWriter w({"x", "y", "z", "re", "im"});
        for (double z : g.z)
            for (double x : xs)
                for (double y : ys) {
                    const complex v = field(TransversePoint{x, y, z});
                    w.row({x, y, z, v.real(), v.imag()});
                }
        const std::string path = prepare(out_dir, name);
        w.save(path);
        written.push_back(path);
    };
    for (ModeIndex idx : modes) {
        const std::string tag = std::to_string(idx.n) + "_" + std::to_string(idx.m);
        real_space("mode_" + tag + ".csv", [&](TransversePoint p) { return egh_eval(idx, geom, p); });
        CsvWriter w({"nu_x", "nu_y", "z", "re", "im"});
        for (double z : g.z)
            for (double nx : nxs)
                for (double ny : nys) {
                    const complex v = egh_transverse_ft(idx, geom, nx, ny, z);
                    w.row({nx, ny, z, v.real(), v.imag()});
                }
        const std::string path = prepare(out_dir, "spectrum_" + tag + ".csv");
        w.save(path);
        written.push_back(path);
    }
    if (cfg.expansion)
        real_space("pump_field.csv",
                   [&](TransversePoint p) { return synthesize(cfg.expansion->coefficients(), geom, p); });
    return written;
}

/// Writes the joint amplitude to jsa.csv (full amplitude, prefactor
/// included) and its metadata to jsa.json.
inline std::vector<std::string> cmd_jsa(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    using namespace command_detail;
    if (!cfg.expansion) throw ConfigError("config field /pump/modes is required for the jsa command");
    if (!cfg.jsa_grid) throw ConfigError("config fields /photons and /jsa_grid are required for the jsa command");
    const JsaGridSpec& spec = *cfg.jsa_grid;
    check_budget(static_cast<std::size_t>(spec.nu_sx.count) * spec.nu_sy.count * spec.nu_ix.count * spec.nu_iy.count,
                 cfg, "jsa grid");
    const BiphotonSetup setup = cfg.setup();
    const JointAmplitudeGrid grid = jsa_grid(*cfg.expansion, setup, spec);

    CsvWriter w({"nu_sx", "nu_sy", "nu_ix", "nu_iy", "re", "im"});
    for (size_t a = 0; a < grid.axes[0].size(); ++a)
        for (size_t b = 0; b < grid.axes[1].size(); ++b)
            for (size_t c = 0; c < grid.axes[2].size(); ++c)
                for (size_t d = 0; d < grid.axes[3].size(); ++d) {
                    const complex v = grid.amplitude(a, b, c, d);
                    w.row({grid.axes[0][a], grid.axes[1][b], grid.axes[2][c], grid.axes[3][d], v.real(), v.imag()});
                }
    const std::string csv_path = prepare(out_dir, "jsa.csv");
    w.save(csv_path);

    const PumpEnvelope& env = setup.envelope;
    ordered_json meta;
    meta["values"] = "full amplitude: prefactor times the mode-sum, phase-matching and envelope factors";
    meta["prefactor"] = complex_json(grid.prefactor);
    meta["convention"] = to_string(cfg.convention);
    meta["envelope"] = {{"kind", to_string(env.kind)}, {"f_p_hz", env.f_p}, {"sigma_f_hz", env.sigma_f},
                        {"cw_cell_hz", env.cw_cell}};
    meta["axes"] = {{"nu_sx_per_m", axis_json(spec.nu_sx)}, {"nu_sy_per_m", axis_json(spec.nu_sy)},
                    {"nu_ix_per_m", axis_json(spec.nu_ix)}, {"nu_iy_per_m", axis_json(spec.nu_iy)}};
    meta["f_s_hz"] = spec.f_s;
    meta["f_i_hz"] = spec.f_i;
    meta["pump"] = {{"wavelength_m", cfg.free_space_wavelength},
                    {"wavelength_in_medium_m", setup.geom.wavelength()},
                    {"waist_m", setup.geom.waist()},
                    {"rayleigh_range_m", setup.geom.rayleigh_range()},
                    {"coefficients", coefficients_json(cfg.expansion->coefficients())}};
    meta["crystal"] = {{"length_m", setup.crystal.length}, {"delta_z_m", setup.crystal.delta_z},
                       {"segment_offsets_m", setup.crystal.segments}, {"n_p", setup.crystal.n_p},
                       {"n_s", setup.crystal.n_s}, {"n_i", setup.crystal.n_i}};
    meta["notes"] = {
        env.kind == PumpEnvelope::Kind::CW
            ? "cw pump: the envelope is a Kronecker delta on a frequency grid of cell cw_cell_hz; sum "
              "frequencies further than half a cell from f_p give exactly zero"
            : "pulsed pump: envelope exp(-(f_s + f_i - f_p)^2 / (4 sigma_f^2))",
        "amplitudes are per unit transverse spatial-frequency cell; no Jacobian to emission angles is applied",
    };
    const std::string json_path = prepare(out_dir, "jsa.json");
    write_text(json_path, dump(meta));
    return {csv_path, json_path};
}

struct OptimizeOutcome {
    OptimizationResult closed_form;
    OptimizationResult brute_force;
    double objective_delta = 0.0;
    double modulus_delta = 0.0;   ///< max over modes of ||c_cf| - |c_bf||
    double phase_delta = 0.0;     ///< max relative-phase difference where |c| > 1e-12
};

inline OptimizeOutcome optimize_both(const TargetConfig& t, std::uint64_t seed) {
    const std::vector<ModeIndex> modes = t.modes();
    OptimizeOutcome o{optimal_expansion(t.direction, modes), brute_force_optimal(t.direction, modes, seed)};
    o.objective_delta = std::abs(o.closed_form.objective - o.brute_force.objective);
    const complex cf00 = o.closed_form.expansion.coefficient({0, 0});
    const complex bf00 = o.brute_force.expansion.coefficient({0, 0});
    for (ModeIndex idx : modes) {
        const complex a = o.closed_form.expansion.coefficient(idx), b = o.brute_force.expansion.coefficient(idx);
        o.modulus_delta = std::max(o.modulus_delta, std::abs(std::abs(a) - std::abs(b)));
        if (std::abs(a) > 1e-12 && std::abs(b) > 1e-12)
            o.phase_delta = std::max(o.phase_delta, std::abs(std::remainder(
                                                        std::arg(a / cf00) - std::arg(b / bf00), 2.0 * pi)));
    }
    return o;
}

inline std::vector<std::string> cmd_optimize(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                             std::ostream& warn) {
    using namespace command_detail;
    if (!cfg.target) throw ConfigError("config field /target is required for the optimize command");
    const TargetConfig& t = *cfg.target;
    if (t.direction.paraxial_warning())
        warn << "warning: target |X| or |Y| exceeds 0.3; the objective assumes w0 k_+ << 1\n";
    const OptimizeOutcome o = optimize_both(t, cfg.seed);

    auto result_json = [&](const OptimizationResult& r) {
        ordered_json j;
        j["method"] = to_string(r.method);
        j["objective"] = r.objective;
        j["coefficients"] = coefficients_json(r.expansion.coefficients());
        if (r.method == Method::BruteForce) {
            j["iterations"] = r.iterations;
            j["restarts"] = r.restarts;
            j["best_restart"] = r.best_restart;
        }
        return j;
    };
    ordered_json report;
    report["target"] = {{"X", t.direction.X}, {"Y", t.direction.Y},
                        {"paraxial_warning", t.direction.paraxial_warning()}};
    report["index_set"] = t.index_set_name();
    report["max_order"] = t.max_order;
    ordered_json modes = ordered_json::array();
    for (ModeIndex idx : t.modes()) modes.push_back({idx.n, idx.m});
    report["modes"] = modes;
    report["seed"] = cfg.seed;
    report["closed_form"] = result_json(o.closed_form);
    report["brute_force"] = result_json(o.brute_force);
    report["deltas"] = {{"objective", o.objective_delta},
                        {"coefficient_modulus", o.modulus_delta},
                        {"relative_phase", o.phase_delta}};
    const std::string path = prepare(out_dir, "optimize.json");
    write_text(path, dump(report));
    return {path};
}

/// Rebuilds a regular grid from a CSV with columns x, y, re, im (and an
/// optional z column).
inline SampledField field_from_csv(const CsvTable& t, const std::string& name) {
    const int cx = t.column("x"), cy = t.column("y"), cr = t.column("re"), ci = t.column("im"), cz = t.column("z");
    if (cx < 0 || cy < 0 || cr < 0 || ci < 0) throw ConfigError(name + ": columns x, y, re, im are required");
    if (t.rows.empty()) throw ConfigError(name + ": no samples");
    std::vector<double> xs, ys;
    for (const auto& r : t.rows) {
        xs.push_back(r[cx]);
        ys.push_back(r[cy]);
    }
    auto unique_sorted = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    xs = unique_sorted(xs);
    ys = unique_sorted(ys);
    if (xs.size() < 2 || ys.size() < 2) throw ConfigError(name + ": need at least 2 distinct x and y values");
    if (xs.size() * ys.size() != t.rows.size())
        throw ConfigError(name + ": samples do not form a complete rectangular grid");
    auto spacing = [&](const std::vector<double>& v, const char* axis) {
        const double d = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
        for (size_t k = 0; k < v.size(); ++k)
            if (std::abs(v[k] - (v.front() + k * d)) > 1e-9 * d)
                throw ConfigError(name + ": " + axis + " samples are not uniformly spaced");
        return d;
    };
    SampledField f;
    f.nx = static_cast<int>(xs.size());
    f.ny = static_cast<int>(ys.size());
    f.x0 = xs.front();
    f.y0 = ys.front();
    f.dx = spacing(xs, "x");
    f.dy = spacing(ys, "y");
    f.values.assign(static_cast<size_t>(f.nx) * f.ny, complex{});
    std::vector<char> seen(f.values.size(), 0);
    for (const auto& r : t.rows) {
        if (cz >= 0 && r[cz] != 0.0) throw ConfigError(name + ": decompose expects samples at z = 0");
        const auto ix = static_cast<size_t>(std::lround((r[cx] - f.x0) / f.dx));
        const auto iy = static_cast<size_t>(std::lround((r[cy] - f.y0) / f.dy));
        const size_t k = iy * f.nx + ix;
        if (seen[k]) throw ConfigError(name + ": duplicate sample at x=" + format_number(r[cx]) + " y=" + format_number(r[cy]));
        seen[k] = 1;
        f.values[k] = {r[cr], r[ci]};
    }
    return f;
}

inline std::vector<std::string> cmd_decompose(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    using namespace command_detail;
    if (!cfg.decompose) throw ConfigError("config field /decompose is required for the decompose command");
    const SampledField field = field_from_csv(read_csv(cfg.decompose->field_file), cfg.decompose->field_file);
    const Decomposition d = decompose(field, cfg.geometry(), cfg.decompose->max_order);
    ordered_json report;
    report["max_order"] = cfg.decompose->max_order;
    report["captured_power"] = d.captured_power;
    report["grid"] = {{"nx", field.nx}, {"ny", field.ny}, {"dx_m", field.dx}, {"dy_m", field.dy}};
    report["coefficients"] = coefficients_json(d.expansion.coefficients());
    const std::string path = prepare(out_dir, "decomposition.json");
    write_text(path, dump(report));
    return {path};
}

/// Runs every invariant, prints one line each and returns true iff all pass.
inline bool cmd_validate(const validation::ValidationOptions& opt, std::ostream& out,
                         const std::filesystem::path& out_dir = {}) {
    using namespace command_detail;
    const std::vector<validation::CheckResult> results = validation::run_validation(opt);
    bool ok = true;
    ordered_json report = ordered_json::array();
    for (const auto& r : results) {
        ok = ok && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured=" << validation::sci(r.measured)
            << " bound=" << validation::sci(r.bound);
        if (!r.detail.empty()) out << "  " << r.detail;
        out << '\n';
        report.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"bound", r.bound},
                          {"detail", r.detail}});
    }
    out << results.size() << " invariants, " << (ok ? "all passed" : "FAILURES") << '\n';
    if (!out_dir.empty()) write_text(prepare(out_dir, "validation.json"), dump(report));
    return ok;
}

}  // namespace eghspdc
