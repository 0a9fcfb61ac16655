#pragma once

// JSON run configuration. Every physical quantity is SI with the unit in the
// key name. Unknown keys are rejected so that a misspelt field cannot be
// silently replaced by a default; errors name the offending field as a
// JSON pointer, parse errors give line and column.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eghspdc/biphoton.hpp"
#include "eghspdc/csv.hpp"
#include "eghspdc/error.hpp"
#include "eghspdc/modes.hpp"
#include "eghspdc/optimizer.hpp"
#include "eghspdc/phasematch.hpp"

namespace eghspdc {

using json = nlohmann::json;

struct ModesGridConfig {
    AxisSpec x, y;
    std::vector<double> z{0.0};
    AxisSpec nu_x, nu_y;
    std::vector<ModeIndex> modes;  ///< empty: every mode of the pump expansion
};

struct TargetConfig {
    TargetDirection direction;
    int max_order = 0;
    IndexSet index_set = IndexSet::AllNonzeroOrders;
    std::optional<std::vector<ModeIndex>> explicit_set;

    [[nodiscard]] std::vector<ModeIndex> modes() const {
        return explicit_set ? explicit_modes(*explicit_set) : admitted_modes(max_order, index_set);
    }
    [[nodiscard]] std::string index_set_name() const { return explicit_set ? "explicit" : to_string(index_set); }
};

struct DecomposeConfig {
    std::string field_file;  ///< resolved against the config directory
    int max_order = 0;
};

struct RunConfig {
    double free_space_wavelength = 0.0;
    double pump_index = 1.0;
    double waist = 0.0;
    complex u0{1.0};
    std::optional<PumpEnvelope> envelope;
    Vec3 pump_pol{complex{1.0}, complex{}, complex{}};
    std::optional<ModeExpansion> expansion;
    std::optional<CrystalConfig> crystal;
    std::optional<JsaGridSpec> jsa_grid;
    std::optional<ModesGridConfig> modes_grid;
    std::optional<TargetConfig> target;
    std::optional<DecomposeConfig> decompose;
    MismatchConvention convention = MismatchConvention::ExponentConsistent;
    std::uint64_t seed = 0;
    std::size_t max_grid_points = std::size_t{1} << 24;

    [[nodiscard]] PumpGeometry geometry() const {
        return PumpGeometry(free_space_wavelength / pump_index, waist, u0);
    }
    [[nodiscard]] PumpEnvelope pump_envelope() const {
        if (envelope) return *envelope;
        PumpEnvelope e;
        e.f_p = speed_of_light / free_space_wavelength;
        return e;
    }
    [[nodiscard]] BiphotonSetup setup() const {
        if (!crystal) throw ConfigError("config field /crystal is required for this command");
        return BiphotonSetup{geometry(), *crystal, pump_envelope(), pump_pol, convention};
    }
};

namespace config_detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field " + (path.empty() ? std::string("/") : path) + ": " + what);
}

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

inline void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(child(path, key), "unknown field");
    }
}

inline const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

inline double get_number(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(child(path, key), "required field missing");
    return number(*v, child(path, key));
}

inline double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    const json* v = find(obj, key);
    return v ? number(*v, child(path, key)) : fallback;
}

inline int get_int(const json& obj, const std::string& path, const char* key, std::optional<int> fallback = {}) {
    const json* v = find(obj, key);
    if (!v) {
        if (!fallback) fail(child(path, key), "required field missing");
        return *fallback;
    }
    if (!v->is_number_integer()) fail(child(path, key), "expected an integer");
    return v->get<int>();
}

inline std::string get_string(const json& obj, const std::string& path, const char* key,
                              std::optional<std::string> fallback = {}) {
    const json* v = find(obj, key);
    if (!v) {
        if (!fallback) fail(child(path, key), "required field missing");
        return *fallback;
    }
    if (!v->is_string()) fail(child(path, key), "expected a string");
    return v->get<std::string>();
}

inline complex complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return {number(j, path), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], path + "/0"), number(j[1], path + "/1")};
    fail(path, "expected a number or a [re, im] pair");
}

/// Three entries, each a real number or a [re, im] pair; must be unit norm.
inline Vec3 polarization(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected a 3-vector");
    Vec3 v;
    for (size_t k = 0; k < 3; ++k) v[k] = complex_value(j[k], path + "/" + std::to_string(k));
    if (std::abs(norm(v) - 1.0) > 1e-9) fail(path, "polarization must be a unit vector");
    return v;
}

inline AxisSpec axis(const json& j, const std::string& path) {
    check_keys(j, path, {"min", "max", "count"});
    AxisSpec a{get_number(j, path, "min"), get_number(j, path, "max"), get_int(j, path, "count")};
    if (a.count < 1) fail(child(path, "count"), "must be >= 1");
    if (a.count > 1 && !(a.max > a.min)) fail(child(path, "max"), "must exceed min when count > 1");
    return a;
}

inline ModeIndex mode_index(const json& j, const std::string& path) {
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const int n = j[0].get<int>(), m = j[1].get<int>();
        if (n < 0 || m < 0) fail(path, "mode indices must be nonnegative");
        return {n, m};
    }
    fail(path, "expected a mode index [n, m]");
}

inline std::vector<ModeIndex> mode_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [n, m] pairs");
    std::vector<ModeIndex> out;
    for (size_t k = 0; k < j.size(); ++k) out.push_back(mode_index(j[k], path + "/" + std::to_string(k)));
    return out;
}

inline int cartesian(const json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "z") return 2;
    }
    if (j.is_number_integer() && j.get<int>() >= 0 && j.get<int>() <= 2) return j.get<int>();
    fail(path, "expected \"x\", \"y\", \"z\" or 0..2");
}

inline PumpEnvelope envelope(const json& j, const std::string& path, double free_space_wavelength) {
    check_keys(j, path, {"kind", "f_p_hz", "sigma_f_hz", "cw_cell_hz"});
    PumpEnvelope e;
    const std::string kind = get_string(j, path, "kind");
    if (kind == "cw")
        e.kind = PumpEnvelope::Kind::CW;
    else if (kind == "gaussian")
        e.kind = PumpEnvelope::Kind::GaussianPulse;
    else
        fail(child(path, "kind"), "expected \"cw\" or \"gaussian\"");
    e.f_p = get_number(j, path, "f_p_hz", speed_of_light / free_space_wavelength);
    if (e.kind == PumpEnvelope::Kind::GaussianPulse) e.sigma_f = get_number(j, path, "sigma_f_hz");
    e.cw_cell = get_number(j, path, "cw_cell_hz", 0.0);
    try {
        e.validate();
    } catch (const ConfigError& err) {
        fail(path, err.what());
    }
    return e;
}

inline CrystalConfig crystal(const json& j, const std::string& path) {
    check_keys(j, path, {"length_m", "delta_z_m", "segment_offsets_m", "n_p", "n_s", "n_i", "chi_m_per_v"});
    CrystalConfig c;
    c.length = get_number(j, path, "length_m");
    c.delta_z = get_number(j, path, "delta_z_m", 0.0);
    if (const json* seg = find(j, "segment_offsets_m")) {
        if (!seg->is_array() || seg->empty()) fail(child(path, "segment_offsets_m"), "expected a nonempty array");
        c.segments.clear();
        for (size_t k = 0; k < seg->size(); ++k)
            c.segments.push_back(number((*seg)[k], child(path, "segment_offsets_m") + "/" + std::to_string(k)));
    }
    c.n_p = get_number(j, path, "n_p", 1.0);
    c.n_s = get_number(j, path, "n_s", 1.0);
    c.n_i = get_number(j, path, "n_i", 1.0);
    if (const json* chi = find(j, "chi_m_per_v")) {
        const std::string cp = child(path, "chi_m_per_v");
        if (!chi->is_array()) fail(cp, "expected an array of tensor entries");
        for (size_t k = 0; k < chi->size(); ++k) {
            const std::string ep = cp + "/" + std::to_string(k);
            const json& e = (*chi)[k];
            check_keys(e, ep, {"pump", "signal", "idler", "value"});
            for (const char* key : {"pump", "signal", "idler", "value"})
                if (!find(e, key)) fail(child(ep, key), "required field missing");
            c.chi[cartesian(e["pump"], child(ep, "pump"))][cartesian(e["signal"], child(ep, "signal"))]
                 [cartesian(e["idler"], child(ep, "idler"))] = complex_value(e["value"], child(ep, "value"));
        }
    }
    try {
        c.validate();
    } catch (const ConfigError& err) {
        fail(path, err.what());
    }
    return c;
}

}  // namespace config_detail

/// Builds a RunConfig from a parsed document. `base_dir` resolves relative file names.
inline RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir = {}) {
    using namespace config_detail;
    check_keys(doc, "", {"pump", "crystal", "photons", "jsa_grid", "modes_grid", "target", "decompose",
                         "convention", "seed", "max_grid_points"});
    RunConfig cfg;

    const json* pump = find(doc, "pump");
    if (!pump) fail("/pump", "required field missing");
    check_keys(*pump, "/pump", {"wavelength_m", "waist_m", "index", "u0", "polarization", "envelope", "max_order",
                                "modes", "normalize"});
    cfg.free_space_wavelength = get_number(*pump, "/pump", "wavelength_m");
    cfg.waist = get_number(*pump, "/pump", "waist_m");
    if (const json* u0 = find(*pump, "u0")) cfg.u0 = complex_value(*u0, "/pump/u0");
    if (const json* pol = find(*pump, "polarization")) cfg.pump_pol = polarization(*pol, "/pump/polarization");

    if (const json* c = find(doc, "crystal")) cfg.crystal = crystal(*c, "/crystal");
    // The pump index fixes the in-medium wavelength; without a crystal it
    // defaults to the explicit /pump/index, else vacuum.
    cfg.pump_index = get_number(*pump, "/pump", "index", cfg.crystal ? cfg.crystal->n_p : 1.0);
    if (cfg.crystal && find(*pump, "index") && cfg.pump_index != cfg.crystal->n_p)
        fail("/pump/index", "conflicts with /crystal/n_p");
    if (!(cfg.pump_index >= 1.0)) fail("/pump/index", "must be >= 1");
    try {
        (void)cfg.geometry();
    } catch (const ConfigError& err) {
        fail("/pump", err.what());
    }
    if (const json* env = find(*pump, "envelope")) cfg.envelope = envelope(*env, "/pump/envelope", cfg.free_space_wavelength);

    if (const json* modes = find(*pump, "modes")) {
        if (!modes->is_array() || modes->empty()) fail("/pump/modes", "expected a nonempty array");
        CoefficientMap coeffs;
        int highest = 0;
        for (size_t k = 0; k < modes->size(); ++k) {
            const std::string mp = "/pump/modes/" + std::to_string(k);
            const json& e = (*modes)[k];
            check_keys(e, mp, {"n", "m", "re", "im"});
            const int n = get_int(e, mp, "n"), m = get_int(e, mp, "m");
            if (n < 0 || m < 0) fail(mp, "mode indices must be nonnegative");
            const ModeIndex idx{n, m};
            if (coeffs.count(idx)) fail(mp, "duplicate mode " + to_string(idx));
            coeffs[idx] = {get_number(e, mp, "re", 0.0), get_number(e, mp, "im", 0.0)};
            highest = std::max(highest, idx.order());
        }
        const int max_order = get_int(*pump, "/pump", "max_order", highest);
        const json* norm_flag = find(*pump, "normalize");
        if (norm_flag && !norm_flag->is_boolean()) fail("/pump/normalize", "expected a boolean");
        try {
            cfg.expansion = norm_flag && norm_flag->get<bool>() ? ModeExpansion::normalized(std::move(coeffs), max_order)
                                                                : ModeExpansion(std::move(coeffs), max_order);
        } catch (const ConfigError& err) {
            fail("/pump/modes", err.what());
        }
    }

    if (const json* ph = find(doc, "photons")) {
        check_keys(*ph, "/photons", {"f_s_hz", "f_i_hz", "pol_s", "pol_i"});
        JsaGridSpec spec;
        spec.f_s = get_number(*ph, "/photons", "f_s_hz");
        spec.f_i = get_number(*ph, "/photons", "f_i_hz");
        if (!(spec.f_s > 0.0)) fail("/photons/f_s_hz", "must be positive");
        if (!(spec.f_i > 0.0)) fail("/photons/f_i_hz", "must be positive");
        if (const json* p = find(*ph, "pol_s")) spec.pol_s = polarization(*p, "/photons/pol_s");
        if (const json* p = find(*ph, "pol_i")) spec.pol_i = polarization(*p, "/photons/pol_i");
        const json* grid = find(doc, "jsa_grid");
        if (!grid) fail("/jsa_grid", "required when /photons is given");
        check_keys(*grid, "/jsa_grid", {"nu_sx_per_m", "nu_sy_per_m", "nu_ix_per_m", "nu_iy_per_m"});
        auto ax = [&](const char* key) {
            const json* a = find(*grid, key);
            if (!a) fail(child("/jsa_grid", key), "required field missing");
            return axis(*a, child("/jsa_grid", key));
        };
        spec.nu_sx = ax("nu_sx_per_m");
        spec.nu_sy = ax("nu_sy_per_m");
        spec.nu_ix = ax("nu_ix_per_m");
        spec.nu_iy = ax("nu_iy_per_m");
        cfg.jsa_grid = spec;
    } else if (find(doc, "jsa_grid")) {
        fail("/photons", "required when /jsa_grid is given");
    }

    if (const json* mg = find(doc, "modes_grid")) {
        check_keys(*mg, "/modes_grid", {"x_m", "y_m", "z_m", "nu_x_per_m", "nu_y_per_m", "modes"});
        ModesGridConfig g;
        for (auto [key, dst] : {std::pair{"x_m", &g.x}, std::pair{"y_m", &g.y}, std::pair{"nu_x_per_m", &g.nu_x},
                                std::pair{"nu_y_per_m", &g.nu_y}}) {
            const json* a = find(*mg, key);
            if (!a) fail(child("/modes_grid", key), "required field missing");
            *dst = axis(*a, child("/modes_grid", key));
        }
        if (const json* z = find(*mg, "z_m")) {
            if (!z->is_array() || z->empty()) fail("/modes_grid/z_m", "expected a nonempty array");
            g.z.clear();
            for (size_t k = 0; k < z->size(); ++k) g.z.push_back(number((*z)[k], "/modes_grid/z_m/" + std::to_string(k)));
        }
        if (const json* m = find(*mg, "modes")) g.modes = mode_list(*m, "/modes_grid/modes");
        cfg.modes_grid = g;
    }

    if (const json* t = find(doc, "target")) {
        check_keys(*t, "/target", {"X", "Y", "nu_s_perp_per_m", "nu_i_perp_per_m", "max_order", "index_set", "modes"});
        TargetConfig tc;
        const bool direct = find(*t, "X") || find(*t, "Y");
        const bool pair = find(*t, "nu_s_perp_per_m") || find(*t, "nu_i_perp_per_m");
        if (direct == pair) fail("/target", "give either X and Y or nu_s_perp_per_m and nu_i_perp_per_m");
        if (direct) {
            tc.direction = {get_number(*t, "/target", "X"), get_number(*t, "/target", "Y")};
        } else {
            auto perp = [&](const char* key) {
                const json* v = find(*t, key);
                const std::string p = child("/target", key);
                if (!v) fail(p, "required field missing");
                if (!v->is_array() || v->size() != 2) fail(p, "expected [nu_x, nu_y]");
                return SpatialFrequency{number((*v)[0], p + "/0"), number((*v)[1], p + "/1"), 0.0};
            };
            tc.direction = target_from_pair(perp("nu_s_perp_per_m"), perp("nu_i_perp_per_m"), cfg.waist);
        }
        if (const json* m = find(*t, "modes")) {
            if (find(*t, "index_set")) fail("/target/modes", "cannot be combined with /target/index_set");
            tc.explicit_set = mode_list(*m, "/target/modes");
            tc.max_order = max_order_of(explicit_modes(*tc.explicit_set));
        } else {
            tc.max_order = get_int(*t, "/target", "max_order");
            if (tc.max_order < 0) fail("/target/max_order", "must be nonnegative");
            const std::string set = get_string(*t, "/target", "index_set", std::string("all_nonzero_orders"));
            if (set == "all_nonzero_orders")
                tc.index_set = IndexSet::AllNonzeroOrders;
            else if (set == "strictly_positive_pairs")
                tc.index_set = IndexSet::StrictlyPositivePairs;
            else
                fail("/target/index_set", "expected \"all_nonzero_orders\" or \"strictly_positive_pairs\"");
        }
        cfg.target = tc;
    }

    if (const json* d = find(doc, "decompose")) {
        check_keys(*d, "/decompose", {"field_file", "max_order"});
        DecomposeConfig dc;
        std::filesystem::path file = get_string(*d, "/decompose", "field_file");
        if (file.is_relative()) file = base_dir / file;
        if (!std::filesystem::exists(file)) fail("/decompose/field_file", "file not found: " + file.string());
        dc.field_file = file.string();
        dc.max_order = get_int(*d, "/decompose", "max_order");
        if (dc.max_order < 0) fail("/decompose/max_order", "must be nonnegative");
        cfg.decompose = dc;
    }

    const std::string conv = get_string(doc, "", "convention", std::string("exponent"));
    if (conv == "exponent")
        cfg.convention = MismatchConvention::ExponentConsistent;
    else if (conv == "paper")
        cfg.convention = MismatchConvention::PaperLiteral;
    else
        fail("/convention", "expected \"paper\" or \"exponent\"");

    if (const json* s = find(doc, "seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0))
            fail("/seed", "expected a nonnegative integer");
        cfg.seed = s->get<std::uint64_t>();
    }
    if (const json* b = find(doc, "max_grid_points")) {
        if (!b->is_number_integer() || b->get<std::int64_t>() < 1) fail("/max_grid_points", "expected a positive integer");
        cfg.max_grid_points = b->get<std::size_t>();
    }
    return cfg;
}

/// Parses JSON text; syntax errors are reported with line and column.
inline json parse_json_text(const std::string& text, const std::string& name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        int line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < pos; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
    }
}

inline RunConfig load_config(const std::string& path) {
    const json doc = parse_json_text(read_file(path), path);
    return parse_config(doc, std::filesystem::path(path).parent_path());
}

inline MismatchConvention parse_convention(const std::string& s) {
    if (s == "paper") return MismatchConvention::PaperLiteral;
    if (s == "exponent") return MismatchConvention::ExponentConsistent;
    throw ConfigError("convention must be \"paper\" or \"exponent\", got \"" + s + "\"");
}

inline const char* to_string(MismatchConvention c) {
    return c == MismatchConvention::PaperLiteral ? "paper" : "exponent";
}

}  // namespace eghspdc
