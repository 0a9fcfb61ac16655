// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 configuration error, 3 numerical error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "eghspdc/commands.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elegant Gauss-Hermite pump modes and SPDC biphoton amplitudes"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> convention;
    std::string out_dir = ".";
    bool flip_ft_sign = false;
    int ft_grid = 1024;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        if (needs_config) opt->required();
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_option("--convention", convention, "momentum-mismatch convention")
            ->check(CLI::IsMember({"paper", "exponent"}));
        sub->add_option("--out", out_dir, "output directory");
    };
    CLI::App* modes = app.add_subcommand("modes", "sample mode fields and their transverse transforms");
    CLI::App* jsa = app.add_subcommand("jsa", "joint spectral amplitude on a transverse-frequency grid");
    CLI::App* optimize = app.add_subcommand("optimize", "optimal pump coefficients for a target direction");
    CLI::App* decomp = app.add_subcommand("decompose", "project a sampled field onto the mode basis");
    CLI::App* validate = app.add_subcommand("validate", "run every invariant check");
    for (CLI::App* sub : {modes, jsa, optimize, decomp}) add_common(sub, true);
    add_common(validate, false);
    validate->add_flag("--flip-ft-sign", flip_ft_sign, "test hook: flip the analytic transform sign")
        ->group("");
    validate->add_option("--ft-grid", ft_grid, "grid size of the transform check (power of two)")
        ->check(CLI::PositiveNumber)
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (validate->parsed()) {
            eghspdc::validation::ValidationOptions opt;
            if (seed) opt.seed = *seed;
            opt.flip_ft_sign = flip_ft_sign;
            opt.ft_grid = ft_grid;
            const bool with_report = validate->count("--out") > 0;
            return eghspdc::cmd_validate(opt, std::cout, with_report ? out_dir : "") ? exit_ok : exit_validation;
        }

        eghspdc::RunConfig cfg = eghspdc::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (convention) cfg.convention = eghspdc::parse_convention(*convention);

        std::vector<std::string> written;
        if (modes->parsed()) written = eghspdc::cmd_modes(cfg, out_dir);
        if (jsa->parsed()) written = eghspdc::cmd_jsa(cfg, out_dir);
        if (optimize->parsed()) written = eghspdc::cmd_optimize(cfg, out_dir, std::cerr);
        if (decomp->parsed()) written = eghspdc::cmd_decompose(cfg, out_dir);
        for (const std::string& path : written) std::cout << path << '\n';
        return exit_ok;
    } catch (const eghspdc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const eghspdc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const eghspdc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}
