#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "eghspdc/config.hpp"

using namespace eghspdc;

namespace {

json minimal() {
    return json::parse(R"({"pump": {"wavelength_m": 8e-7, "waist_m": 2e-6}})");
}

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, MinimalPump) {
    const RunConfig cfg = parse_config(minimal());
    EXPECT_EQ(cfg.pump_index, 1.0);
    EXPECT_DOUBLE_EQ(cfg.geometry().wavelength(), 8e-7);
    EXPECT_EQ(cfg.convention, MismatchConvention::ExponentConsistent);
    EXPECT_FALSE(cfg.expansion);
    EXPECT_EQ(cfg.pump_envelope().kind, PumpEnvelope::Kind::CW);
    EXPECT_DOUBLE_EQ(cfg.pump_envelope().f_p, speed_of_light / 8e-7);
    EXPECT_THROW(cfg.setup(), ConfigError);
}

TEST(Config, SampleJsaConfig) {
    const RunConfig cfg = load_config(EGHSPDC_CONFIG_DIR "/jsa.json");
    ASSERT_TRUE(cfg.crystal && cfg.jsa_grid && cfg.expansion);
    EXPECT_DOUBLE_EQ(cfg.pump_index, 1.66);
    EXPECT_DOUBLE_EQ(cfg.geometry().wavelength(), 405e-9 / 1.66);
    EXPECT_NEAR(norm_squared(cfg.expansion->coefficients()), 1.0, 1e-15);
    EXPECT_EQ(cfg.crystal->chi[0][0][1], complex(1e-12));
    EXPECT_EQ(cfg.jsa_grid->nu_sx.count, 5);
    EXPECT_EQ(cfg.pump_envelope().kind, PumpEnvelope::Kind::GaussianPulse);
}

TEST(Config, InMediumWavelengthUsesPumpIndex) {
    json doc = minimal();
    doc["pump"]["index"] = 2.0;
    EXPECT_DOUBLE_EQ(parse_config(doc).geometry().wavelength(), 4e-7);
}

TEST(Config, PumpIndexConflictsWithCrystal) {
    json doc = json::parse(R"({"pump": {"wavelength_m": 8e-7, "waist_m": 2e-6, "index": 1.5},
                               "crystal": {"length_m": 1e-3, "n_p": 1.6, "n_s": 1.6, "n_i": 1.6}})");
    EXPECT_NE(error_of(doc).find("/pump/index"), std::string::npos);
    doc["pump"]["index"] = 1.6;
    EXPECT_EQ(error_of(doc), "");
}

TEST(Config, MissingFieldNamed) {
    json doc = minimal();
    doc["pump"].erase("waist_m");
    EXPECT_NE(error_of(doc).find("config field /pump/waist_m"), std::string::npos) << error_of(doc);
    EXPECT_NE(error_of(json::object()).find("/pump"), std::string::npos);
}

TEST(Config, UnknownKeyRejected) {
    json doc = minimal();
    doc["pump"]["wasit_m"] = 1.0;
    EXPECT_NE(error_of(doc).find("/pump/wasit_m"), std::string::npos) << error_of(doc);
    json top = minimal();
    top["extra"] = 1;
    EXPECT_NE(error_of(top).find("/extra"), std::string::npos);
}

TEST(Config, WrongTypeNamed) {
    json doc = minimal();
    doc["pump"]["waist_m"] = "wide";
    EXPECT_NE(error_of(doc).find("/pump/waist_m"), std::string::npos);
}

TEST(Config, NonpositiveWaistRejected) {
    json doc = minimal();
    doc["pump"]["waist_m"] = -1.0;
    EXPECT_FALSE(error_of(doc).empty());
}

TEST(Config, DuplicateModeRejected) {
    json doc = minimal();
    doc["pump"]["modes"] = json::parse(R"([{"n": 1, "m": 0, "re": 1}, {"n": 1, "m": 0, "im": 1}])");
    EXPECT_NE(error_of(doc).find("/pump/modes/1"), std::string::npos) << error_of(doc);
}

TEST(Config, ModeBeyondMaxOrderRejected) {
    json doc = minimal();
    doc["pump"]["modes"] = json::parse(R"([{"n": 2, "m": 1, "re": 1}])");
    doc["pump"]["max_order"] = 2;
    EXPECT_NE(error_of(doc).find("/pump/modes"), std::string::npos);
}

TEST(Config, PolarizationMustBeUnit) {
    json doc = minimal();
    doc["pump"]["polarization"] = json::parse("[1, 1, 0]");
    EXPECT_NE(error_of(doc).find("/pump/polarization"), std::string::npos);
    doc["pump"]["polarization"] = json::parse("[[0, 1], 0, 0]");
    EXPECT_EQ(parse_config(doc).pump_pol[0], complex(0, 1));
}

TEST(Config, GridWithoutPhotonsRejected) {
    json doc = minimal();
    doc["jsa_grid"] = json::object();
    EXPECT_NE(error_of(doc).find("/photons"), std::string::npos);
}

TEST(Config, AxisValidation) {
    json doc = minimal();
    doc["modes_grid"] = json::parse(R"({"x_m": {"min": 1, "max": 0, "count": 4}, "y_m": {"min": 0, "max": 1, "count": 2},
                                        "nu_x_per_m": {"min": 0, "max": 0, "count": 1},
                                        "nu_y_per_m": {"min": 0, "max": 0, "count": 1}})");
    EXPECT_NE(error_of(doc).find("/modes_grid/x_m/max"), std::string::npos) << error_of(doc);
}

TEST(Config, TargetDirect) {
    const RunConfig cfg = load_config(EGHSPDC_CONFIG_DIR "/optimize.json");
    ASSERT_TRUE(cfg.target);
    EXPECT_EQ(cfg.target->direction.X, 0.2);
    EXPECT_EQ(cfg.target->direction.Y, -0.1);
    EXPECT_EQ(cfg.target->max_order, 3);
    EXPECT_EQ(cfg.seed, 7u);
}

TEST(Config, TargetFromTransverseFrequencies) {
    json doc = minimal();
    doc["target"] = json::parse(R"({"nu_s_perp_per_m": [1000, 0], "nu_i_perp_per_m": [0, -500], "max_order": 1})");
    const RunConfig cfg = parse_config(doc);
    EXPECT_DOUBLE_EQ(cfg.target->direction.X, -2.0 * pi * 2e-6 * 1000.0);
    EXPECT_DOUBLE_EQ(cfg.target->direction.Y, 2.0 * pi * 2e-6 * 500.0);
}

TEST(Config, TargetNeedsExactlyOneForm) {
    json doc = minimal();
    doc["target"] = json::parse(R"({"X": 0.1, "Y": 0, "nu_s_perp_per_m": [0, 0], "max_order": 1})");
    EXPECT_NE(error_of(doc).find("/target"), std::string::npos);
}

TEST(Config, ExplicitTargetModes) {
    const RunConfig cfg = load_config(EGHSPDC_CONFIG_DIR "/optimize_cross.json");
    ASSERT_TRUE(cfg.target && cfg.target->explicit_set);
    EXPECT_EQ(cfg.target->index_set_name(), "explicit");
    const auto modes = cfg.target->modes();
    ASSERT_EQ(modes.size(), 2u);
    EXPECT_EQ(modes[0], ModeIndex(0, 0));
    EXPECT_EQ(modes[1], ModeIndex(1, 1));
    EXPECT_EQ(cfg.target->max_order, 2);
}

TEST(Config, BadIndexSetNamed) {
    json doc = minimal();
    doc["target"] = json::parse(R"({"X": 0, "Y": 0, "max_order": 1, "index_set": "odd"})");
    EXPECT_NE(error_of(doc).find("/target/index_set"), std::string::npos);
}

TEST(Config, Convention) {
    json doc = minimal();
    doc["convention"] = "paper";
    EXPECT_EQ(parse_config(doc).convention, MismatchConvention::PaperLiteral);
    doc["convention"] = "other";
    EXPECT_NE(error_of(doc).find("/convention"), std::string::npos);
    EXPECT_EQ(parse_convention("exponent"), MismatchConvention::ExponentConsistent);
    EXPECT_THROW(parse_convention("Paper"), ConfigError);
    EXPECT_STREQ(to_string(MismatchConvention::PaperLiteral), "paper");
}

TEST(Config, SeedMustBeNonnegativeInteger) {
    json doc = minimal();
    doc["seed"] = -3;
    EXPECT_NE(error_of(doc).find("/seed"), std::string::npos);
    doc["seed"] = 1.5;
    EXPECT_NE(error_of(doc).find("/seed"), std::string::npos);
}

TEST(Config, DecomposeFileResolvedAgainstConfigDir) {
    const RunConfig cfg = load_config(EGHSPDC_CONFIG_DIR "/decompose.json");
    ASSERT_TRUE(cfg.decompose);
    EXPECT_EQ(std::filesystem::path(cfg.decompose->field_file).parent_path(),
              std::filesystem::path(EGHSPDC_CONFIG_DIR));
    json doc = minimal();
    doc["decompose"] = json::parse(R"({"field_file": "no_such_field.csv", "max_order": 1})");
    EXPECT_NE(error_of(doc).find("/decompose/field_file"), std::string::npos);
}

TEST(ConfigText, SyntaxErrorHasLineAndColumn) {
    try {
        parse_json_text("{\n  \"pump\": {\n    \"waist_m\": ,\n  }\n}", "bad.json");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("bad.json:3:", 0), 0u) << e.what();
    }
}

TEST(ConfigText, MissingFileIsIoError) {
    EXPECT_THROW(load_config("/nonexistent/dir/config.json"), IoError);
}
