#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qwork/switching.hpp"
#include "qwork/twolevel.hpp"
#include "qwork/vibronic.hpp"

namespace qwork::config {

enum class Experiment {
    TwolevelPopulations,
    TwolevelDecoherency,
    TwolevelWork,
    TwolevelFreeEnergy,
    VibronicPopulations,
    VibronicWork,
    VibronicDistribution,
    VibronicCoefficients,
};

std::string experiment_name(Experiment e);

struct GridSpec {
    double start{0.0};
    double end{8.0};
    int points{161};
};

// Fully resolved run description. The JSON form is the source of truth:
// defaults, file contents and --override patches merge there, then parse
// and validate into this struct.
struct ExperimentConfig {
    std::string model{"twolevel"};  // twolevel | vibronic
    std::string method{"rwa"};      // rwa | full

    twolevel::AtomParams atom;
    twolevel::InitialDensity initial;
    switching::SwitchingFunction pulse;

    vibronic::VibronicParams vib;
    vibronic::AtomMix mix;
    double tail_tol{1e-10};
    bool both_preparations{false};
    double kappa_tau{100.0};  // measurement point for distribution/coefficients

    double temperature_kelvin{10.0};
    GridSpec grid{};              // time (ps) or kappa*tau, per model
    int steps{0};                 // 0 = automatic
    std::string work_output{"moments"};  // moments | distribution
    double work_time{8.0};

    std::string out_path{};
    std::string out_format{"csv"};

    void validate(Experiment e) const;  // throws ConfigError naming the field
};

// Default document with every recognized key present.
nlohmann::ordered_json default_document();

// Strict parse: unknown keys and type mismatches raise ConfigError.
ExperimentConfig parse_document(const nlohmann::ordered_json& doc);

// The resolved document for result metadata (round-trips parse_document).
nlohmann::ordered_json to_document(const ExperimentConfig& cfg);

// Reads a JSON config file and overlays it onto the defaults.
nlohmann::ordered_json load_document(const std::string& path);

// Applies one KEY=VALUE patch with a dotted path, e.g. atom.omega0=1.0.
void apply_override(nlohmann::ordered_json& doc, const std::string& key_value);

// Bundled figure-reproduction presets.
std::vector<std::string> profile_names();
std::pair<nlohmann::ordered_json, Experiment> profile(const std::string& name);

}  // namespace qwork::config
