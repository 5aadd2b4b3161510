#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwork/errors.hpp"
#include "qwork/experiments.hpp"

namespace {

using qwork::config::Experiment;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string format;
    std::string out_path;
    std::string profile;
    int steps = -1;
};

void attach_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--override", opts.overrides,
                    "Dotted-path patch, e.g. atom.omega0=1.0 (repeatable)")
        ->take_all();
    cmd->add_option("--format", opts.format, "Output format: csv or json");
    cmd->add_option("--out", opts.out_path, "Output file path");
    cmd->add_option("--profile", opts.profile, "Named preset (see --list-profiles)");
    cmd->add_option("--steps", opts.steps, "Propagation step count (0 = automatic)");
}

int run_experiment(Experiment experiment, const CommonOptions& opts) {
    namespace cfg = qwork::config;

    nlohmann::ordered_json doc;
    if (!opts.profile.empty()) {
        if (!opts.config_path.empty()) {
            throw qwork::ConfigError("--profile and --config are mutually exclusive");
        }
        auto [profile_doc, profile_experiment] = cfg::profile(opts.profile);
        if (profile_experiment != experiment) {
            throw qwork::ConfigError("profile '" + opts.profile + "' belongs to '" +
                                     cfg::experiment_name(profile_experiment) + "'");
        }
        doc = std::move(profile_doc);
    } else if (!opts.config_path.empty()) {
        doc = cfg::load_document(opts.config_path);
    } else {
        doc = cfg::default_document();
        // Bare vibronic runs need the matching model selector.
        const auto name = cfg::experiment_name(experiment);
        doc["model"] = name.substr(0, name.find(' '));
    }

    for (const auto& patch : opts.overrides) cfg::apply_override(doc, patch);
    if (!opts.format.empty()) doc["output"]["format"] = opts.format;
    if (!opts.out_path.empty()) doc["output"]["path"] = opts.out_path;
    if (opts.steps >= 0) doc["propagation"]["steps"] = opts.steps;

    const cfg::ExperimentConfig config = cfg::parse_document(doc);
    const auto result = qwork::experiments::run(config, experiment);

    if (config.out_path.empty()) {
        if (config.out_format == "json") {
            qwork::sweep::write_json(result, std::cout);
        } else {
            qwork::sweep::write_csv(result, std::cout);
        }
    } else {
        qwork::sweep::write_file(result, config.out_format, config.out_path);
        std::cerr << "wrote " << config.out_path << " (" << result.rows.size() << " rows)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwork: driven two-level-atom work statistics"};
    app.require_subcommand(1);

    bool list_profiles = false;
    app.add_flag("--list-profiles", list_profiles, "Print the bundled profile names and exit");

    struct Leaf {
        Experiment experiment;
        CommonOptions opts;
        CLI::App* cmd;
    };
    std::vector<Leaf> leaves;
    const auto add_leaf = [&](CLI::App* parent, const char* name, const char* help,
                              Experiment e) {
        leaves.push_back({e, {}, nullptr});
        CLI::App* cmd = parent->add_subcommand(name, help);
        leaves.back().cmd = cmd;
        attach_common(cmd, leaves.back().opts);
    };

    CLI::App* twolevel = app.add_subcommand("twolevel", "Bare driven atom");
    twolevel->require_subcommand(1);
    add_leaf(twolevel, "populations", "Ground-state occupation over time",
             Experiment::TwolevelPopulations);
    add_leaf(twolevel, "decoherency", "Coherence decay over time",
             Experiment::TwolevelDecoherency);
    add_leaf(twolevel, "work", "Work moments over time, or the atom distribution",
             Experiment::TwolevelWork);
    add_leaf(twolevel, "free-energy", "Average work, Helmholtz difference and W_irr",
             Experiment::TwolevelFreeEnergy);

    CLI::App* vibronic = app.add_subcommand("vibronic", "Trapped atom at the k-th sideband");
    vibronic->require_subcommand(1);
    add_leaf(vibronic, "populations", "Level occupations over kappa*tau",
             Experiment::VibronicPopulations);
    add_leaf(vibronic, "work", "Average work for both preparations over kappa*tau",
             Experiment::VibronicWork);
    add_leaf(vibronic, "distribution", "Work atoms at a fixed kappa*tau",
             Experiment::VibronicDistribution);
    add_leaf(vibronic, "coefficients", "Per-level coupling and flop table (debugging aid)",
             Experiment::VibronicCoefficients);

    CLI::App* selftest = app.add_subcommand("selftest", "Run the library invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (list_profiles) {
        for (const auto& name : qwork::config::profile_names()) std::cout << name << "\n";
        return 0;
    }

    try {
        if (selftest->parsed()) {
            return qwork::experiments::selftest(std::cout) ? 0 : 1;
        }
        for (auto& leaf : leaves) {
            if (leaf.cmd->parsed()) return run_experiment(leaf.experiment, leaf.opts);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const qwork::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qwork::NumericsError& e) {
        std::cerr << "numerical contract violation: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
