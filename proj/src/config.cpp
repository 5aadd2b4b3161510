#include "qwork/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qwork/errors.hpp"

namespace qwork::config {

namespace {

using nlohmann::ordered_json;

const ordered_json& expect_object(const ordered_json& doc, const std::string& path) {
    if (!doc.is_object()) throw ConfigError("config field '" + path + "' must be an object");
    return doc;
}

double expect_number(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError("config field '" + path + "' must be a number");
    return v.get<double>();
}

int expect_int(const ordered_json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        throw ConfigError("config field '" + path + "' must be an integer");
    }
    return v.get<int>();
}

bool expect_bool(const ordered_json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError("config field '" + path + "' must be a boolean");
    return v.get<bool>();
}

std::string expect_string(const ordered_json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError("config field '" + path + "' must be a string");
    return v.get<std::string>();
}

void reject_unknown(const ordered_json& obj, const std::set<std::string>& known,
                    const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown config field '" + prefix + key + "'");
        }
    }
}

}  // namespace

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::TwolevelPopulations: return "twolevel populations";
        case Experiment::TwolevelDecoherency: return "twolevel decoherency";
        case Experiment::TwolevelWork: return "twolevel work";
        case Experiment::TwolevelFreeEnergy: return "twolevel free-energy";
        case Experiment::VibronicPopulations: return "vibronic populations";
        case Experiment::VibronicWork: return "vibronic work";
        case Experiment::VibronicDistribution: return "vibronic distribution";
        case Experiment::VibronicCoefficients: return "vibronic coefficients";
    }
    return "unknown";
}

nlohmann::ordered_json default_document() {
    return ordered_json{
        {"model", "twolevel"},
        {"method", "rwa"},
        {"atom",
         {{"omega0", 1.0}, {"omega_laser", 1.0}, {"rabi", 0.5}, {"phase", 0.0}}},
        {"initial",
         {{"ground_population", 1.0}, {"coherence_re", 0.0}, {"coherence_im", 0.0}}},
        {"switching",
         {{"period", 2.0}, {"on_fraction", 0.5}, {"duration", 8.0}, {"amplitude", 1.0}}},
        {"vibronic",
         {{"trap_freq", 2.0},
          {"transition_freq", 10.0},
          {"coupling", 0.1},
          {"lamb_dicke", 0.2},
          {"sideband", 2},
          {"sideband_detuning", 5.0e-4},
          {"phase", 0.0},
          {"tail_tol", 1.0e-10},
          {"both_preparations", false},
          {"kappa_tau", 100.0}}},
        {"mix", {{"excited", 0.0}, {"ground", 1.0}}},
        {"temperature_kelvin", 10.0},
        {"grid", {{"start", 0.0}, {"end", 8.0}, {"points", 161}}},
        {"propagation", {{"steps", 0}}},
        {"work", {{"output", "moments"}, {"time", 8.0}}},
        {"output", {{"path", ""}, {"format", "csv"}}},
    };
}

ExperimentConfig parse_document(const ordered_json& doc) {
    expect_object(doc, "<root>");
    reject_unknown(doc,
                   {"model", "method", "atom", "initial", "switching", "vibronic", "mix",
                    "temperature_kelvin", "grid", "propagation", "work", "output"},
                   "");

    ExperimentConfig cfg;
    cfg.model = expect_string(doc.at("model"), "model");
    cfg.method = expect_string(doc.at("method"), "method");

    {
        const auto& a = expect_object(doc.at("atom"), "atom");
        reject_unknown(a, {"omega0", "omega_laser", "rabi", "phase"}, "atom.");
        cfg.atom.omega0 = expect_number(a.at("omega0"), "atom.omega0");
        cfg.atom.omega_laser = expect_number(a.at("omega_laser"), "atom.omega_laser");
        cfg.atom.rabi = expect_number(a.at("rabi"), "atom.rabi");
        cfg.atom.phase = expect_number(a.at("phase"), "atom.phase");
    }
    {
        const auto& i = expect_object(doc.at("initial"), "initial");
        reject_unknown(i, {"ground_population", "coherence_re", "coherence_im"}, "initial.");
        cfg.initial.ground_population =
            expect_number(i.at("ground_population"), "initial.ground_population");
        cfg.initial.coherence = {expect_number(i.at("coherence_re"), "initial.coherence_re"),
                                 expect_number(i.at("coherence_im"), "initial.coherence_im")};
    }
    {
        const auto& s = expect_object(doc.at("switching"), "switching");
        reject_unknown(s, {"period", "on_fraction", "duration", "amplitude"}, "switching.");
        cfg.pulse.period = expect_number(s.at("period"), "switching.period");
        cfg.pulse.on_fraction = expect_number(s.at("on_fraction"), "switching.on_fraction");
        cfg.pulse.duration = expect_number(s.at("duration"), "switching.duration");
        cfg.pulse.amplitude = expect_number(s.at("amplitude"), "switching.amplitude");
    }
    {
        const auto& v = expect_object(doc.at("vibronic"), "vibronic");
        reject_unknown(v,
                       {"trap_freq", "transition_freq", "coupling", "lamb_dicke", "sideband",
                        "sideband_detuning", "phase", "tail_tol", "both_preparations",
                        "kappa_tau"},
                       "vibronic.");
        cfg.vib.trap_freq = expect_number(v.at("trap_freq"), "vibronic.trap_freq");
        cfg.vib.transition_freq =
            expect_number(v.at("transition_freq"), "vibronic.transition_freq");
        cfg.vib.coupling = expect_number(v.at("coupling"), "vibronic.coupling");
        cfg.vib.lamb_dicke = expect_number(v.at("lamb_dicke"), "vibronic.lamb_dicke");
        cfg.vib.sideband = expect_int(v.at("sideband"), "vibronic.sideband");
        cfg.vib.sideband_detuning =
            expect_number(v.at("sideband_detuning"), "vibronic.sideband_detuning");
        cfg.vib.phase = expect_number(v.at("phase"), "vibronic.phase");
        cfg.tail_tol = expect_number(v.at("tail_tol"), "vibronic.tail_tol");
        cfg.both_preparations =
            expect_bool(v.at("both_preparations"), "vibronic.both_preparations");
        cfg.kappa_tau = expect_number(v.at("kappa_tau"), "vibronic.kappa_tau");
    }
    {
        const auto& m = expect_object(doc.at("mix"), "mix");
        reject_unknown(m, {"excited", "ground"}, "mix.");
        cfg.mix.excited = expect_number(m.at("excited"), "mix.excited");
        cfg.mix.ground = expect_number(m.at("ground"), "mix.ground");
    }
    cfg.temperature_kelvin = expect_number(doc.at("temperature_kelvin"), "temperature_kelvin");
    {
        const auto& g = expect_object(doc.at("grid"), "grid");
        reject_unknown(g, {"start", "end", "points"}, "grid.");
        cfg.grid.start = expect_number(g.at("start"), "grid.start");
        cfg.grid.end = expect_number(g.at("end"), "grid.end");
        cfg.grid.points = expect_int(g.at("points"), "grid.points");
    }
    {
        const auto& p = expect_object(doc.at("propagation"), "propagation");
        reject_unknown(p, {"steps"}, "propagation.");
        cfg.steps = expect_int(p.at("steps"), "propagation.steps");
    }
    {
        const auto& w = expect_object(doc.at("work"), "work");
        reject_unknown(w, {"output", "time"}, "work.");
        cfg.work_output = expect_string(w.at("output"), "work.output");
        cfg.work_time = expect_number(w.at("time"), "work.time");
    }
    {
        const auto& o = expect_object(doc.at("output"), "output");
        reject_unknown(o, {"path", "format"}, "output.");
        cfg.out_path = expect_string(o.at("path"), "output.path");
        cfg.out_format = expect_string(o.at("format"), "output.format");
    }
    return cfg;
}

nlohmann::ordered_json to_document(const ExperimentConfig& cfg) {
    ordered_json doc = default_document();
    doc["model"] = cfg.model;
    doc["method"] = cfg.method;
    doc["atom"] = {{"omega0", cfg.atom.omega0},
                   {"omega_laser", cfg.atom.omega_laser},
                   {"rabi", cfg.atom.rabi},
                   {"phase", cfg.atom.phase}};
    doc["initial"] = {{"ground_population", cfg.initial.ground_population},
                      {"coherence_re", cfg.initial.coherence.real()},
                      {"coherence_im", cfg.initial.coherence.imag()}};
    doc["switching"] = {{"period", cfg.pulse.period},
                        {"on_fraction", cfg.pulse.on_fraction},
                        {"duration", cfg.pulse.duration},
                        {"amplitude", cfg.pulse.amplitude}};
    doc["vibronic"] = {{"trap_freq", cfg.vib.trap_freq},
                       {"transition_freq", cfg.vib.transition_freq},
                       {"coupling", cfg.vib.coupling},
                       {"lamb_dicke", cfg.vib.lamb_dicke},
                       {"sideband", cfg.vib.sideband},
                       {"sideband_detuning", cfg.vib.sideband_detuning},
                       {"phase", cfg.vib.phase},
                       {"tail_tol", cfg.tail_tol},
                       {"both_preparations", cfg.both_preparations},
                       {"kappa_tau", cfg.kappa_tau}};
    doc["mix"] = {{"excited", cfg.mix.excited}, {"ground", cfg.mix.ground}};
    doc["temperature_kelvin"] = cfg.temperature_kelvin;
    doc["grid"] = {{"start", cfg.grid.start}, {"end", cfg.grid.end}, {"points", cfg.grid.points}};
    doc["propagation"] = {{"steps", cfg.steps}};
    doc["work"] = {{"output", cfg.work_output}, {"time", cfg.work_time}};
    doc["output"] = {{"path", cfg.out_path}, {"format", cfg.out_format}};
    return doc;
}

nlohmann::ordered_json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    ordered_json user;
    try {
        user = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    ordered_json doc = default_document();
    // Shallow-by-section overlay so partial configs inherit defaults.
    for (const auto& [key, value] : user.items()) {
        if (doc.contains(key) && doc[key].is_object() && value.is_object()) {
            for (const auto& [sub, v] : value.items()) doc[key][sub] = v;
        } else {
            doc[key] = value;
        }
    }
    return doc;
}

void apply_override(nlohmann::ordered_json& doc, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like section.key=value, got '" + key_value + "'");
    }
    const std::string path = key_value.substr(0, eq);
    const std::string raw = key_value.substr(eq + 1);

    ordered_json value;
    try {
        value = ordered_json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        value = raw;  // bare strings stay strings
    }

    ordered_json* node = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("override path has an empty segment: '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        if (!node->contains(key) || !(*node)[key].is_object()) {
            (*node)[key] = ordered_json::object();
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

void ExperimentConfig::validate(Experiment e) const {
    const bool is_twolevel = e == Experiment::TwolevelPopulations ||
                             e == Experiment::TwolevelDecoherency ||
                             e == Experiment::TwolevelWork ||
                             e == Experiment::TwolevelFreeEnergy;
    if (model != "twolevel" && model != "vibronic") {
        throw ConfigError("config field 'model' must be twolevel or vibronic");
    }
    if ((model == "twolevel") != is_twolevel) {
        throw ConfigError("config field 'model' (" + model + ") does not match the requested "
                          "experiment " + experiment_name(e));
    }
    if (method != "rwa" && method != "full") {
        throw ConfigError("config field 'method' must be rwa or full");
    }
    try {
        pulse.validate();
        if (is_twolevel) {
            atom.validate();
            initial.validate();
        } else {
            vib.validate();
            mix.validate();
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());  // the message names the field
    }
    if (!(grid.points >= 1)) throw ConfigError("config field 'grid.points' must be >= 1");
    if (!(grid.end >= grid.start)) {
        throw ConfigError("config field 'grid.end' must be >= grid.start");
    }
    if (grid.points > 1 && !(grid.end > grid.start)) {
        throw ConfigError("config field 'grid': a multi-point grid needs end > start");
    }
    if (!(grid.start >= 0.0)) throw ConfigError("config field 'grid.start' must be >= 0");
    if (!(temperature_kelvin > 0.0)) {
        throw ConfigError("config field 'temperature_kelvin' must be positive");
    }
    if (steps < 0) throw ConfigError("config field 'propagation.steps' must be >= 0");
    if (work_output != "moments" && work_output != "distribution") {
        throw ConfigError("config field 'work.output' must be moments or distribution");
    }
    if (!(work_time >= 0.0)) throw ConfigError("config field 'work.time' must be >= 0");
    if (!(tail_tol > 0.0) || tail_tol >= 1.0) {
        throw ConfigError("config field 'vibronic.tail_tol' must lie in (0, 1)");
    }
    if (!(kappa_tau >= 0.0)) throw ConfigError("config field 'vibronic.kappa_tau' must be >= 0");
    if (out_format != "csv" && out_format != "json") {
        throw ConfigError("config field 'output.format' must be csv or json");
    }
}

namespace {

ordered_json twolevel_profile(const std::string& method, double temperature, int points) {
    ordered_json doc = default_document();
    doc["model"] = "twolevel";
    doc["method"] = method;
    doc["temperature_kelvin"] = temperature;
    doc["grid"] = {{"start", 0.0}, {"end", 8.0}, {"points", points}};
    return doc;
}

ordered_json vibronic_profile(double temperature) {
    ordered_json doc = default_document();
    doc["model"] = "vibronic";
    doc["temperature_kelvin"] = temperature;
    doc["vibronic"]["both_preparations"] = true;
    doc["grid"] = {{"start", 0.0}, {"end", 500.0}, {"points", 1001}};
    return doc;
}

}  // namespace

std::vector<std::string> profile_names() {
    return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a",
            "fig4b", "fig5_t30", "fig5_t300", "fig6_t30", "fig6_t300"};
}

std::pair<nlohmann::ordered_json, Experiment> profile(const std::string& name) {
    if (name == "fig2a") return {twolevel_profile("rwa", 10.0, 801), Experiment::TwolevelPopulations};
    if (name == "fig2b") return {twolevel_profile("full", 10.0, 801), Experiment::TwolevelPopulations};
    if (name == "fig3a") return {twolevel_profile("rwa", 10.0, 801), Experiment::TwolevelDecoherency};
    if (name == "fig3b") return {twolevel_profile("full", 10.0, 801), Experiment::TwolevelDecoherency};
    if (name == "fig4a") return {twolevel_profile("rwa", 10.0, 321), Experiment::TwolevelFreeEnergy};
    if (name == "fig4b") return {twolevel_profile("full", 10.0, 321), Experiment::TwolevelFreeEnergy};
    if (name == "fig5_t30") return {vibronic_profile(30.0), Experiment::VibronicPopulations};
    if (name == "fig5_t300") return {vibronic_profile(300.0), Experiment::VibronicPopulations};
    if (name == "fig6_t30") return {vibronic_profile(30.0), Experiment::VibronicWork};
    if (name == "fig6_t300") return {vibronic_profile(300.0), Experiment::VibronicWork};
    throw ConfigError("unknown profile '" + name + "'");
}

}  // namespace qwork::config
