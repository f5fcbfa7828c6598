#include "optpump/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace optpump::harness {

namespace {

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::Populations, "populations"},
    {Mode::SpectrumAnalytic, "spectrum-analytic"},
    {Mode::SpectrumQrt, "spectrum-qrt"},
    {Mode::SpectrumTrajectory, "spectrum-trajectory"},
    {Mode::SpectrumTransient, "spectrum-transient"},
    {Mode::Compare, "compare"},
    {Mode::Sweep, "sweep"},
};

constexpr std::string_view kSweepParams[] = {"rabi", "gamma_e", "gamma_t", "delta", "rise_time"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, std::string_view raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(key, "expected a number, got '" + s + "'");
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
    return v;
}

std::size_t to_count(const std::string& key, std::string_view raw) {
    const std::string s = trim(raw);
    unsigned long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, std::string_view raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key, "expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, std::string_view raw) {
    std::vector<double> out;
    std::string item;
    std::istringstream is{std::string(raw)};
    while (std::getline(is, item, ',')) out.push_back(to_number(key, item));
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
    return out;
}

Mode to_mode(const std::string& key, std::string_view raw) {
    const auto m = parse_mode(trim(raw));
    if (!m) throw ConfigError(key, "unknown mode '" + trim(raw) + "'");
    return *m;
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

struct KeySpec {
    Setter set;
    std::string_view default_text;
    std::string_view help;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = {
        {"scenario.mode",
         {[](auto& c, auto& k, auto& v) { c.mode = to_mode(k, v); }, "populations",
          "populations | spectrum-analytic | spectrum-qrt | spectrum-trajectory | spectrum-transient | "
          "compare | sweep"}},
        {"atom.rabi", {[](auto& c, auto& k, auto& v) { c.atom.rabi = to_number(k, v); }, "5", "peak Rabi frequency"}},
        {"atom.gamma_e",
         {[](auto& c, auto& k, auto& v) { c.atom.gamma_e = to_number(k, v); }, "1", "e -> t decay rate"}},
        {"atom.gamma_t",
         {[](auto& c, auto& k, auto& v) { c.atom.gamma_t = to_number(k, v); }, "0", "t -> g decay rate"}},
        {"atom.delta", {[](auto& c, auto& k, auto& v) { c.atom.delta = to_number(k, v); }, "0", "laser detuning"}},
        {"drive.kind",
         {[](auto& c, auto& k, auto& v) {
              const auto s = trim(v);
              if (s == "constant") c.drive.kind = DriveConfig::Kind::Constant;
              else if (s == "exp_ramp") c.drive.kind = DriveConfig::Kind::ExpRamp;
              else throw ConfigError(k, "expected constant or exp_ramp, got '" + s + "'");
          },
          "constant", "constant | exp_ramp (Omega(t) = rabi (1 - exp(-(t - t_start)/rise_time)))"}},
        {"drive.rise_time",
         {[](auto& c, auto& k, auto& v) { c.drive.rise_time = to_number(k, v); }, "1", "ramp rise time"}},
        {"drive.t_start", {[](auto& c, auto& k, auto& v) { c.drive.t_start = to_number(k, v); }, "0", "ramp start"}},
        {"numerics.dt", {[](auto& c, auto& k, auto& v) { c.numerics.dt = to_number(k, v); }, "0.001", "RK4 step"}},
        {"numerics.t_end",
         {[](auto& c, auto& k, auto& v) { c.numerics.t_end = to_number(k, v); }, "40", "population time span"}},
        {"numerics.tau",
         {[](auto& c, auto& k, auto& v) { c.numerics.tau = to_number(k, v); }, "40",
          "photon observation interval; grid spacing is 2*pi/tau"}},
        {"numerics.n_half",
         {[](auto& c, auto& k, auto& v) { c.numerics.n_half = to_count(k, v); }, "0",
          "grid half-size; 0 covers [-2W, 2W] with W the doublet splitting"}},
        {"numerics.tau_max",
         {[](auto& c, auto& k, auto& v) { c.numerics.tau_max = to_number(k, v); }, "0",
          "correlation span; 0 picks one with envelope below 1e-7"}},
        {"numerics.gamma_t_sequence",
         {[](auto& c, auto& k, auto& v) { c.numerics.gamma_t_sequence = to_list(k, v); },
          "0.1,0.01,0.001,0.0001,0.00001", "decreasing gamma_t values for the gamma_t -> 0 limit"}},
        {"output.dir", {[](auto& c, auto&, auto& v) { c.output.dir = trim(v); }, ".", "output directory"}},
        {"output.plot", {[](auto& c, auto& k, auto& v) { c.output.plot = to_bool(k, v); }, "false", "emit SVG plots"}},
        {"sweep.param",
         {[](auto& c, auto&, auto& v) { c.sweep.param = trim(v); }, "",
          "rabi | gamma_e | gamma_t | delta | rise_time"}},
        {"sweep.values", {[](auto& c, auto& k, auto& v) { c.sweep.values = to_list(k, v); }, "", "swept values"}},
        {"sweep.target",
         {[](auto& c, auto& k, auto& v) { c.sweep.target = to_mode(k, v); }, "spectrum-transient",
          "mode run at every sweep point"}},
    };
    return table;
}

void apply(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->second.set(cfg, key, value);
}

bool strong_drive(const AtomParams& a) { return a.rabi * a.rabi > 0.25 * a.gamma_e * a.gamma_e; }

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void validate_point(const ScenarioConfig& cfg) {
    const auto& a = cfg.atom;
    require(a.rabi >= 0.0, "atom.rabi", "must be >= 0 (got " + fmt(a.rabi) + ")");
    require(a.gamma_e >= 0.0, "atom.gamma_e", "must be >= 0 (got " + fmt(a.gamma_e) + ")");
    require(a.gamma_t >= 0.0, "atom.gamma_t", "must be >= 0 (got " + fmt(a.gamma_t) + ")");
    if (cfg.drive.kind == DriveConfig::Kind::ExpRamp)
        require(cfg.drive.rise_time > 0.0, "drive.rise_time", "must be > 0 (got " + fmt(cfg.drive.rise_time) + ")");

    const auto& n = cfg.numerics;
    require(n.dt > 0.0, "numerics.dt", "must be > 0 (got " + fmt(n.dt) + ")");
    require(n.t_end > 0.0, "numerics.t_end", "must be > 0 (got " + fmt(n.t_end) + ")");
    require(n.tau > 0.0, "numerics.tau", "must be > 0 (got " + fmt(n.tau) + ")");
    require(n.tau_max >= 0.0, "numerics.tau_max", "must be >= 0 (got " + fmt(n.tau_max) + ")");
    for (std::size_t i = 0; i < n.gamma_t_sequence.size(); ++i) {
        require(n.gamma_t_sequence[i] > 0.0, "numerics.gamma_t_sequence", "values must be > 0");
        require(i == 0 || n.gamma_t_sequence[i] < n.gamma_t_sequence[i - 1], "numerics.gamma_t_sequence",
                "values must be strictly decreasing");
    }
    require(!n.gamma_t_sequence.empty(), "numerics.gamma_t_sequence", "must not be empty");

    const bool constant = cfg.drive.kind == DriveConfig::Kind::Constant;
    switch (cfg.mode) {
    case Mode::Populations:
    case Mode::SpectrumTransient: break;
    case Mode::SpectrumAnalytic:
        require(a.delta == 0.0, "atom.delta", "spectrum-analytic requires delta = 0");
        require(strong_drive(a), "atom.rabi", "spectrum-analytic requires rabi > gamma_e/2 (overdamped regime)");
        break;
    case Mode::SpectrumQrt:
        require(a.delta == 0.0, "atom.delta", "spectrum-qrt requires delta = 0");
        require(a.gamma_e > 0.0, "atom.gamma_e", "spectrum-qrt requires gamma_e > 0");
        require(a.rabi > 0.0, "atom.rabi", "spectrum-qrt requires rabi > 0");
        break;
    case Mode::SpectrumTrajectory:
        require(constant, "drive.kind", "spectrum-trajectory requires a constant drive; use spectrum-transient");
        require(a.delta == 0.0, "atom.delta", "spectrum-trajectory requires delta = 0; use spectrum-transient");
        break;
    case Mode::Compare:
        require(constant, "drive.kind", "compare requires a constant drive");
        require(a.delta == 0.0, "atom.delta", "compare requires delta = 0");
        require(a.gamma_e > 0.0, "atom.gamma_e", "compare requires gamma_e > 0");
        require(strong_drive(a), "atom.rabi", "compare requires rabi > gamma_e/2 (overdamped regime)");
        break;
    case Mode::Sweep: break;
    }
}

} // namespace

std::string_view mode_name(Mode mode) {
    for (const auto& [m, name] : kModeNames)
        if (m == mode) return name;
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (const auto& [m, n] : kModeNames)
        if (n == name) return m;
    return std::nullopt;
}

DriveProfile ScenarioConfig::drive_profile() const {
    if (drive.kind == DriveConfig::Kind::ExpRamp)
        return DriveProfile::exp_ramp(atom.rabi, drive.rise_time, drive.t_start);
    return DriveProfile::constant(atom.rabi);
}

FrequencyGrid ScenarioConfig::grid() const {
    if (numerics.n_half > 0) return FrequencyGrid(numerics.tau, numerics.n_half);
    double splitting = generalized_rabi(atom);
    if (atom.delta == 0.0 && strong_drive(atom)) splitting = omega_eff(atom);
    splitting = std::max(splitting, std::max(atom.gamma_e, 1.0));
    return FrequencyGrid::covering(numerics.tau, 2.0 * splitting);
}

ScenarioConfig ScenarioConfig::sweep_point(double value) const {
    ScenarioConfig p = *this;
    p.mode = sweep.target;
    if (sweep.param == "rabi") p.atom.rabi = value;
    else if (sweep.param == "gamma_e") p.atom.gamma_e = value;
    else if (sweep.param == "gamma_t") p.atom.gamma_t = value;
    else if (sweep.param == "delta") p.atom.delta = value;
    else if (sweep.param == "rise_time") p.drive.rise_time = value;
    else throw ConfigError("sweep.param", "unknown sweep parameter '" + sweep.param + "'");
    return p;
}

void validate(const ScenarioConfig& cfg) {
    require(!cfg.output.dir.empty(), "output.dir", "must not be empty");
    if (cfg.mode != Mode::Sweep) {
        validate_point(cfg);
        return;
    }
    require(std::find(std::begin(kSweepParams), std::end(kSweepParams), cfg.sweep.param) != std::end(kSweepParams),
            "sweep.param", "expected one of rabi, gamma_e, gamma_t, delta, rise_time (got '" + cfg.sweep.param + "')");
    require(!cfg.sweep.values.empty(), "sweep.values", "must list at least one value");
    require(cfg.sweep.target != Mode::Sweep && cfg.sweep.target != Mode::Compare, "sweep.target",
            "must be populations or a spectrum mode");
    require(cfg.sweep.param != "rise_time" || cfg.drive.kind == DriveConfig::Kind::ExpRamp, "drive.kind",
            "sweeping rise_time requires drive.kind = exp_ramp");
    for (const double v : cfg.sweep.values) {
        try {
            validate_point(cfg.sweep_point(v));
        } catch (const ConfigError& e) {
            throw ConfigError("sweep.values", "value " + fmt(v) + " is invalid: " + e.what());
        }
    }
}

ScenarioConfig parse_config(std::string_view file_contents, const Overrides& overrides) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is{std::string(file_contents)};
        pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("<config>", e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    ScenarioConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            if (!body.data().empty()) throw ConfigError(section, "unknown key (keys must live in a [section])");
            continue;
        }
        for (const auto& [key, leaf] : body) apply(cfg, section + "." + key, leaf.data());
    }
    for (const auto& [key, value] : overrides) apply(cfg, key, value);
    validate(cfg);
    return cfg;
}

std::string describe_keys() {
    std::ostringstream os;
    for (const auto& [key, spec] : key_table()) {
        os << "  " << key << " (default: " << (spec.default_text.empty() ? "unset" : spec.default_text)
           << ")\n      " << spec.help << "\n";
    }
    return os.str();
}

} // namespace optpump::harness
