#include "qduality/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qduality {

ConfigError::ConfigError(std::string key, const std::string& reason)
    : std::runtime_error(key.empty() ? reason : "config key '" + key + "': " + reason), key_(std::move(key)) {}

TemperatureSchedule TemperatureSpec::schedule(double tau) const {
    if (kind == Kind::Constant) return TemperatureSchedule::constant(1.0 / beta);
    return TemperatureSchedule::sinusoidal(base, amplitude, tau);
}

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string TemperatureSpec::to_string() const {
    if (kind == Kind::Constant) return format_number(beta);
    return "sine(" + format_number(base) + ", " + format_number(amplitude) + ")";
}

OpenSystemModel RunConfig::model() const {
    OpenSystemModel m;
    m.n_qubits = n_qubits;
    m.gamma = gamma;
    m.protocol = ControlProtocol{eps0, eps_tau, tau, lambda0, std::nullopt};
    m.interaction = interaction;
    m.temperature = temperature.schedule(tau);
    return m;
}

IntegratorConfig RunConfig::integrator() const {
    IntegratorConfig c;
    c.dt = dt;
    c.record_every = record_every;
    return c;
}

void RunConfig::validate() const {
    auto positive = [](double v) { return v > 0 && std::isfinite(v); };
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw ConfigError("n_qubits", "must lie in [1, " + std::to_string(kMaxQubits) + "]");
    if (temperature.kind == TemperatureSpec::Kind::Constant) {
        if (!positive(temperature.beta)) throw ConfigError("beta", "must be positive");
    } else {
        if (!positive(temperature.base) || !std::isfinite(temperature.amplitude) ||
            !(temperature.base - std::abs(temperature.amplitude) > 0))
            throw ConfigError("beta", "sine(T0, A) requires T0 > |A|");
    }
    if (!(gamma >= 0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be >= 0");
    if (!positive(eps0)) throw ConfigError("eps0", "must be positive");
    if (!positive(eps_tau)) throw ConfigError("eps_tau", "must be positive");
    if (!positive(tau)) throw ConfigError("tau", "must be positive");
    if (!std::isfinite(lambda0)) throw ConfigError("lambda0", "must be finite");
    if (!positive(dt)) throw ConfigError("dt", "must be positive");
    if (record_every < 1) throw ConfigError("record_every", "must be >= 1");
    try {
        integrator().steps_for(tau);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("dt", e.what());
    }
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    if (preset) os << "# derived from preset " << *preset << "\n";
    os << "n_qubits = " << n_qubits << "\n"
       << "beta = " << temperature.to_string() << "\n"
       << "gamma = " << format_number(gamma) << "\n"
       << "eps0 = " << format_number(eps0) << "\n"
       << "eps_tau = " << format_number(eps_tau) << "\n"
       << "tau = " << format_number(tau) << "\n"
       << "lambda0 = " << format_number(lambda0) << "\n"
       << "interaction = " << qduality::to_string(interaction) << "\n"
       << "dt = " << format_number(dt) << "\n"
       << "record_every = " << record_every << "\n";
    if (!output_path.empty()) os << "output_path = " << output_path << "\n";
    return os.str();
}

namespace {

struct PresetEntry {
    RunConfig config;
    PresetExpectations expect;
};

// Reset protocol defaults: beta = 1, lambda = 0.02, gamma = 0.02, eps0 = 0.4, eps_tau = 10, tau = 10.
RunConfig reset_protocol(const std::string& name, int n, InteractionKind kind) {
    RunConfig c;
    c.n_qubits = n;
    c.interaction = kind;
    c.preset = name;
    return c;
}

const std::map<std::string, PresetEntry>& preset_table() {
    static const std::map<std::string, PresetEntry> table = [] {
        std::map<std::string, PresetEntry> t;
        const PresetExpectations xx{+1, true, true, true};
        t["fig2-n2"] = {reset_protocol("fig2-n2", 2, InteractionKind::XX), xx};
        t["fig2-n4"] = {reset_protocol("fig2-n4", 4, InteractionKind::XX), xx};
        t["figS2-n2"] = {reset_protocol("figS2-n2", 2, InteractionKind::ZZ), {}};
        t["figS2-n4"] = {reset_protocol("figS2-n4", 4, InteractionKind::ZZ), {-1, false, false, false}};
        t["noint-n2"] = {reset_protocol("noint-n2", 2, InteractionKind::None), {}};
        RunConfig tdep = reset_protocol("tdep-n2", 2, InteractionKind::XX);
        tdep.temperature = {TemperatureSpec::Kind::Sine, 1.0, 1.0, 0.2};
        t["tdep-n2"] = {tdep, {}};
        RunConfig closed = reset_protocol("closed-n2", 2, InteractionKind::XX);
        closed.gamma = 0.0;
        t["closed-n2"] = {closed, {}};
        return t;
    }();
    return table;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text) {
    double v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(key, "expected a real number, got '" + std::string(text) + "'");
    return v;
}

int parse_int(const std::string& key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

TemperatureSpec parse_temperature(std::string_view text) {
    TemperatureSpec spec;
    constexpr std::string_view prefix = "sine(";
    if (text.substr(0, prefix.size()) == prefix) {
        if (text.back() != ')') throw ConfigError("beta", "unterminated sine(T0, A)");
        const auto args = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw ConfigError("beta", "sine(T0, A) needs two arguments");
        spec.kind = TemperatureSpec::Kind::Sine;
        spec.base = parse_real("beta", trim(args.substr(0, comma)));
        spec.amplitude = parse_real("beta", trim(args.substr(comma + 1)));
        return spec;
    }
    spec.beta = parse_real("beta", text);
    return spec;
}

void assign(RunConfig& c, const std::string& key, std::string_view value) {
    if (key == "n_qubits") c.n_qubits = parse_int(key, value);
    else if (key == "beta") c.temperature = parse_temperature(value);
    else if (key == "gamma") c.gamma = parse_real(key, value);
    else if (key == "eps0") c.eps0 = parse_real(key, value);
    else if (key == "eps_tau") c.eps_tau = parse_real(key, value);
    else if (key == "tau") c.tau = parse_real(key, value);
    else if (key == "lambda0") c.lambda0 = parse_real(key, value);
    else if (key == "dt") c.dt = parse_real(key, value);
    else if (key == "record_every") c.record_every = parse_int(key, value);
    else if (key == "output_path") c.output_path = std::string(value);
    else if (key == "interaction") {
        try {
            c.interaction = interaction_from_string(std::string(value));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    } else {
        throw ConfigError(key, "unknown key");
    }
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, entry] : preset_table()) out.push_back(name);
        return out;
    }();
    return names;
}

RunConfig preset(const std::string& name) {
    const auto& table = preset_table();
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
    return it->second.config;
}

PresetExpectations preset_expectations(const std::string& name) {
    const auto& table = preset_table();
    const auto it = table.find(name);
    return it == table.end() ? PresetExpectations{} : it->second.expect;
}

RunConfig parse_config(std::string_view text) { return parse_config(text, RunConfig{}); }

RunConfig parse_config(std::string_view text, const RunConfig& base) {
    std::vector<std::pair<std::string, std::string_view>> entries;
    std::set<std::string> seen;
    std::optional<std::string> preset_name;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
        if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
        if (value.empty()) throw ConfigError(key, "missing value");
        if (key == "preset") preset_name = std::string(value);
        else entries.emplace_back(std::move(key), value);
    }

    RunConfig c = preset_name ? preset(*preset_name) : base;
    for (const auto& [key, value] : entries) assign(c, key, value);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) { return load_config(path, RunConfig{}); }

RunConfig load_config(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), base);
}

}  // namespace qduality
