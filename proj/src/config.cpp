#include "memsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace memsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(std::string(v), &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": bad number '" +
                          std::string(v) + "'");
    }
}

int parse_int(std::string_view v, int line) {
    int x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config line " + std::to_string(line) + ": bad integer '" +
                          std::string(v) + "'");
    return x;
}

bool parse_bool(std::string_view v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config line " + std::to_string(line) + ": bad boolean '" +
                      std::string(v) + "'");
}

}  // namespace

std::vector<double> parse_duration_list(std::string_view csv) {
    std::vector<double> out;
    std::string token;
    std::istringstream in{std::string(csv)};
    while (std::getline(in, token, ',')) {
        const std::string_view t = trim(token);
        if (t.empty()) continue;
        try {
            std::size_t pos = 0;
            const double x = std::stod(std::string(t), &pos);
            if (pos != t.size()) throw std::invalid_argument("");
            out.push_back(x);
        } catch (const std::exception&) {
            throw ConfigError("bad duration value '" + std::string(t) + "'");
        }
    }
    return out;
}

PhysicalParams RunConfig::params() const {
    return PhysicalParams::from_cooperativity(
        physics.cooperativity, kTwoPi * physics.gamma_perp_mhz * 1e6,
        kTwoPi * physics.kappa_mhz * 1e6, kTwoPi * physics.delta_mhz * 1e6,
        kTwoPi * physics.omega_sg_mhz * 1e6, physics.atom_number);
}

void RunConfig::validate() const {
    if (!(physics.cooperativity > 0.0)) throw ConfigError("physics.cooperativity must be > 0");
    if (!(physics.gamma_perp_mhz > 0.0)) throw ConfigError("physics.gamma_perp_mhz must be > 0");
    if (!(physics.kappa_mhz > 0.0)) throw ConfigError("physics.kappa_mhz must be > 0");
    if (physics.delta_mhz == 0.0) throw ConfigError("physics.delta_mhz must be nonzero");
    if (physics.omega_sg_mhz == 0.0) throw ConfigError("physics.omega_sg_mhz must be nonzero");
    if (!(physics.atom_number >= 1.0)) throw ConfigError("physics.atom_number must be >= 1");
    if (!(control.floor_eps > 0.0)) throw ConfigError("control.floor_eps must be > 0");
    if (!(control.omega_cap_factor > 0.0)) throw ConfigError("control.omega_cap_factor must be > 0");
    if (sweep.durations.empty()) throw ConfigError("sweep.durations must not be empty");
    for (double d : sweep.durations)
        if (!(d > 0.0)) throw ConfigError("sweep.durations must be positive");
    if (sweep.grid_n < 512) throw ConfigError("sweep.grid_n must be >= 512");
    if (output.directory.empty()) throw ConfigError("output.directory must not be empty");
}

RunConfig parse_config_text(std::string_view text) {
    RunConfig cfg;
    std::string section;
    int line_no = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "physics" && section != "control" && section != "sweep" &&
                section != "output")
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        if (section == "physics") {
            if (key == "cooperativity") cfg.physics.cooperativity = parse_double(value, line_no);
            else if (key == "gamma_perp_mhz") cfg.physics.gamma_perp_mhz = parse_double(value, line_no);
            else if (key == "kappa_mhz") cfg.physics.kappa_mhz = parse_double(value, line_no);
            else if (key == "delta_mhz") cfg.physics.delta_mhz = parse_double(value, line_no);
            else if (key == "omega_sg_mhz") cfg.physics.omega_sg_mhz = parse_double(value, line_no);
            else if (key == "atom_number") cfg.physics.atom_number = parse_double(value, line_no);
            else throw ConfigError("config line " + std::to_string(line_no) +
                                   ": unknown key '" + key + "' in [physics]");
        } else if (section == "control") {
            if (key == "floor_eps") cfg.control.floor_eps = parse_double(value, line_no);
            else if (key == "omega_cap_factor") cfg.control.omega_cap_factor = parse_double(value, line_no);
            else throw ConfigError("config line " + std::to_string(line_no) +
                                   ": unknown key '" + key + "' in [control]");
        } else if (section == "sweep") {
            if (key == "durations") cfg.sweep.durations = parse_duration_list(value);
            else if (key == "grid_n") cfg.sweep.grid_n = parse_int(value, line_no);
            else throw ConfigError("config line " + std::to_string(line_no) +
                                   ": unknown key '" + key + "' in [sweep]");
        } else if (section == "output") {
            if (key == "directory") cfg.output.directory = std::string(value);
            else if (key == "emit_profiles") cfg.output.emit_profiles = parse_bool(value, line_no);
            else if (key == "emit_oracle") cfg.output.emit_oracle = parse_bool(value, line_no);
            else if (key == "emit_green") cfg.output.emit_green = parse_bool(value, line_no);
            else throw ConfigError("config line " + std::to_string(line_no) +
                                   ": unknown key '" + key + "' in [output]");
        } else {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside of any section");
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace memsim
