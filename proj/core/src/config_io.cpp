#include "sgsim/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace sgsim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(ctx + ": cannot parse number '" + v + "'");
    }
}

StageKind parse_kind(const std::string& v, const std::string& ctx) {
    if (v == "Harmonic") return StageKind::Harmonic;
    if (v == "InvertedHarmonic") return StageKind::InvertedHarmonic;
    throw ConfigError(ctx + ": kind must be Harmonic or InvertedHarmonic, got '" + v + "'");
}

SpinState parse_spin(const std::string& v, const std::string& ctx) {
    if (v == "SxPlusMinusOne") return SpinState::SxPlusMinusOne;
    if (v == "SxZero") return SpinState::SxZero;
    throw ConfigError(ctx + ": spin must be SxPlusMinusOne or SxZero, got '" + v + "'");
}

}  // namespace

std::string to_string(StageKind k) {
    return k == StageKind::Harmonic ? "Harmonic" : "InvertedHarmonic";
}

std::string to_string(SpinState s) {
    return s == SpinState::SxPlusMinusOne ? "SxPlusMinusOne" : "SxZero";
}

ConfigDocument parse_config(std::istream& in, const std::string& origin) {
    ConfigDocument doc;
    std::map<int, StageSpec> stages;
    std::map<int, StagePresence> presence;

    std::string section;
    int stage_idx = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string ctx = origin + ":" + std::to_string(lineno);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(ctx + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            stage_idx = -1;
            if (section.rfind("stage.", 0) == 0) {
                const std::string num = section.substr(6);
                try {
                    stage_idx = std::stoi(num);
                } catch (const std::exception&) {
                    throw ConfigError(ctx + ": bad stage index '" + num + "'");
                }
                if (stage_idx < 1) throw ConfigError(ctx + ": stage index must be >= 1");
                stages[stage_idx].index = stage_idx;
            } else if (section != "constants" && section != "particle" && section != "protocol") {
                throw ConfigError(ctx + ": unknown section [" + section + "]");
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(ctx + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(ctx + ": key outside any section");

        if (section == "constants") {
            auto& c = doc.config.constants;
            if (key == "hbar") c.hbar = parse_double(val, ctx);
            else if (key == "mu0") c.mu0 = parse_double(val, ctx);
            else if (key == "gamma_e") c.gamma_e = parse_double(val, ctx);
            else if (key == "chi_rho") c.chi_rho = parse_double(val, ctx);
            else if (key == "zero_field_D") c.zero_field_D = parse_double(val, ctx);
            else throw ConfigError(ctx + ": unknown constants key '" + key + "'");
        } else if (section == "particle") {
            auto& p = doc.config.particle;
            if (key == "mass") p.mass = parse_double(val, ctx);
            else if (key == "sigma0") p.sigma0 = parse_double(val, ctx);
            else if (key == "x0") p.x0 = parse_double(val, ctx);
            else if (key == "p0") p.p0 = parse_double(val, ctx);
            else throw ConfigError(ctx + ": unknown particle key '" + key + "'");
        } else if (section == "protocol") {
            if (key == "mode") {
                if (val == "five-stage") doc.config.mode = ProtocolMode::FiveStage;
                else if (val == "custom") doc.config.mode = ProtocolMode::Custom;
                else throw ConfigError(ctx + ": mode must be five-stage or custom");
            } else {
                throw ConfigError(ctx + ": unknown protocol key '" + key + "'");
            }
        } else {
            auto& s = stages[stage_idx];
            auto& p = presence[stage_idx];
            if (key == "kind") { s.kind = parse_kind(val, ctx); p.kind = true; }
            else if (key == "B0") { s.B0 = parse_double(val, ctx); p.B0 = true; }
            else if (key == "eta_linear") { s.eta_linear = parse_double(val, ctx); p.eta_linear = true; }
            else if (key == "eta_nonlinear") { s.eta_nonlinear = parse_double(val, ctx); p.eta_nonlinear = true; }
            else if (key == "duration") { s.duration = parse_double(val, ctx); p.duration = true; }
            else if (key == "spin") { s.spin = parse_spin(val, ctx); p.spin = true; }
            else throw ConfigError(ctx + ": unknown stage key '" + key + "'");
        }
    }

    for (auto& [idx, s] : stages) {
        doc.config.stages.push_back(s);
        doc.presence.push_back(presence[idx]);
    }
    return doc;
}

ConfigDocument load_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    return parse_config(in, path.filename().string());
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    ConfigDocument doc = load_config_document(path);
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < doc.config.stages.size(); ++i) {
        const auto& s = doc.config.stages[i];
        const auto& p = doc.presence[i];
        const std::string where = "stage." + std::to_string(s.index);
        if (!p.kind) missing.push_back(where + ".kind");
        if (!p.duration) missing.push_back(where + ".duration");
        if (s.kind == StageKind::Harmonic && !p.eta_linear)
            missing.push_back(where + ".eta_linear");
        if (s.kind == StageKind::InvertedHarmonic && !p.eta_nonlinear)
            missing.push_back(where + ".eta_nonlinear");
    }
    if (!missing.empty()) {
        std::string msg = path.string() + ": incomplete config, missing";
        for (const auto& m : missing) msg += " " + m;
        throw ConfigError(msg);
    }
    return doc.config;
}

void save_config(std::ostream& out, const ExperimentConfig& cfg) {
    out.precision(17);
    out << "[constants]\n"
        << "hbar = " << cfg.constants.hbar << "\n"
        << "mu0 = " << cfg.constants.mu0 << "\n"
        << "gamma_e = " << cfg.constants.gamma_e << "\n"
        << "chi_rho = " << cfg.constants.chi_rho << "\n"
        << "zero_field_D = " << cfg.constants.zero_field_D << "\n\n"
        << "[particle]\n"
        << "mass = " << cfg.particle.mass << "\n"
        << "sigma0 = " << cfg.particle.sigma0 << "\n"
        << "x0 = " << cfg.particle.x0 << "\n"
        << "p0 = " << cfg.particle.p0 << "\n\n"
        << "[protocol]\n"
        << "mode = " << (cfg.mode == ProtocolMode::FiveStage ? "five-stage" : "custom") << "\n";
    for (const auto& s : cfg.stages) {
        out << "\n[stage." << s.index << "]\n"
            << "kind = " << to_string(s.kind) << "\n"
            << "B0 = " << s.B0 << "\n";
        if (s.kind == StageKind::Harmonic)
            out << "eta_linear = " << s.eta_linear << "\n";
        else
            out << "eta_nonlinear = " << s.eta_nonlinear << "\n";
        out << "duration = " << s.duration << "\n"
            << "spin = " << to_string(s.spin) << "\n";
    }
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file: " + path.string());
    save_config(out, cfg);
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file for hashing: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    return fnv1a64(bytes.data(), bytes.size());
}

}  // namespace sgsim
