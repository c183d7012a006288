#include "steklab/lab.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "steklab/errors.hpp"

namespace steklab {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& text, int lineno) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadConfig,
                "expected a number, got '" + text + "' (line " + std::to_string(lineno) + ")");
}

int parse_int(const std::string& text, int lineno) {
    try {
        size_t used = 0;
        const int v = std::stoi(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadConfig,
                "expected an integer, got '" + text + "' (line " + std::to_string(lineno) + ")");
}

std::vector<double> parse_list(const std::string& text, int lineno) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw Error(ErrorCode::BadConfig,
                        "empty entry in list (line " + std::to_string(lineno) + ")");
        out.push_back(parse_double(item, lineno));
    }
    if (out.empty())
        throw Error(ErrorCode::BadConfig, "empty list (line " + std::to_string(lineno) + ")");
    return out;
}

} // namespace

StudyConfig parse_config(std::istream& in) {
    StudyConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::BadConfig,
                        "expected 'key = value' (line " + std::to_string(lineno) + ")");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::BadConfig,
                        "expected 'key = value' (line " + std::to_string(lineno) + ")");

        if (key == "n") cfg.params.n = parse_int(value, lineno);
        else if (key == "sigma") cfg.params.sigma = parse_double(value, lineno);
        else if (key == "mu") cfg.params.mu = parse_double(value, lineno);
        else if (key == "l") cfg.params.l = parse_double(value, lineno);
        else if (key == "profile.kind") cfg.profile.kind = value;
        else if (key == "profile.a") cfg.profile.a = parse_double(value, lineno);
        else if (key == "profile.b") cfg.profile.b = parse_double(value, lineno);
        else if (key == "profile.coeffs") cfg.profile.coeffs = parse_list(value, lineno);
        else if (key == "epsilons") cfg.epsilons = parse_list(value, lineno);
        else if (key == "k_max") cfg.k_max = parse_int(value, lineno);
        else if (key == "nx") cfg.nx = parse_int(value, lineno);
        else if (key == "ny") cfg.ny = parse_int(value, lineno);
        else if (key == "n1d") cfg.n1d = parse_int(value, lineno);
        else if (key == "quad") cfg.quad = parse_int(value, lineno);
        else
            throw Error(ErrorCode::BadConfig,
                        "unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
    }
    return cfg;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
    return parse_config(in);
}

Profile make_profile(const StudyConfig& config) {
    const double l = config.params.l;
    if (config.profile.kind == "constant")
        return Profile::constant(config.profile.a, l);
    if (config.profile.kind == "polynomial") {
        if (config.profile.coeffs.empty())
            throw Error(ErrorCode::BadConfig,
                        "polynomial profile needs profile.coeffs");
        return Profile::polynomial(config.profile.coeffs, l);
    }
    if (config.profile.kind == "cosine_bump")
        return Profile::cosine_bump(config.profile.a, config.profile.b, l);
    throw Error(ErrorCode::BadConfig,
                "unknown profile kind '" + config.profile.kind + "'");
}

void validate_config(const StudyConfig& config, RunMode mode) {
    ProblemParams p = config.params;
    p.epsilon = config.epsilons.empty() ? 1.0 : config.epsilons.front();
    validate_params(p);
    make_profile(config);

    if (config.k_max < 1)
        throw Error(ErrorCode::BadConfig, "k_max must be at least 1");
    if (config.n1d < 2)
        throw Error(ErrorCode::BadConfig, "n1d must be at least 2");
    if (config.nx < 2)
        throw Error(ErrorCode::BadConfig, "nx must be at least 2");
    if (config.ny < 1)
        throw Error(ErrorCode::BadConfig, "ny must be at least 1");
    if (config.quad < 2 || config.quad > 16)
        throw Error(ErrorCode::BadConfig, "quad must lie in [2, 16]");

    if (mode == RunMode::LimitOnly) return;

    if (config.params.n != 2)
        throw Error(ErrorCode::BadConfig, "the 2D leg requires n = 2");
    if (config.epsilons.empty())
        throw Error(ErrorCode::BadConfig, "epsilon list must not be empty");
    if (mode == RunMode::SteklovOnly && config.epsilons.size() != 1)
        throw Error(ErrorCode::BadConfig, "steklov mode takes exactly one epsilon");
    for (size_t i = 0; i < config.epsilons.size(); ++i) {
        if (!(config.epsilons[i] > 0.0))
            throw Error(ErrorCode::BadConfig, "epsilons must be positive");
        if (i > 0 && !(config.epsilons[i] < config.epsilons[i - 1]))
            throw Error(ErrorCode::BadConfig, "epsilons must be strictly decreasing");
    }
}

} // namespace steklab
