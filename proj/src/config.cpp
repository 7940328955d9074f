#include "degenlab/config.hpp"

#include "degenlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace degenlab {

namespace {

[[noreturn]] void violation(const std::string& msg) { throw ValidationError("schema_violation", msg); }

bool is_int(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    return false;
}

} // namespace

const std::vector<std::string>& experiment_commands() {
    static const std::vector<std::string> cmds = {"check-profile", "kernel-decay", "strichartz", "bilinear",
                                                  "generic-bound", "resonance",    "sectors",    "vpnorm",
                                                  "solve",         "picard",       "scatter"};
    return cmds;
}

Block::Block(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) violation(where_ + " must be an object");
}

bool Block::has(const char* key) const { return j_.contains(key); }

void Block::allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
            violation("unknown key " + where_ + "." + it.key());
}

void Block::require(std::initializer_list<const char*> keys) const {
    for (const char* k : keys)
        if (!has(k)) violation("missing required key " + path(k));
}

const Json& Block::at(const char* key) const {
    if (!has(key)) violation("missing required key " + path(key));
    return j_.at(key);
}

double Block::num(const char* key) const {
    const Json& v = at(key);
    if (!v.is_number()) violation(path(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) violation(path(key) + " must be finite");
    return d;
}

double Block::num_or(const char* key, double def) const { return has(key) ? num(key) : def; }

long Block::integer(const char* key) const {
    const Json& v = at(key);
    if (!is_int(v)) violation(path(key) + " must be an integer");
    return v.get<long>();
}

long Block::integer_or(const char* key, long def) const { return has(key) ? integer(key) : def; }

std::string Block::str(const char* key) const {
    const Json& v = at(key);
    if (!v.is_string()) violation(path(key) + " must be a string");
    return v.get<std::string>();
}

std::string Block::str_or(const char* key, const std::string& def) const { return has(key) ? str(key) : def; }

bool Block::flag_or(const char* key, bool def) const {
    if (!has(key)) return def;
    const Json& v = at(key);
    if (!v.is_boolean()) violation(path(key) + " must be a boolean");
    return v.get<bool>();
}

std::vector<int> Block::ints(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) violation(path(key) + " must be a non-empty integer array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!is_int(e)) violation(path(key) + " must contain integers");
        out.push_back(e.get<int>());
    }
    return out;
}

std::vector<double> Block::nums(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) violation(path(key) + " must be a non-empty number array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) violation(path(key) + " must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::pair<int, int>> Block::int_pairs(const char* key) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) violation(path(key) + " must be a non-empty array of [k1, k2]");
    std::vector<std::pair<int, int>> out;
    for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !is_int(e[0]) || !is_int(e[1]))
            violation(path(key) + " entries must be integer pairs");
        out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
}

Block Block::sub(const char* key) const { return Block(at(key), path(key)); }

DispersionProfile parse_profile(const Block& b) {
    b.allow({"kind", "beta", "delta", "params"});
    b.require({"kind", "beta", "delta"});
    const std::string kind = b.str("kind");
    DispersionProfile p;
    if (kind == "model") {
        p = DispersionProfile::model(static_cast<int>(b.integer("beta")), b.num("delta"));
        if (b.has("params") && !b.raw().at("params").empty()) violation("profile.params must be empty for the model profile");
    } else if (kind == "gravity_capillary") {
        std::vector<double> ps = b.has("params") ? b.nums("params") : std::vector<double>{};
        if (ps.size() != 2) violation("profile.params must be [g, sigma] for gravity_capillary");
        p = DispersionProfile::gravity_capillary(b.num("delta"), ps[0], ps[1]);
        if (b.integer("beta") != 1) violation("profile.beta must be 1 for gravity_capillary");
    } else {
        violation("profile.kind must be 'model' or 'gravity_capillary'");
    }
    p.validate();
    return p;
}

SpectralGrid parse_grid(const Block& b) {
    b.allow({"N", "L"});
    b.require({"N", "L"});
    SpectralGrid g{static_cast<int>(b.integer("N")), b.num("L")};
    g.validate();
    return g;
}

ExperimentConfig parse_config(const Json& j) {
    Block top(j, "config");
    top.allow({"schema_version", "command", "profile", "grid", "sweep", "tolerances", "output", "seed", "comment"});
    top.require({"schema_version", "command", "profile", "sweep", "output", "seed"});
    ExperimentConfig c;
    c.raw = j;
    c.schema_version = static_cast<int>(top.integer("schema_version"));
    if (c.schema_version != kSchemaVersion)
        violation("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                  std::to_string(kSchemaVersion) + ")");
    c.command = top.str("command");
    const auto& cmds = experiment_commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) violation("unknown command '" + c.command + "'");
    c.profile = parse_profile(top.sub("profile"));
    if (top.has("grid")) c.grid = parse_grid(top.sub("grid"));
    c.sweep = top.sub("sweep").raw();
    if (top.has("tolerances")) c.tolerances = top.sub("tolerances").raw();
    c.output = top.str("output");
    const Json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        violation("config.seed must be a non-negative 64-bit integer");
    c.seed = s.get<std::uint64_t>();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config_not_found", "config file not found: " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid_json", std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c = parse_config(j);
    c.source = path;
    return c;
}

} // namespace degenlab
