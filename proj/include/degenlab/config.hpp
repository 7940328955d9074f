#pragma once

#include "degenlab/field.hpp"
#include "degenlab/profile.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace degenlab {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

const std::vector<std::string>& experiment_commands();

/**
 * Strict view of a JSON object: unknown keys and wrong types are validation errors
 * (kind "schema_violation") naming the offending path.
 */
class Block {
public:
    Block(const Json& j, std::string where);

    bool has(const char* key) const;
    void allow(std::initializer_list<const char*> keys) const;
    void require(std::initializer_list<const char*> keys) const;

    double num(const char* key) const;
    double num_or(const char* key, double def) const;
    long integer(const char* key) const;
    long integer_or(const char* key, long def) const;
    std::string str(const char* key) const;
    std::string str_or(const char* key, const std::string& def) const;
    bool flag_or(const char* key, bool def) const;
    std::vector<int> ints(const char* key) const;
    std::vector<double> nums(const char* key) const;
    std::vector<std::pair<int, int>> int_pairs(const char* key) const;
    Block sub(const char* key) const;
    std::string path(const char* key) const { return where_ + "." + key; }
    const Json& raw() const { return j_; }

private:
    const Json& at(const char* key) const;
    const Json& j_;
    std::string where_;
};

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string command;
    DispersionProfile profile;
    std::optional<SpectralGrid> grid;
    Json sweep = Json::object();
    Json tolerances = Json::object();
    std::string output;
    std::uint64_t seed = 0;
    Json raw; // the document as read
    std::filesystem::path source;
};

// Throws ValidationError with kinds config_not_found, invalid_json, schema_violation.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const Json& j);

DispersionProfile parse_profile(const Block& b);
SpectralGrid parse_grid(const Block& b);

} // namespace degenlab
