#pragma once

#include <json.hpp>
#include <string>

#include "core/grid.hpp"
#include "core/rational.hpp"
#include "fibration/fibration.hpp"
#include "witten/models.hpp"

namespace fiberloc::driver {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Parsed experiment configuration: a JSON document with a canonical digest.
/// Schema is per command (see docs/config-schema.md); unknown keys anywhere
/// in a consumed table are rejected.
struct Config {
    nlohmann::json root;
    std::string digest;

    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);

    int threads() const;
    uint64_t seed() const;
};

/// FNV-1a 64 over the canonical (sorted-key) dump.
std::string canonical_digest(const nlohmann::json& j);

/// Throws ConfigError when `obj` holds keys outside `allowed`.
void expect_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where);

DiscreteModel parse_model(const nlohmann::json& j);
Region parse_region(const nlohmann::json& j, const DiscreteModel& model);
ScalarField parse_field(const nlohmann::json& j, const DiscreteModel& model);
fib::CompatibleFibration parse_fibration(const nlohmann::json& j);

/// Cylinder/disc model tables; `require_t_and_grid` enforces the
/// no-hidden-defaults rule for index-type commands.
witten::CylinderModel parse_cylinder(const nlohmann::json& j, bool require_t_and_grid);
witten::DiscModel parse_disc(const nlohmann::json& j, bool require_t_and_grid);
witten::RadialProfile parse_profile(const nlohmann::json& j);

/// Exact rational from a JSON integer or a "p/q" string.
Rational parse_rational(const nlohmann::json& j);

}  // namespace fiberloc::driver
