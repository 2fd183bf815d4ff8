#include "driver/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fiberloc::driver {

using nlohmann::json;

std::string canonical_digest(const json& j) {
    std::string text = j.dump();  // nlohmann::json keeps keys sorted
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

Config Config::from_text(const std::string& text) {
    Config cfg;
    try {
        cfg.root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.root.is_object()) throw ConfigError("config must be a JSON object");
    cfg.digest = canonical_digest(cfg.root);
    return cfg;
}

int Config::threads() const {
    int t = root.value("threads", 1);
    if (t < 1) throw ConfigError("threads must be >= 1");
    return t;
}

uint64_t Config::seed() const { return root.value("seed", 0ULL); }

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a table");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

Rational parse_rational(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ConfigError("expected an integer or a \"p/q\" string for an exact rational");
}

DiscreteModel parse_model(const json& j) {
    expect_keys(j, {"base", "torus"}, "model");
    std::vector<BaseAxis> base;
    if (j.contains("base")) {
        for (const auto& a : j.at("base")) {
            expect_keys(a, {"sites", "min", "max"}, "model.base");
            base.push_back({a.at("sites").get<int>(), a.value("min", 0.0), a.value("max", 1.0)});
        }
    }
    std::vector<int> torus;
    if (j.contains("torus")) torus = j.at("torus").get<std::vector<int>>();
    return DiscreteModel(std::move(base), std::move(torus));
}

Region parse_region(const json& j, const DiscreteModel& model) {
    // a region is a list of boxes; a box lists one range per axis:
    // {"lo":..,"hi":..} or "full"
    std::vector<IndexBox> boxes;
    for (const auto& bj : j) {
        IndexBox box;
        if (static_cast<int>(bj.size()) != model.dims())
            throw ConfigError("region box rank does not match the model");
        for (const auto& r : bj) {
            if (r.is_string() && r.get<std::string>() == "full") {
                box.ranges.push_back({0, 0, true});
            } else {
                expect_keys(r, {"lo", "hi"}, "region range");
                box.ranges.push_back({r.at("lo").get<int>(), r.at("hi").get<int>(), false});
            }
        }
        boxes.push_back(std::move(box));
    }
    return Region(std::move(boxes));
}

ScalarField parse_field(const json& j, const DiscreteModel& model) {
    expect_keys(j, {"kind", "value", "values", "axis", "freq", "region", "a", "eps"}, "field");
    std::string kind = j.at("kind").get<std::string>();
    int64_t n = model.site_count();
    if (kind == "constant") {
        return ScalarField(n, j.at("value").get<double>());
    }
    if (kind == "samples") {
        auto v = j.at("values").get<std::vector<double>>();
        if (static_cast<int64_t>(v.size()) != n)
            throw ConfigError("samples field size does not match the model");
        return ScalarField(std::move(v));
    }
    if (kind == "coordinate") {
        int axis = j.at("axis").get<int>();
        ScalarField f(n);
        for (int64_t s = 0; s < n; ++s) f[s] = model.coordinate(s, axis);
        return f;
    }
    if (kind == "cos") {
        int axis = j.at("axis").get<int>();
        double freq = j.value("freq", 1.0);
        ScalarField f(n);
        for (int64_t s = 0; s < n; ++s)
            f[s] = std::cos(2.0 * std::numbers::pi * freq * model.coordinate(s, axis));
        return f;
    }
    if (kind == "indicator") {
        SiteMask m = parse_region(j.at("region"), model).mask(model);
        ScalarField f(n);
        for (int64_t s = 0; s < n; ++s) f[s] = m.test(s) ? 1.0 : 0.0;
        return f;
    }
    if (kind == "cutoff") {
        // one-sided 1-D cutoff of the coordinate along `axis`
        int axis = j.value("axis", 0);
        auto prof = witten::RadialProfile::cutoff(j.at("a").get<double>(),
                                                  j.at("eps").get<double>());
        ScalarField f(n);
        for (int64_t s = 0; s < n; ++s) f[s] = prof(model.coordinate(s, axis));
        return f;
    }
    throw ConfigError("unknown field kind '" + kind + "'");
}

fib::CompatibleFibration parse_fibration(const json& j) {
    expect_keys(j, {"model", "charts", "inner_regions"}, "fibration");
    DiscreteModel model = parse_model(j.at("model"));
    std::vector<fib::Chart> charts;
    for (const auto& cj : j.at("charts")) {
        expect_keys(cj, {"id", "region", "fiber"}, "chart");
        fib::Chart c;
        c.id = cj.at("id").get<std::string>();
        c.region = parse_region(cj.at("region"), model);
        if (cj.contains("fiber"))
            c.fiber.generators = cj.at("fiber").get<std::vector<std::vector<int64_t>>>();
        charts.push_back(std::move(c));
    }
    std::optional<std::vector<Region>> inner;
    if (j.contains("inner_regions")) {
        std::vector<Region> regions;
        for (const auto& rj : j.at("inner_regions")) regions.push_back(parse_region(rj, model));
        inner = std::move(regions);
    }
    return fib::CompatibleFibration(std::move(model), std::move(charts), std::move(inner));
}

witten::RadialProfile parse_profile(const json& j) {
    expect_keys(j, {"kind", "dead", "lo", "hi", "a", "eps", "value"}, "profile");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "cylinder-default")
        return witten::RadialProfile::cylinder_default(j.value("dead", 0.125));
    if (kind == "disc-default")
        return witten::RadialProfile::disc_default(j.at("lo").get<double>(),
                                                   j.at("hi").get<double>());
    if (kind == "cutoff")
        return witten::RadialProfile::cutoff(j.at("a").get<double>(), j.at("eps").get<double>());
    if (kind == "constant") return witten::RadialProfile::constant(j.at("value").get<double>());
    throw ConfigError("unknown profile kind '" + kind + "'");
}

witten::CylinderModel parse_cylinder(const json& j, bool require_t_and_grid) {
    expect_keys(j, {"kind", "r_min", "r_max", "radial_sites", "theta_sites", "t", "profile", "bc"},
                "cylinder");
    witten::CylinderModel m;
    m.r_min = j.at("r_min").get<double>();
    m.r_max = j.at("r_max").get<double>();
    if (require_t_and_grid) {
        if (!j.contains("t"))
            throw ConfigError("cylinder: 't' is required (no hidden defaults)");
        if (!j.contains("radial_sites"))
            throw ConfigError("cylinder: 'radial_sites' is required (no hidden defaults)");
    }
    m.radial_sites = j.value("radial_sites", m.radial_sites);
    m.theta_sites = j.value("theta_sites", m.theta_sites);
    m.t = j.value("t", 0.0);
    if (j.contains("profile")) m.profile = parse_profile(j.at("profile"));
    if (j.contains("bc")) {
        std::string bc = j.at("bc").get<std::string>();
        if (bc == "dirichlet")
            m.bc = witten::RadialBC::Dirichlet;
        else if (bc == "antiperiodic")
            m.bc = witten::RadialBC::Antiperiodic;
        else
            throw ConfigError("cylinder: unknown bc '" + bc + "'");
    }
    m.validate();
    return m;
}

witten::DiscModel parse_disc(const json& j, bool require_t_and_grid) {
    expect_keys(j, {"kind", "radius_sq", "radial_sites", "angular_modes", "t", "profile"},
                "disc");
    witten::DiscModel m;
    m.radius_sq = j.at("radius_sq").get<double>();
    if (require_t_and_grid) {
        if (!j.contains("t")) throw ConfigError("disc: 't' is required (no hidden defaults)");
        if (!j.contains("radial_sites"))
            throw ConfigError("disc: 'radial_sites' is required (no hidden defaults)");
    }
    m.radial_sites = j.value("radial_sites", m.radial_sites);
    m.angular_modes = j.value("angular_modes", m.angular_modes);
    m.t = j.value("t", 0.0);
    if (j.contains("profile")) m.profile = parse_profile(j.at("profile"));
    m.validate();
    return m;
}

}  // namespace fiberloc::driver
