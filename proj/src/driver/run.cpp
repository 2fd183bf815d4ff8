#include "driver/run.hpp"

#include <algorithm>
#include <sstream>

#include "bsgeom/windows.hpp"
#include "fibration/averaging.hpp"
#include "fibration/certificate.hpp"
#include "fibration/goodcover.hpp"
#include "spectral/index.hpp"

namespace fiberloc::driver {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

ordered_json index_report_json(const spectral::IndexReport& rep) {
    ordered_json r;
    r["model"] = rep.model;
    r["t"] = rep.t;
    r["lambda_cut"] = rep.lambda_cut;
    r["gap_ratio"] = rep.gap_ratio;
    r["dim_even"] = rep.dim_even;
    r["dim_odd"] = rep.dim_odd;
    r["super_dim"] = rep.super_dim;
    r["reliable"] = rep.reliable;
    if (rep.tie_flagged) r["tie_flagged"] = true;
    r["eigen_head"] = rep.eigen_head;
    return r;
}

spectral::IndexOptions index_options(const json& section, const Config& cfg) {
    spectral::IndexOptions opts;
    opts.gap_floor = section.value("gap_floor", 10.0);
    if (section.contains("lambda_cut")) opts.lambda_cut = section.at("lambda_cut").get<double>();
    opts.threads = cfg.threads();
    return opts;
}

struct GeometryInput {
    std::optional<bsgeom::DelzantPolygon> polygon;
    std::optional<bsgeom::QuotientStrip> strip;
};

GeometryInput parse_geometry(const json& section) {
    GeometryInput g;
    if (section.contains("polygon")) {
        const auto& pj = section.at("polygon");
        expect_keys(pj, {"inequalities", "preset", "dilation"}, "polygon");
        if (pj.contains("preset")) {
            std::string preset = pj.at("preset").get<std::string>();
            int64_t d = pj.value("dilation", 1);
            if (preset == "triangle")
                g.polygon = bsgeom::DelzantPolygon::triangle(d);
            else if (preset == "square")
                g.polygon = bsgeom::DelzantPolygon::square(d);
            else
                throw ConfigError("unknown polygon preset '" + preset + "'");
        } else {
            std::vector<bsgeom::HalfPlane> hs;
            for (const auto& row : pj.at("inequalities")) {
                auto v = row.get<std::vector<int64_t>>();
                if (v.size() != 3) throw ConfigError("inequality rows are [nx, ny, c]");
                hs.push_back({v[0], v[1], v[2]});
            }
            g.polygon = bsgeom::DelzantPolygon(std::move(hs));
        }
    }
    if (section.contains("strip")) {
        const auto& sj = section.at("strip");
        expect_keys(sj, {"a", "b", "c"}, "strip");
        bsgeom::QuotientStrip s{sj.at("a").get<int64_t>(), sj.at("b").get<int64_t>(),
                                sj.at("c").get<int64_t>()};
        s.validate();
        g.strip = s;
    }
    if (!g.polygon && !g.strip)
        throw ConfigError("geometry section needs a 'polygon' or a 'strip'");
    if (g.polygon && g.strip)
        throw ConfigError("geometry section takes either a polygon or a strip, not both");
    return g;
}

ordered_json inventory_point_json(const bsgeom::BSPoint& p) {
    ordered_json r;
    r["x"] = p.x.to_string();
    r["y"] = p.y.to_string();
    r["stratum"] = p.stratum;
    r["is_bs"] = p.is_bs;
    if (p.vertex_params)
        r["vertex_params"] = {p.vertex_params->first, p.vertex_params->second};
    return r;
}

witten::ModeFamily family_from_spec(const json& spec, bool require) {
    std::string kind = spec.value("kind", "cylinder");
    if (kind == "cylinder") return witten::assemble_cylinder(parse_cylinder(spec, require));
    if (kind == "disc") return witten::assemble_disc(parse_disc(spec, require));
    throw ConfigError("unknown model kind '" + kind + "'");
}

void run_fibration_check(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("fibration");
    fib::CompatibleFibration fibration = parse_fibration(section);
    fib::ValidationReport rep = validate_fibration(fibration);
    for (const auto& rec : rep.records) {
        ordered_json r;
        r["axiom"] = rec.axiom;
        r["pair"] = rec.pair;
        r["status"] = rec.pass ? "pass" : "fail";
        r["witness_site"] = rec.witness_site;
        out.records.push_back(std::move(r));
    }
    ordered_json summary;
    summary["valid"] = rep.valid;
    summary["good"] = rep.good;
    out.records.push_back(std::move(summary));
    if (!rep.valid) out.exit_code = kExitConfig;

    if (cfg.root.contains("holonomy")) {
        fib::HolonomyAssignment hol;
        const auto& hj = cfg.root.at("holonomy");
        for (int i = 0; i < fibration.chart_count(); ++i) {
            std::vector<ScalarField> comps;
            const std::string& id = fibration.chart(i).id;
            if (!hj.contains(id))
                throw ConfigError("holonomy missing for chart '" + id + "'");
            for (const auto& fj : hj.at(id)) comps.push_back(parse_field(fj, fibration.model()));
            hol.per_chart.push_back(std::move(comps));
        }
        fib::CertReport cert = acyclicity_certificate(fibration, hol);
        for (const auto& rec : cert.records) {
            ordered_json r;
            r["condition"] = rec.condition;
            r["subject"] = rec.subject;
            r["status"] = rec.pass ? "pass" : "fail";
            r["witness_site"] = rec.witness_site;
            out.records.push_back(std::move(r));
        }
        ordered_json s;
        s["certified"] = cert.certified;
        out.records.push_back(std::move(s));
        if (!cert.certified) out.exit_code = kExitConfig;
    }
    if (cfg.root.contains("potentials")) {
        const auto& pj = cfg.root.at("potentials");
        expect_keys(pj, {"chart_alpha", "chart_beta", "f_alpha", "f_beta"}, "potentials");
        fib::PotentialPair pots;
        pots.chart_alpha = pj.value("chart_alpha", 0);
        pots.chart_beta = pj.value("chart_beta", 1);
        pots.f_alpha = parse_field(pj.at("f_alpha"), fibration.model());
        pots.f_beta = parse_field(pj.at("f_beta"), fibration.model());
        fib::CertReport cert = acyclicity_certificate(fibration, pots);
        for (const auto& rec : cert.records) {
            ordered_json r;
            r["condition"] = rec.condition;
            r["subject"] = rec.subject;
            r["status"] = rec.pass ? "pass" : "fail";
            r["witness_site"] = rec.witness_site;
            r["witness_value"] = rec.witness_value;
            out.records.push_back(std::move(r));
        }
        ordered_json s;
        s["certified"] = cert.certified;
        out.records.push_back(std::move(s));
        if (!cert.certified) out.exit_code = kExitConfig;
    }
}

void run_average(const Config& cfg, RunResult& out) {
    fib::CompatibleFibration fibration = parse_fibration(cfg.root.at("fibration"));
    ScalarField f = parse_field(cfg.root.at("field"), fibration.model());
    std::vector<ScalarField> cutoffs;
    if (cfg.root.contains("cutoffs")) {
        for (const auto& cj : cfg.root.at("cutoffs"))
            cutoffs.push_back(parse_field(cj, fibration.model()));
    }
    ScalarField g = fib::average(fibration, f, cutoffs);
    ordered_json r;
    r["op"] = "average";
    r["values"] = g.values();
    r["admissible"] = fib::is_admissible_function(fibration, g);
    out.records.push_back(std::move(r));
}

void run_pou(const Config& cfg, RunResult& out) {
    fib::CompatibleFibration fibration = parse_fibration(cfg.root.at("fibration"));
    std::vector<ScalarField> seeds;
    if (cfg.root.contains("seeds")) {
        for (const auto& sj : cfg.root.at("seeds"))
            seeds.push_back(parse_field(sj, fibration.model()));
    } else {
        seeds = fib::default_bump_seeds(fibration);
    }
    auto rho = fib::admissible_partition_of_unity(fibration, seeds);
    double worst = 0.0;
    for (int64_t s = 0; s < fibration.model().site_count(); ++s) {
        double q = 0.0;
        for (const auto& r : rho) q += r[s] * r[s];
        worst = std::max(worst, std::abs(q - 1.0));
    }
    for (int i = 0; i < fibration.chart_count(); ++i) {
        ordered_json r;
        r["chart"] = fibration.chart(i).id;
        r["values"] = rho[i].values();
        r["admissible"] = fib::is_admissible_function(fibration, rho[i]);
        out.records.push_back(std::move(r));
    }
    ordered_json s;
    s["max_sum_sq_deviation"] = worst;
    out.records.push_back(std::move(s));
}

void run_goodcover(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("goodcover");
    expect_keys(section, {"model", "acting_torus", "subgroups", "per_site", "margin"},
                "goodcover");
    DiscreteModel model = parse_model(section.at("model"));
    auto acting = section.at("acting_torus").get<std::vector<int>>();
    std::vector<fib::FiberSubgroup> subs;
    for (const auto& gj : section.at("subgroups")) {
        fib::FiberSubgroup s;
        s.generators = gj.get<std::vector<std::vector<int64_t>>>();
        subs.push_back(std::move(s));
    }
    auto per_site = section.at("per_site").get<std::vector<int>>();
    fib::StabilizerAssignment stab(model, std::move(acting), std::move(subs),
                                   std::move(per_site));
    int margin = section.value("margin", 1);
    auto cover = fib::good_open_cover(model, stab, margin);
    fib::GoodCoverCheck check = fib::check_good_cover(model, stab, cover);
    for (size_t i = 0; i < cover.size(); ++i) {
        ordered_json r;
        r["subgroup"] = i;
        r["sites"] = cover[i].sites();
        out.records.push_back(std::move(r));
    }
    ordered_json s;
    s["covers"] = check.covers;
    s["invariant"] = check.invariant;
    s["stabilizer_bound"] = check.stabilizer_bound;
    s["nested_overlaps"] = check.nested_overlaps;
    out.records.push_back(std::move(s));
    if (!(check.covers && check.invariant && check.stabilizer_bound && check.nested_overlaps))
        out.exit_code = kExitConfig;
}

void run_spectrum(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("spectrum");
    expect_keys(section, {"operator", "count"}, "spectrum");
    int64_t count = section.value("count", 16);
    const json& opspec = section.at("operator");
    std::vector<spectral::GradedEigenvalue> eig;
    std::string kind = opspec.value("kind", "cylinder");
    if (kind == "flat-circle") {
        expect_keys(opspec, {"kind", "theta", "mode_bound"}, "flat-circle");
        HermitianOperator op = witten::flat_circle_operator(
            opspec.at("theta").get<double>(), opspec.value("mode_bound", 8));
        eig = spectral::low_spectrum(op, std::min(count, op.dim()));
    } else {
        witten::ModeFamily fam = family_from_spec(opspec, false);
        std::vector<spectral::GradedEigenvalue> pool;
        for (const auto& mo : fam.modes) {
            auto part = spectral::low_spectrum(mo.op, std::min<int64_t>(count, mo.op.dim()));
            pool.insert(pool.end(), part.begin(), part.end());
        }
        std::sort(pool.begin(), pool.end(),
                  [](const spectral::GradedEigenvalue& x, const spectral::GradedEigenvalue& y) {
                      return x.lambda < y.lambda;
                  });
        if (static_cast<int64_t>(pool.size()) > count) pool.resize(count);
        eig = std::move(pool);
    }
    for (const auto& e : eig) {
        ordered_json r;
        r["lambda"] = e.lambda;
        r["parity"] = e.parity;
        out.records.push_back(std::move(r));
    }
}

void run_index(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("index");
    expect_keys(section, {"model", "gap_floor", "lambda_cut"}, "index");
    witten::ModeFamily fam = family_from_spec(section.at("model"), true);
    spectral::IndexReport rep = graded_index(fam, index_options(section, cfg));
    out.records.push_back(index_report_json(rep));
    if (!rep.reliable) out.exit_code = kExitUnreliableGap;
}

void run_deform_scan(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("deform_scan");
    expect_keys(section, {"model", "t_values", "gap_floor"}, "deform_scan");
    witten::CylinderModel base = parse_cylinder(section.at("model"), true);
    auto ts = section.at("t_values").get<std::vector<double>>();
    spectral::ScanResult scan =
        spectral::deformation_scan(base, ts, index_options(section, cfg));
    for (const auto& rep : scan.reports) out.records.push_back(index_report_json(rep));
    ordered_json s;
    s["consistent"] = scan.consistent;
    if (scan.t_star) s["t_star"] = *scan.t_star;
    out.records.push_back(std::move(s));
    bool any_reliable = false;
    for (const auto& rep : scan.reports) any_reliable = any_reliable || rep.reliable;
    if (!any_reliable) out.exit_code = kExitUnreliableGap;
}

void run_excision(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("excision");
    expect_keys(section, {"model", "windows", "gap_floor"}, "excision");
    witten::CylinderModel base = parse_cylinder(section.at("model"), true);
    std::vector<std::pair<double, double>> windows;
    for (const auto& w : section.at("windows")) {
        auto v = w.get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("excision windows are [lo, hi] pairs");
        windows.emplace_back(v[0], v[1]);
    }
    spectral::ExcisionRecord rec = excision_sum(base, windows, index_options(section, cfg));
    ordered_json g = index_report_json(rec.global);
    g["role"] = "global";
    out.records.push_back(std::move(g));
    for (const auto& w : rec.windows) {
        ordered_json r = index_report_json(w);
        r["role"] = "window";
        out.records.push_back(std::move(r));
    }
    ordered_json s;
    s["window_sum"] = rec.window_sum;
    s["equal"] = rec.equal;
    out.records.push_back(std::move(s));
    if (!rec.global.reliable) out.exit_code = kExitUnreliableGap;
}

void run_product(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("product");
    expect_keys(section, {"factor_a", "factor_b", "gap_floor"}, "product");
    witten::ModeFamily a = family_from_spec(section.at("factor_a"), true);
    const json& bj = section.at("factor_b");
    std::string kind = bj.value("kind", "cylinder");
    spectral::ProductRecord rec;
    if (kind == "flat-circle") {
        expect_keys(bj, {"kind", "theta", "mode_bound"}, "flat-circle");
        HermitianOperator fiber = witten::flat_circle_operator(bj.at("theta").get<double>(),
                                                               bj.value("mode_bound", 8));
        rec = product_with_fiber(a, fiber, index_options(section, cfg));
    } else if (kind == "trivial") {
        rec = product_with_fiber(a, witten::trivial_even_fiber(), index_options(section, cfg));
    } else {
        witten::ModeFamily b = family_from_spec(bj, true);
        rec = product_of_families(a, b, index_options(section, cfg));
    }
    ordered_json r;
    r["factor_a"] = index_report_json(rec.factor_a);
    r["factor_b"] = index_report_json(rec.factor_b);
    r["combined_super_dim"] = rec.combined_super_dim;
    r["combined_reliable"] = rec.combined_reliable;
    r["anticommutation_residual"] = rec.anticommutation_residual;
    r["verified_pairs"] = rec.verified_pairs;
    r["verified_ok"] = rec.verified_ok;
    out.records.push_back(std::move(r));
    if (!rec.combined_reliable) out.exit_code = kExitUnreliableGap;
}

void run_calculus(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("calculus");
    expect_keys(section, {"bound", "drop_base_fact", "extra_facts"}, "calculus");
    if (!section.contains("bound")) throw ConfigError("calculus: 'bound' is required");
    int64_t bound = section.at("bound").get<int64_t>();
    calculus::SystemOptions opts;
    if (section.contains("drop_base_fact")) {
        std::string drop = section.at("drop_base_fact").get<std::string>();
        if (drop == "cp2")
            opts.include_cp2_fact = false;
        else if (drop == "p1p1")
            opts.include_p1p1_fact = false;
        else
            throw ConfigError("drop_base_fact is 'cp2' or 'p1p1'");
    }
    if (section.contains("extra_facts")) {
        for (const auto& ej : section.at("extra_facts")) {
            expect_keys(ej, {"kind", "a", "b", "value"}, "extra_facts");
            calculus::SymbolKind k = ej.at("kind").get<std::string>() == "RR0"
                                         ? calculus::SymbolKind::RR0
                                         : calculus::SymbolKind::RR1;
            opts.extra_facts.push_back(
                {{{calculus::LocalIndexSymbol{k, ej.at("a").get<int64_t>(),
                                              ej.at("b").get<int64_t>()},
                   1}},
                 ej.at("value").get<int64_t>(),
                 "extra fact"});
        }
    }
    auto system = calculus::generate_system(bound, opts);
    calculus::LocalIndexTable table = calculus::solve(system, bound);
    if (!table.consistent) {
        ordered_json r;
        r["consistent"] = false;
        std::vector<std::string> witness;
        for (size_t id : table.infeasible_witness) witness.push_back(system[id].description);
        r["infeasible_witness"] = witness;
        out.records.push_back(std::move(r));
        out.exit_code = kExitConfig;
        return;
    }
    if (!table.determined) {
        ordered_json r;
        r["consistent"] = true;
        r["determined"] = false;
        std::vector<std::string> frees;
        for (const auto& s : table.free_symbols) frees.push_back(s.to_string());
        r["free_symbols"] = frees;
        out.records.push_back(std::move(r));
        return;
    }
    for (int64_t a = -bound; a <= bound; ++a) {
        for (int64_t b = -bound; b <= bound; ++b) {
            ordered_json r;
            r["a"] = a;
            r["b"] = b;
            r["rr0"] = table.value(calculus::SymbolKind::RR0, a, b);
            r["rr1"] = table.value(calculus::SymbolKind::RR1, a, b);
            out.records.push_back(std::move(r));
        }
    }
}

void run_bs_count(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("bs_count");
    expect_keys(section, {"polygon", "strip", "list_points"}, "bs_count");
    GeometryInput g = parse_geometry(section);
    bsgeom::BSInventory inv =
        g.polygon ? bsgeom::bs_points_polytope(*g.polygon) : bsgeom::bs_points_strip(*g.strip);
    ordered_json summary;
    summary["count"] = inv.count();
    summary["vertices"] = inv.count_stratum(0);
    summary["edge_points"] = inv.count_stratum(1);
    summary["interior_points"] = inv.count_stratum(2);
    if (g.polygon) summary["pick_oracle"] = bsgeom::pick_oracle(*g.polygon);
    if (g.strip) summary["closed_form"] = g.strip->expected_count();
    out.records.push_back(std::move(summary));
    if (section.value("list_points", true)) {
        for (const auto& p : inv.points) out.records.push_back(inventory_point_json(p));
    }
}

void run_rr(const Config& cfg, RunResult& out) {
    const json& section = cfg.root.at("rr");
    expect_keys(section, {"polygon", "strip", "bound"}, "rr");
    if (!section.contains("bound")) throw ConfigError("rr: 'bound' is required");
    int64_t bound = section.at("bound").get<int64_t>();
    GeometryInput g = parse_geometry(section);

    auto system = calculus::generate_system(bound);
    calculus::LocalIndexTable table = calculus::solve(system, bound);

    bsgeom::BSInventory inv;
    bsgeom::WindowPlan plan;
    if (g.polygon) {
        inv = bsgeom::bs_points_polytope(*g.polygon);
        plan = bsgeom::window_plan(*g.polygon);
        inv = bsgeom::with_plan(inv, *g.polygon, plan);
    } else {
        inv = bsgeom::bs_points_strip(*g.strip);
        plan = bsgeom::window_plan(*g.strip);
        inv = bsgeom::with_plan(inv, *g.strip, plan);
    }
    int64_t total = bsgeom::rr_total(inv, table);
    ordered_json r;
    r["rr_total"] = total;
    r["bs_count"] = inv.count();
    r["match"] = total == inv.count();
    r["windows"] = plan.windows.size();
    r["deleted_points"] = plan.deleted.size();
    r["plan_conditions_ok"] = plan.conditions_ok;
    out.records.push_back(std::move(r));
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "fibration-check", "average", "pou",      "goodcover", "spectrum", "index",
        "deform-scan",     "excision", "product", "calculus",  "bs-count", "rr"};
    return names;
}

namespace {

/// Top-level tables each command may consume, beyond the global keys.
const std::map<std::string, std::vector<const char*>>& command_sections() {
    static const std::map<std::string, std::vector<const char*>> sections = {
        {"fibration-check", {"fibration", "holonomy", "potentials"}},
        {"average", {"fibration", "field", "cutoffs"}},
        {"pou", {"fibration", "seeds"}},
        {"goodcover", {"goodcover"}},
        {"spectrum", {"spectrum"}},
        {"index", {"index"}},
        {"deform-scan", {"deform_scan"}},
        {"excision", {"excision"}},
        {"product", {"product"}},
        {"calculus", {"calculus"}},
        {"bs-count", {"bs_count"}},
        {"rr", {"rr"}},
    };
    return sections;
}

void check_top_level(const std::string& command, const Config& cfg) {
    auto it = command_sections().find(command);
    if (it == command_sections().end()) throw ConfigError("unknown command '" + command + "'");
    for (const auto& [key, value] : cfg.root.items()) {
        bool ok = key == "seed" || key == "threads";
        for (const char* s : it->second) ok = ok || key == s;
        if (!ok)
            throw ConfigError("config: key '" + key + "' is not used by command '" + command +
                              "'");
    }
    if (!cfg.root.contains(it->second.front()))
        throw ConfigError("config: command '" + command + "' needs a '" +
                          std::string(it->second.front()) + "' table");
}

}  // namespace

RunResult run(const std::string& command, const Config& cfg) {
    check_top_level(command, cfg);
    RunResult out;
    try {
        if (command == "fibration-check")
            run_fibration_check(cfg, out);
        else if (command == "average")
            run_average(cfg, out);
        else if (command == "pou")
            run_pou(cfg, out);
        else if (command == "goodcover")
            run_goodcover(cfg, out);
        else if (command == "spectrum")
            run_spectrum(cfg, out);
        else if (command == "index")
            run_index(cfg, out);
        else if (command == "deform-scan")
            run_deform_scan(cfg, out);
        else if (command == "excision")
            run_excision(cfg, out);
        else if (command == "product")
            run_product(cfg, out);
        else if (command == "calculus")
            run_calculus(cfg, out);
        else if (command == "bs-count")
            run_bs_count(cfg, out);
        else if (command == "rr")
            run_rr(cfg, out);
    } catch (const json::exception& e) {
        // missing keys and type mismatches surface as schema errors
        throw ConfigError(std::string("config: ") + e.what());
    }

    for (auto& r : out.records) {
        r["digest"] = cfg.digest;
        r["version"] = kVersion;
    }
    return out;
}

std::string to_json_lines(const RunResult& result) {
    std::string out;
    for (const auto& r : result.records) {
        out += r.dump();
        out += "\n";
    }
    return out;
}

std::string to_csv(const RunResult& result) {
    if (result.records.empty()) return "";
    // columns: scalar keys in first-seen order
    std::vector<std::string> cols;
    for (const auto& r : result.records) {
        for (const auto& [k, v] : r.items()) {
            if (v.is_structured()) continue;
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        }
    }
    std::string out;
    for (size_t i = 0; i < cols.size(); ++i) out += cols[i] + (i + 1 < cols.size() ? "," : "\n");
    for (const auto& r : result.records) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (r.contains(cols[i])) {
                const auto& v = r.at(cols[i]);
                out += v.is_string() ? v.get<std::string>() : v.dump();
            }
            out += i + 1 < cols.size() ? "," : "\n";
        }
    }
    return out;
}

std::string to_plot_data(const RunResult& result) {
    std::string out;
    int64_t i = 0;
    char buf[64];
    for (const auto& r : result.records) {
        if (r.contains("lambda")) {
            std::snprintf(buf, sizeof(buf), "%lld %.17g\n", static_cast<long long>(i++),
                          r.at("lambda").get<double>());
            out += buf;
        } else if (r.contains("eigen_head")) {
            for (const auto& v : r.at("eigen_head")) {
                std::snprintf(buf, sizeof(buf), "%lld %.17g\n", static_cast<long long>(i++),
                              v.get<double>());
                out += buf;
            }
        }
    }
    return out;
}

ScalarField emit_profile(double a, double eps, double grid_min, double grid_max, int samples) {
    if (samples < 2) throw Error("emit_profile: need at least two samples");
    witten::RadialProfile prof = witten::RadialProfile::cutoff(a, eps);
    ScalarField f(samples);
    for (int i = 0; i < samples; ++i) {
        double x = grid_min + (grid_max - grid_min) * i / (samples - 1);
        f[i] = prof(x);
    }
    return f;
}

}  // namespace fiberloc::driver
