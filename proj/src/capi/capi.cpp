#include "fiberloc/fiberloc.h"

#include <string>

#include "bsgeom/geometry.hpp"
#include "driver/config.hpp"
#include "driver/run.hpp"
#include "spectral/eigen.hpp"
#include "spectral/index.hpp"

using fiberloc::driver::Config;
using fiberloc::driver::RunResult;

struct fiberloc_config {
    Config cfg;
};

struct fiberloc_result {
    RunResult result;
    // lazily built strings handed to the caller
    std::string json_lines;
    std::string csv;
    std::string plot;
    std::vector<std::string> record_cache;
};

namespace {

thread_local std::string g_last_error;

fiberloc_status set_error(fiberloc_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <typename Fn>
fiberloc_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const fiberloc::driver::ConfigError& e) {
        return set_error(FIBERLOC_ERR_CONFIG, e.what());
    } catch (const fiberloc::spectral::NumericalNonConvergence& e) {
        return set_error(FIBERLOC_ERR_NONCONVERGENCE, e.what());
    } catch (const fiberloc::spectral::UnreliableGap& e) {
        return set_error(FIBERLOC_ERR_UNRELIABLE_GAP, e.what());
    } catch (const fiberloc::ConstructionError& e) {
        return set_error(FIBERLOC_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return set_error(FIBERLOC_ERR_INTERNAL, e.what());
    }
}

}  // namespace

extern "C" {

const char* fiberloc_version(void) { return "0.1.0"; }

const char* fiberloc_status_name(fiberloc_status status) {
    switch (status) {
        case FIBERLOC_OK: return "ok";
        case FIBERLOC_ERR_CONFIG: return "config-or-validation-error";
        case FIBERLOC_ERR_NONCONVERGENCE: return "numerical-non-convergence";
        case FIBERLOC_ERR_UNRELIABLE_GAP: return "unreliable-gap";
        case FIBERLOC_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case FIBERLOC_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* fiberloc_last_error(void) { return g_last_error.c_str(); }

fiberloc_status fiberloc_config_load(const char* path, fiberloc_config** out) {
    if (!path || !out) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new fiberloc_config{Config::from_file(path)};
        return FIBERLOC_OK;
    });
}

fiberloc_status fiberloc_config_parse(const char* json_text, fiberloc_config** out) {
    if (!json_text || !out) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() {
        *out = new fiberloc_config{Config::from_text(json_text)};
        return FIBERLOC_OK;
    });
}

const char* fiberloc_config_digest(const fiberloc_config* cfg) {
    return cfg ? cfg->cfg.digest.c_str() : "";
}

fiberloc_status fiberloc_config_set_threads(fiberloc_config* cfg, int threads) {
    if (!cfg) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null config");
    if (threads < 1) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "threads must be >= 1");
    cfg->cfg.root["threads"] = threads;
    return FIBERLOC_OK;
}

void fiberloc_config_free(fiberloc_config* cfg) { delete cfg; }

fiberloc_status fiberloc_run(const fiberloc_config* cfg, const char* command,
                             fiberloc_result** out) {
    if (!cfg || !command || !out)
        return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() {
        RunResult result = fiberloc::driver::run(command, cfg->cfg);
        auto* handle = new fiberloc_result{std::move(result), {}, {}, {}, {}};
        *out = handle;
        switch (handle->result.exit_code) {
            case fiberloc::driver::kExitOk: return FIBERLOC_OK;
            case fiberloc::driver::kExitUnreliableGap:
                return set_error(FIBERLOC_ERR_UNRELIABLE_GAP,
                                 "index refused: no reliable spectral gap");
            case fiberloc::driver::kExitNonConvergence:
                return set_error(FIBERLOC_ERR_NONCONVERGENCE, "numerical non-convergence");
            default:
                return set_error(FIBERLOC_ERR_CONFIG, "validation failed (see records)");
        }
    });
}

size_t fiberloc_result_count(const fiberloc_result* res) {
    return res ? res->result.records.size() : 0;
}

const char* fiberloc_result_record(const fiberloc_result* res, size_t i) {
    if (!res || i >= res->result.records.size()) return nullptr;
    auto* mut = const_cast<fiberloc_result*>(res);
    if (mut->record_cache.size() != res->result.records.size()) {
        mut->record_cache.clear();
        for (const auto& r : res->result.records) mut->record_cache.push_back(r.dump());
    }
    return mut->record_cache[i].c_str();
}

const char* fiberloc_result_json_lines(fiberloc_result* res) {
    if (!res) return "";
    if (res->json_lines.empty()) res->json_lines = fiberloc::driver::to_json_lines(res->result);
    return res->json_lines.c_str();
}

const char* fiberloc_result_csv(fiberloc_result* res) {
    if (!res) return "";
    if (res->csv.empty()) res->csv = fiberloc::driver::to_csv(res->result);
    return res->csv.c_str();
}

const char* fiberloc_result_plot_data(fiberloc_result* res) {
    if (!res) return "";
    if (res->plot.empty()) res->plot = fiberloc::driver::to_plot_data(res->result);
    return res->plot.c_str();
}

int fiberloc_result_exit_code(const fiberloc_result* res) {
    return res ? res->result.exit_code : fiberloc::driver::kExitConfig;
}

void fiberloc_result_free(fiberloc_result* res) { delete res; }

fiberloc_status fiberloc_bs_count_strip(long long a, long long b, long long c,
                                        long long* count) {
    if (!count) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        fiberloc::bsgeom::QuotientStrip s{a, b, c};
        *count = fiberloc::bsgeom::bs_points_strip(s).count();
        return FIBERLOC_OK;
    });
}

fiberloc_status fiberloc_emit_profile(double a, double eps, double grid_min, double grid_max,
                                      int samples, double* values) {
    if (!values) return set_error(FIBERLOC_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&]() {
        fiberloc::ScalarField f =
            fiberloc::driver::emit_profile(a, eps, grid_min, grid_max, samples);
        for (int i = 0; i < samples; ++i) values[i] = f[i];
        return FIBERLOC_OK;
    });
}

}  // extern "C"
