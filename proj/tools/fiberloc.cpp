// Command-line front end; talks to the library exclusively through the
// shared C API.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "fiberloc/fiberloc.h"

namespace {

int fail(const std::string& msg, int code) {
    std::cerr << "fiberloc: " << msg << "\n";
    return code;
}

bool write_file(const std::string& path, const char* text) {
    std::ofstream out(path);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"localized index computations on fibered model geometries"};
    app.set_version_flag("--version", fiberloc_version());

    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string plot_path;
    int threads = 0;

    const char* command_list[] = {"fibration-check", "average",  "pou",     "goodcover",
                                  "spectrum",        "index",    "deform-scan", "excision",
                                  "product",         "calculus", "bs-count",    "rr"};

    std::string chosen;
    for (const char* name : command_list) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();  // global options may follow the subcommand
        sub->callback([&chosen, name]() { chosen = name; });
    }
    app.require_subcommand(1);
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_path, "write records to a file instead of stdout");
    app.add_option("--format", format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "worker threads (overrides the config key)");
    app.add_option("--plot-data", plot_path, "write a two-column spectrum dump");

    CLI11_PARSE(app, argc, argv);

    fiberloc_config* cfg = nullptr;
    fiberloc_status st = fiberloc_config_load(config_path.c_str(), &cfg);
    if (st != FIBERLOC_OK) return fail(fiberloc_last_error(), 2);
    if (threads > 0) {
        st = fiberloc_config_set_threads(cfg, threads);
        if (st != FIBERLOC_OK) {
            fiberloc_config_free(cfg);
            return fail(fiberloc_last_error(), 2);
        }
    }

    fiberloc_result* res = nullptr;
    st = fiberloc_run(cfg, chosen.c_str(), &res);
    int exit_code = res ? fiberloc_result_exit_code(res) : 2;
    if (st != FIBERLOC_OK && !res) {
        fiberloc_config_free(cfg);
        switch (st) {
            case FIBERLOC_ERR_NONCONVERGENCE: return fail(fiberloc_last_error(), 3);
            case FIBERLOC_ERR_UNRELIABLE_GAP: return fail(fiberloc_last_error(), 4);
            default: return fail(fiberloc_last_error(), 2);
        }
    }

    const char* text = format == "csv" ? fiberloc_result_csv(res)
                                       : fiberloc_result_json_lines(res);
    bool io_ok = true;
    if (out_path.empty()) {
        std::cout << text;
    } else {
        io_ok = write_file(out_path, text);
    }
    if (!plot_path.empty()) io_ok = io_ok && write_file(plot_path, fiberloc_result_plot_data(res));

    if (st != FIBERLOC_OK && exit_code == 0) exit_code = static_cast<int>(st);
    fiberloc_result_free(res);
    fiberloc_config_free(cfg);
    if (!io_ok) return fail("cannot write output file", 2);
    return exit_code;
}
