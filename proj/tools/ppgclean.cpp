// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// ppgclean: synthesize noisy PPG corpora, detect noisy windows, route them
// through an image translator and evaluate heart-rate recovery.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppgclean/detector.hpp"
#include "ppgclean/kernels/kernels.hpp"
#include "ppgclean/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ppgclean;

namespace {

std::string dashed(std::string key) {
    for (char& c : key) {
        if (c == '_') c = '-';
    }
    return key;
}

void print_report(const EvalReport& report) {
    const EvalRow& a = report.averages;
    std::cout << "rows: " << report.rows.size() << "\n"
              << "average S/N (dB): " << a.snr_db << "\n"
              << "average RMSE gen/noisy (BPM): " << a.rmse_gen_bpm << " / " << a.rmse_noisy_bpm
              << "  improvement " << a.rmse_improvement << "x\n"
              << "average PPE gen/noisy (BPM): " << a.ppe_gen_bpm << " / " << a.ppe_noisy_bpm << "  improvement "
              << a.ppe_improvement << "x\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PPG motion-artifact removal toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_file;
    app.add_option("--config", config_file, "key = value config file");
    std::vector<std::string> sets;
    app.add_option("--set", sets, "override a config key (key=value); repeatable");
    std::map<std::string, std::string> flag_values;
    for (const std::string& key : config_keys()) {
        app.add_option("--" + dashed(key), flag_values[key], "config override: " + key);
    }
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "print the selected kernel set");

    auto* synth = app.add_subcommand("synth", "build the noisy corpus and manifest");

    std::vector<std::string> files;
    auto* detect = app.add_subcommand("detect", "classify windows of signal files");
    detect->add_option("files", files, "signal CSV files");

    auto* denoise = app.add_subcommand("denoise", "route noisy windows through the translator");
    denoise->add_option("files", files, "signal CSV files");

    auto* eval = app.add_subcommand("eval", "score reconstructions against the clean reference");
    std::string rows_csv;
    eval->add_option("--rows", rows_csv, "aggregate an existing row table instead");

    auto* images = app.add_subcommand("images", "export every window as a PGM image");
    images->add_option("files", files, "signal CSV files");
    std::string role = "clean";
    images->add_option("--role", role, "clean | noisy")->check(CLI::IsMember({"clean", "noisy"}));

    auto* init = app.add_subcommand("init-weights", "write a detector weights file");
    std::string init_out;
    init->add_option("--out", init_out, "destination path")->required();
    bool zero = false;
    init->add_flag("--zero", zero, "all-zero coefficients instead of random");

    CLI11_PARSE(app, argc, argv);

    try {
        std::map<std::string, std::string> overrides;
        for (const auto& [key, value] : flag_values) {
            if (!value.empty()) overrides[key] = value;
        }
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
            }
            overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        const PipelineConfig config =
            load_config(config_file ? std::optional<fs::path>(*config_file) : std::nullopt, overrides);
        if (verbose) {
            std::cerr << "kernels: " << kernels::active_kernels().name << '\n';
        }
        const std::vector<fs::path> paths(files.begin(), files.end());

        if (*synth) {
            const auto summary = cmd_synth(config);
            std::cout << summary.segments << " segments; manifest " << summary.manifest.string() << '\n';
        } else if (*detect) {
            const auto rows = cmd_detect(config, paths);
            std::size_t noisy = 0;
            for (const auto& r : rows) noisy += r.noisy ? 1 : 0;
            std::cout << rows.size() << " windows, " << noisy << " labeled noisy\n";
        } else if (*denoise) {
            const auto summary = cmd_denoise(config, paths);
            std::cout << summary.provenance.size() << " windows processed\n";
            if (summary.missing > 0) {
                std::cerr << "error [" << to_string(ErrorKind::MissingTranslation) << "]: " << summary.missing
                          << " windows had no translated image\n";
                return exit_code_for(ErrorKind::MissingTranslation);
            }
        } else if (*eval) {
            print_report(rows_csv.empty() ? cmd_eval(config) : cmd_eval_rows(config, rows_csv));
        } else if (*images) {
            const auto n = cmd_images(config, paths, role == "noisy" ? ImageRole::Noisy : ImageRole::Clean);
            std::cout << n << " images written\n";
        } else if (*init) {
            save_weights(zero ? zero_weights() : random_weights(config.seed), init_out);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
