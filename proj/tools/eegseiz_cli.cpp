// Batch front end for the seizure-analysis pipeline. Talks to the shared
// library exclusively through the C API in eegseiz.h.
//
// Exit codes: 0 success, 1 processing failure, 2 usage/config error.
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eegseiz.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProcessing = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
    void operator()(eegseiz_config* c) const { eegseiz_config_free(c); }
};
using ConfigHandle = std::unique_ptr<eegseiz_config, ConfigDeleter>;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string band;
    std::string classifier;
    std::string aggregate;
    long long seed = -1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path,
                    "Config file path (default: $EEGSEIZ_CONFIG if set)");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--seed", flags.seed, "Random seed");
    cmd->add_option("--band", flags.band, "Restrict to one rhythm")
        ->check(CLI::IsMember({"delta", "theta", "alpha", "beta", "gamma"}));
    cmd->add_option("--classifier", flags.classifier, "Classifier mode")
        ->check(CLI::IsMember({"eq6", "pooled"}));
    cmd->add_option("--aggregate", flags.aggregate, "Segment-to-event aggregation")
        ->check(CLI::IsMember({"median", "mean"}));
}

ConfigHandle make_config(const CommonFlags& flags, int& exit_code) {
    exit_code = kExitOk;
    std::string path = flags.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("EEGSEIZ_CONFIG")) path = env;
    }
    ConfigHandle config(path.empty() ? eegseiz_config_default()
                                     : eegseiz_config_load(path.c_str()));
    if (!config) {
        std::fprintf(stderr, "error: %s\n", eegseiz_last_error());
        exit_code = kExitUsage;
        return config;
    }
    auto apply = [&](const char* key, const std::string& value) {
        if (value.empty()) return true;
        if (eegseiz_config_set(config.get(), key, value.c_str()) != EEGSEIZ_OK) {
            std::fprintf(stderr, "error: %s\n", eegseiz_last_error());
            exit_code = kExitUsage;
            return false;
        }
        return true;
    };
    if (!apply("out_dir", flags.out_dir)) return config;
    if (!apply("band", flags.band)) return config;
    if (!apply("classifier", flags.classifier)) return config;
    if (!apply("aggregate", flags.aggregate)) return config;
    if (flags.seed >= 0 && !apply("seed", std::to_string(flags.seed))) return config;
    return config;
}

std::vector<const char*> c_paths(const std::vector<std::string>& paths) {
    std::vector<const char*> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(p.c_str());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EEG seizure classification pipeline"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonFlags flags;
    std::vector<std::string> inputs;

    CLI::App* features = app.add_subcommand(
        "features", "Extract per-segment band features from EEG records");
    add_common_flags(features, flags);
    features->add_option("inputs", inputs, "Record files (.csv or .eegr)")->required();

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Leave-one-out classification report plus scatter data");
    add_common_flags(evaluate, flags);
    evaluate->add_option("inputs", inputs, "Feature files")->required();

    CLI::App* correlate = app.add_subcommand(
        "correlate", "Per-band per-class Pearson correlation report");
    add_common_flags(correlate, flags);
    correlate->add_option("inputs", inputs, "Feature files")->required();

    CLI::App* selftest =
        app.add_subcommand("selftest", "Run the built-in numerical checks");
    long long selftest_seed = 0;
    bool corrupt_hook = false;
    selftest->add_option("--seed", selftest_seed, "Random seed");
    selftest->add_flag("--corrupt-dwt-hook", corrupt_hook,
                       "Inject a wavelet fault (testing aid)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (selftest->parsed()) {
        char* summary = nullptr;
        int all_passed = 0;
        const eegseiz_status st = eegseiz_run_selftest(
            static_cast<uint64_t>(selftest_seed), corrupt_hook ? 1 : 0, &summary,
            &all_passed);
        if (st != EEGSEIZ_OK) {
            std::fprintf(stderr, "error: %s\n", eegseiz_last_error());
            return kExitProcessing;
        }
        std::fputs(summary, stdout);
        eegseiz_string_free(summary);
        return all_passed ? kExitOk : kExitProcessing;
    }

    int exit_code = kExitOk;
    ConfigHandle config = make_config(flags, exit_code);
    if (exit_code != kExitOk) return exit_code;

    const std::vector<const char*> paths = c_paths(inputs);
    eegseiz_status st = EEGSEIZ_OK;
    if (features->parsed()) {
        size_t failed = 0;
        st = eegseiz_run_features(config.get(), paths.data(), paths.size(), &failed);
        if (st == EEGSEIZ_ERR_PROCESSING)
            std::fprintf(stderr, "%zu input(s) failed:\n%s", failed,
                         eegseiz_last_error());
    } else if (evaluate->parsed()) {
        st = eegseiz_run_evaluate(config.get(), paths.data(), paths.size());
    } else if (correlate->parsed()) {
        st = eegseiz_run_correlate(config.get(), paths.data(), paths.size());
    }

    if (st == EEGSEIZ_OK) return kExitOk;
    if (st != EEGSEIZ_ERR_PROCESSING)
        std::fprintf(stderr, "error: %s\n", eegseiz_last_error());
    return kExitProcessing;
}
