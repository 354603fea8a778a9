#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "eegseiz.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("eegseiz_capi_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("version and error reset") {
    CHECK(std::strcmp(eegseiz_version(), "0.1.0") == 0);
    double d = 0.0;
    CHECK(eegseiz_ggd_pdf(0.0, 1.0, 2.0, &d) == EEGSEIZ_OK);
    CHECK(std::strlen(eegseiz_last_error()) == 0);
}

TEST_CASE("config set accepts the documented keys and rejects others") {
    eegseiz_config* cfg = eegseiz_config_default();
    REQUIRE(cfg != nullptr);
    CHECK(eegseiz_config_set(cfg, "out_dir", "/tmp/x") == EEGSEIZ_OK);
    CHECK(eegseiz_config_set(cfg, "seed", "42") == EEGSEIZ_OK);
    CHECK(eegseiz_config_set(cfg, "band", "gamma") == EEGSEIZ_OK);
    CHECK(eegseiz_config_set(cfg, "band", "") == EEGSEIZ_OK);
    CHECK(eegseiz_config_set(cfg, "classifier", "pooled") == EEGSEIZ_OK);
    CHECK(eegseiz_config_set(cfg, "aggregate", "mean") == EEGSEIZ_OK);

    CHECK(eegseiz_config_set(cfg, "band", "omega") == EEGSEIZ_ERR_DOMAIN);
    CHECK(std::string(eegseiz_last_error()).find("omega") != std::string::npos);
    CHECK(eegseiz_config_set(cfg, "classifier", "svm") == EEGSEIZ_ERR_DOMAIN);
    CHECK(eegseiz_config_set(cfg, "nonsense", "1") == EEGSEIZ_ERR_DOMAIN);
    CHECK(eegseiz_config_set(nullptr, "seed", "1") == EEGSEIZ_ERR_DOMAIN);

    char* json = eegseiz_config_to_json(cfg);
    REQUIRE(json != nullptr);
    const std::string text(json);
    eegseiz_string_free(json);
    CHECK(text.find("\"out_dir\": \"/tmp/x\"") != std::string::npos);
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    CHECK(text.find("\"aggregate\": \"mean\"") != std::string::npos);
    CHECK(text.find("\"mode\": \"pooled\"") != std::string::npos);
    eegseiz_config_free(cfg);
}

TEST_CASE("config load reports parse failures through last_error") {
    const fs::path dir = fresh_dir("config");
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{broken";
    CHECK(eegseiz_config_load(bad.string().c_str()) == nullptr);
    CHECK(std::strlen(eegseiz_last_error()) > 0);

    const fs::path good = dir / "good.json";
    std::ofstream(good) << R"({"seed": 7, "out_dir": "somewhere"})";
    eegseiz_config* cfg = eegseiz_config_load(good.string().c_str());
    REQUIRE(cfg != nullptr);
    char* json = eegseiz_config_to_json(cfg);
    CHECK(std::string(json).find("\"seed\": 7") != std::string::npos);
    eegseiz_string_free(json);
    eegseiz_config_free(cfg);
}

TEST_CASE("record read and info") {
    const fs::path dir = fresh_dir("record");
    const fs::path csv = dir / "rec.csv";
    {
        std::ofstream out(csv);
        out << "fs=256\n";
        out << "c0,c1\n";
        for (int i = 0; i < 512; ++i) out << 0.5 * i << "," << -0.25 * i << "\n";
    }
    eegseiz_record* rec = eegseiz_record_read(csv.string().c_str(), EEGSEIZ_FORMAT_CSV);
    REQUIRE(rec != nullptr);
    uint32_t channels = 0;
    uint64_t samples = 0;
    double fs = 0.0;
    CHECK(eegseiz_record_info(rec, &channels, &samples, &fs) == EEGSEIZ_OK);
    CHECK(channels == 2);
    CHECK(samples == 512);
    CHECK(fs == 256.0);
    eegseiz_record_free(rec);

    CHECK(eegseiz_record_read((dir / "missing.csv").string().c_str(),
                              EEGSEIZ_FORMAT_CSV) == nullptr);
    CHECK(std::strlen(eegseiz_last_error()) > 0);
    CHECK(eegseiz_record_info(nullptr, &channels, &samples, &fs) ==
          EEGSEIZ_ERR_DOMAIN);
}

TEST_CASE("ggd primitives") {
    double d = 0.0;
    CHECK(eegseiz_ggd_pdf(0.0, 1.0, 1.0, &d) == EEGSEIZ_OK);
    CHECK(d == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eegseiz_ggd_pdf(0.0, -1.0, 2.0, &d) == EEGSEIZ_ERR_DOMAIN);

    std::mt19937_64 rng(404);
    std::normal_distribution<double> dist;
    std::vector<double> samples(20000);
    for (double& v : samples) v = dist(rng);
    double a = 0.0, b = 0.0;
    int iters = 0, converged = 0;
    CHECK(eegseiz_ggd_estimate(samples.data(), samples.size(), &a, &b, &iters,
                               &converged) == EEGSEIZ_OK);
    CHECK(converged == 1);
    CHECK(b == doctest::Approx(2.0).epsilon(0.1 / 2.0));
    CHECK(a == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));

    CHECK(eegseiz_ggd_estimate(samples.data(), 4, &a, &b, &iters, &converged) ==
          EEGSEIZ_ERR_DOMAIN);
    CHECK(eegseiz_ggd_estimate(nullptr, 100, &a, &b, &iters, &converged) ==
          EEGSEIZ_ERR_DOMAIN);
}

TEST_CASE("correlation primitives") {
    const double x[] = {1.0, 2.0, 3.0, 4.0};
    const double y[] = {2.0, 1.0, 4.0, 3.0};
    double r = 0.0;
    CHECK(eegseiz_pearson_r(x, y, 4, &r) == EEGSEIZ_OK);
    CHECK(r == doctest::Approx(0.6).epsilon(1e-12));

    const double flat[] = {1.0, 1.0, 1.0, 1.0};
    CHECK(eegseiz_pearson_r(flat, y, 4, &r) == EEGSEIZ_ERR_DOMAIN);
    CHECK(std::string(eegseiz_last_error()).find("zero-variance") !=
          std::string::npos);

    double p = 0.0;
    CHECK(eegseiz_pearson_p(0.88, 18, &p) == EEGSEIZ_OK);
    CHECK(p < 0.001);
    double lo = 0.0, hi = 0.0;
    CHECK(eegseiz_fisher_ci95(0.88, 18, &lo, &hi) == EEGSEIZ_OK);
    CHECK(lo == doctest::Approx(0.70).epsilon(0.015));
    CHECK(hi == doctest::Approx(0.95).epsilon(0.011));
}

TEST_CASE("butterworth gain probe") {
    double gain = 0.0;
    CHECK(eegseiz_butterworth_gain(0, 2, 100.0, 256.0, 100.0, &gain) == EEGSEIZ_OK);
    CHECK(gain == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
    CHECK(eegseiz_butterworth_gain(1, 1, 30.0, 256.0, 30.0, &gain) == EEGSEIZ_OK);
    CHECK(gain == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
    CHECK(eegseiz_butterworth_gain(0, 2, 200.0, 256.0, 10.0, &gain) ==
          EEGSEIZ_ERR_DOMAIN);  // cutoff at/above Nyquist
}

TEST_CASE("selftest through the C surface") {
    char* summary = nullptr;
    int all_passed = -1;
    CHECK(eegseiz_run_selftest(3, 0, &summary, &all_passed) == EEGSEIZ_OK);
    REQUIRE(summary != nullptr);
    CHECK(all_passed == 1);
    CHECK(std::string(summary).find("PASS") != std::string::npos);
    eegseiz_string_free(summary);

    summary = nullptr;
    CHECK(eegseiz_run_selftest(3, 1, &summary, &all_passed) == EEGSEIZ_OK);
    REQUIRE(summary != nullptr);
    CHECK(all_passed == 0);
    CHECK(std::string(summary).find("FAIL dwt_round_trip") != std::string::npos);
    eegseiz_string_free(summary);
}

TEST_CASE("feature batch reports partial failure and writes a manifest") {
    const fs::path dir = fresh_dir("batch");
    const fs::path csv = dir / "rec.csv";
    {
        std::ofstream out(csv);
        out << "fs=256\n";
        out << "c0\n";
        std::mt19937_64 rng(7);
        std::normal_distribution<double> dist;
        for (int i = 0; i < 2560; ++i) out << dist(rng) << "\n";
    }
    eegseiz_config* cfg = eegseiz_config_default();
    REQUIRE(eegseiz_config_set(cfg, "out_dir", (dir / "out").string().c_str()) ==
            EEGSEIZ_OK);

    const std::string good = csv.string();
    const std::string missing = (dir / "missing.csv").string();
    const char* mixed[] = {good.c_str(), missing.c_str()};
    size_t failed = 0;
    CHECK(eegseiz_run_features(cfg, mixed, 2, &failed) == EEGSEIZ_ERR_PROCESSING);
    CHECK(failed == 1);
    CHECK(std::string(eegseiz_last_error()).find("missing.csv") != std::string::npos);

    const char* ok[] = {good.c_str()};
    CHECK(eegseiz_run_features(cfg, ok, 1, &failed) == EEGSEIZ_OK);
    CHECK(failed == 0);
    CHECK(fs::exists(dir / "out" / "rec.features.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));

    CHECK(eegseiz_run_features(nullptr, ok, 1, &failed) == EEGSEIZ_ERR_DOMAIN);
    eegseiz_config_free(cfg);
}
