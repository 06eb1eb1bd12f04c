#include "miri/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include "miri/errors.hpp"

namespace miri {

MetricsReport evaluate_imputation(const Matrix& imputed, const Matrix& truth,
                                  const Matrix& mask) {
    if (!imputed.same_shape(truth) || !imputed.same_shape(mask))
        throw MetricError("evaluate: imputed, truth and mask shapes must match");

    MetricsReport report;
    report.rows = imputed.rows();
    report.cells_evaluated = imputed.size();
    report.rmse = rmse_all(imputed, truth);
    report.mae = mae_all(imputed, truth);
    report.rmse_missing = rmse_masked(imputed, truth, mask);
    report.mae_missing = mae_masked(imputed, truth, mask);

    // Standardize by the truth's per-feature moments so no feature dominates
    // the kernel; features with zero spread are left unscaled.
    const std::size_t n = truth.rows(), d = truth.cols();
    std::vector<double> mean(d, 0.0), stddev(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += truth(i, j);
        mean[j] = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dlt = truth(i, j) - mean[j];
            ss += dlt * dlt;
        }
        const double var = ss / static_cast<double>(n);
        if (var > 0.0) stddev[j] = std::sqrt(var);
    }
    auto scale = [&](const Matrix& x) {
        Matrix out = x;
        for (std::size_t i = 0; i < out.rows(); ++i) {
            double* row = out.row(i);
            for (std::size_t j = 0; j < d; ++j) row[j] = (row[j] - mean[j]) / stddev[j];
        }
        return out;
    };
    report.mmd = mmd_rbf(scale(imputed), scale(truth));
    if (d <= kMiMaxDims) report.mi = mi_plugin(scale(imputed), mask);
    return report;
}

ToyRunArtifacts run_toy_seed(std::uint64_t seed, const MiriConfig& cfg,
                             const std::string& out_imputed, const std::string& out_trace) {
    Rng data_rng(mix_seed(seed, 1));
    const Matrix truth = sample_mixture(toy_mixture(), kToySampleCount, data_rng);

    Rng mask_rng(mix_seed(seed, 2));
    const Matrix mask = gen_mcar(truth.rows(), truth.cols(), kToyMissingRate, mask_rng);
    const MaskedDataset observed = apply_mask(truth, mask);

    MiriConfig run_cfg = cfg;
    run_cfg.seed = mix_seed(seed, 3);

    MiriResult result = run_miri(observed, run_cfg, &truth);

    ToyRunArtifacts artifacts;
    artifacts.metrics = evaluate_imputation(result.state.x, truth, mask);
    artifacts.trace = std::move(result.trace);
    artifacts.config_hash = run_cfg.hash();

    const std::string header =
        "config_hash=" + artifacts.config_hash + " seed=" + std::to_string(seed);
    if (!out_imputed.empty())
        write_csv(out_imputed, result.state.x, nullptr, observed.feature_names, header);
    if (!out_trace.empty()) {
        const std::string csv = artifacts.trace.to_csv(header);
        const std::string tmp = out_trace + ".tmp";
        {
            std::ofstream f(tmp, std::ios::trunc);
            if (!f) throw IoError("cannot open '" + tmp + "' for writing");
            f << csv;
        }
        std::error_code ec;
        std::filesystem::rename(tmp, out_trace, ec);
        if (ec) throw IoError("cannot rename '" + tmp + "'");
    }
    return artifacts;
}

SummaryStat summarize(const std::vector<double>& values) {
    SummaryStat s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    return s;
}

namespace {

std::size_t thread_count_from_env(std::size_t n_jobs) {
    std::size_t threads = 1;
    if (const char* env = std::getenv("MIRI_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) threads = static_cast<std::size_t>(parsed);
    }
    return std::min(threads, n_jobs);
}

}  // namespace

std::vector<ToyRunArtifacts> run_toy_seeds(const std::vector<std::uint64_t>& seeds,
                                           const MiriConfig& cfg, const std::string& out_dir) {
    auto paths_for = [&](std::uint64_t seed) -> std::pair<std::string, std::string> {
        if (out_dir.empty()) return {"", ""};
        const std::string base = out_dir + "/seed_" + std::to_string(seed);
        return {base + "_imputed.csv", base + "_trace.csv"};
    };
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    std::vector<ToyRunArtifacts> results(seeds.size());
    const std::size_t threads = thread_count_from_env(seeds.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const auto [imp, tr] = paths_for(seeds[i]);
            results[i] = run_toy_seed(seeds[i], cfg, imp, tr);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= seeds.size()) return;
                const auto [imp, tr] = paths_for(seeds[i]);
                results[i] = run_toy_seed(seeds[i], cfg, imp, tr);
            }
        }));
    }
    for (auto& f : workers) f.get();
    return results;
}

}  // namespace miri
