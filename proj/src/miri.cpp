#include "miri/miri.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "miri/errors.hpp"
#include "miri/metrics.hpp"

namespace miri {

namespace {

void append_cell(std::ostringstream& out, double v) {
    out << ',';
    if (std::isnan(v)) return;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

std::string DiagnosticsTrace::to_csv(const std::string& header_comment) const {
    std::ostringstream out;
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "iteration,loss_first,loss_final,loss_mean,rmse,mae,mmd,mi\n";
    for (const auto& r : records) {
        std::ostringstream line;
        line << r.iteration;
        append_cell(line, r.loss_first);
        append_cell(line, r.loss_final);
        append_cell(line, r.loss_mean);
        append_cell(line, r.rmse);
        append_cell(line, r.mae);
        append_cell(line, r.mmd);
        append_cell(line, r.mi);
        out << line.str() << "\n";
    }
    return out.str();
}

MiriResult run_miri(const MaskedDataset& ds, const MiriConfig& cfg, const Matrix* ground_truth,
                    const IterationObserver& observer) {
    ds.validate();
    cfg.validate(ds.n_rows());
    if (ground_truth && !ground_truth->same_shape(ds.raw))
        throw ShapeError("run_miri: ground truth shape mismatch");

    auto [ds_std, standardizer] = standardize(ds);
    Matrix truth_std;
    if (ground_truth) truth_std = standardizer.transform(*ground_truth);

    Rng rng(cfg.seed);
    ImputationState state = initial_impute(ds_std, cfg.init, rng);

    MiriResult result;
    result.standardizer = standardizer;
    const bool want_mi = ds.n_cols() <= kMiMaxDims;

    VelocityModel previous;
    for (std::size_t t = 1; t <= cfg.outer_iterations; ++t) {
        try {
            TrainResult trained =
                train_velocity(state, cfg, rng, cfg.warm_start && t > 1 ? &previous : nullptr);
            state = impute_once(state, trained.model, cfg.euler_steps);
            if (!pinning_holds(state))
                throw SolverError("observed entries changed during imputation");
            if (cfg.warm_start) previous = trained.model;

            IterationRecord rec;
            rec.iteration = t;
            rec.loss_first = trained.losses.front();
            rec.loss_final = trained.losses.back();
            rec.loss_mean = std::accumulate(trained.losses.begin(), trained.losses.end(), 0.0) /
                            static_cast<double>(trained.losses.size());
            if (ground_truth) {
                rec.rmse = rmse_masked(state.x, truth_std, state.mask);
                rec.mae = mae_masked(state.x, truth_std, state.mask);
                rec.mmd = mmd_rbf(state.x, truth_std);
            }
            if (want_mi) rec.mi = mi_plugin(state.x, state.mask, cfg.mi_bins);
            result.trace.records.push_back(rec);
            if (observer) observer(state);
        } catch (const Error& e) {
            throw TrainingError("iteration " + std::to_string(t) + ": " + e.what());
        }
    }

    // Back to the original data space; re-pin the raw observations so they
    // pass through bit-exactly rather than through the affine round trip.
    ImputationState final_state;
    final_state.mask = state.mask;
    final_state.iteration = state.iteration;
    final_state.x = standardizer.inverse(state.x);
    final_state.pinned = Matrix(ds.n_rows(), ds.n_cols());
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (std::size_t j = 0; j < ds.n_cols(); ++j) {
            if (ds.mask(i, j) == 1.0) {
                final_state.x(i, j) = ds.raw(i, j);
                final_state.pinned(i, j) = ds.raw(i, j);
            }
        }
    }
    result.state = std::move(final_state);
    return result;
}

std::vector<MiriResult> run_multiple(const MaskedDataset& ds, const MiriConfig& cfg,
                                     std::size_t k, const Matrix* ground_truth) {
    if (k < 1) throw ConfigError("run_multiple: k must be >= 1");
    std::vector<MiriResult> results;
    results.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        MiriConfig run_cfg = cfg;
        run_cfg.seed = cfg.seed + i;
        results.push_back(run_miri(ds, run_cfg, ground_truth));
    }
    return results;
}

}  // namespace miri
