#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrec/errors.hpp"

namespace qrec {

/// Row-major real table (n x f parameter blocks).
struct RealTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RealTable() = default;
    RealTable(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    bool operator==(const RealTable&) const = default;
};

/// One known (or predicted) rating cell.
struct RatingCell {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct TrainConfig {
    int latent_dim = 20;     // f
    double lambda = 0.1;     // regularization weight
    double alpha = 0.005;    // gradient step size
    int max_iters = 2000;    // K
    double rel_tol = 1e-7;   // relative objective-change stop threshold
    double init_scale = 0.1; // initial entries uniform in [-init_scale, init_scale]
    std::uint64_t seed = 0;
};

enum class StopReason { MaxIters, Converged, Diverged };
const char* to_string(StopReason r);

struct TrainTrace {
    std::vector<double> objective; // J at the start of each iteration (plus the final state)
    int iterations = 0;            // update steps applied
    StopReason stop = StopReason::MaxIters;
};

/// Latent factor model: prediction for cell (i, j) is theta_i . x_j.
struct FactorModel {
    int latent_dim = 0;
    RealTable theta; // n_rows x f
    RealTable x;     // n_cols x f
};

/// J = 1/2 sum over known cells of (theta_i . x_j - value)^2
///   + lambda/2 (sum_i ||theta_i||^2 + sum_j ||x_j||^2).
double objective(const FactorModel& model, const std::vector<RatingCell>& known, double lambda);

/// Full-batch gradients; rows/columns with no known cells receive the pure
/// regularization gradient.
void gradients(const FactorModel& model, const std::vector<RatingCell>& known, double lambda,
               RealTable& gtheta, RealTable& gx);

struct TrainResult {
    FactorModel model;
    TrainTrace trace;
};

/// Full-batch gradient descent with simultaneous (Jacobi-style) updates of
/// both factor tables.  Stops at max_iters, on a relative objective change
/// below rel_tol, or flags divergence after 10 consecutive objective
/// increases (returned in the trace, not thrown).
TrainResult train(std::size_t n_rows, std::size_t n_cols, const std::vector<RatingCell>& known,
                  const TrainConfig& cfg);

double predict(const FactorModel& model, int i, int j);

/// Root-mean-square deviation between aligned cell value lists.
double rms_deviation(const std::vector<double>& predicted, const std::vector<double>& actual);

struct ScaledRms {
    double value = 0.0;
    bool degenerate = false; // scale m <= 1e-9: value is the unscaled deviation
};

/// delta' = delta / sqrt(m) with m the maximum rated value over both lists.
ScaledRms scaled_rms(const std::vector<double>& predicted, const std::vector<double>& actual);

std::string model_to_json(const FactorModel& model, const TrainConfig& cfg,
                          const TrainTrace& trace);
FactorModel model_from_json(const std::string& text);

} // namespace qrec
