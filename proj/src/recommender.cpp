#include "qrec/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "qrec/rng.hpp"

namespace qrec {

const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::MaxIters:
        return "max-iters";
    case StopReason::Converged:
        return "converged";
    case StopReason::Diverged:
        return "diverged";
    }
    return "?";
}

namespace {

void check_shapes(const FactorModel& model, const std::vector<RatingCell>& known) {
    if (model.theta.cols != static_cast<std::size_t>(model.latent_dim) ||
        model.x.cols != static_cast<std::size_t>(model.latent_dim))
        throw ArgumentError("factor model: table widths differ from latent_dim");
    for (const auto& cell : known)
        if (cell.row < 0 || static_cast<std::size_t>(cell.row) >= model.theta.rows ||
            cell.col < 0 || static_cast<std::size_t>(cell.col) >= model.x.rows)
            throw ArgumentError("rating cell index out of range");
}

// One pass over the known cells: objective always, gradients when asked.
// Cells are visited in their stored order so repeated evaluations are
// bit-reproducible.
double eval_pass(const FactorModel& model, const std::vector<RatingCell>& known, double lambda,
                 RealTable* gtheta, RealTable* gx) {
    const std::size_t f = model.latent_dim;
    if (gtheta) {
        std::fill(gtheta->data.begin(), gtheta->data.end(), 0.0);
        std::fill(gx->data.begin(), gx->data.end(), 0.0);
    }
    double j0 = 0.0;
    for (const auto& cell : known) {
        const double* th = model.theta.row(cell.row);
        const double* xr = model.x.row(cell.col);
        double r = 0.0;
        for (std::size_t l = 0; l < f; ++l)
            r += th[l] * xr[l];
        const double res = r - cell.value;
        j0 += res * res;
        if (gtheta) {
            double* gt = gtheta->row(cell.row);
            double* gxr = gx->row(cell.col);
            for (std::size_t l = 0; l < f; ++l) {
                gt[l] += res * xr[l];
                gxr[l] += res * th[l];
            }
        }
    }
    double reg = 0.0;
    for (double v : model.theta.data)
        reg += v * v;
    for (double v : model.x.data)
        reg += v * v;
    if (gtheta) {
        for (std::size_t i = 0; i < gtheta->data.size(); ++i)
            gtheta->data[i] += lambda * model.theta.data[i];
        for (std::size_t i = 0; i < gx->data.size(); ++i)
            gx->data[i] += lambda * model.x.data[i];
    }
    return 0.5 * j0 + 0.5 * lambda * reg;
}

} // namespace

double objective(const FactorModel& model, const std::vector<RatingCell>& known, double lambda) {
    check_shapes(model, known);
    return eval_pass(model, known, lambda, nullptr, nullptr);
}

void gradients(const FactorModel& model, const std::vector<RatingCell>& known, double lambda,
               RealTable& gtheta, RealTable& gx) {
    check_shapes(model, known);
    gtheta = RealTable(model.theta.rows, model.theta.cols);
    gx = RealTable(model.x.rows, model.x.cols);
    eval_pass(model, known, lambda, &gtheta, &gx);
}

TrainResult train(std::size_t n_rows, std::size_t n_cols, const std::vector<RatingCell>& known,
                  const TrainConfig& cfg) {
    if (known.empty())
        throw ArgumentError("train: database has no known ratings");
    if (cfg.latent_dim < 1 || cfg.alpha <= 0.0 || cfg.lambda < 0.0 || cfg.max_iters < 1)
        throw ArgumentError("train: invalid configuration");

    TrainResult out;
    FactorModel& model = out.model;
    model.latent_dim = cfg.latent_dim;
    model.theta = RealTable(n_rows, cfg.latent_dim);
    model.x = RealTable(n_cols, cfg.latent_dim);
    check_shapes(model, known);

    Rng rng(cfg.seed);
    for (double& v : model.theta.data)
        v = rng.uniform(-cfg.init_scale, cfg.init_scale);
    for (double& v : model.x.data)
        v = rng.uniform(-cfg.init_scale, cfg.init_scale);

    RealTable gtheta(n_rows, cfg.latent_dim);
    RealTable gx(n_cols, cfg.latent_dim);

    TrainTrace& trace = out.trace;
    double prev_j = std::numeric_limits<double>::infinity();
    int increase_streak = 0;
    bool stopped = false;
    for (int k = 0; k < cfg.max_iters; ++k) {
        const double j = eval_pass(model, known, cfg.lambda, &gtheta, &gx);
        trace.objective.push_back(j);
        if (!std::isfinite(j)) {
            trace.stop = StopReason::Diverged;
            stopped = true;
            break;
        }
        if (k >= 1) {
            if (std::abs(j - prev_j) <= cfg.rel_tol * std::max(prev_j, 1e-12)) {
                trace.stop = StopReason::Converged;
                stopped = true;
                break;
            }
            increase_streak = (j > prev_j) ? increase_streak + 1 : 0;
            if (increase_streak >= 10) {
                trace.stop = StopReason::Diverged;
                stopped = true;
                break;
            }
        }
        prev_j = j;
        for (std::size_t i = 0; i < model.theta.data.size(); ++i)
            model.theta.data[i] -= cfg.alpha * gtheta.data[i];
        for (std::size_t i = 0; i < model.x.data.size(); ++i)
            model.x.data[i] -= cfg.alpha * gx.data[i];
        ++trace.iterations;
    }
    if (!stopped) {
        trace.stop = StopReason::MaxIters;
        trace.objective.push_back(eval_pass(model, known, cfg.lambda, nullptr, nullptr));
    }
    return out;
}

double predict(const FactorModel& model, int i, int j) {
    if (i < 0 || static_cast<std::size_t>(i) >= model.theta.rows || j < 0 ||
        static_cast<std::size_t>(j) >= model.x.rows)
        throw ArgumentError("predict: index out of range");
    const double* th = model.theta.row(i);
    const double* xr = model.x.row(j);
    double r = 0.0;
    for (int l = 0; l < model.latent_dim; ++l)
        r += th[l] * xr[l];
    return r;
}

double rms_deviation(const std::vector<double>& predicted, const std::vector<double>& actual) {
    if (predicted.empty() || predicted.size() != actual.size())
        throw ArgumentError("rms_deviation: lists must be nonempty and aligned");
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(predicted.size()));
}

ScaledRms scaled_rms(const std::vector<double>& predicted, const std::vector<double>& actual) {
    const double delta = rms_deviation(predicted, actual);
    double m = -std::numeric_limits<double>::infinity();
    for (double v : predicted)
        m = std::max(m, v);
    for (double v : actual)
        m = std::max(m, v);
    if (m <= 1e-9)
        return ScaledRms{delta, true};
    return ScaledRms{delta / std::sqrt(m), false};
}

std::string model_to_json(const FactorModel& model, const TrainConfig& cfg,
                          const TrainTrace& trace) {
    nlohmann::json j;
    j["f"] = model.latent_dim;
    j["n_s"] = model.theta.rows;
    j["n_u"] = model.x.rows;
    auto table = [](const RealTable& t) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < t.rows; ++r)
            rows.push_back(std::vector<double>(t.row(r), t.row(r) + t.cols));
        return rows;
    };
    j["theta"] = table(model.theta);
    j["x"] = table(model.x);
    j["config"] = {{"latent_dim", cfg.latent_dim}, {"lambda", cfg.lambda},
                   {"alpha", cfg.alpha},           {"max_iters", cfg.max_iters},
                   {"rel_tol", cfg.rel_tol},       {"init_scale", cfg.init_scale},
                   {"seed", cfg.seed}};
    j["trace"] = {{"iterations", trace.iterations},
                  {"stop", to_string(trace.stop)},
                  {"objective_first", trace.objective.empty() ? 0.0 : trace.objective.front()},
                  {"objective_final", trace.objective.empty() ? 0.0 : trace.objective.back()}};
    return j.dump(2);
}

FactorModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FactorModel model;
    model.latent_dim = j.at("f").get<int>();
    const auto load = [&](const nlohmann::json& rows) {
        RealTable t(rows.size(), model.latent_dim);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto row = rows[r].get<std::vector<double>>();
            if (row.size() != static_cast<std::size_t>(model.latent_dim))
                throw ArgumentError("model_from_json: inconsistent row width");
            std::copy(row.begin(), row.end(), t.row(r));
        }
        return t;
    };
    model.theta = load(j.at("theta"));
    model.x = load(j.at("x"));
    return model;
}

} // namespace qrec
