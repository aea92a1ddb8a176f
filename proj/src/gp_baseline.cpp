#include "colsafe/gp_baseline.hpp"

#include "colsafe/errors.hpp"
#include "colsafe/kernel.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace colsafe {

std::string to_string(GpUpdateMode mode) {
    return mode == GpUpdateMode::Refactorize ? "refactorize" : "incremental";
}

GpUpdateMode gp_update_mode_from_string(const std::string& name) {
    if (name == "refactorize") return GpUpdateMode::Refactorize;
    if (name == "incremental") return GpUpdateMode::Incremental;
    throw ConfigError("unknown gp update mode '" + name + "'");
}

void GpConfig::validate() const {
    if (!(lengthscale > 0.0)) throw ConfigError("gp: lengthscale must be positive");
    if (!(signal_variance > 0.0)) throw ConfigError("gp: signal_variance must be positive");
    if (!(noise_variance >= 0.0)) throw ConfigError("gp: noise_variance must be nonnegative");
    if (!(beta_scale > 0.0)) throw ConfigError("gp: beta_scale must be positive");
    if (!(nu > 0.0)) throw ConfigError("gp: nu must be positive");
}

GaussianProcess::GaussianProcess(std::size_t dim, GpConfig cfg, std::size_t targets)
    : dim_(dim), cfg_(cfg), targets_(targets), y_(targets), alpha_(targets) {
    cfg_.validate();
    if (targets == 0) throw ConfigError("gp: need at least one target");
}

double GaussianProcess::kernel(Point a, Point b) const {
    return cfg_.signal_variance * matern_profile(cfg_.nu, distance(a, b) / cfg_.lengthscale);
}

bool GaussianProcess::try_factorize(double jitter) {
    chol_.assign(n_ * (n_ + 1) / 2, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        const Point xr(inputs_.data() + r * dim_, dim_);
        for (std::size_t c = 0; c <= r; ++c) {
            const Point xc(inputs_.data() + c * dim_, dim_);
            double s = kernel(xr, xc);
            if (r == c) s += cfg_.noise_variance + jitter;
            for (std::size_t k = 0; k < c; ++k) s -= factor(r, k) * factor(c, k);
            if (r == c) {
                if (!(s > 0.0)) return false;
                factor(r, r) = std::sqrt(s);
            } else {
                factor(r, c) = s / factor(c, c);
            }
        }
    }
    return true;
}

bool GaussianProcess::try_extend() {
    const std::size_t r = n_ - 1;
    const Point xr(inputs_.data() + r * dim_, dim_);
    std::vector<double> row(r + 1);
    for (std::size_t c = 0; c < r; ++c) {
        row[c] = kernel(xr, Point(inputs_.data() + c * dim_, dim_));
    }
    forward(row, r);
    double d = kernel(xr, xr) + cfg_.noise_variance + jitter_;
    for (std::size_t c = 0; c < r; ++c) d -= row[c] * row[c];
    if (!(d > 0.0)) return false;
    row[r] = std::sqrt(d);
    chol_.insert(chol_.end(), row.begin(), row.end());
    return true;
}

void GaussianProcess::refactorize() {
    if (try_factorize(jitter_)) return;
    double j = std::max(jitter_ * 10.0, 1e-10 * cfg_.signal_variance);
    for (; j <= 1e-2 * cfg_.signal_variance; j *= 10.0) {
        if (try_factorize(j)) {
            jitter_ = j;
            return;
        }
    }
    throw NumericalError("gp: kernel matrix not positive definite after jitter " +
                         std::to_string(j / 10.0));
}

void GaussianProcess::forward(std::vector<double>& v, std::size_t m) const {
    for (std::size_t r = 0; r < m; ++r) {
        double s = v[r];
        const double* row = chol_.data() + r * (r + 1) / 2;
        for (std::size_t k = 0; k < r; ++k) s -= row[k] * v[k];
        v[r] = s / row[r];
    }
}

void GaussianProcess::solve_weights() {
    for (std::size_t t = 0; t < targets_; ++t) {
        std::vector<double> z = y_[t];
        forward(z, n_);
        for (std::size_t r = n_; r-- > 0;) {
            double s = z[r];
            for (std::size_t k = r + 1; k < n_; ++k) s -= factor(k, r) * z[k];
            z[r] = s / factor(r, r);
        }
        alpha_[t] = std::move(z);
    }
}

void GaussianProcess::add(Point x, std::span<const double> y) {
    if (x.size() != dim_) throw DimensionError("gp: input dimension mismatch");
    if (y.size() != targets_) throw DimensionError("gp: target count mismatch");
    inputs_.insert(inputs_.end(), x.begin(), x.end());
    for (std::size_t t = 0; t < targets_; ++t) y_[t].push_back(y[t]);
    ++n_;
    if (cfg_.mode == GpUpdateMode::Refactorize) {
        refactorize();
    } else {
        if (!try_extend()) refactorize();
    }
    solve_weights();
}

GaussianProcess::Posterior GaussianProcess::predict(Point x) const {
    Posterior post;
    post.mean.assign(targets_, 0.0);
    std::vector<double> k(n_);
    for (std::size_t t = 0; t < n_; ++t) k[t] = kernel(x, Point(inputs_.data() + t * dim_, dim_));
    for (std::size_t t = 0; t < targets_; ++t) {
        post.mean[t] = std::inner_product(k.begin(), k.end(), alpha_[t].begin(), 0.0);
    }
    forward(k, n_);
    const double explained = std::inner_product(k.begin(), k.end(), k.begin(), 0.0);
    post.variance = std::max(0.0, kernel(x, x) - explained);
    return post;
}

void gp_update(GaussianProcess& model, Point a, double y) {
    model.add(a, std::span<const double>(&y, 1));
}

Interval gp_interval(double mean, double std_dev, double beta_scale) {
    if (!(beta_scale > 0.0)) throw ConfigError("gp_bounds: beta_scale must be positive");
    return Interval{mean - beta_scale * std_dev, mean + beta_scale * std_dev};
}

Interval gp_bounds(const GaussianProcess& model, Point a, double beta_scale) {
    if (model.targets() != 1) throw DimensionError("gp_bounds: model has several targets");
    const auto post = model.predict(a);
    return gp_interval(post.mean[0], std::sqrt(post.variance), beta_scale);
}

namespace {

std::size_t total_outputs(const OutputDims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{0});
}

}  // namespace

GpConfidenceModel::GpConfidenceModel(const ParameterGrid& grid, OutputDims dims, GpConfig cfg)
    : grid_(&grid), dims_(std::move(dims)), gp_(grid.dim(), cfg, total_outputs(dims_)) {
    validate_output_dims(dims_);
}

void GpConfidenceModel::observe(std::size_t a, const Measurement& m, IntervalTable& table) {
    if (m.values.size() != dims_.size()) throw DimensionError("gp: measurement shape mismatch");
    std::vector<double> flat;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (m.values[i].size() != dims_[i]) throw DimensionError("gp: measurement shape mismatch");
        flat.insert(flat.end(), m.values[i].begin(), m.values[i].end());
    }
    gp_.add(grid_->point(a), flat);

    const double scale = gp_.config().beta_scale;
    for (std::size_t j = 0; j < grid_->size(); ++j) {
        const auto post = gp_.predict(grid_->point(j));
        std::size_t offset = 0;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            const std::span<const double> mean(post.mean.data() + offset, dims_[i]);
            const double half =
                scale * std::sqrt(static_cast<double>(dims_[i]) * post.variance);
            table.intersect(j, i, confidence_interval(mean, half, i));
            offset += dims_[i];
        }
    }
}

double GpConfidenceModel::kappa(std::size_t) const {
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace colsafe
