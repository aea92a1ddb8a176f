#include "colsafe/kernel.hpp"

#include "colsafe/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace colsafe {

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Box: return "box";
        case KernelKind::Cosine: return "cosine";
        case KernelKind::TruncatedMatern: return "matern";
    }
    return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "box") return KernelKind::Box;
    if (name == "cosine") return KernelKind::Cosine;
    if (name == "matern" || name == "truncated-matern") return KernelKind::TruncatedMatern;
    throw ConfigError("unknown kernel '" + name + "' (expected box, cosine or matern)");
}

KernelSpec KernelSpec::box(double lambda) {
    KernelSpec s;
    s.kind = KernelKind::Box;
    s.upper = 0.5;
    s.lower = 0.5;
    s.lambda = lambda;
    return s;
}

KernelSpec KernelSpec::cosine(double lambda, double lower) {
    KernelSpec s;
    s.kind = KernelKind::Cosine;
    s.upper = std::numbers::pi / 4.0;
    s.lower = lower;
    s.lambda = lambda;
    return s;
}

KernelSpec KernelSpec::truncated_matern(double lambda, double nu, double lengthscale) {
    return truncated_matern(lambda, nu, lengthscale, matern_profile(nu, 1.0 / lengthscale));
}

KernelSpec KernelSpec::truncated_matern(double lambda, double nu, double lengthscale,
                                        double lower) {
    KernelSpec s;
    s.kind = KernelKind::TruncatedMatern;
    s.upper = 1.0;
    s.lower = lower;
    s.lambda = lambda;
    s.nu = nu;
    s.lengthscale = lengthscale;
    return s;
}

double matern_profile(double nu, double r) {
    if (r <= 0.0) return 1.0;
    if (nu == 0.5) return std::exp(-r);
    if (nu == 1.5) {
        const double s = std::sqrt(3.0) * r;
        return (1.0 + s) * std::exp(-s);
    }
    if (nu == 2.5) {
        const double s = std::sqrt(5.0) * r;
        return (1.0 + s + s * s / 3.0) * std::exp(-s);
    }
    const double s = std::sqrt(2.0 * nu) * r;
    return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(s, nu) * std::cyl_bessel_k(nu, s);
}

double eval_base(const KernelSpec& spec, double v) {
    if (v > 1.0) return 0.0;
    switch (spec.kind) {
        case KernelKind::Box: return 0.5;
        case KernelKind::Cosine: return std::numbers::pi / 4.0 * std::cos(std::numbers::pi / 2.0 * v);
        case KernelKind::TruncatedMatern: return matern_profile(spec.nu, v / spec.lengthscale);
    }
    return 0.0;
}

double eval_scaled_at(const KernelSpec& spec, double dist) {
    // Compare distances, not ratios: d <= lambda implies d / lambda <= 1 in
    // IEEE arithmetic, so the support test agrees with a radius query.
    if (dist > spec.lambda) return 0.0;
    return eval_base(spec, dist / spec.lambda) / spec.upper;
}

double eval_scaled(const KernelSpec& spec, Point a, Point a_prime) {
    return eval_scaled_at(spec, distance(a, a_prime));
}

KernelReport validate(const KernelSpec& spec) {
    KernelReport report;
    auto fail = [&](double v, double value, const std::string& what) {
        report.ok = false;
        report.v = v;
        report.value = value;
        report.message = what;
        return report;
    };
    if (!(spec.lambda > 0.0)) return fail(0.0, spec.lambda, "bandwidth must be positive");
    if (!(spec.lower > 0.0)) return fail(0.0, spec.lower, "lower kernel constant must be positive");
    if (!(spec.lower <= spec.upper)) {
        return fail(0.0, spec.lower, "lower kernel constant exceeds upper constant");
    }
    if (spec.kind == KernelKind::TruncatedMatern && !(spec.lengthscale > 0.0 && spec.nu > 0.0)) {
        return fail(0.0, spec.lengthscale, "matern smoothness and lengthscale must be positive");
    }

    constexpr int samples = 10000;
    for (int k = 0; k <= samples; ++k) {
        const double v = static_cast<double>(k) / samples;
        const double value = eval_base(spec, v);
        if (value < spec.lower || value > spec.upper) {
            std::ostringstream msg;
            msg << "K(" << v << ") = " << value << " outside [" << spec.lower << ", " << spec.upper
                << "]";
            return fail(v, value, msg.str());
        }
    }
    for (double v : {1.0 + 1e-9, 1.0 + 1e-3, 2.0}) {
        const double value = eval_base(spec, v);
        if (value != 0.0) return fail(v, value, "kernel is nonzero outside its support");
    }
    if (spec.lower < 1e-12) {
        report.warning = true;
        std::ostringstream msg;
        msg << "lower kernel constant " << spec.lower
            << " is below 1e-12; confidence bounds will need very many samples";
        report.message = msg.str();
    }
    return report;
}

}  // namespace colsafe
