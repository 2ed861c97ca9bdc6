#include "ovseg/gp_contour.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ovseg/errors.hpp"

namespace ovseg {

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Matern32: return "matern32";
        case KernelFamily::Matern52: return "matern52";
        case KernelFamily::SquaredExponential: return "squared_exponential";
        case KernelFamily::RationalQuadratic: return "rational_quadratic";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "matern32") return KernelFamily::Matern32;
    if (name == "matern52") return KernelFamily::Matern52;
    if (name == "squared_exponential" || name == "se") return KernelFamily::SquaredExponential;
    if (name == "rational_quadratic" || name == "rq") return KernelFamily::RationalQuadratic;
    throw ConfigError("unknown kernel family: " + name);
}

PolarEvidence to_polar(const std::vector<Point2>& evidence_points) {
    if (evidence_points.size() < 5) throw DegenerateEvidence("need at least 5 evidence points");

    Point2 center{0.0, 0.0};
    for (const auto& p : evidence_points) center = center + p;
    center = center * (1.0 / static_cast<double>(evidence_points.size()));

    std::vector<std::pair<double, double>> samples;
    samples.reserve(evidence_points.size());
    for (const auto& p : evidence_points) {
        Point2 d = p - center;
        double r = norm(d);
        if (r < 1e-6) throw DegenerateEvidence("evidence point coincides with the centroid");
        double theta = std::atan2(d.y, d.x);
        if (theta < 0.0) theta += 2.0 * M_PI;
        samples.emplace_back(theta, r);
    }
    std::sort(samples.begin(), samples.end());

    PolarEvidence out;
    out.center = center;
    out.theta.reserve(samples.size());
    out.r.reserve(samples.size());
    for (auto [t, r] : samples) {
        out.theta.push_back(t);
        out.r.push_back(r);
    }
    return out;
}

double kernel_eval(const KernelSpec& spec, double d) {
    const double l = spec.length_scale;
    switch (spec.family) {
        case KernelFamily::Matern32: {
            double u = std::sqrt(3.0) * d / l;
            return (1.0 + u) * std::exp(-u);
        }
        case KernelFamily::Matern52: {
            double u = std::sqrt(5.0) * d / l;
            return (1.0 + u + u * u / 3.0) * std::exp(-u);
        }
        case KernelFamily::SquaredExponential:
            return std::exp(-d * d / (2.0 * l * l));
        case KernelFamily::RationalQuadratic:
            return std::pow(1.0 + d * d / (2.0 * spec.rq_alpha * l * l), -spec.rq_alpha);
    }
    return 0.0;
}

static Eigen::MatrixXd gram_matrix(const std::vector<double>& theta, const KernelSpec& spec) {
    const int n = static_cast<int>(theta.size());
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double v = kernel_eval(spec, std::abs(theta[i] - theta[j]));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

// Cholesky with jitter escalation from 1e-9 to 1e-6.
static Eigen::LLT<Eigen::MatrixXd> factor_gram(Eigen::MatrixXd k, double noise) {
    const int n = static_cast<int>(k.rows());
    double jitter = 1e-9;
    for (;;) {
        Eigen::MatrixXd reg = k;
        reg.diagonal().array() += noise + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(reg);
        if (llt.info() == Eigen::Success) return llt;
        jitter *= 10.0;
        if (jitter > 1e-6)
            throw SingularGram("Gram matrix not positive definite after jitter escalation (n=" +
                               std::to_string(n) + ")");
    }
}

std::vector<double> gp_posterior_mean(const std::vector<double>& train_theta,
                                      const std::vector<double>& train_r,
                                      const std::vector<double>& test_theta,
                                      const KernelSpec& spec,
                                      std::vector<double>* posterior_variance) {
    const int n = static_cast<int>(train_theta.size());
    if (n < 2) throw DegenerateEvidence("need at least 2 training points");
    if (train_r.size() != train_theta.size())
        throw DimensionMismatch("training inputs and observations disagree");

    double mean_r = std::accumulate(train_r.begin(), train_r.end(), 0.0) / n;
    Eigen::VectorXd resid(n);
    for (int i = 0; i < n; ++i) resid(i) = train_r[i] - mean_r;

    double noise = std::max(spec.noise_variance, 0.0);
    auto llt = factor_gram(gram_matrix(train_theta, spec), noise);
    Eigen::VectorXd alpha = llt.solve(resid);

    const int m = static_cast<int>(test_theta.size());
    std::vector<double> out(m);
    if (posterior_variance) posterior_variance->assign(m, 0.0);

    Eigen::VectorXd kstar(n);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i)
            kstar(i) = kernel_eval(spec, std::abs(train_theta[i] - test_theta[j]));
        out[j] = kstar.dot(alpha) + mean_r;
        if (posterior_variance) {
            Eigen::VectorXd v = llt.solve(kstar);
            (*posterior_variance)[j] = std::max(0.0, 1.0 - kstar.dot(v));
        }
    }
    return out;
}

double gp_log_marginal_likelihood(const std::vector<double>& train_theta,
                                  const std::vector<double>& train_r, const KernelSpec& spec) {
    const int n = static_cast<int>(train_theta.size());
    double mean_r = std::accumulate(train_r.begin(), train_r.end(), 0.0) / n;
    Eigen::VectorXd resid(n);
    for (int i = 0; i < n; ++i) resid(i) = train_r[i] - mean_r;

    double noise = std::max(spec.noise_variance, 0.0);
    auto llt = factor_gram(gram_matrix(train_theta, spec), noise);
    Eigen::VectorXd alpha = llt.solve(resid);

    const Eigen::MatrixXd& packed = llt.matrixLLT();
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += 2.0 * std::log(packed(i, i));
    return -0.5 * resid.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * M_PI);
}

static double radius_variance(const std::vector<double>& r) {
    const int n = static_cast<int>(r.size());
    double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double acc = 0.0;
    for (double v : r) acc += (v - mean) * (v - mean);
    return acc / n;
}

KernelSpec resolve_kernel(const KernelSpec& spec, const PolarEvidence& polar) {
    KernelSpec out = spec;
    // Default observation noise: a relative term plus the variance of
    // half-pixel digitization jitter (traced boundary points sit up to half
    // a pixel off the true curve, std ~0.29 px). Without the floor the
    // length-scale search chases the jitter and extrapolates poorly across
    // occluded arcs.
    if (out.noise_variance < 0.0)
        out.noise_variance = 1e-3 * radius_variance(polar.r) + 0.083;

    if (out.length_scale <= 0.0) {
        const int grid_size = 20;
        const double lo = std::log(0.05), hi = std::log(2.0);
        double best_l = 0.5, best_lml = -std::numeric_limits<double>::infinity();
        for (int g = 0; g < grid_size; ++g) {
            KernelSpec cand = out;
            cand.length_scale = std::exp(lo + (hi - lo) * g / (grid_size - 1));
            double lml;
            try {
                lml = gp_log_marginal_likelihood(polar.theta, polar.r, cand);
            } catch (const SingularGram&) {
                continue;
            }
            if (lml > best_lml) {
                best_lml = lml;
                best_l = cand.length_scale;
            }
        }
        out.length_scale = best_l;
    }
    return out;
}

EstimatedContour estimate_contour_gp_pf(const std::vector<Point2>& evidence, KernelSpec spec,
                                        int n_samples) {
    if (n_samples < 16) throw DegenerateEvidence("n_samples must be at least 16");
    PolarEvidence polar = to_polar(evidence);
    spec = resolve_kernel(spec, polar);

    // Symmetric periodic extension: copies at theta - 2*pi and theta + 2*pi
    // leave the [0, 2*pi) prediction grid interior to the training domain.
    const std::size_t n = polar.theta.size();
    std::vector<double> ext_theta, ext_r;
    ext_theta.reserve(3 * n);
    ext_r.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ext_theta.push_back(polar.theta[i] - 2.0 * M_PI);
        ext_r.push_back(polar.r[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        ext_theta.push_back(polar.theta[i]);
        ext_r.push_back(polar.r[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        ext_theta.push_back(polar.theta[i] + 2.0 * M_PI);
        ext_r.push_back(polar.r[i]);
    }

    std::vector<double> grid(n_samples);
    for (int i = 0; i < n_samples; ++i) grid[i] = 2.0 * M_PI * i / n_samples;

    std::vector<double> r_star = gp_posterior_mean(ext_theta, ext_r, grid, spec);

    std::vector<Point2> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = std::max(r_star[i], 1e-3); // keep the polar curve valid
        pts[i] = {polar.center.x + r * std::cos(grid[i]),
                  polar.center.y + r * std::sin(grid[i])};
    }

    EstimatedContour out;
    out.contour = Contour::from_points(std::move(pts));
    out.kernel = spec;
    return out;
}

} // namespace ovseg
