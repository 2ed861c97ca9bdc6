#pragma once

#include <string>
#include <vector>

#include "ovseg/geometry.hpp"

namespace ovseg {

enum class KernelFamily { Matern32, Matern52, SquaredExponential, RationalQuadratic };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Covariance function family with hyperparameters. Angular inputs, so
/// length_scale is in radians. length_scale == 0 requests automatic
/// selection by marginal likelihood; noise_variance < 0 requests the
/// default 1e-3 * var(r).
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52;
    double length_scale = 0.0;
    double noise_variance = -1.0;
    double rq_alpha = 1.0;
};

/// Evidence points in polar form about their coordinate mean, sorted by
/// angle in [0, 2*pi).
struct PolarEvidence {
    Point2 center;
    std::vector<double> theta;
    std::vector<double> r;
};

/// Full estimated closed contour for one group of evidence.
struct EstimatedContour {
    Contour contour;
    int source_group = 0;
    KernelSpec kernel; // hyperparameters actually used
};

/// Mean-centers the evidence and converts to (theta, r) samples sorted by
/// angle. Throws DegenerateEvidence for fewer than 5 points or any radius
/// below 1e-6.
PolarEvidence to_polar(const std::vector<Point2>& evidence_points);

/// Stationary kernel value at distance d >= 0, unit signal variance.
double kernel_eval(const KernelSpec& spec, double d);

/// GP posterior mean at test inputs. Observations are mean-subtracted
/// before the solve and the mean is added back. Optionally also returns the
/// posterior variance at the test inputs. Throws SingularGram when the
/// factorization fails after jitter escalation to 1e-6.
std::vector<double> gp_posterior_mean(const std::vector<double>& train_theta,
                                      const std::vector<double>& train_r,
                                      const std::vector<double>& test_theta,
                                      const KernelSpec& spec,
                                      std::vector<double>* posterior_variance = nullptr);

/// Log marginal likelihood of the observations under the kernel (used by
/// the automatic length-scale selection; exposed for tests).
double gp_log_marginal_likelihood(const std::vector<double>& train_theta,
                                  const std::vector<double>& train_r, const KernelSpec& spec);

/// Resolves automatic hyperparameters against the polar evidence: picks the
/// length scale maximizing the log marginal likelihood over a 20-point
/// logarithmic grid in [0.05, 2.0] rad and sets noise to 1e-3 * var(r).
KernelSpec resolve_kernel(const KernelSpec& spec, const PolarEvidence& polar);

/// Contour completion in polar form: extends the samples by -2*pi and
/// +2*pi, predicts the radius on a uniform angular grid of n_samples, and
/// maps back to a closed Cartesian contour about the evidence center.
EstimatedContour estimate_contour_gp_pf(const std::vector<Point2>& evidence, KernelSpec spec,
                                        int n_samples = 360);

} // namespace ovseg
