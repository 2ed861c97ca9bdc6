#include "ovseg/ellipse_fit.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "ovseg/errors.hpp"

namespace ovseg {

// Numerically stable variant of the direct conic fit: the design matrix is
// split into quadratic and linear blocks and the ellipse constraint
// 4ac - b^2 = 1 is enforced on the reduced 3x3 eigenproblem.
Ellipse fit_ellipse_lesf(const std::vector<Point2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 5) throw FitFailure("ellipse fit needs at least 5 points");

    // Center and scale for conditioning.
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double scale = 0.0;
    for (const auto& p : points) scale += std::hypot(p.x - mx, p.y - my);
    scale /= n;
    if (scale < 1e-12) throw FitFailure("points are coincident");

    Eigen::MatrixXd d1(n, 3), d2(n, 3);
    for (int i = 0; i < n; ++i) {
        double x = (points[i].x - mx) / scale;
        double y = (points[i].y - my) / scale;
        d1(i, 0) = x * x;
        d1(i, 1) = x * y;
        d1(i, 2) = y * y;
        d2(i, 0) = x;
        d2(i, 1) = y;
        d2(i, 2) = 1.0;
    }

    Eigen::Matrix3d s1 = d1.transpose() * d1;
    Eigen::Matrix3d s2 = d1.transpose() * d2;
    Eigen::Matrix3d s3 = d2.transpose() * d2;

    Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
    if (!lu.isInvertible()) throw FitFailure("degenerate point configuration");
    Eigen::Matrix3d t = -lu.solve(s2.transpose());
    Eigen::Matrix3d m = s1 + s2 * t;

    Eigen::Matrix3d c1_inv_m;
    c1_inv_m.row(0) = m.row(2) / 2.0;
    c1_inv_m.row(1) = -m.row(1);
    c1_inv_m.row(2) = m.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> es(c1_inv_m);
    if (es.info() != Eigen::Success) throw FitFailure("eigen decomposition failed");

    Eigen::Vector3d a1 = Eigen::Vector3d::Zero();
    bool found = false;
    for (int k = 0; k < 3; ++k) {
        if (std::abs(es.eigenvalues()[k].imag()) > 1e-9) continue;
        Eigen::Vector3d v = es.eigenvectors().col(k).real();
        double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0.0) {
            a1 = v;
            found = true;
            break;
        }
    }
    if (!found) throw FitFailure("no ellipse solution");

    Eigen::Vector3d a2 = t * a1;

    // Conic in normalized coordinates.
    double A = a1(0), B = a1(1), C = a1(2), D = a2(0), E = a2(1), F = a2(2);

    // De-normalize: substitute x -> (x - mx)/s, y -> (y - my)/s.
    double s = scale;
    double A_ = A / (s * s);
    double B_ = B / (s * s);
    double C_ = C / (s * s);
    double D_ = D / s - (2.0 * A * mx + B * my) / (s * s);
    double E_ = E / s - (2.0 * C * my + B * mx) / (s * s);
    double F_ = F + (A * mx * mx + B * mx * my + C * my * my) / (s * s) - (D * mx + E * my) / s;

    // The eigenvector's overall sign is arbitrary; orient the conic so the
    // quadratic form is positive definite.
    if (A_ + C_ < 0.0) {
        A_ = -A_; B_ = -B_; C_ = -C_; D_ = -D_; E_ = -E_; F_ = -F_;
    }

    double disc = 4.0 * A_ * C_ - B_ * B_;
    if (disc <= 0.0) throw FitFailure("fit is not an ellipse");

    double cx = (B_ * E_ - 2.0 * C_ * D_) / disc;
    double cy = (B_ * D_ - 2.0 * A_ * E_) / disc;

    double mu = A_ * cx * cx + B_ * cx * cy + C_ * cy * cy + D_ * cx + E_ * cy + F_;
    if (mu >= 0.0) throw FitFailure("degenerate ellipse");

    // Eigen-decompose the quadratic form [[A, B/2], [B/2, C]].
    double tr = A_ + C_;
    double det = A_ * C_ - 0.25 * B_ * B_;
    double rad = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    double l1 = 0.5 * tr + rad; // larger eigenvalue -> minor axis
    double l2 = 0.5 * tr - rad;
    if (l1 <= 0.0 || l2 <= 0.0) throw FitFailure("indefinite quadratic form");

    double semi_minor = std::sqrt(-mu / l1);
    double semi_major = std::sqrt(-mu / l2);

    // Major axis direction = eigenvector of the smaller eigenvalue.
    double theta;
    if (std::abs(B_) < 1e-14 * std::max(std::abs(A_), std::abs(C_))) {
        theta = A_ <= C_ ? 0.0 : M_PI_2;
    } else {
        theta = std::atan2(l2 - A_, 0.5 * B_);
    }
    theta = std::fmod(theta, M_PI);
    if (theta < 0.0) theta += M_PI;

    Ellipse e;
    e.center = {cx, cy};
    e.semi_major = semi_major;
    e.semi_minor = semi_minor;
    e.rotation = theta;
    if (!(e.semi_major > 0.0) || !(e.semi_minor > 0.0) || !std::isfinite(e.semi_major) ||
        !std::isfinite(e.semi_minor) || !std::isfinite(cx) || !std::isfinite(cy))
        throw FitFailure("non-finite ellipse parameters");
    return e;
}

} // namespace ovseg
