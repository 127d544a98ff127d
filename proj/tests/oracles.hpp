#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <vector>

namespace ghazal::testing {

/// Sample covariance (n - 1 denominator) of row-major points, d x d.
inline std::vector<double> covariance(const std::vector<std::vector<double>>& pts) {
    const std::size_t n = pts.size(), d = pts.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& p : pts) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += p[j] / static_cast<double>(n);
    }
    std::vector<double> c(d * d, 0.0);
    for (const auto& p : pts) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) c[a * d + b] += (p[a] - mean[a]) * (p[b] - mean[b]);
        }
    }
    for (auto& v : c) v /= static_cast<double>(n - 1);
    return c;
}

/// Eigenvalues of a symmetric d x d matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t d) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a[k * d + p], akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a[p * d + k], aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(d);
    for (std::size_t i = 0; i < d; ++i) ev[i] = a[i * d + i];
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Total within-cluster squared distance, recomputed from scratch.
inline double inertia(const std::vector<std::vector<double>>& pts, const std::vector<int>& labels,
                      const std::vector<std::vector<double>>& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& c = centroids[static_cast<std::size_t>(labels[i])];
        for (std::size_t j = 0; j < c.size(); ++j) s += (pts[i][j] - c[j]) * (pts[i][j] - c[j]);
    }
    return s;
}

}  // namespace ghazal::testing
