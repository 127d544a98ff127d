#include "ghazal/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"
#include "ghazal/rng.hpp"

namespace ghazal {

namespace {

double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t check_points(std::span<const Point> points) {
    if (points.empty()) fail_usage("no points");
    const std::size_t dim = points.front().size();
    if (dim == 0) fail_usage("zero-dimensional points");
    for (const auto& p : points) {
        if (p.size() != dim) fail_usage("points have differing dimensions");
    }
    return dim;
}

std::vector<Point> plus_plus_seeds(std::span<const Point> points, std::size_t k, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<Point> centers;
    centers.push_back(points[rng.below(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);

    while (centers.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        centers.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
    return centers;
}

// Nearest centroid, lowest index on ties.
int nearest(const Point& p, const std::vector<Point>& centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double objective(std::span<const Point> points, const std::vector<int>& labels, const std::vector<Point>& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += squared_distance(points[i], centroids[labels[i]]);
    return s;
}

}  // namespace

ClusterAssignment kmeans(std::span<const Point> points, const KMeansConfig& config) {
    const std::size_t dim = check_points(points);
    const std::size_t n = points.size();
    const std::size_t k = config.k;
    if (k == 0) fail_usage("kmeans: k must be >= 1");
    if (n < k) fail_usage("kmeans: fewer points (" + std::to_string(n) + ") than clusters (" + std::to_string(k) + ")");

    Rng rng(config.seed);
    ClusterAssignment out;
    out.seed = config.seed;
    out.centroids = plus_plus_seeds(points, k, rng);
    out.labels.assign(n, 0);

    std::vector<std::size_t> sizes(k);
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) out.labels[i] = nearest(points[i], out.centroids);

        std::vector<Point> next(k, Point(dim, 0.0));
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = next[out.labels[i]];
            for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
            ++sizes[out.labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            for (auto& v : next[c]) v /= static_cast<double>(sizes[c]);
        }
        // Repair empty clusters with the worst-fitting point of a multi-member cluster.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t victim = n;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[out.labels[i]] < 2) continue;
                const double d = squared_distance(points[i], next[out.labels[i]]);
                if (d > worst) {
                    worst = d;
                    victim = i;
                }
            }
            --sizes[out.labels[victim]];
            out.labels[victim] = static_cast<int>(c);
            sizes[c] = 1;
            next[c] = points[victim];
        }

        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            movement = std::max(movement, std::sqrt(squared_distance(next[c], out.centroids[c])));
        }
        out.centroids = std::move(next);
        out.inertia_trace.push_back(objective(points, out.labels, out.centroids));
        out.iterations_run = iter;
        if (movement < config.tolerance) break;
    }

    // Canonical numbering: centroids in lexicographic order.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.centroids[a] < out.centroids[b]; });
    std::vector<int> relabel(k);
    std::vector<Point> sorted;
    sorted.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        relabel[order[r]] = static_cast<int>(r);
        sorted.push_back(out.centroids[order[r]]);
    }
    for (auto& l : out.labels) l = relabel[l];
    out.centroids = std::move(sorted);
    out.inertia = objective(points, out.labels, out.centroids);
    return out;
}

Projection pca_project(std::span<const Point> points, std::size_t n_components) {
    if (points.size() < 2) fail_usage("pca: need at least 2 points");
    const std::size_t dim = check_points(points);
    if (n_components == 0 || n_components > dim) {
        fail_usage("pca: n_components (" + std::to_string(n_components) + ") must be in [1, dim=" +
                   std::to_string(dim) + "]");
    }
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto d = static_cast<Eigen::Index>(dim);

    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = points[i][j];
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    const bool thin_enough = n_components <= static_cast<std::size_t>(std::min(n, d));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, thin_enough ? Eigen::ComputeThinV : Eigen::ComputeFullV);
    const auto& v = svd.matrixV();
    const auto& sv = svd.singularValues();

    Projection p;
    p.n_components = n_components;
    p.mean.assign(mean.data(), mean.data() + d);
    for (std::size_t c = 0; c < n_components; ++c) {
        Eigen::VectorXd axis = v.col(static_cast<Eigen::Index>(c));
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis(arg) < 0) axis = -axis;
        p.components.emplace_back(axis.data(), axis.data() + d);

        const double s = c < static_cast<std::size_t>(sv.size()) ? sv(static_cast<Eigen::Index>(c)) : 0.0;
        p.explained_variance.push_back(s * s / static_cast<double>(n - 1));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        Point row(n_components);
        for (std::size_t c = 0; c < n_components; ++c) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) acc += x(i, j) * p.components[c][j];
            row[c] = acc;
        }
        p.coords.push_back(std::move(row));
    }
    return p;
}

std::string assignment_csv(const ClusterAssignment& a, std::span<const int> poem_indices) {
    if (poem_indices.size() != a.labels.size()) fail_usage("assignment_csv: index count != label count");
    std::string out = "poem_index,cluster\n";
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        out += std::to_string(poem_indices[i]) + "," + std::to_string(a.labels[i]) + '\n';
    }
    return out;
}

std::string projection_csv(const Projection& p, std::span<const int> poem_indices) {
    if (poem_indices.size() != p.coords.size()) fail_usage("projection_csv: index count != row count");
    std::string out = "poem_index";
    for (std::size_t c = 0; c < p.n_components; ++c) out += ",pc" + std::to_string(c + 1);
    out += '\n';
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        out += std::to_string(poem_indices[i]);
        for (const double v : p.coords[i]) out += "," + format_significant(v);
        out += '\n';
    }
    return out;
}

}  // namespace ghazal
