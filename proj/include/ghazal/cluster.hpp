#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ghazal {

using Point = std::vector<double>;

struct KMeansConfig {
    std::size_t k = 4;
    std::uint64_t seed = 42;
    int max_iterations = 300;
    double tolerance = 1e-6;  // stop once no centroid moves farther than this
};

struct ClusterAssignment {
    std::vector<int> labels;
    std::vector<Point> centroids;
    double inertia = 0.0;
    std::uint64_t seed = 0;
    int iterations_run = 0;
    std::vector<double> inertia_trace;  // objective after every Lloyd iteration

    std::size_t k() const { return centroids.size(); }
};

/// k-means++ seeding, then Lloyd iterations on squared Euclidean distance.
/// An emptied cluster takes the point farthest from its own centroid. Labels
/// are renumbered so centroids are in lexicographic order. Throws
/// Error(Usage) when n < k, k == 0, points are zero-dimensional or ragged.
ClusterAssignment kmeans(std::span<const Point> points, const KMeansConfig& config);

inline ClusterAssignment kmeans(std::span<const Point> points, std::size_t k = 4, std::uint64_t seed = 42) {
    return kmeans(points, KMeansConfig{k, seed});
}

struct Projection {
    std::size_t n_components = 0;
    std::vector<Point> coords;             // n rows of n_components
    std::vector<Point> components;         // n_components rows of dim, orthonormal
    std::vector<double> explained_variance;  // sample variance (n - 1 denominator), non-increasing
    Point mean;
};

/// Principal axes of the mean-centered data. Each component is flipped so its
/// largest-magnitude coordinate is positive. Throws Error(Usage) for fewer
/// than two points or n_components > dim.
Projection pca_project(std::span<const Point> points, std::size_t n_components = 2);

/// `poem_index,cluster` rows.
std::string assignment_csv(const ClusterAssignment& a, std::span<const int> poem_indices);
/// `poem_index,pc1,pc2,...` rows.
std::string projection_csv(const Projection& p, std::span<const int> poem_indices);

}  // namespace ghazal
