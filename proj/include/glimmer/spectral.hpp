#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "glimmer/random.hpp"
#include "glimmer/sentgraph.hpp"

namespace glimmer {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Unnormalized graph Laplacian L = D - W. Built in integer arithmetic, so
/// every row sums to exactly zero before the conversion to Scalar.
template <typename Scalar = double>
MatrixX<Scalar> laplacian(const SentenceGraph& g) {
    Eigen::MatrixXi lap = -g.adjacency;
    lap.diagonal() = g.adjacency.rowwise().sum();
    return lap.cast<Scalar>();
}

template <typename Scalar>
struct EigenPairs {
    MatrixX<Scalar> vectors;  // n x k, unit columns, eigenvalues ascending
    VectorX<Scalar> values;   // k smallest eigenvalues
    VectorX<Scalar> spectrum; // all n eigenvalues, ascending
};

/// Eigenpairs of the k smallest eigenvalues of a real symmetric matrix.
template <typename Derived>
EigenPairs<typename Derived::Scalar> smallest_eigenvectors(const Eigen::MatrixBase<Derived>& mat, Eigen::Index k) {
    using Scalar = typename Derived::Scalar;
    if (mat.rows() != mat.cols()) throw std::invalid_argument("smallest_eigenvectors: matrix is not square");
    if (k < 1 || k > mat.rows()) throw std::invalid_argument("smallest_eigenvectors: k out of range");
    if (mat.rows() > 0 && (mat - mat.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10)) {
        throw std::invalid_argument("smallest_eigenvectors: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(mat.eval());
    if (solver.info() != Eigen::Success) throw std::runtime_error("smallest_eigenvectors: eigensolver failed");
    return {solver.eigenvectors().leftCols(k), solver.eigenvalues().head(k), solver.eigenvalues()};
}

struct ClusterAssignment {
    std::vector<int> labels;  // labels[i] in [0, k)
    int k = 0;
    double objective = 0.0;                // within-cluster sum of squares
    std::vector<double> objective_trace;   // per Lloyd iteration, winning restart
    bool k_reduced = false;                // fewer distinct points than requested clusters

    /// Member indices grouped by cluster id.
    std::vector<std::vector<std::size_t>> clusters() const {
        std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i])].push_back(i);
        return out;
    }
};

struct KMeansOptions {
    int restarts = 10;
    int max_iterations = 300;
};

namespace detail {

inline MatrixX<double> kmeanspp_seed(const MatrixX<double>& x, int k, Rng& rng) {
    const Eigen::Index n = x.rows();
    MatrixX<double> centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
    VectorX<double> d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index pick = n - 1;
        if (total <= 0.0) {
            pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
        } else {
            const double target = uniform_unit(rng) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(c) = x.row(pick);
        d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

/// Nearest-center assignment (lowest index wins ties); returns the objective.
inline double assign(const MatrixX<double>& x, const MatrixX<double>& centers, std::vector<int>& labels,
                     VectorX<double>& dist) {
    double objective = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        Eigen::Index best = 0;
        const double d = (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        dist[i] = d;
        objective += d;
    }
    return objective;
}

}  // namespace detail

/// Lloyd k-means with k-means++ seeding; the restart with the lowest
/// objective wins (earliest restart on ties). Labels are renumbered by first
/// appearance and empty clusters are dropped from k.
template <typename Derived>
ClusterAssignment kmeans(const Eigen::MatrixBase<Derived>& points, int k, std::uint64_t seed,
                         const KMeansOptions& options = {}) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    const MatrixX<double> x = points.template cast<double>();
    const Eigen::Index n = x.rows();
    ClusterAssignment best;
    if (n == 0) return best;
    if (n < k) {
        k = static_cast<int>(n);
        best.k_reduced = true;
    }

    Rng rng(seed);
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    VectorX<double> dist(n);
    for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
        MatrixX<double> centers = detail::kmeanspp_seed(x, k, rng);
        std::vector<double> trace;
        std::vector<int> previous;
        double objective = 0.0;
        for (int it = 0; it < std::max(1, options.max_iterations); ++it) {
            objective = detail::assign(x, centers, labels, dist);
            trace.push_back(objective);
            if (labels == previous) break;
            previous = labels;

            MatrixX<double> sums = MatrixX<double>::Zero(k, x.cols());
            std::vector<int> counts(static_cast<std::size_t>(k), 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
                ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) {
                    centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
                    continue;
                }
                // Empty cluster: move it onto the point farthest from its centroid.
                Eigen::Index far = 0;
                dist.maxCoeff(&far);
                centers.row(c) = x.row(far);
                dist[far] = 0.0;
            }
        }
        if (objective < best.objective) {
            best.objective = objective;
            best.labels = labels;
            best.objective_trace = std::move(trace);
        }
    }

    // Renumber by first appearance; k counts non-empty clusters only.
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int& label : best.labels) {
        int& r = remap[static_cast<std::size_t>(label)];
        if (r < 0) r = next++;
        label = r;
    }
    if (next < k) best.k_reduced = true;
    best.k = next;
    return best;
}

struct SpectralOptions {
    bool row_normalize = false;
    KMeansOptions kmeans;
};

struct SpectralResult {
    ClusterAssignment assignment;
    VectorX<double> eigenvalues;  // full Laplacian spectrum, ascending
};

/// Graph cut: k-means over the rows of the k smallest Laplacian eigenvectors.
SpectralResult spectral_cut(const SentenceGraph& g, int k, std::uint64_t seed, const SpectralOptions& options = {});
ClusterAssignment spectral_clusters(const SentenceGraph& g, int k, std::uint64_t seed,
                                    const SpectralOptions& options = {});

}  // namespace glimmer
