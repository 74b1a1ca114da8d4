#include "glimmer/spectral.hpp"

namespace glimmer {

SpectralResult spectral_cut(const SentenceGraph& g, int k, std::uint64_t seed, const SpectralOptions& options) {
    SpectralResult out;
    const Eigen::Index n = g.size();
    if (n == 0) return out;
    k = std::clamp<int>(k, 1, static_cast<int>(n));
    const auto lap = laplacian<double>(g);
    auto pairs = smallest_eigenvectors(lap, k);
    out.eigenvalues = pairs.spectrum;
    if (k == 1) {
        out.assignment.labels.assign(static_cast<std::size_t>(n), 0);
        out.assignment.k = 1;
        return out;
    }
    MatrixX<double> rows = std::move(pairs.vectors);
    if (options.row_normalize) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            const double norm = rows.row(i).norm();
            if (norm > 0) rows.row(i) /= norm;
        }
    }
    out.assignment = kmeans(rows, k, seed, options.kmeans);
    return out;
}

ClusterAssignment spectral_clusters(const SentenceGraph& g, int k, std::uint64_t seed, const SpectralOptions& options) {
    return spectral_cut(g, k, seed, options).assignment;
}

}  // namespace glimmer
