#pragma once

#include "supplyrank/depgraph.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank {

/// Katz parameters. Defaults follow the common graph-library convention
/// (alpha 0.1, beta 1.0, tolerance 1e-6, 1000 iterations, L2-normalized).
struct CentralityParams {
    double alpha = 0.1;
    double beta = 1.0;
    double tolerance = 1e-6;
    int max_iterations = 1000;
    bool normalize = true;

    /// Throws Error{validation} when a field is outside its domain.
    void validate() const;

    friend bool operator==(const CentralityParams&, const CentralityParams&) = default;
};

/// Katz scores indexed like the graph they were computed on.
class CentralityScores {
public:
    CentralityScores(std::vector<std::string> ids, std::vector<double> values, CentralityParams params,
                     int iterations, double residual);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const std::string> ids() const noexcept { return ids_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Throws Error{not_found}.
    double score(std::string_view id) const;

    const CentralityParams& params() const noexcept { return params_; }
    int iterations() const noexcept { return iterations_; }
    /// L1 change of the final iteration.
    double residual() const noexcept { return residual_; }
    /// Always true for scores returned by katz_centrality, which throws otherwise.
    bool converged() const noexcept { return true; }

private:
    std::vector<std::string> ids_; // sorted ascending
    std::vector<double> values_;
    CentralityParams params_;
    int iterations_;
    double residual_;
};

/// Power iteration for x = alpha * A^T x + beta * 1, where an edge u -> v
/// (u depends on v) passes u's score to v. Starts from x = 0 and stops when the
/// L1 change drops below n * tolerance.
///
/// Throws Error{domain} for an empty graph, Error{validation} for bad params
/// and DivergenceError when max_iterations is exhausted.
CentralityScores katz_centrality(const DependencyGraph& g, const CentralityParams& params = {});

/// Max in-degree, an upper bound on the adjacency spectral radius. Katz
/// converges whenever alpha * bound < 1.
double spectral_radius_upper_bound(const DependencyGraph& g);

struct RankedEntry {
    std::string id;
    double score;
    std::size_t rank; // 1-based

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Top-k by score descending, ties by id ascending (bytewise).
std::vector<RankedEntry> rank(const CentralityScores& scores, std::size_t k);

} // namespace supplyrank
