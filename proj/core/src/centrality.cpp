#include "supplyrank/centrality.hpp"

#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supplyrank {

void CentralityParams::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::validation, fmt::format("alpha must be positive (got {})", alpha));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::validation, fmt::format("beta must be positive (got {})", beta));
    }
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw Error(ErrorKind::validation, fmt::format("tolerance must be positive (got {})", tolerance));
    }
    if (max_iterations < 1) {
        throw Error(ErrorKind::validation, fmt::format("max_iterations must be >= 1 (got {})", max_iterations));
    }
}

CentralityScores::CentralityScores(std::vector<std::string> ids, std::vector<double> values,
                                   CentralityParams params, int iterations, double residual)
    : ids_(std::move(ids)), values_(std::move(values)), params_(params), iterations_(iterations),
      residual_(residual)
{
    if (ids_.size() != values_.size()) {
        throw Error(ErrorKind::validation, "score vector does not match id list");
    }
}

double CentralityScores::score(std::string_view id) const
{
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
        throw Error(ErrorKind::not_found, fmt::format("no score for '{}'", id));
    }
    return values_[static_cast<std::size_t>(it - ids_.begin())];
}

CentralityScores katz_centrality(const DependencyGraph& g, const CentralityParams& params)
{
    params.validate();
    if (g.empty()) {
        throw Error(ErrorKind::domain, "Katz centrality of an empty graph is undefined");
    }
    const std::size_t n = g.node_count();
    std::vector<double> current(n, 0.0);
    std::vector<double> next(n, 0.0);
    const double threshold = static_cast<double>(n) * params.tolerance;

    double residual = 0.0;
    for (int iteration = 1; iteration <= params.max_iterations; ++iteration) {
        residual = 0.0;
        for (NodeIndex v = 0; v < n; ++v) {
            double inflow = 0.0;
            for (NodeIndex u : g.dependents(v)) {
                inflow += current[u];
            }
            next[v] = params.alpha * inflow + params.beta;
            residual += std::abs(next[v] - current[v]);
        }
        current.swap(next);
        if (!std::isfinite(residual)) {
            throw DivergenceError(fmt::format("Katz iteration overflowed after {} iterations; alpha {} is too "
                                              "large for this graph (try a smaller alpha)",
                                              iteration, params.alpha),
                                  residual, iteration);
        }
        if (residual < threshold) {
            if (params.normalize) {
                const double norm =
                    std::sqrt(std::inner_product(current.begin(), current.end(), current.begin(), 0.0));
                for (double& x : current) {
                    x /= norm;
                }
            }
            std::vector<std::string> ids;
            ids.reserve(n);
            for (const PackageNode& node : g.nodes()) {
                ids.push_back(node.id);
            }
            return CentralityScores(std::move(ids), std::move(current), params, iteration, residual);
        }
    }
    throw DivergenceError(fmt::format("Katz iteration did not converge in {} iterations (residual {:g}); "
                                      "alpha {} may exceed 1/spectral radius (try a smaller alpha)",
                                      params.max_iterations, residual, params.alpha),
                          residual, params.max_iterations);
}

double spectral_radius_upper_bound(const DependencyGraph& g)
{
    std::size_t max_in = 0;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        max_in = std::max(max_in, g.in_degree(v));
    }
    return static_cast<double>(max_in);
}

std::vector<RankedEntry> rank(const CentralityScores& scores, std::size_t k)
{
    if (k == 0) {
        throw Error(ErrorKind::validation, "rank: k must be >= 1");
    }
    const auto ids = scores.ids();
    const auto values = scores.values();
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (values[a] != values[b]) {
                              return values[a] > values[b];
                          }
                          return ids[a] < ids[b];
                      });
    std::vector<RankedEntry> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back({ids[order[i]], values[order[i]], i + 1});
    }
    return out;
}

} // namespace supplyrank
