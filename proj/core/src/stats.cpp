#include "supplyrank/stats.hpp"

#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace supplyrank {

double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) {
        throw Error(ErrorKind::domain, "quantile of an empty sample");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values)
{
    if (values.empty()) {
        throw Error(ErrorKind::domain, "box statistics of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats s;
    s.n = sorted.size();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.iqr = s.q3 - s.q1;

    const double low_fence = s.q1 - 1.5 * s.iqr;
    const double high_fence = s.q3 + 1.5 * s.iqr;
    const auto first_inside = std::lower_bound(sorted.begin(), sorted.end(), low_fence);
    const auto past_inside = std::upper_bound(sorted.begin(), sorted.end(), high_fence);
    // whiskers never retreat inside the box
    s.whisker_low = (first_inside == sorted.end() || *first_inside > s.q1) ? s.q1 : *first_inside;
    s.whisker_high = (past_inside == sorted.begin() || *(past_inside - 1) < s.q3) ? s.q3 : *(past_inside - 1);
    for (double v : sorted) {
        if (v < s.whisker_low || v > s.whisker_high) {
            s.fliers.push_back(v);
        }
    }
    return s;
}

RegressionFit linear_regression(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 2) {
        throw Error(ErrorKind::domain, "linear regression needs at least two points");
    }
    const double n = static_cast<double>(points.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) {
        throw Error(ErrorKind::domain, "degenerate fit: all x values are equal");
    }
    RegressionFit fit;
    fit.n = points.size();
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return fit;
}

std::string_view to_string(BreakdownField f) noexcept
{
    switch (f) {
    case BreakdownField::language: return "language";
    case BreakdownField::license: return "license";
    case BreakdownField::category: return "category";
    case BreakdownField::backer: return "backer";
    }
    return "unknown";
}

std::vector<BreakdownEntry> breakdown(std::span<const AnalysisRow> rows, BreakdownField field)
{
    constexpr std::string_view unset = "unset";
    std::map<std::string, std::size_t> counts;
    for (const AnalysisRow& row : rows) {
        std::string label;
        switch (field) {
        case BreakdownField::language: label = row.metadata.language.value_or(""); break;
        case BreakdownField::category: label = row.metadata.category.value_or(""); break;
        case BreakdownField::backer:
            label = row.metadata.backer ? std::string(to_string(*row.metadata.backer)) : std::string{};
            break;
        case BreakdownField::license:
            if (row.licenses.size() > 1) {
                label = "multi";
            } else if (row.licenses.size() == 1) {
                label = row.licenses.front();
            }
            break;
        }
        ++counts[label.empty() ? std::string(unset) : std::move(label)];
    }
    std::vector<BreakdownEntry> out;
    const double total = static_cast<double>(rows.size());
    for (auto& [label, count] : counts) {
        out.push_back({label, count, static_cast<double>(count) / total});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const BreakdownEntry& a, const BreakdownEntry& b) { return a.count > b.count; });
    return out;
}

} // namespace supplyrank
