#pragma once

#include "supplyrank/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace supplyrank {

/// Box-and-whisker summary with linearly interpolated quartiles and whiskers
/// reaching the farthest sample within 1.5 IQR of the box.
struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> fliers; // ascending
    std::size_t n = 0;

    friend bool operator==(const BoxStats&, const BoxStats&) = default;
};

/// Linear-interpolation quantile of an ascending sample (p in [0, 1]).
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws Error{domain} for an empty sample.
BoxStats box_stats(std::span<const double> values);

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0; // Pearson; 0 when y is constant
    std::size_t n = 0;
};

/// Ordinary least squares of y on x. Throws Error{domain} for fewer than two
/// points or a constant x.
RegressionFit linear_regression(std::span<const std::pair<double, double>> points);

enum class BreakdownField { language, license, category, backer };

std::string_view to_string(BreakdownField f) noexcept;

struct BreakdownEntry {
    std::string label;
    std::size_t count;
    double share;

    friend bool operator==(const BreakdownEntry&, const BreakdownEntry&) = default;
};

/// Label counts sorted by count descending then label ascending. Empty values
/// are labelled "unset"; rows with several licenses are labelled "multi".
std::vector<BreakdownEntry> breakdown(std::span<const AnalysisRow> rows, BreakdownField field);

} // namespace supplyrank
