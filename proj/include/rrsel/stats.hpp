// SPDX-License-Identifier: Apache-2.0
//
// Across-seed aggregation with Student-t confidence intervals.

#pragma once

#include <span>

namespace rrsel::stats {

struct Summary {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    double ciLow = 0.0;
    double ciHigh = 0.0;
    int n = 0;

    double half_width() const { return 0.5 * (ciHigh - ciLow); }
};

/// Mean and two-sided Student-t interval at `confidence`. Requires n >= 2;
/// throws std::invalid_argument otherwise.
Summary summarize(std::span<const double> xs, double confidence = 0.95);

/// Two intervals share no point.
bool disjoint(const Summary& a, const Summary& b);

} // namespace rrsel::stats
