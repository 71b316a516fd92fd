// SPDX-License-Identifier: Apache-2.0

#include "rrsel/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rrsel::stats {

Summary summarize(std::span<const double> xs, double confidence)
{
    if (xs.size() < 2)
        throw std::invalid_argument("summarize: need at least two samples");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("summarize: confidence must lie in (0, 1)");

    Summary s;
    s.n = static_cast<int>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / s.n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));

    boost::math::students_t dist(s.n - 1);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence)));
    const double hw = t * s.stddev / std::sqrt(static_cast<double>(s.n));
    s.ciLow = s.mean - hw;
    s.ciHigh = s.mean + hw;
    return s;
}

bool disjoint(const Summary& a, const Summary& b) { return a.ciHigh < b.ciLow || b.ciHigh < a.ciLow; }

} // namespace rrsel::stats
