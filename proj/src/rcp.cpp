#include "lrvlab/rcp.hpp"

#include "lrvlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lrvlab {

int batch_length(std::size_t n) {
    long b = static_cast<long>(std::cbrt(static_cast<double>(n)));
    while ((b + 1) * (b + 1) * (b + 1) <= static_cast<long>(n)) ++b;
    while (b > 0 && b * b * b > static_cast<long>(n)) --b;
    return static_cast<int>(b);
}

double quantile_type7(std::vector<double> values, double prob) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return values[lo];
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

void require_univariate(const TimeSeries& x, const char* what) {
    if (x.dims() != 1) throw DomainError(std::string(what) + ": rough centering works on univariate series");
}

} // namespace

RcpOutput remove_jumps(const TimeSeries& x, const RcpOptions& options) {
    require_univariate(x, "remove_jumps");
    const std::size_t n = x.size();
    if (n < 8) {
        std::ostringstream msg;
        msg << "jump removal needs n >= 8, got n = " << n;
        throw InsufficientDataError(msg.str());
    }
    if (options.max_jumps < 0) throw ConfigError("maximum number of jumps must be non-negative");
    if (!(options.cap_multiplier > 0.0)) throw ConfigError("jump cap multiplier must be positive");

    std::vector<double> cur = x.column(0);
    RcpReport report;
    report.b = batch_length(n);
    double ss = 0.0;
    for (std::size_t i = 1; i < n; ++i) ss += (cur[i] - cur[i - 1]) * (cur[i] - cur[i - 1]);
    report.M = options.cap_multiplier * std::sqrt(ss / (2.0 * static_cast<double>(n)));

    const long b = report.b;
    if (b < 2) {
        report.warnings.push_back("batch length below 2; jump scan skipped");
        return {TimeSeries(cur), report};
    }
    const long first = b + 1;                         // 1-based scan range b+1..n-b+1
    const long last = static_cast<long>(n) - b + 1;
    std::vector<char> taken(n + 1, 0);
    std::vector<double> xi(static_cast<std::size_t>(last - first + 1));
    for (int k = 1; k <= options.max_jumps; ++k) {
        for (long i = first; i <= last; ++i) {
            double ahead = 0.0, behind = 0.0;
            for (long j = 0; j < b; ++j) {
                ahead += cur[static_cast<std::size_t>(i - 1 + j)];
                behind += cur[static_cast<std::size_t>(i - 2 - j)];
            }
            xi[static_cast<std::size_t>(i - first)] = (ahead - behind) / static_cast<double>(b);
        }
        const double q1 = quantile_type7(xi, 0.25);
        const double q3 = quantile_type7(xi, 0.75);
        long best = -1;
        double best_out = 0.0;
        for (long i = first; i <= last; ++i) {
            if (taken[static_cast<std::size_t>(i)]) continue;
            const double v = xi[static_cast<std::size_t>(i - first)];
            const double out = std::max({0.0, v - (4.0 * q3 - 3.0 * q1), (4.0 * q1 - 3.0 * q3) - v});
            // ties go to the later index
            if (out > 0.0 && out >= best_out) {
                best_out = out;
                best = i;
            }
        }
        if (best < 0) break;
        taken[static_cast<std::size_t>(best)] = 1;
        const auto t = static_cast<std::size_t>(best);
        const double raw = cur[t - 1] - cur[t - 2];
        const double win = std::clamp(raw, -report.M, report.M);
        for (std::size_t i = t - 1; i < n; ++i) cur[i] -= win;
        report.detected_jumps.push_back({best, raw, win});
    }
    report.N = static_cast<int>(report.detected_jumps.size());
    return {TimeSeries(cur), report};
}

RcpOutput remove_slopes(const TimeSeries& x_dagger, const std::vector<long>& jump_times) {
    require_univariate(x_dagger, "remove_slopes");
    const long n = static_cast<long>(x_dagger.size());
    std::vector<long> cuts{1};
    for (long t : jump_times) {
        if (t < 2 || t > n) {
            std::ostringstream msg;
            msg << "jump time " << t << " outside 2.." << n;
            throw DomainError(msg.str());
        }
        cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(n + 1);

    std::vector<double> out = x_dagger.column(0);
    RcpReport report;
    double shift = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const long start = cuts[j];
        const long len = cuts[j + 1] - start;
        SegmentFit fit;
        fit.start = start;
        fit.length = len;
        fit.shift = shift;
        const double y0 = out[static_cast<std::size_t>(start - 1)];
        if (len >= 2) {
            const double ubar = static_cast<double>(len - 1) / 2.0;
            double sxy = 0.0, sxx = 0.0, ysum = 0.0;
            for (long u = 0; u < len; ++u) {
                const double y = out[static_cast<std::size_t>(start - 1 + u)] - y0;
                sxy += (static_cast<double>(u) - ubar) * y;
                sxx += (static_cast<double>(u) - ubar) * (static_cast<double>(u) - ubar);
                ysum += y;
            }
            fit.slope = sxy / sxx;
            fit.intercept = y0 + ysum / static_cast<double>(len) - fit.slope * ubar;
        } else {
            fit.intercept = y0;
        }
        for (long u = 0; u < len; ++u)
            out[static_cast<std::size_t>(start - 1 + u)] -= shift + fit.slope * static_cast<double>(u);
        // the next segment continues the line one step past this segment's last point
        shift += fit.slope * static_cast<double>(len);
        report.slopes.push_back(fit);
    }
    return {TimeSeries(out), report};
}

RcpOutput rough_center(const TimeSeries& x, const RcpOptions& options) {
    auto step1 = remove_jumps(x, options);
    std::vector<long> times;
    for (const auto& j : step1.report.detected_jumps) times.push_back(j.time);
    auto step2 = remove_slopes(step1.series, times);
    step1.report.slopes = std::move(step2.report.slopes);
    return {std::move(step2.series), std::move(step1.report)};
}

} // namespace lrvlab
