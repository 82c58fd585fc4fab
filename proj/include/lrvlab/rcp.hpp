#ifndef LRVLAB_RCP_HPP
#define LRVLAB_RCP_HPP

#include "lrvlab/estimators.hpp"

#include <string>
#include <vector>

namespace lrvlab {

struct DetectedJump {
    long time = 0;           // 1-based index t_k; the jump sits between t_k - 1 and t_k
    double raw_jump = 0.0;   // X_{t_k} - X_{t_k - 1}
    double winsorized_jump = 0.0;
};

struct SegmentFit {
    long start = 0;          // 1-based first index of the segment
    long length = 0;
    double intercept = 0.0;  // alpha_{j,0}
    double slope = 0.0;      // alpha_{j,1}
    double shift = 0.0;      // cumulative level beta_{j,0} subtracted at the segment start
};

struct RcpOptions {
    int max_jumps = 10;      // N'
    double cap_multiplier = 100.0;  // M'
};

struct RcpReport {
    std::vector<DetectedJump> detected_jumps;  // in detection order
    std::vector<SegmentFit> slopes;
    double M = 0.0;
    int b = 0;
    int N = 0;
    std::vector<std::string> warnings;
};

struct RcpOutput {
    TimeSeries series;
    RcpReport report;
};

/// Batch length floor(n^{1/3}) computed without floating-point cube-root error.
int batch_length(std::size_t n);

/// Quantile with linear interpolation between order statistics ("type 7").
double quantile_type7(std::vector<double> values, double prob);

/// Step 1: iterative Tukey-fence scan for obvious jumps, each removed as a
/// winsorized step. Univariate input; n >= 8.
RcpOutput remove_jumps(const TimeSeries& x, const RcpOptions& options = {});

/// Step 2: per-segment least-squares slopes removed as a continuous broken
/// line. `jump_times` (1-based, any order) split [1, n] into segments.
RcpOutput remove_slopes(const TimeSeries& x_dagger, const std::vector<long>& jump_times);

/// Both steps. Univariate input.
RcpOutput rough_center(const TimeSeries& x, const RcpOptions& options = {});

} // namespace lrvlab

#endif
