#pragma once
// Truncated cosine-filter series: coefficients, time grid parameters, and
// reconstruction of the filtered density of states from a time series.

#include <vector>

#include "lsim/common.hpp"

namespace lsim {

struct FilterSpec {
    double delta = 1.0;
    double x = 1.0;      // truncation control
    double alpha = 0.0;  // 2*sqrt(n_qubits)
    long M = 0;          // even cosine power
    int R = 0;           // series truncation index
    std::vector<double> c;  // c[m] = 2^-M binom(M, M/2 - m), m = 0..R (0 beyond M/2)

    double t_of(int m) const { return 2.0 * m / alpha; }
    // Tail mass sum_{m>R} 2 c_m, bounding the truncation error.
    double truncation_bound() const { return tail_; }
    double tail_ = 0.0;
};

FilterSpec make_filter(int n_qubits, double delta, double x);

struct FdosEstimate {
    double E = 0.0;
    double value = 0.0;
    double truncation_bound = 0.0;
};

struct TimeSeriesPoint {
    int m = 0;
    double t = 0.0;
    double p0 = 0.0;
    double p_pi = 0.0;
    double re_g = 0.0;     // p0 - p_pi = Re(G e^{iEt})
    double variance = 0.0; // estimator variance of re_g (0 for exact)
    long shots = 0;        // 0 = exact
};
using TimeSeries = std::vector<TimeSeriesPoint>;

// D = c_0 s(0) + sum_{m=1..R} 2 c_m s(m); series must cover exactly m = 0..R
// on the spec's grid.
FdosEstimate fdos_from_series(const TimeSeries& series, const FilterSpec& spec, double E);

}  // namespace lsim
