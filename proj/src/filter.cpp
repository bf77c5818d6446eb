#include "lsim/filter.hpp"

#include <cmath>

namespace lsim {

FilterSpec make_filter(int n_qubits, double delta, double x) {
    if (n_qubits < 1 || delta <= 0 || x <= 0)
        throw ContractError("make_filter: parameters must be positive");
    FilterSpec spec;
    spec.delta = delta;
    spec.x = x;
    spec.alpha = 2.0 * std::sqrt(static_cast<double>(n_qubits));
    // alpha^2 = 4 n exactly; squaring the rounded sqrt can land just below the
    // integer, so compute the ratio from the exact value.
    double m_real = 4.0 * static_cast<double>(n_qubits) / (delta * delta);
    spec.M = static_cast<long>(std::floor(m_real));
    if (spec.M % 2 != 0) spec.M -= 1;  // even floor
    require(spec.M >= 2, "filter power M too small");
    spec.R = static_cast<int>(std::ceil(x * spec.alpha / delta));

    // c_m = 2^-M binom(M, M/2 - m), in log space for large M
    spec.c.resize(spec.R + 1, 0.0);
    const double logn = std::lgamma(static_cast<double>(spec.M) + 1.0);
    const long half = spec.M / 2;
    for (int m = 0; m <= spec.R; ++m) {
        if (m > half) continue;  // binomial support ends at M/2
        double logc = logn - std::lgamma(static_cast<double>(half - m) + 1.0) -
                      std::lgamma(static_cast<double>(half + m) + 1.0) -
                      static_cast<double>(spec.M) * std::log(2.0);
        spec.c[m] = std::exp(logc);
    }

    // tail mass sum_{m>R} 2 c_m
    double tail = 0.0;
    for (long m = half; m > spec.R; --m) {
        double logc = logn - std::lgamma(static_cast<double>(half - m) + 1.0) -
                      std::lgamma(static_cast<double>(half + m) + 1.0) -
                      static_cast<double>(spec.M) * std::log(2.0);
        tail += 2.0 * std::exp(logc);
    }
    spec.tail_ = tail;
    return spec;
}

FdosEstimate fdos_from_series(const TimeSeries& series, const FilterSpec& spec, double E) {
    if (static_cast<int>(series.size()) != spec.R + 1)
        throw ContractError("series does not cover m = 0..R");
    for (int m = 0; m <= spec.R; ++m) {
        if (series[m].m != m || std::abs(series[m].t - spec.t_of(m)) > 1e-9)
            throw ContractError("series grid does not match the filter spec");
    }
    double d = spec.c[0] * series[0].re_g;
    for (int m = 1; m <= spec.R; ++m) d += 2.0 * spec.c[m] * series[m].re_g;
    return {E, d, spec.truncation_bound()};
}

}  // namespace lsim
