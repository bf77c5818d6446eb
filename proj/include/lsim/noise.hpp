#pragma once
// Noise models at three levels: stochastic Pauli injection on circuits,
// the analytic outcome channel (q, gamma, kappa), and series-level
// shot/Gaussian perturbation; plus the coherent memory-error formulas.

#include <optional>
#include <utility>
#include <vector>

#include "lsim/circuit.hpp"
#include "lsim/common.hpp"
#include "lsim/filter.hpp"
#include "lsim/rng.hpp"

namespace lsim {

struct ThetaDist {
    enum class Kind { point, gaussian, uniform } kind = Kind::point;
    double mean = 0.0;
    double spread = 0.0;  // std dev (gaussian) or half-width (uniform)
    double mean_cos() const;
    double mean_sin() const;
};

struct NoiseSpec {
    double eps_2q = 0.0;
    std::optional<long> shots;
    double sigma_series = 0.0;
    std::optional<ThetaDist> memory;
    std::uint64_t seed = 0;
    void validate() const;
};

struct ChannelParams {
    double q = 1.0;
    double gamma = 0.0;
    int n_qubits = 0;
    double kappa() const;
    void validate() const;
};

// q = f^n (f = per-two-qubit-gate fidelity).
double q_factor(long n_2q_gates, double f);

// Two readings of "fidelity" for a uniform two-qubit depolarizing error of
// probability eps: the survival probability (default, used by acceptance) and
// the d=4 average gate fidelity.
double fidelity_survival(double eps);
double fidelity_average(double eps);

// p0* = (q+g) p0 + g p_pi + kappa; p_pi* symmetric.
std::pair<double, double> ghz_flip_channel(double p0, double p_pi, const ChannelParams& cp);

// Same channel on a full outcome distribution (indexed by bitstring); the
// gamma component mixes each string with its pilot-flipped partner.
std::vector<double> ghz_flip_channel(const std::vector<double>& probs, int pilot_wire,
                                     const ChannelParams& cp);

// One stochastic trajectory: after each two-qubit gate, with probability eps,
// a uniformly chosen non-identity two-qubit Pauli is appended.
Circuit inject_pauli_noise(const Circuit& c, double eps_2q, Rng& rng);

// Binomial shot resampling of (p0, p_pi) followed by additive Gaussian noise
// on re_g.
TimeSeries perturb_series(const TimeSeries& series, double sigma, std::optional<long> shots,
                          Rng& rng);

// Outcome probabilities under the coherent memory error with phase
// distribution theta, composed with the flip channel; G' = G e^{iEt}.
std::pair<double, double> memory_error_outcomes(cplx G, double E, double t,
                                                const ThetaDist& theta, const ChannelParams& cp);

}  // namespace lsim
