#pragma once
// Error mitigation: q-rescaling, symmetry post-selection via classical
// pullback through the GHZ decode fan, and ZNE folding extraction of (q, gamma).

#include <map>
#include <string>

#include "lsim/circuit.hpp"
#include "lsim/common.hpp"
#include "lsim/noise.hpp"

namespace lsim {

struct MitigatedOutcome {
    double re_g_mitigated = 0.0;
    std::string method;  // rescale | symmetry | zne-rescale
    double q_used = 1.0;
    double gamma_used = 0.0;
    double kept_fraction = 1.0;  // symmetry only
    double sigma = 0.0;          // propagated 1-sigma uncertainty
};

// (p0* - p_pi*)/q.
double rescale(double p0_star, double p_pi_star, double q);

struct SymmetryResult {
    double p0 = 0.0;
    double p_pi = 0.0;
    double kept_fraction = 0.0;
};

// Keeps a shot iff pulling its bitstring back through the decode CNOT fan
// (pilot bit tried both ways) lands in the vacuum sector or psi0's
// (n_up, n_down) sector; p0/p_pi renormalized over kept shots. Counts may be
// soft (trajectory-averaged masses).
SymmetryResult symmetry_filter(const std::map<std::uint32_t, double>& raw_counts,
                               const LoschmidtCircuit& lc);

// Appends the exact inverse; noiseless folded circuit acts as the identity.
Circuit zne_fold(const Circuit& c);
LoschmidtCircuit zne_fold(const LoschmidtCircuit& lc);

// Forward composition of the flip channel with itself on the ideal folded
// outcome (p0 = 1): p0 = (q+g)^2 + g^2 + 2K, p_pi = 2g(q+g) + 2K.
std::pair<double, double> zne_forward(const ChannelParams& cp);

// Inverts zne_forward: q = sqrt(p0 - p_pi); gamma from the exact quadratic
// with kappa self-consistent.
ChannelParams zne_extract(double p0_zne, double p_pi_zne, int n_qubits);

}  // namespace lsim
