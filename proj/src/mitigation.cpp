#include "lsim/mitigation.hpp"

#include <bit>
#include <cmath>

namespace lsim {

double rescale(double p0_star, double p_pi_star, double q) {
    if (q <= 0) throw ContractError("rescale requires q > 0");
    return (p0_star - p_pi_star) / q;
}

SymmetryResult symmetry_filter(const std::map<std::uint32_t, double>& raw_counts,
                               const LoschmidtCircuit& lc) {
    const int nq = lc.psi0.n_qubits;
    const int n_sites = lc.lattice.n_sites();
    require(nq == 2 * n_sites, "state/lattice size mismatch");
    require(lc.pilot_wire >= 0 && lc.pilot_wire < nq, "missing pilot wire");

    const std::uint32_t pilot_bit = std::uint32_t(1) << lc.pilot_wire;
    std::uint32_t fan_mask = 0;
    for (int w : lc.fan_wires) fan_mask |= std::uint32_t(1) << w;

    // Wires holding up-register logical qubits at measurement time.
    std::uint32_t up_mask = 0;
    for (int w = 0; w < nq; ++w)
        if (lc.circuit.relabel[w] < n_sites) up_mask |= std::uint32_t(1) << w;

    auto in_sector = [&](std::uint32_t b) {
        if (b == 0) return true;  // vacuum branch
        int ups = std::popcount(b & up_mask);
        int downs = std::popcount(b & ~up_mask & ((std::uint32_t(1) << nq) - 1));
        return ups == lc.psi0.n_up && downs == lc.psi0.n_down;
    };

    double total = 0.0, kept = 0.0, m0 = 0.0, m_pi = 0.0;
    for (const auto& [s, w] : raw_counts) {
        total += w;
        // Pull back through H(pilot) then the decode CNOT fan: hypothesis
        // pilot=0 leaves the string; pilot=1 also flips the fan wires.
        std::uint32_t b0 = s & ~pilot_bit;
        std::uint32_t b1 = (s | pilot_bit) ^ fan_mask;
        if (!in_sector(b0) && !in_sector(b1)) continue;
        kept += w;
        if (s == 0) m0 += w;
        if (s == pilot_bit) m_pi += w;
    }
    require(total > 0, "symmetry_filter: empty counts");
    if (kept <= 0) throw ContractError("symmetry_filter discarded every shot");
    return {m0 / kept, m_pi / kept, kept / total};
}

namespace {

void append_gates(Circuit& dst, const Circuit& src) {
    for (const auto& g : src.gates) {
        switch (g.kind) {
            case GateKind::U1q: dst.add_u1q(g.q0, g.angle, g.phi); break;
            case GateKind::Rz: dst.add_rz(g.q0, g.angle); break;
            case GateKind::ZZPhase: dst.add_zz(g.q0, g.q1, g.angle); break;
            case GateKind::XXPhase: dst.add_xx(g.q0, g.q1, g.angle); break;
            case GateKind::YYPhase: dst.add_yy(g.q0, g.q1, g.angle); break;
            case GateKind::H: dst.add_h(g.q0); break;
            case GateKind::X: dst.add_x(g.q0); break;
            case GateKind::CNOT: dst.add_cnot(g.q0, g.q1); break;
            case GateKind::CZ: dst.add_cz(g.q0, g.q1); break;
            case GateKind::FSWAP: dst.add_fswap(g.q0, g.q1); break;
        }
    }
    dst.global_phase += src.global_phase;
}

}  // namespace

Circuit zne_fold(const Circuit& c) {
    Circuit folded = c;
    append_gates(folded, inverse(c));
    require(folded.relabel_is_identity(), "fold must restore the wire order");
    return folded;
}

LoschmidtCircuit zne_fold(const LoschmidtCircuit& lc) {
    LoschmidtCircuit folded = lc;
    folded.circuit = zne_fold(lc.circuit);
    // The fold ends in the inverted preparation, so the decode wires are the
    // logical positions again.
    folded.pilot_wire = folded.circuit.wire_of(lc.pilot);
    folded.fan_wires.clear();
    for (int q = 0; q < lc.psi0.n_qubits; ++q)
        if (((lc.psi0.bits >> q) & 1u) && q != lc.pilot)
            folded.fan_wires.push_back(folded.circuit.wire_of(q));
    return folded;
}

std::pair<double, double> zne_forward(const ChannelParams& cp) {
    cp.validate();
    double k = cp.kappa();
    double p0 = (cp.q + cp.gamma) * (cp.q + cp.gamma) + cp.gamma * cp.gamma + 2.0 * k;
    double p_pi = 2.0 * cp.gamma * (cp.q + cp.gamma) + 2.0 * k;
    return {p0, p_pi};
}

ChannelParams zne_extract(double p0_zne, double p_pi_zne, int n_qubits) {
    if (p0_zne < p_pi_zne)
        throw ContractError("zne_extract requires p0 >= p_pi (under-sampled input?)");
    double q = std::sqrt(p0_zne - p_pi_zne);
    // Solve p_pi = 2 gamma (q + gamma) + 2 (1 - q - 2 gamma)/d for gamma,
    // keeping the kappa term self-consistent (it depends on gamma itself):
    // 2 gamma^2 + 2 (q - 2/d) gamma + 2(1 - q)/d - p_pi = 0.
    double d = std::pow(2.0, n_qubits);
    double a = q - 2.0 / d;
    double disc = a * a - 4.0 / d * (1.0 - q) + 2.0 * p_pi_zne;
    if (disc < 0) disc = 0;
    double gamma = (-a + std::sqrt(disc)) / 2.0;
    if (gamma < 0) gamma = 0;
    return {q, gamma, n_qubits};
}

}  // namespace lsim
