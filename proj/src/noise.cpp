#include "lsim/noise.hpp"

#include <algorithm>
#include <cmath>

namespace lsim {

double ThetaDist::mean_cos() const {
    switch (kind) {
        case Kind::point: return std::cos(mean);
        case Kind::gaussian: return std::cos(mean) * std::exp(-spread * spread / 2.0);
        case Kind::uniform: {
            double s = spread == 0.0 ? 1.0 : std::sin(spread) / spread;
            return std::cos(mean) * s;
        }
    }
    return 0.0;
}

double ThetaDist::mean_sin() const {
    switch (kind) {
        case Kind::point: return std::sin(mean);
        case Kind::gaussian: return std::sin(mean) * std::exp(-spread * spread / 2.0);
        case Kind::uniform: {
            double s = spread == 0.0 ? 1.0 : std::sin(spread) / spread;
            return std::sin(mean) * s;
        }
    }
    return 0.0;
}

void NoiseSpec::validate() const {
    if (eps_2q < 0 || eps_2q >= 1) throw ConfigError("eps_2q must be in [0, 1)");
    if (sigma_series < 0) throw ConfigError("sigma_series must be >= 0");
    if (shots && *shots < 1) throw ConfigError("shots must be >= 1");
}

double ChannelParams::kappa() const {
    return (1.0 - q - 2.0 * gamma) / std::pow(2.0, n_qubits);
}

void ChannelParams::validate() const {
    if (q < 0 || q > 1 || gamma < 0 || q + 2 * gamma > 1 + 1e-12)
        throw ContractError("channel requires 0 <= q, gamma and q + 2 gamma <= 1");
}

double q_factor(long n_2q_gates, double f) {
    if (f <= 0 || f > 1) throw ContractError("fidelity must be in (0, 1]");
    return std::pow(f, static_cast<double>(n_2q_gates));
}

double fidelity_survival(double eps) { return 1.0 - eps; }
double fidelity_average(double eps) { return 1.0 - eps * 16.0 / 20.0; }

std::pair<double, double> ghz_flip_channel(double p0, double p_pi, const ChannelParams& cp) {
    cp.validate();
    double k = cp.kappa();
    return {(cp.q + cp.gamma) * p0 + cp.gamma * p_pi + k,
            (cp.q + cp.gamma) * p_pi + cp.gamma * p0 + k};
}

std::vector<double> ghz_flip_channel(const std::vector<double>& probs, int pilot_wire,
                                     const ChannelParams& cp) {
    cp.validate();
    double k = cp.kappa();
    std::vector<double> out(probs.size());
    std::size_t flip = std::size_t(1) << pilot_wire;
    for (std::size_t s = 0; s < probs.size(); ++s)
        out[s] = cp.q * probs[s] + cp.gamma * (probs[s] + probs[s ^ flip]) + k;
    return out;
}

Circuit inject_pauli_noise(const Circuit& c, double eps_2q, Rng& rng) {
    if (eps_2q < 0 || eps_2q >= 1) throw ContractError("eps_2q must be in [0, 1)");
    Circuit noisy(c.n_qubits);
    auto add_pauli = [&](int q, int p) {
        switch (p) {
            case 1: noisy.add_x(q); break;
            case 2: noisy.add_u1q(q, PI, PI / 2); break;  // Y up to phase
            case 3: noisy.add_rz(q, PI); break;           // Z up to phase
            default: break;
        }
    };
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::U1q: noisy.add_u1q(g.q0, g.angle, g.phi); break;
            case GateKind::Rz: noisy.add_rz(g.q0, g.angle); break;
            case GateKind::ZZPhase: noisy.add_zz(g.q0, g.q1, g.angle); break;
            case GateKind::XXPhase: noisy.add_xx(g.q0, g.q1, g.angle); break;
            case GateKind::YYPhase: noisy.add_yy(g.q0, g.q1, g.angle); break;
            case GateKind::H: noisy.add_h(g.q0); break;
            case GateKind::X: noisy.add_x(g.q0); break;
            case GateKind::CNOT: noisy.add_cnot(g.q0, g.q1); break;
            case GateKind::CZ: noisy.add_cz(g.q0, g.q1); break;
            case GateKind::FSWAP: noisy.add_fswap(g.q0, g.q1); break;
        }
        if (g.is_two_qubit() && rng.bernoulli(eps_2q)) {
            // uniform non-identity two-qubit Pauli, encoded as 4*a + b in 1..15
            int code = static_cast<int>(rng.uniform_int(15)) + 1;
            add_pauli(g.q0, code / 4);
            add_pauli(g.q1, code % 4);
        }
    }
    noisy.global_phase += c.global_phase;
    return noisy;
}

TimeSeries perturb_series(const TimeSeries& series, double sigma, std::optional<long> shots,
                          Rng& rng) {
    if (sigma < 0) throw ContractError("sigma must be >= 0");
    TimeSeries out = series;
    for (auto& pt : out) {
        if (shots) {
            long n = *shots;
            require(n >= 1, "shots must be >= 1");
            double p0 = std::clamp(pt.p0, 0.0, 1.0);
            double p_pi = std::clamp(pt.p_pi, 0.0, 1.0);
            auto un = static_cast<std::uint64_t>(n);
            pt.p0 = static_cast<double>(rng.binomial(un, p0)) / static_cast<double>(n);
            pt.p_pi = static_cast<double>(rng.binomial(un, p_pi)) / static_cast<double>(n);
            pt.shots = n;
            pt.variance = (pt.p0 * (1 - pt.p0) + pt.p_pi * (1 - pt.p_pi)) / n;
            pt.re_g = pt.p0 - pt.p_pi;
        }
        if (sigma > 0) {
            pt.re_g += sigma * rng.normal();
            pt.variance += sigma * sigma;
        }
    }
    return out;
}

std::pair<double, double> memory_error_outcomes(cplx G, double E, double t,
                                                const ThetaDist& theta, const ChannelParams& cp) {
    cp.validate();
    cplx gp = G * std::exp(cplx(0, E * t));
    double uniform = (1.0 - cp.q - 2.0 * cp.gamma) / std::pow(2.0, cp.n_qubits);
    double symmetric = (cp.q + 2.0 * cp.gamma) / 4.0 * (1.0 + std::norm(G));
    double interference =
        cp.q / 4.0 * (2.0 * theta.mean_cos() * gp.real() - 2.0 * theta.mean_sin() * gp.imag());
    return {uniform + symmetric + interference, uniform + symmetric - interference};
}

}  // namespace lsim
