#include "lsim/interferometry.hpp"

#include <cmath>

namespace lsim {

InterferometryOutcome run_exact(const LoschmidtCircuit& lc) {
    StateVector psi = StateVector::vacuum(lc.circuit.n_qubits);
    run_circuit(psi, lc.circuit);
    InterferometryOutcome out;
    out.exact = true;
    out.pilot_wire = lc.pilot_wire;
    out.p0 = psi.probability(0);
    out.p_pi = psi.probability(std::uint64_t(1) << lc.pilot_wire);
    out.re_g = out.p0 - out.p_pi;
    return out;
}

InterferometryOutcome run_sampled(const LoschmidtCircuit& lc, long shots, Rng& rng) {
    if (shots < 1) throw ContractError("shots must be >= 1");
    StateVector psi = StateVector::vacuum(lc.circuit.n_qubits);
    run_circuit(psi, lc.circuit);
    InterferometryOutcome out;
    out.exact = false;
    out.shots = shots;
    out.pilot_wire = lc.pilot_wire;
    out.raw_counts = psi.sample_counts(rng, shots);
    const std::uint32_t pi_string = std::uint32_t(1) << lc.pilot_wire;
    auto count_of = [&](std::uint32_t s) {
        auto it = out.raw_counts.find(s);
        return it == out.raw_counts.end() ? 0L : it->second;
    };
    out.p0 = static_cast<double>(count_of(0)) / shots;
    out.p_pi = static_cast<double>(count_of(pi_string)) / shots;
    out.re_g = out.p0 - out.p_pi;
    return out;
}

InterferometryOutcome run_trajectories(const LoschmidtCircuit& lc, double eps_2q, long shots,
                                       Rng& rng) {
    if (shots < 1) throw ContractError("shots must be >= 1");
    InterferometryOutcome out;
    out.exact = false;
    out.shots = shots;
    out.pilot_wire = lc.pilot_wire;
    for (long s = 0; s < shots; ++s) {
        Circuit noisy = inject_pauli_noise(lc.circuit, eps_2q, rng);
        StateVector psi = StateVector::vacuum(noisy.n_qubits);
        run_circuit(psi, noisy);
        out.raw_counts[static_cast<std::uint32_t>(psi.sample_index(rng))]++;
    }
    const std::uint32_t pi_string = std::uint32_t(1) << lc.pilot_wire;
    auto count_of = [&](std::uint32_t key) {
        auto it = out.raw_counts.find(key);
        return it == out.raw_counts.end() ? 0L : it->second;
    };
    out.p0 = static_cast<double>(count_of(0)) / shots;
    out.p_pi = static_cast<double>(count_of(pi_string)) / shots;
    out.re_g = out.p0 - out.p_pi;
    return out;
}

TimeGrid make_time_grid(const FilterSpec& spec) {
    TimeGrid grid;
    for (int m = 0; m <= spec.R; ++m) {
        grid.m.push_back(m);
        grid.t.push_back(spec.t_of(m));
    }
    return grid;
}

TimeSeries timeseries_trotter(const ProductState& psi0, const LatticeSpec& lattice,
                              const HubbardParams& params, const FilterSpec& filter, double E,
                              const TrotterPolicy& policy, const TrotterOptions& opts,
                              std::optional<long> shots, double sigma, Rng& rng) {
    TimeGrid grid = make_time_grid(filter);
    TimeSeries series;
    for (std::size_t i = 0; i < grid.m.size(); ++i) {
        int m = grid.m[i];
        double t = grid.t[i];
        int steps = policy.steps_for(m);
        LoschmidtCircuit lc = build_loschmidt_circuit(psi0, lattice, params, t, steps, E, opts);
        TimeSeriesPoint pt;
        pt.m = m;
        pt.t = t;
        if (shots) {
            InterferometryOutcome o = run_sampled(lc, *shots, rng);
            pt.p0 = o.p0;
            pt.p_pi = o.p_pi;
            pt.shots = *shots;
            pt.variance = (o.p0 * (1 - o.p0) + o.p_pi * (1 - o.p_pi) + 2 * o.p0 * o.p_pi) /
                          static_cast<double>(*shots);
        } else {
            InterferometryOutcome o = run_exact(lc);
            pt.p0 = o.p0;
            pt.p_pi = o.p_pi;
        }
        pt.re_g = pt.p0 - pt.p_pi;
        if (sigma > 0) {
            pt.re_g += sigma * rng.normal();
            pt.variance += sigma * sigma;
        }
        series.push_back(pt);
    }
    return series;
}

TimeSeries timeseries_exact(const ProductState& psi0, const LatticeSpec& lattice,
                            const HubbardParams& params, const FilterSpec& filter, double E) {
    TimeGrid grid = make_time_grid(filter);
    TimeSeries series;
    for (std::size_t i = 0; i < grid.m.size(); ++i) {
        double t = grid.t[i];
        cplx g = loschmidt_exact(psi0, lattice, params, t, E);
        TimeSeriesPoint pt;
        pt.m = grid.m[i];
        pt.t = t;
        pt.re_g = g.real();
        // exact p0/p_pi via the interference identities with |G| from the same oracle
        cplx g0 = loschmidt_exact(psi0, lattice, params, t, 0.0);
        double g2 = std::norm(g0);
        pt.p0 = 0.25 * (1 + g2 + 2 * g.real());
        pt.p_pi = 0.25 * (1 + g2 - 2 * g.real());
        series.push_back(pt);
    }
    return series;
}

std::vector<FdosEstimate> fdos_batch(const ProductState& psi, const std::vector<double>& E_list,
                                     const FilterSpec& spec, const LatticeSpec& lattice,
                                     const HubbardParams& params, const EvaluatorConfig& eval,
                                     Rng& rng) {
    std::vector<FdosEstimate> out;
    if (eval.mode == EvalMode::exact) {
        // one complex series serves every E: e^{iEt} is applied in post-processing
        TimeGrid grid = make_time_grid(spec);
        std::vector<cplx> g(grid.m.size());
        for (std::size_t i = 0; i < grid.m.size(); ++i)
            g[i] = loschmidt_exact(psi, lattice, params, grid.t[i], 0.0);
        for (double E : E_list) {
            TimeSeries series;
            for (std::size_t i = 0; i < grid.m.size(); ++i) {
                TimeSeriesPoint pt;
                pt.m = grid.m[i];
                pt.t = grid.t[i];
                pt.re_g = (g[i] * std::exp(cplx(0, E * grid.t[i]))).real();
                series.push_back(pt);
            }
            out.push_back(fdos_from_series(series, spec, E));
        }
        return out;
    }
    for (double E : E_list) {
        std::optional<long> shots;
        double sigma = 0.0;
        if (eval.mode == EvalMode::trotter_sampled || eval.mode == EvalMode::noisy)
            shots = eval.shots;
        if (eval.mode == EvalMode::noisy) sigma = eval.sigma;
        TimeSeries series = timeseries_trotter(psi, lattice, params, spec, E, eval.policy,
                                               eval.opts, shots, sigma, rng);
        out.push_back(fdos_from_series(series, spec, E));
    }
    return out;
}

}  // namespace lsim
