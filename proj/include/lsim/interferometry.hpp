#pragma once
// Executes Loschmidt circuits and extracts p0, p_pi, Re(G e^{iEt}) with
// exact or shot-sampled readout; builds the filter time grid.

#include <map>
#include <vector>

#include "lsim/circuit.hpp"
#include "lsim/common.hpp"
#include "lsim/filter.hpp"
#include "lsim/noise.hpp"
#include "lsim/rng.hpp"
#include "lsim/sim.hpp"

namespace lsim {

struct InterferometryOutcome {
    double p0 = 0.0;
    double p_pi = 0.0;
    double re_g = 0.0;
    bool exact = true;
    long shots = 0;
    std::map<std::uint32_t, long> raw_counts;  // sampled mode only
    int pilot_wire = -1;
};

struct TimeGrid {
    std::vector<int> m;
    std::vector<double> t;
};

InterferometryOutcome run_exact(const LoschmidtCircuit& lc);
InterferometryOutcome run_sampled(const LoschmidtCircuit& lc, long shots, Rng& rng);

// Trajectory-sampled readout: every shot replays the circuit with fresh
// stochastic Pauli injection after each two-qubit gate, then samples once.
InterferometryOutcome run_trajectories(const LoschmidtCircuit& lc, double eps_2q, long shots,
                                       Rng& rng);

TimeGrid make_time_grid(const FilterSpec& spec);

// Trotter-step count policy per grid index.
struct TrotterPolicy {
    enum class Mode { fig2, fixed } mode = Mode::fig2;
    int fixed_steps = 2;
    int steps_for(int m) const {
        if (mode == Mode::fixed) return fixed_steps;
        return m < 2 ? 1 : 2;  // one step for the first two time points, two after
    }
};

// Full time series over the grid. Exact mode runs circuits noiselessly;
// sampled mode draws `shots` per point; sigma adds Gaussian noise on re_g.
TimeSeries timeseries_trotter(const ProductState& psi0, const LatticeSpec& lattice,
                              const HubbardParams& params, const FilterSpec& filter, double E,
                              const TrotterPolicy& policy, const TrotterOptions& opts,
                              std::optional<long> shots, double sigma, Rng& rng);

// Exact (non-Trotterized) series from loschmidt_exact.
TimeSeries timeseries_exact(const ProductState& psi0, const LatticeSpec& lattice,
                            const HubbardParams& params, const FilterSpec& filter, double E);

// --- batch FDOS over energies ------------------------------------------------

enum class EvalMode { exact, trotter_exact, trotter_sampled, noisy };

struct EvaluatorConfig {
    EvalMode mode = EvalMode::exact;
    long shots = 700;
    double sigma = 0.0;
    TrotterPolicy policy;
    TrotterOptions opts;
};

std::vector<FdosEstimate> fdos_batch(const ProductState& psi, const std::vector<double>& E_list,
                                     const FilterSpec& spec, const LatticeSpec& lattice,
                                     const HubbardParams& params, const EvaluatorConfig& eval,
                                     Rng& rng);

}  // namespace lsim
