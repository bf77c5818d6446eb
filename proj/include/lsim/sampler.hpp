#pragma once
// Metropolis-Hastings sampling over fixed-(n_up, n_down) Z-product states
// with FDOS weights; exhaustive reference expectation and blocking analysis.

#include <cstdint>
#include <vector>

#include "lsim/common.hpp"
#include "lsim/filter.hpp"
#include "lsim/interferometry.hpp"
#include "lsim/model.hpp"
#include "lsim/rng.hpp"

namespace lsim {

struct ChainConfig {
    double E = 0.0;
    double delta = 1.0;
    long n_samples = 5000;
    long burn_in = -1;  // <0: default 10% of n_samples
    std::uint64_t seed = 1;
    EvaluatorConfig evaluator;
};

struct SampleRecord {
    ProductState state;
    double D = 0.0;
    double double_occupancy = 0.0;
    bool accepted = false;
};

struct BlockingLevel {
    long n = 0;          // samples at this level
    double est = 0.0;    // variance-of-mean estimate
    double uncert = 0.0; // est * sqrt(2/(n-1))
};

struct BlockingResult {
    double mean = 0.0;
    double stderror = 0.0;
    int plateau_level = 0;
    std::vector<BlockingLevel> levels;
};

struct HopProposal {
    ProductState next;
    double p_fwd = 1.0;
    double p_rev = 1.0;
};

// Double occupancy per site, sum_i n_iu n_id / n_sites.
double double_occupancy(const ProductState& s, const LatticeSpec& lattice);

// All legal single-fermion hops (occupied site -> empty same-spin neighbor),
// as (from_qubit, to_qubit) pairs in a fixed deterministic order.
std::vector<std::pair<int, int>> legal_hops(const ProductState& s, const LatticeSpec& lattice,
                                            const JWLayout& layout);

HopProposal propose_hop(const ProductState& s, const LatticeSpec& lattice, const JWLayout& layout,
                        Rng& rng);

bool accept(double D_new, double D_old, double p_fwd, double p_rev, Rng& rng);

std::vector<SampleRecord> run_chain(const ChainConfig& cfg, const LatticeSpec& lattice,
                                    const HubbardParams& params, const FilterSpec& filter);

double exhaustive_expectation(const LatticeSpec& lattice, const HubbardParams& params, double E,
                              double delta);

// Exact FDOS weight of every state in the (n_up, n_down) sector, in the same
// order as sector_states.
std::vector<double> exhaustive_weights(const LatticeSpec& lattice, const HubbardParams& params,
                                       double E, double delta, int n_up, int n_down);

BlockingResult blocking_error(const std::vector<double>& samples);

}  // namespace lsim
