#pragma once
// Run configuration: JSON schema with strict unknown-key rejection, CLI
// overrides, and a stable FNV-1a hash embedded in every output artifact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsim/circuit.hpp"
#include "lsim/interferometry.hpp"
#include "lsim/model.hpp"
#include "lsim/noise.hpp"

namespace cli {

struct RunConfig {
    lsim::LatticeSpec lattice{2, 2};
    lsim::HubbardParams params;
    std::vector<double> energies{1.0};
    double delta = 1.0;
    double filter_x = 1.0;
    lsim::TrotterPolicy policy;
    lsim::TrotterOptions trotter_opts;
    std::string state = "neel";  // "neel" or a 0x-prefixed occupation bitmask
    std::optional<lsim::NoiseSpec> noise;
    std::string mitigation_method;  // "", rescale, symmetry, zne-rescale
    double mitigation_q = 0.0;      // 0: derive from noise.eps_2q and gate count
    lsim::EvaluatorConfig evaluator;
    long chain_samples = 5000;
    long chain_burn_in = -1;
    bool chain_sweep = false;
    bool dry_run = false;
    int force_qubits = 0;  // dry-run metadata for larger devices
    std::vector<int> res_sizes{4, 5, 6, 7, 8};
    std::vector<double> res_fidelities{0.998, 0.999};
    std::vector<std::string> res_encodings{"JW", "compact"};
    std::string mitigate_input;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int jobs = 0;  // 0: hardware concurrency

    std::string hash;  // filled after load + overrides
};

// path empty -> defaults. All schema violations throw lsim::ConfigError.
RunConfig load_config(const std::string& path);

// Hash of the effective configuration (seed included, jobs excluded).
std::string config_hash(const RunConfig& cfg);

// Initial product state named by cfg.state.
lsim::ProductState resolve_state(const RunConfig& cfg);

}  // namespace cli
