#pragma once
// Closed-form resource estimation: per-step two-qubit gate counts for the JW
// and compact encodings, Trotter-step scaling, q factors and shot overheads.

#include <string>
#include <vector>

#include "lsim/common.hpp"
#include "lsim/model.hpp"

namespace lsim {

// Two-qubit gates per second-order Trotter step, JW encoding.
long n_jw(int x, int y);

// Same for the compact (local) encoding.
long n_compact(int x, int y);

// ceil((2/sqrt(32)) * sqrt(n_qubits)).
int n_trotter_steps(int n_qubits);

struct ResourceEstimate {
    LatticeSpec lattice;
    std::string encoding;  // "JW" | "compact"
    double f = 1.0;
    int n_steps = 0;
    long gates_per_step = 0;
    long total_2q = 0;
    double q = 1.0;
    double overhead = 1.0;  // 1/q^2
};

ResourceEstimate shot_overhead(const LatticeSpec& lattice, const std::string& encoding, double f);

}  // namespace lsim
