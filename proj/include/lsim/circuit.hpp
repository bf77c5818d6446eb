#pragma once
// Native-gateset circuits: Trotterized Hubbard evolution compiled onto a
// 1D qubit chain with FSWAP reordering, GHZ interferometry prep/unprep,
// gate counting and a line-oriented text serialization.
//
// Angle convention: Rz(θ) = exp(-i θ Z/2), ZZPhase(α) = exp(-i α Z⊗Z/2),
// XXPhase/YYPhase analogous, U1q(θ,φ) = exp(-i θ (cosφ X + sinφ Y)/2).
// Angles are stored canonically in [0, 2π); the (-1)^k factor from each 2π
// wrap is folded into Circuit::global_phase so the circuit unitary is exact
// including phase.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lsim/common.hpp"
#include "lsim/model.hpp"

namespace lsim {

enum class GateKind { U1q, Rz, ZZPhase, XXPhase, YYPhase, H, X, CNOT, CZ, FSWAP };

const char* gate_kind_name(GateKind k);
bool gate_kind_is_two_qubit(GateKind k);
bool gate_kind_has_angle(GateKind k);

struct Gate {
    GateKind kind;
    int q0 = -1;
    int q1 = -1;        // -1 for single-qubit gates
    double angle = 0.0;  // θ or α, canonical [0, 2π)
    double phi = 0.0;    // U1q only, canonical [0, 2π)
    bool is_two_qubit() const { return gate_kind_is_two_qubit(kind); }
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<int> relabel;   // relabel[wire] = logical qubit currently on that wire
    double global_phase = 0.0;  // U = e^{i global_phase} * (gate product)

    explicit Circuit(int n = 0);

    // Emission helpers; canonicalize angles and track wrap phases.
    void add_u1q(int q, double theta, double phi);
    void add_rz(int q, double theta);
    void add_zz(int a, int b, double alpha);
    void add_xx(int a, int b, double alpha);
    void add_yy(int a, int b, double alpha);
    void add_h(int q);
    void add_x(int q);
    void add_cnot(int control, int target);
    void add_cz(int a, int b);
    void add_fswap(int a, int b);  // fermionic swap; relabel tracks the move
    void add_phase(double phase) { global_phase += phase; }

    long count_two_qubit() const;
    int wire_of(int logical_qubit) const;  // inverse of relabel
    bool relabel_is_identity() const;

  private:
    void check_targets(int a, int b) const;
    void push(GateKind kind, int a, int b, double angle, double phi);
};

// Exact inverse: reversed gate order, negated angles, negated global phase.
Circuit inverse(const Circuit& c);

// --- FSWAP network -----------------------------------------------------------

// One round = a layer of disjoint adjacent transpositions (register-local
// snake positions); exposed_bonds lists the vertical lattice bonds (site_a <
// site_b) that become JW-adjacent right after the round.
struct FswapRound {
    std::vector<std::pair<int, int>> position_swaps;
    std::vector<std::pair<int, int>> exposed_bonds;
};

struct FswapNetwork {
    std::vector<std::pair<int, int>> initial_bonds;  // vertical bonds adjacent before swapping
    std::vector<FswapRound> rounds;
    // Vertical bonds the swap budget never makes adjacent (nonempty only when
    // x >= 3 and y >= 3); their hops are applied at the end of the step.
    std::vector<std::pair<int, int>> leftover_bonds;
    // FSWAP gates per Trotter step, both spin registers jointly.
    long total_fswaps() const;
};

FswapNetwork build_fswap_network(const LatticeSpec& lattice, const JWLayout& layout);

// --- builders ----------------------------------------------------------------

struct TrotterOptions {
    bool first_step_onsite_as_1q = false;
};

// Appends one first-order step exp(-i H_int dt) then exp(-i H_hopp dt) onto c.
// `reversed` mirrors the hopping block (bond order and swap rounds) so that
// consecutive forward/reversed steps restore the wire order; the onsite layer
// always comes first. `onsite_as_1q` replaces the onsite layer by the
// equivalent pilot-qubit rotation, valid only on the GHZ interferometry
// subspace span{vacuum, psi0-branch}.
void append_trotter_step(Circuit& c, const LatticeSpec& lattice, const HubbardParams& params,
                         const JWLayout& layout, double dt, bool reversed,
                         bool onsite_as_1q = false, int pilot_wire = -1, int n_double_occ = 0);

Circuit build_trotter_step(const LatticeSpec& lattice, const HubbardParams& params,
                           const JWLayout& layout, double dt, bool reversed);

// GHZ preparation (|0...0> + e^{i xi}|psi0>)/sqrt(2): H + Rz on the pilot
// (first occupied position), CNOT fan to the other occupied positions.
Circuit build_ghz_prep(const ProductState& psi0, double xi);

struct LoschmidtCircuit {
    Circuit circuit;
    ProductState psi0;
    LatticeSpec lattice;
    HubbardParams params;
    double t = 0.0;
    double E = 0.0;
    int n_steps = 0;
    int pilot = -1;                 // logical qubit index
    int pilot_wire = -1;            // wire holding the pilot at measurement time
    std::vector<int> fan_wires;     // wires of the non-pilot occupied positions at unprep time
};

LoschmidtCircuit build_loschmidt_circuit(const ProductState& psi0, const LatticeSpec& lattice,
                                         const HubbardParams& params, double t, int n_steps,
                                         double E, const TrotterOptions& opts = {});

// --- gate counting -----------------------------------------------------------

enum class Technique { GHZ, Hadamard };

struct GateCounts {
    long onsite = 0;   // Table convention: one step's onsite layer (first step absorbed)
    long hopping = 0;  // per Trotter step
    long ghz = 0;      // prep + unprep (GHZ technique only)
    long total_2q = 0; // two steps: onsite + 2*hopping + ghz
    int n_qubits = 0;
};

GateCounts count_gates(const LatticeSpec& lattice, Technique technique);

// --- serialization -----------------------------------------------------------

std::string serialize(const Circuit& c);
Circuit deserialize(const std::string& text);

}  // namespace lsim
