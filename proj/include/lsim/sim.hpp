#pragma once
// Dense statevector engine plus the exact eigendecomposition oracle
// (full-space for small operators, number-sector-blocked for speed).

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "lsim/circuit.hpp"
#include "lsim/common.hpp"
#include "lsim/model.hpp"
#include "lsim/rng.hpp"

namespace lsim {

class StateVector {
  public:
    explicit StateVector(int n_qubits);
    static StateVector vacuum(int n_qubits);
    static StateVector basis(int n_qubits, std::uint64_t index);
    static StateVector from_product(const ProductState& p);

    int n_qubits() const { return n_; }
    std::uint64_t size() const { return amp_.size(); }
    cplx& operator[](std::uint64_t i) { return amp_[i]; }
    const cplx& operator[](std::uint64_t i) const { return amp_[i]; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    double norm() const;
    cplx inner(const StateVector& other) const;  // <this|other>
    double probability(std::uint64_t index) const;

    void apply_1q(int q, const cplx m[4]);             // row-major 2x2
    void apply_2q(int q0, int q1, const cplx m[16]);   // row-major 4x4, local index = (bit q1)<<1 | bit q0
    void apply_phase(double phase);

    // Reorders wires to logical indices: out bit relabel[w] = in bit w.
    void permute(const std::vector<int>& relabel);

    std::uint64_t sample_index(Rng& rng) const;
    std::map<std::uint32_t, long> sample_counts(Rng& rng, long shots) const;

  private:
    int n_;
    std::vector<cplx> amp_;
};

// Applies the gate unitary. FSWAP moves the amplitudes between the wires (the
// circuit's relabel mirrors that move as bookkeeping).
void apply_gate(StateVector& state, const Gate& g);

// Runs gates + global phase. If undo_relabel, additionally permutes the result
// back to logical qubit order.
void run_circuit(StateVector& state, const Circuit& c, bool undo_relabel = false);

// --- dense oracle ------------------------------------------------------------

using DenseOperator = Eigen::MatrixXcd;

DenseOperator to_dense(const std::vector<PauliTerm>& terms, int n_qubits);

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns
};

EigenDecomposition decompose(const DenseOperator& H);

StateVector exact_evolve(const StateVector& state, const EigenDecomposition& eig, double t);
StateVector exact_evolve(const StateVector& state, const DenseOperator& H, double t);

cplx loschmidt_exact(const ProductState& psi, const DenseOperator& H, double t, double E);
double fdos_exact(const ProductState& psi, const DenseOperator& H, double E, double delta);

// --- sector-blocked fast path ------------------------------------------------

struct SectorBasis {
    int n_up = 0, n_down = 0;
    std::vector<std::uint32_t> states;  // ascending
    int index_of(std::uint32_t bits) const;
};

struct SectorSpectrum {
    SectorBasis basis;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // real orthogonal (H real symmetric in Z basis)
};

// Cached per (lattice, params, sector); thread-safe.
const SectorSpectrum& sector_spectrum(const LatticeSpec& lattice, const HubbardParams& params,
                                      int n_up, int n_down);

cplx loschmidt_exact(const ProductState& psi, const LatticeSpec& lattice,
                     const HubbardParams& params, double t, double E);
double fdos_exact(const ProductState& psi, const LatticeSpec& lattice,
                  const HubbardParams& params, double E, double delta);

// <a| e^{-iHt} |b> for basis states in one sector, with the same phase
// convention as loschmidt_exact (no e^{iEt} factor).
cplx evolve_matrix_element(std::uint32_t bra, std::uint32_t ket, const LatticeSpec& lattice,
                           const HubbardParams& params, double t);

std::vector<std::uint32_t> sector_states(int n_sites, int n_up, int n_down);

}  // namespace lsim
