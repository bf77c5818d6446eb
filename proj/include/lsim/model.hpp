#pragma once
// Fermi-Hubbard model on an open rectangular lattice, Jordan-Wigner encoded
// along a snake ordering with separate spin-up / spin-down qubit registers.

#include <array>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "lsim/common.hpp"

namespace lsim {

// Occupation mask over the qubit register. Gate counting builds circuits for
// lattices up to 5x8 (80 qubits), past what a 64-bit mask can index, even
// though only <= 26 qubits ever get simulated densely.
__extension__ typedef unsigned __int128 BitMask;

inline BitMask mask_bit(int q) { return BitMask(1) << q; }

inline int mask_popcount(BitMask m) {
    return std::popcount(static_cast<std::uint64_t>(m)) +
           std::popcount(static_cast<std::uint64_t>(m >> 64));
}

struct LatticeSpec {
    int x = 1;  // columns
    int y = 1;  // rows
    int n_sites() const { return x * y; }
    int n_qubits() const { return 2 * x * y; }
    // Site index is row-major: site = r*x + c.
    int site(int r, int c) const { return r * x + c; }
    // Nearest-neighbor bonds (site_a < site_b in row-major indexing).
    std::vector<std::pair<int, int>> bonds() const;
    void validate() const;
};

struct HubbardParams {
    double J = 0.5;
    double U = 2.0;
};

struct JWLayout {
    // snake_order[k] = site occupying snake position k.
    std::vector<int> snake_order;
    // site_to_pos[site] = snake position.
    std::vector<int> site_to_pos;
    int n_sites = 0;
    int qubit_up(int site) const { return site_to_pos[site]; }
    int qubit_down(int site) const { return n_sites + site_to_pos[site]; }
};

// One real-coefficient Pauli string; `ops` is sparse (qubit, P) with
// P in {'X','Y','Z'}, sorted by qubit. Empty ops = identity (constant term).
struct PauliTerm {
    double coefficient = 0.0;
    std::vector<std::pair<int, char>> ops;
};

struct ProductState {
    BitMask bits = 0;  // bit q = occupation of qubit q
    int n_qubits = 0;
    int n_up = 0;
    int n_down = 0;
};

ProductState make_product_state(BitMask bits, const LatticeSpec& lattice);

JWLayout build_snake_layout(const LatticeSpec& lattice);

// Pauli decomposition of H = -J sum_<ij>s (a†_is a_js + h.c.) + U sum_i n_iu n_id.
// Hopping bonds map to -(J/2)(XX+YY) with the JW Z string between the two snake
// positions; each onsite term (U/4)(I-Z_u)(I-Z_d) is expanded into its four
// Pauli terms with the constant retained.
std::vector<PauliTerm> hamiltonian_terms(const LatticeSpec& lattice,
                                         const HubbardParams& params,
                                         const JWLayout& layout);

// Neel-ordered half-filling product state along the snake: even snake
// positions spin-up, odd positions spin-down.
ProductState neel_state(const LatticeSpec& lattice, const JWLayout& layout);

}  // namespace lsim
