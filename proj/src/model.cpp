#include "lsim/model.hpp"

#include <algorithm>
#include <bit>

namespace lsim {

void LatticeSpec::validate() const {
    if (x < 1 || y < 1) throw ConfigError("lattice dimensions must be >= 1");
    if (n_qubits() > 26) throw ConfigError("dense simulation capped at 26 qubits");
}

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < y; ++r)
        for (int c = 0; c < x; ++c) {
            if (c + 1 < x) out.emplace_back(site(r, c), site(r, c + 1));
            if (r + 1 < y) out.emplace_back(site(r, c), site(r + 1, c));
        }
    return out;
}

ProductState make_product_state(BitMask bits, const LatticeSpec& lattice) {
    require(bits >> lattice.n_qubits() == 0, "product state bits outside the register");
    ProductState s;
    s.n_qubits = lattice.n_qubits();
    s.bits = bits;
    BitMask up_mask = mask_bit(lattice.n_sites()) - 1;
    s.n_up = mask_popcount(bits & up_mask);
    s.n_down = mask_popcount(bits >> lattice.n_sites());
    return s;
}

JWLayout build_snake_layout(const LatticeSpec& lattice) {
    JWLayout layout;
    layout.n_sites = lattice.n_sites();
    layout.snake_order.reserve(layout.n_sites);
    layout.site_to_pos.assign(layout.n_sites, -1);
    for (int r = 0; r < lattice.y; ++r) {
        for (int i = 0; i < lattice.x; ++i) {
            int c = (r % 2 == 0) ? i : lattice.x - 1 - i;
            int s = lattice.site(r, c);
            layout.site_to_pos[s] = static_cast<int>(layout.snake_order.size());
            layout.snake_order.push_back(s);
        }
    }
    return layout;
}

std::vector<PauliTerm> hamiltonian_terms(const LatticeSpec& lattice,
                                         const HubbardParams& params,
                                         const JWLayout& layout) {
    std::vector<PauliTerm> terms;
    const double hop_coeff = -params.J / 2.0;

    for (auto [a, b] : lattice.bonds()) {
        for (int spin = 0; spin < 2; ++spin) {
            int qa = spin == 0 ? layout.qubit_up(a) : layout.qubit_down(a);
            int qb = spin == 0 ? layout.qubit_up(b) : layout.qubit_down(b);
            int lo = std::min(qa, qb), hi = std::max(qa, qb);
            for (char p : {'X', 'Y'}) {
                PauliTerm t;
                t.coefficient = hop_coeff;
                t.ops.emplace_back(lo, p);
                for (int q = lo + 1; q < hi; ++q) t.ops.emplace_back(q, 'Z');
                t.ops.emplace_back(hi, p);
                terms.push_back(std::move(t));
            }
        }
    }

    const double u4 = params.U / 4.0;
    for (int s = 0; s < lattice.n_sites(); ++s) {
        int u = layout.qubit_up(s), d = layout.qubit_down(s);
        terms.push_back({u4, {}});
        terms.push_back({-u4, {{u, 'Z'}}});
        terms.push_back({-u4, {{d, 'Z'}}});
        terms.push_back({u4, {{u, 'Z'}, {d, 'Z'}}});
    }
    return terms;
}

ProductState neel_state(const LatticeSpec& lattice, const JWLayout& layout) {
    BitMask bits = 0;
    int n = lattice.n_sites();
    for (int k = 0; k < n; ++k) {
        if (k % 2 == 0)
            bits |= mask_bit(k);  // spin-up register qubit = snake position
        else
            bits |= mask_bit(n + k);
    }
    (void)layout;
    return make_product_state(bits, lattice);
}

}  // namespace lsim
