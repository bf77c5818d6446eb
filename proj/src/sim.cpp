#include "lsim/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <mutex>
#include <tuple>

namespace lsim {

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_ < 1 || n_ > 26) throw ContractError("StateVector supports 1..26 qubits");
    amp_.assign(std::uint64_t(1) << n_, cplx(0, 0));
}

StateVector StateVector::vacuum(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.size()) throw ContractError("basis index out of range");
    s.amp_[index] = cplx(1, 0);
    return s;
}

StateVector StateVector::from_product(const ProductState& p) {
    return basis(p.n_qubits, static_cast<std::size_t>(p.bits));
}

double StateVector::norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

cplx StateVector::inner(const StateVector& other) const {
    require(n_ == other.n_, "inner: dimension mismatch");
    cplx s(0, 0);
    for (std::uint64_t i = 0; i < size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
}

double StateVector::probability(std::uint64_t index) const {
    if (index >= size()) throw ContractError("probability index out of range");
    return std::norm(amp_[index]);
}

void StateVector::apply_1q(int q, const cplx m[4]) {
    if (q < 0 || q >= n_) throw ContractError("qubit index out of range");
    const std::uint64_t bit = std::uint64_t(1) << q;
    const std::uint64_t lo_mask = bit - 1;
    const std::uint64_t hi_mask = ~lo_mask;
    const std::uint64_t half = size() >> 1;
    for (std::uint64_t i = 0; i < half; ++i) {
        std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        std::uint64_t i1 = i0 | bit;
        cplx a0 = amp_[i0], a1 = amp_[i1];
        amp_[i0] = m[0] * a0 + m[1] * a1;
        amp_[i1] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_2q(int q0, int q1, const cplx m[16]) {
    if (q0 < 0 || q0 >= n_ || q1 < 0 || q1 >= n_) throw ContractError("qubit index out of range");
    if (q0 == q1) throw ContractError("two-qubit gate needs distinct targets");
    const std::uint64_t b0 = std::uint64_t(1) << q0;
    const std::uint64_t b1 = std::uint64_t(1) << q1;
    const int ql = std::min(q0, q1), qh = std::max(q0, q1);
    const std::uint64_t lo_mask = (std::uint64_t(1) << ql) - 1;
    const std::uint64_t mid_mask = ((std::uint64_t(1) << (qh - 1)) - 1) & ~lo_mask;
    const std::uint64_t hi_mask = ~(lo_mask | mid_mask);
    const std::uint64_t quarter = size() >> 2;
    for (std::uint64_t i = 0; i < quarter; ++i) {
        std::uint64_t base = ((i & hi_mask) << 2) | ((i & mid_mask) << 1) | (i & lo_mask);
        std::uint64_t idx[4] = {base, base | b0, base | b1, base | b0 | b1};
        cplx a[4] = {amp_[idx[0]], amp_[idx[1]], amp_[idx[2]], amp_[idx[3]]};
        for (int r = 0; r < 4; ++r)
            amp_[idx[r]] = m[4 * r + 0] * a[0] + m[4 * r + 1] * a[1] + m[4 * r + 2] * a[2] +
                           m[4 * r + 3] * a[3];
    }
}

void StateVector::apply_phase(double phase) {
    cplx f = std::exp(cplx(0, phase));
    for (auto& a : amp_) a *= f;
}

void StateVector::permute(const std::vector<int>& relabel) {
    require(static_cast<int>(relabel.size()) == n_, "relabel size mismatch");
    bool identity = true;
    for (int w = 0; w < n_; ++w)
        if (relabel[w] != w) identity = false;
    if (identity) return;
    std::vector<cplx> out(size(), cplx(0, 0));
    for (std::uint64_t i = 0; i < size(); ++i) {
        std::uint64_t j = 0;
        for (int w = 0; w < n_; ++w)
            if ((i >> w) & 1u) j |= std::uint64_t(1) << relabel[w];
        out[j] = amp_[i];
    }
    amp_ = std::move(out);
}

std::uint64_t StateVector::sample_index(Rng& rng) const {
    double u = rng.uniform();
    double acc = 0;
    for (std::uint64_t i = 0; i < size(); ++i) {
        acc += std::norm(amp_[i]);
        if (u < acc) return i;
    }
    return size() - 1;
}

std::map<std::uint32_t, long> StateVector::sample_counts(Rng& rng, long shots) const {
    // cumulative distribution + binary search per shot
    std::vector<double> cdf(size());
    double acc = 0;
    for (std::uint64_t i = 0; i < size(); ++i) {
        acc += std::norm(amp_[i]);
        cdf[i] = acc;
    }
    std::map<std::uint32_t, long> counts;
    for (long s = 0; s < shots; ++s) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::uint64_t idx = it == cdf.end() ? size() - 1 : std::uint64_t(it - cdf.begin());
        ++counts[static_cast<std::uint32_t>(idx)];
    }
    return counts;
}

// --- gate dispatch -----------------------------------------------------------

void apply_gate(StateVector& state, const Gate& g) {
    const double th = g.angle;
    const double c = std::cos(th / 2), s = std::sin(th / 2);
    const cplx I(0, 1);
    switch (g.kind) {
        case GateKind::U1q: {
            cplx e_m = std::exp(cplx(0, -g.phi)), e_p = std::exp(cplx(0, g.phi));
            cplx m[4] = {cplx(c, 0), -I * e_m * s, -I * e_p * s, cplx(c, 0)};
            state.apply_1q(g.q0, m);
            break;
        }
        case GateKind::Rz: {
            cplx m[4] = {std::exp(cplx(0, -th / 2)), 0, 0, std::exp(cplx(0, th / 2))};
            state.apply_1q(g.q0, m);
            break;
        }
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            cplx m[4] = {r, r, r, -r};
            state.apply_1q(g.q0, m);
            break;
        }
        case GateKind::X: {
            cplx m[4] = {0, 1, 1, 0};
            state.apply_1q(g.q0, m);
            break;
        }
        case GateKind::ZZPhase: {
            // diag by parity of the two bits: even -> e^{-i a/2}, odd -> e^{+i a/2}
            cplx even = std::exp(cplx(0, -th / 2)), odd = std::exp(cplx(0, th / 2));
            cplx m[16] = {even, 0, 0, 0, 0, odd, 0, 0, 0, 0, odd, 0, 0, 0, 0, even};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
        case GateKind::XXPhase: {
            // couples 00<->11 and 01<->10
            cplx m[16] = {c, 0, 0, -I * s, 0, c, -I * s, 0, 0, -I * s, c, 0, -I * s, 0, 0, c};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
        case GateKind::YYPhase: {
            cplx m[16] = {c, 0, 0, I * s, 0, c, -I * s, 0, 0, -I * s, c, 0, I * s, 0, 0, c};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
        case GateKind::CNOT: {
            // q0 = control, q1 = target; local index = (bit q1)<<1 | bit q0
            cplx m[16] = {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
        case GateKind::CZ: {
            cplx m[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
        case GateKind::FSWAP: {
            // swaps the wire amplitudes and signs the doubly occupied pair
            cplx m[16] = {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, -1};
            state.apply_2q(g.q0, g.q1, m);
            break;
        }
    }
}

void run_circuit(StateVector& state, const Circuit& c, bool undo_relabel) {
    require(state.n_qubits() == c.n_qubits, "circuit/state dimension mismatch");
    for (const auto& g : c.gates) apply_gate(state, g);
    if (c.global_phase != 0.0) state.apply_phase(c.global_phase);
    if (undo_relabel) state.permute(c.relabel);
}

// --- dense oracle ------------------------------------------------------------

namespace {

// P|b> = phase |b ^ flips>
std::pair<std::uint32_t, cplx> pauli_apply(const PauliTerm& term, std::uint32_t b) {
    std::uint32_t target = b;
    cplx phase(1, 0);
    for (auto [q, op] : term.ops) {
        bool bit = (b >> q) & 1u;
        switch (op) {
            case 'X': target ^= 1u << q; break;
            case 'Y':
                target ^= 1u << q;
                phase *= bit ? cplx(0, -1) : cplx(0, 1);
                break;
            case 'Z':
                if (bit) phase = -phase;
                break;
            default: throw ContractError("bad Pauli op");
        }
    }
    return {target, phase};
}

}  // namespace

DenseOperator to_dense(const std::vector<PauliTerm>& terms, int n_qubits) {
    if (n_qubits > 12) throw ContractError("dense operator capped at 12 qubits");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    DenseOperator H = DenseOperator::Zero(dim, dim);
    for (const auto& term : terms)
        for (std::uint64_t b = 0; b < dim; ++b) {
            auto [target, phase] = pauli_apply(term, static_cast<std::uint32_t>(b));
            H(target, b) += term.coefficient * phase;
        }
    return H;
}

EigenDecomposition decompose(const DenseOperator& H) {
    double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw ContractError("operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(H);
    if (solver.info() != Eigen::Success) throw ContractError("eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

StateVector exact_evolve(const StateVector& state, const EigenDecomposition& eig, double t) {
    const auto dim = eig.eigenvalues.size();
    require(static_cast<std::uint64_t>(dim) == state.size(), "exact_evolve: dimension mismatch");
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = state[i];
    Eigen::VectorXcd w = eig.eigenvectors.adjoint() * v;
    for (Eigen::Index k = 0; k < dim; ++k) w(k) *= std::exp(cplx(0, -eig.eigenvalues(k) * t));
    Eigen::VectorXcd out = eig.eigenvectors * w;
    StateVector res(state.n_qubits());
    for (Eigen::Index i = 0; i < dim; ++i) res[i] = out(i);
    return res;
}

StateVector exact_evolve(const StateVector& state, const DenseOperator& H, double t) {
    return exact_evolve(state, decompose(H), t);
}

cplx loschmidt_exact(const ProductState& psi, const DenseOperator& H, double t, double E) {
    EigenDecomposition eig = decompose(H);
    cplx g(0, 0);
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        cplx overlap = eig.eigenvectors(static_cast<Eigen::Index>(psi.bits), k);
        g += std::norm(overlap) * std::exp(cplx(0, -eig.eigenvalues(k) * t));
    }
    return std::exp(cplx(0, E * t)) * g;
}

double fdos_exact(const ProductState& psi, const DenseOperator& H, double E, double delta) {
    if (delta <= 0) throw ContractError("delta must be positive");
    EigenDecomposition eig = decompose(H);
    double d = 0;
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        double w = std::norm(eig.eigenvectors(static_cast<Eigen::Index>(psi.bits), k));
        double h = eig.eigenvalues(k) - E;
        d += w * std::exp(-h * h / (2 * delta * delta));
    }
    return d;
}

// --- sector-blocked fast path ------------------------------------------------

int SectorBasis::index_of(std::uint32_t bits) const {
    auto it = std::lower_bound(states.begin(), states.end(), bits);
    if (it == states.end() || *it != bits) return -1;
    return static_cast<int>(it - states.begin());
}

std::vector<std::uint32_t> sector_states(int n_sites, int n_up, int n_down) {
    auto combos = [](int n, int k) {
        std::vector<std::uint32_t> out;
        for (std::uint32_t m = 0; m < (1u << n); ++m)
            if (std::popcount(m) == k) out.push_back(m);
        return out;
    };
    std::vector<std::uint32_t> ups = combos(n_sites, n_up);
    std::vector<std::uint32_t> downs = combos(n_sites, n_down);
    std::vector<std::uint32_t> states;
    states.reserve(ups.size() * downs.size());
    for (std::uint32_t d : downs)
        for (std::uint32_t u : ups) states.push_back(u | (d << n_sites));
    std::sort(states.begin(), states.end());
    return states;
}

namespace {

struct SectorKey {
    int x, y;
    std::uint64_t j_bits, u_bits;
    int n_up, n_down;
    bool operator<(const SectorKey& o) const {
        return std::tie(x, y, j_bits, u_bits, n_up, n_down) <
               std::tie(o.x, o.y, o.j_bits, o.u_bits, o.n_up, o.n_down);
    }
};

std::uint64_t double_bits(double v) {
    std::uint64_t out;
    static_assert(sizeof(out) == sizeof(v));
    std::memcpy(&out, &v, sizeof(out));
    return out;
}

}  // namespace

const SectorSpectrum& sector_spectrum(const LatticeSpec& lattice, const HubbardParams& params,
                                      int n_up, int n_down) {
    static std::map<SectorKey, SectorSpectrum> cache;
    static std::mutex mtx;
    SectorKey key{lattice.x, lattice.y, double_bits(params.J), double_bits(params.U), n_up, n_down};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    SectorSpectrum spec;
    spec.basis.n_up = n_up;
    spec.basis.n_down = n_down;
    spec.basis.states = sector_states(lattice.n_sites(), n_up, n_down);
    const auto& states = spec.basis.states;
    const int dim = static_cast<int>(states.size());
    require(dim >= 1, "empty sector");

    JWLayout layout = build_snake_layout(lattice);
    auto terms = hamiltonian_terms(lattice, params, layout);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        // Individual XX / YY strings leave the sector; only their sum is
        // number-conserving, so accumulate the column before checking.
        std::map<std::uint32_t, double> column;
        for (const auto& term : terms) {
            auto [target, phase] = pauli_apply(term, states[j]);
            require(std::abs(phase.imag()) < 1e-14, "sector Hamiltonian must be real");
            column[target] += term.coefficient * phase.real();
        }
        for (const auto& [target, v] : column) {
            if (v == 0.0) continue;
            int i = spec.basis.index_of(target);
            require(i >= 0, "Hamiltonian term left the number sector");
            H(i, j) += v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    require(solver.info() == Eigen::Success, "sector eigendecomposition failed");
    spec.eigenvalues = solver.eigenvalues();
    spec.eigenvectors = solver.eigenvectors();
    return cache.emplace(key, std::move(spec)).first->second;
}

cplx loschmidt_exact(const ProductState& psi, const LatticeSpec& lattice,
                     const HubbardParams& params, double t, double E) {
    const auto& spec = sector_spectrum(lattice, params, psi.n_up, psi.n_down);
    int p = spec.basis.index_of(static_cast<std::uint32_t>(psi.bits));
    require(p >= 0, "state not in its own sector");
    cplx g(0, 0);
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        double w = spec.eigenvectors(p, k) * spec.eigenvectors(p, k);
        g += w * std::exp(cplx(0, -spec.eigenvalues(k) * t));
    }
    return std::exp(cplx(0, E * t)) * g;
}

double fdos_exact(const ProductState& psi, const LatticeSpec& lattice,
                  const HubbardParams& params, double E, double delta) {
    if (delta <= 0) throw ContractError("delta must be positive");
    const auto& spec = sector_spectrum(lattice, params, psi.n_up, psi.n_down);
    int p = spec.basis.index_of(static_cast<std::uint32_t>(psi.bits));
    require(p >= 0, "state not in its own sector");
    double d = 0;
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        double w = spec.eigenvectors(p, k) * spec.eigenvectors(p, k);
        double h = spec.eigenvalues(k) - E;
        d += w * std::exp(-h * h / (2 * delta * delta));
    }
    return d;
}

cplx evolve_matrix_element(std::uint32_t bra, std::uint32_t ket, const LatticeSpec& lattice,
                           const HubbardParams& params, double t) {
    int n = lattice.n_sites();
    std::uint32_t up_mask = (1u << n) - 1u;
    int n_up = std::popcount(ket & up_mask);
    int n_down = std::popcount(ket >> n);
    const auto& spec = sector_spectrum(lattice, params, n_up, n_down);
    int pb = spec.basis.index_of(bra);
    int pk = spec.basis.index_of(ket);
    require(pb >= 0 && pk >= 0, "states not in a common sector");
    cplx g(0, 0);
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k)
        g += spec.eigenvectors(pb, k) * spec.eigenvectors(pk, k) *
             std::exp(cplx(0, -spec.eigenvalues(k) * t));
    return g;
}

}  // namespace lsim
