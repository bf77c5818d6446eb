#include "lsim/resources.hpp"

#include <cmath>

namespace lsim {

long n_jw(int x, int y) {
    require(x >= 2 && y >= 2, "encoding count formulas need x, y >= 2");
    long lx = x, ly = y;
    return 2 * ly * lx * lx + 3 * lx * ly + 14 * lx - 2 * ly - 15;
}

long n_compact(int x, int y) {
    require(x >= 2 && y >= 2, "encoding count formulas need x, y >= 2");
    long lx = x, ly = y;
    return 26 * lx * ly - 24 * (lx + ly);
}

int n_trotter_steps(int n_qubits) {
    require(n_qubits >= 1, "n_qubits must be >= 1");
    double steps = 2.0 / std::sqrt(32.0) * std::sqrt(static_cast<double>(n_qubits));
    return static_cast<int>(std::ceil(steps - 1e-12));
}

ResourceEstimate shot_overhead(const LatticeSpec& lattice, const std::string& encoding, double f) {
    // Closed forms only: no dense-simulation size cap here.
    if (f <= 0 || f > 1) throw ConfigError("fidelity must be in (0, 1]");
    if (encoding != "JW" && encoding != "compact")
        throw ConfigError("encoding must be JW or compact");
    ResourceEstimate est;
    est.lattice = lattice;
    est.encoding = encoding;
    est.f = f;
    est.n_steps = n_trotter_steps(lattice.n_qubits());
    est.gates_per_step =
        encoding == "JW" ? n_jw(lattice.x, lattice.y) : n_compact(lattice.x, lattice.y);
    est.total_2q = est.n_steps * est.gates_per_step + 2L * (lattice.n_sites() - 1);
    est.q = std::pow(f, static_cast<double>(est.total_2q));
    est.overhead = 1.0 / (est.q * est.q);
    return est;
}

}  // namespace lsim
