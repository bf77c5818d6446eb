#include "lsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace lsim {

const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::U1q: return "U1q";
        case GateKind::Rz: return "Rz";
        case GateKind::ZZPhase: return "ZZPhase";
        case GateKind::XXPhase: return "XXPhase";
        case GateKind::YYPhase: return "YYPhase";
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::FSWAP: return "FSWAP";
    }
    return "?";
}

bool gate_kind_is_two_qubit(GateKind k) {
    switch (k) {
        case GateKind::ZZPhase:
        case GateKind::XXPhase:
        case GateKind::YYPhase:
        case GateKind::CNOT:
        case GateKind::CZ:
        case GateKind::FSWAP: return true;
        default: return false;
    }
}

bool gate_kind_has_angle(GateKind k) {
    switch (k) {
        case GateKind::U1q:
        case GateKind::Rz:
        case GateKind::ZZPhase:
        case GateKind::XXPhase:
        case GateKind::YYPhase: return true;
        default: return false;
    }
}

Circuit::Circuit(int n) : n_qubits(n) {
    relabel.resize(n);
    std::iota(relabel.begin(), relabel.end(), 0);
}

void Circuit::check_targets(int a, int b) const {
    if (a < 0 || a >= n_qubits || (b != -1 && (b < 0 || b >= n_qubits)))
        throw ContractError("gate target out of range");
    if (b != -1 && a == b) throw ContractError("two-qubit gate needs distinct targets");
}

void Circuit::push(GateKind kind, int a, int b, double angle, double phi) {
    check_targets(a, b);
    Gate g;
    g.kind = kind;
    g.q0 = a;
    g.q1 = b;
    if (gate_kind_has_angle(kind)) {
        long wraps = 0;
        g.angle = canonical_angle(angle, wraps);
        // exp(-i th' P/2) with th' = th - 2pi*k equals exp(-i th P/2)*(-1)^k.
        global_phase += PI * static_cast<double>(wraps);
        if (kind == GateKind::U1q) {
            long w2 = 0;
            g.phi = canonical_angle(phi, w2);  // phi wraps are exactly periodic
        }
    }
    gates.push_back(g);
}

void Circuit::add_u1q(int q, double theta, double phi) { push(GateKind::U1q, q, -1, theta, phi); }
void Circuit::add_rz(int q, double theta) { push(GateKind::Rz, q, -1, theta, 0); }
void Circuit::add_zz(int a, int b, double alpha) { push(GateKind::ZZPhase, a, b, alpha, 0); }
void Circuit::add_xx(int a, int b, double alpha) { push(GateKind::XXPhase, a, b, alpha, 0); }
void Circuit::add_yy(int a, int b, double alpha) { push(GateKind::YYPhase, a, b, alpha, 0); }
void Circuit::add_h(int q) { push(GateKind::H, q, -1, 0, 0); }
void Circuit::add_x(int q) { push(GateKind::X, q, -1, 0, 0); }
void Circuit::add_cnot(int control, int target) { push(GateKind::CNOT, control, target, 0, 0); }
void Circuit::add_cz(int a, int b) { push(GateKind::CZ, a, b, 0, 0); }

void Circuit::add_fswap(int a, int b) {
    push(GateKind::FSWAP, a, b, 0, 0);
    std::swap(relabel[a], relabel[b]);
}

long Circuit::count_two_qubit() const {
    long n = 0;
    for (const auto& g : gates)
        if (g.is_two_qubit()) ++n;
    return n;
}

int Circuit::wire_of(int logical_qubit) const {
    for (int w = 0; w < n_qubits; ++w)
        if (relabel[w] == logical_qubit) return w;
    throw ContractError("relabel is not a permutation");
}

bool Circuit::relabel_is_identity() const {
    for (int w = 0; w < n_qubits; ++w)
        if (relabel[w] != w) return false;
    return true;
}

Circuit inverse(const Circuit& c) {
    Circuit inv(c.n_qubits);
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        const Gate& g = *it;
        switch (g.kind) {
            case GateKind::U1q: inv.add_u1q(g.q0, -g.angle, g.phi); break;
            case GateKind::Rz: inv.add_rz(g.q0, -g.angle); break;
            case GateKind::ZZPhase: inv.add_zz(g.q0, g.q1, -g.angle); break;
            case GateKind::XXPhase: inv.add_xx(g.q0, g.q1, -g.angle); break;
            case GateKind::YYPhase: inv.add_yy(g.q0, g.q1, -g.angle); break;
            case GateKind::H: inv.add_h(g.q0); break;
            case GateKind::X: inv.add_x(g.q0); break;
            case GateKind::CNOT: inv.add_cnot(g.q0, g.q1); break;
            case GateKind::CZ: inv.add_cz(g.q0, g.q1); break;
            case GateKind::FSWAP: inv.add_fswap(g.q0, g.q1); break;
        }
    }
    // add_* accumulated the wrap phases of the negated angles; on top of that
    // the inverse carries -global_phase of the original.
    inv.global_phase -= c.global_phase;
    return inv;
}

// --- FSWAP network -----------------------------------------------------------

namespace {

// Tracks, per row, which lattice column sits at each row-local wire slot.
struct ColTracker {
    const LatticeSpec& lat;
    std::vector<std::vector<int>> col_at;  // [row][local slot]
    explicit ColTracker(const LatticeSpec& l) : lat(l) {
        col_at.resize(l.y);
        for (int r = 0; r < l.y; ++r) {
            col_at[r].resize(l.x);
            for (int i = 0; i < l.x; ++i) col_at[r][i] = (r % 2 == 0) ? i : l.x - 1 - i;
        }
    }
    // Vertical bond between rows r, r+1 currently adjacent on the snake?
    bool gap_adjacent(int r, int& col) const {
        int end = col_at[r][lat.x - 1];
        int start = col_at[r + 1][0];
        if (end != start) return false;
        col = end;
        return true;
    }
};

void collect_adjacent(const LatticeSpec& lat, const ColTracker& tr,
                      std::set<std::pair<int, int>>& emitted,
                      std::vector<std::pair<int, int>>& out) {
    for (int r = 0; r + 1 < lat.y; ++r) {
        int col = -1;
        if (!tr.gap_adjacent(r, col)) continue;
        auto bond = std::make_pair(lat.site(r, col), lat.site(r + 1, col));
        if (emitted.insert(bond).second) out.push_back(bond);
    }
}

// Applies one local transposition (even-row slots (i,i+1), odd rows mirrored)
// to every row; returns the register-local snake-position swap pairs.
std::vector<std::pair<int, int>> apply_transposition(const LatticeSpec& lat, ColTracker& tr,
                                                     int i) {
    std::vector<std::pair<int, int>> swaps;
    for (int r = 0; r < lat.y; ++r) {
        int a = (r % 2 == 0) ? i : lat.x - 2 - i;
        std::swap(tr.col_at[r][a], tr.col_at[r][a + 1]);
        swaps.emplace_back(r * lat.x + a, r * lat.x + a + 1);
    }
    return swaps;
}

}  // namespace

FswapNetwork build_fswap_network(const LatticeSpec& lattice, const JWLayout& layout) {
    (void)layout;
    FswapNetwork net;
    if (lattice.x < 2) {
        // every vertical bond is already snake-adjacent on a single column
        for (int r = 0; r + 1 < lattice.y; ++r)
            net.initial_bonds.emplace_back(lattice.site(r, 0), lattice.site(r + 1, 0));
        return net;
    }

    ColTracker tr(lattice);
    std::set<std::pair<int, int>> emitted;
    collect_adjacent(lattice, tr, emitted, net.initial_bonds);

    auto run_round = [&](const std::vector<int>& slots) {
        FswapRound round;
        for (int i : slots) {
            auto sw = apply_transposition(lattice, tr, i);
            round.position_swaps.insert(round.position_swaps.end(), sw.begin(), sw.end());
        }
        collect_adjacent(lattice, tr, emitted, round.exposed_bonds);
        net.rounds.push_back(std::move(round));
    };

    // Both schedules below spend exactly x*(x-1)/2 column transpositions per
    // row, i.e. y*x*(x-1) FSWAP gates per step over both spin registers, and
    // leave the column order reversed (restored by the mirrored next step).
    // A gap between rows r and r+1 exposes the column currently at the right
    // lattice edge (r even) or the left edge (r odd).
    if (lattice.y == 2) {
        // Single gap: bubbling each column in turn to the right edge exposes
        // every vertical bond within the budget.
        for (int k = 1; k <= lattice.x - 1; ++k)
            for (int i = lattice.x - 1 - k; i <= lattice.x - 2; ++i) run_round({i});
    } else {
        // Brick pattern: alternate rounds of column swaps at even slots (V)
        // and odd slots (W); x rounds make every column pair cross once.
        std::vector<int> v_slots, w_slots;
        for (int i = 0; i + 1 < lattice.x; i += 2) v_slots.push_back(i);
        for (int i = 1; i + 1 < lattice.x; i += 2) w_slots.push_back(i);
        for (int round = 0; round < lattice.x; ++round) {
            const auto& slots = (round % 2 == 0) ? v_slots : w_slots;
            if (!slots.empty()) run_round(slots);
        }
    }

    long n_swaps = 0;
    for (const auto& r : net.rounds) n_swaps += static_cast<long>(r.position_swaps.size());
    require(n_swaps == static_cast<long>(lattice.y) * lattice.x * (lattice.x - 1) / 2,
            "fswap network swap count off budget");

    // With x >= 3 and y >= 3 the budget cannot cycle every column past both
    // lattice edges, so some interior-column vertical bonds are never exposed;
    // record them so the step can still apply their hops (see step plan).
    for (int r = 0; r + 1 < lattice.y; ++r)
        for (int c = 0; c < lattice.x; ++c) {
            auto bond = std::make_pair(lattice.site(r, c), lattice.site(r + 1, c));
            if (!emitted.count(bond)) net.leftover_bonds.push_back(bond);
        }
    require(net.leftover_bonds.empty() || (lattice.x >= 3 && lattice.y >= 3),
            "fswap network missed vertical bonds");
    return net;
}

long FswapNetwork::total_fswaps() const {
    long n = 0;
    for (const auto& r : rounds) n += static_cast<long>(r.position_swaps.size());
    return 2 * n;  // both spin registers
}

// --- Trotter / GHZ builders --------------------------------------------------

namespace {

struct StepItem {
    enum class Kind { hops, swaps } kind;
    // hops: (site_a, site_b) lattice bonds applied to both spins
    // swaps: register-local snake-position pairs applied to both registers
    std::vector<std::pair<int, int>> pairs;
    // Hops the network never made adjacent are applied on the distant wire
    // pair directly, dropping the intervening JW parity string.
    bool adjacent = true;
};

// The step plan is a pure function of the lattice: batches of JW-adjacent
// hops interleaved with FSWAP rounds.
std::vector<StepItem> make_step_plan(const LatticeSpec& lattice, const JWLayout& layout) {
    std::vector<StepItem> plan;
    FswapNetwork net = build_fswap_network(lattice, layout);

    StepItem first{StepItem::Kind::hops, {}};
    // horizontal bonds are snake-adjacent from the start
    for (int r = 0; r < lattice.y; ++r)
        for (int c = 0; c + 1 < lattice.x; ++c)
            first.pairs.emplace_back(lattice.site(r, c), lattice.site(r, c + 1));
    for (auto& b : net.initial_bonds) first.pairs.push_back(b);
    plan.push_back(std::move(first));

    for (const auto& round : net.rounds) {
        plan.push_back({StepItem::Kind::swaps, round.position_swaps});
        if (!round.exposed_bonds.empty())
            plan.push_back({StepItem::Kind::hops, round.exposed_bonds});
    }
    if (!net.leftover_bonds.empty())
        plan.push_back({StepItem::Kind::hops, net.leftover_bonds, /*adjacent=*/false});
    return plan;
}

}  // namespace

void append_trotter_step(Circuit& c, const LatticeSpec& lattice, const HubbardParams& params,
                         const JWLayout& layout, double dt, bool reversed, bool onsite_as_1q,
                         int pilot_wire, int n_double_occ) {
    const int n = lattice.n_sites();

    // onsite layer, every step: exp(-i U dt/4 (I-Z_u)(I-Z_d)) per site
    if (onsite_as_1q) {
        // On span{|vacuum>, |psi0 branch>} the layer is diag(1, e^{-i U n_dd dt})
        // in the pilot qubit: Rz(-U n_dd dt) on the pilot wire + global phase.
        double phi = params.U * n_double_occ * dt;
        require(pilot_wire >= 0, "onsite_as_1q needs a pilot wire");
        c.add_rz(pilot_wire, -phi);
        c.add_phase(-phi / 2.0);
    } else {
        for (int s = 0; s < n; ++s) {
            // wire of a mode = current snake position of its site in the register
            int pu = c.wire_of(layout.qubit_up(s));
            int pd = c.wire_of(layout.qubit_down(s));
            c.add_zz(pu, pd, params.U * dt / 2.0);
            c.add_rz(pu, -params.U * dt / 2.0);
            c.add_rz(pd, -params.U * dt / 2.0);
            c.add_phase(-params.U * dt / 4.0);
        }
    }

    // hopping layer: batches of JW-adjacent bonds interleaved with FSWAP rounds
    auto plan = make_step_plan(lattice, layout);
    if (reversed) {
        // literal mirror of the hopping block: batch order and the pairs
        // within each batch (per-bond gate internals commute)
        std::reverse(plan.begin(), plan.end());
        for (auto& item : plan) std::reverse(item.pairs.begin(), item.pairs.end());
    }

    const double hop_angle = -params.J * dt;  // XXPhase/YYPhase angle per bond
    for (const auto& item : plan) {
        if (item.kind == StepItem::Kind::swaps) {
            for (auto [pa, pb] : item.pairs) {
                c.add_fswap(pa, pb);          // up register
                c.add_fswap(n + pa, n + pb);  // down register
            }
        } else {
            for (auto [sa, sb] : item.pairs) {
                for (int spin = 0; spin < 2; ++spin) {
                    int qa = spin == 0 ? layout.qubit_up(sa) : layout.qubit_down(sa);
                    int qb = spin == 0 ? layout.qubit_up(sb) : layout.qubit_down(sb);
                    int wa = c.wire_of(qa), wb = c.wire_of(qb);
                    if (item.adjacent)
                        require(std::abs(wa - wb) == 1, "hop emitted on non-adjacent wires");
                    c.add_xx(wa, wb, hop_angle);
                    c.add_yy(wa, wb, hop_angle);
                }
            }
        }
    }
}

Circuit build_trotter_step(const LatticeSpec& lattice, const HubbardParams& params,
                           const JWLayout& layout, double dt, bool reversed) {
    Circuit c(lattice.n_qubits());
    append_trotter_step(c, lattice, params, layout, dt, reversed);
    return c;
}

Circuit build_ghz_prep(const ProductState& psi0, double xi) {
    Circuit c(psi0.n_qubits);
    int pilot = -1;
    std::vector<int> members;
    for (int q = 0; q < psi0.n_qubits; ++q) {
        if (!((psi0.bits >> q) & 1u)) continue;
        if (pilot < 0)
            pilot = q;
        else
            members.push_back(q);
    }
    require(pilot >= 0, "GHZ prep needs at least one occupied position");
    c.add_h(pilot);
    c.add_rz(pilot, xi);
    c.add_phase(xi / 2.0);  // Rz(xi) realizes diag(1, e^{i xi}) up to this phase
    for (int q : members) c.add_cnot(pilot, q);
    return c;
}

namespace {

// Appends src's gates with every target routed through the current mode->wire
// map of dst (logical qubit q lives on wire dst.wire_of(q)).
void append_remapped(Circuit& dst, const Circuit& src) {
    std::vector<int> wire(src.n_qubits);
    for (int q = 0; q < src.n_qubits; ++q) wire[q] = dst.wire_of(q);
    for (const auto& g : src.gates) {
        int a = wire[g.q0];
        int b = g.q1 >= 0 ? wire[g.q1] : -1;
        switch (g.kind) {
            case GateKind::U1q: dst.add_u1q(a, g.angle, g.phi); break;
            case GateKind::Rz: dst.add_rz(a, g.angle); break;
            case GateKind::ZZPhase: dst.add_zz(a, b, g.angle); break;
            case GateKind::XXPhase: dst.add_xx(a, b, g.angle); break;
            case GateKind::YYPhase: dst.add_yy(a, b, g.angle); break;
            case GateKind::H: dst.add_h(a); break;
            case GateKind::X: dst.add_x(a); break;
            case GateKind::CNOT: dst.add_cnot(a, b); break;
            case GateKind::CZ: dst.add_cz(a, b); break;
            case GateKind::FSWAP: dst.add_fswap(a, b); break;
        }
    }
    dst.add_phase(src.global_phase);
}

}  // namespace

LoschmidtCircuit build_loschmidt_circuit(const ProductState& psi0, const LatticeSpec& lattice,
                                         const HubbardParams& params, double t, int n_steps,
                                         double E, const TrotterOptions& opts) {
    if (n_steps < 1) throw ContractError("n_steps must be >= 1");
    if (t < 0) throw ContractError("t must be >= 0");
    JWLayout layout = build_snake_layout(lattice);

    LoschmidtCircuit lc;
    lc.psi0 = psi0;
    lc.lattice = lattice;
    lc.params = params;
    lc.t = t;
    lc.E = E;
    lc.n_steps = n_steps;

    Circuit c(lattice.n_qubits());
    Circuit prep = build_ghz_prep(psi0, E * t);
    append_remapped(c, prep);  // relabel is identity here; kept for symmetry
    for (int q = 0; q < psi0.n_qubits; ++q)
        if ((psi0.bits >> q) & 1u) {
            lc.pilot = q;
            break;
        }

    int n_dd = 0;
    for (int s = 0; s < lattice.n_sites(); ++s) {
        bool u = (psi0.bits >> layout.qubit_up(s)) & 1u;
        bool d = (psi0.bits >> layout.qubit_down(s)) & 1u;
        if (u && d) ++n_dd;
    }

    double dt = t / n_steps;
    for (int k = 0; k < n_steps; ++k) {
        bool as_1q = opts.first_step_onsite_as_1q && k == 0;
        append_trotter_step(c, lattice, params, layout, dt, /*reversed=*/k % 2 == 1, as_1q,
                            as_1q ? c.wire_of(lc.pilot) : -1, n_dd);
    }

    Circuit unprep = inverse(build_ghz_prep(psi0, 0.0));
    append_remapped(c, unprep);

    lc.pilot_wire = c.wire_of(lc.pilot);
    for (int q = 0; q < psi0.n_qubits; ++q)
        if (q != lc.pilot && ((psi0.bits >> q) & 1u)) lc.fan_wires.push_back(c.wire_of(q));
    lc.circuit = std::move(c);
    return lc;
}

// --- gate counting -----------------------------------------------------------

GateCounts count_gates(const LatticeSpec& lattice, Technique technique) {
    long x = lattice.x, y = lattice.y;
    GateCounts gc;
    if (technique == Technique::GHZ) {
        gc.onsite = x * y;
        gc.hopping = y * x * x + 7 * x * y - 4 * (x + y);
        gc.ghz = 2 * (x * y - 1);
        gc.total_2q = 2 * y * x * x + 17 * y * x - 8 * (x + y) - 2;
        gc.n_qubits = static_cast<int>(2 * x * y);
    } else {
        gc.onsite = 7 * x * y;
        gc.hopping = 5 * y * x * x + 11 * x * y - 8 * (x + y);
        gc.ghz = 0;
        gc.total_2q = 29 * x * y + 10 * y * x * x - 16 * (x + y);
        gc.n_qubits = static_cast<int>(2 * x * y + 1);
    }
    return gc;
}

// --- serialization -----------------------------------------------------------

namespace {

std::string fmt_angle(double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", a);
    return buf;
}

}  // namespace

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.n_qubits << "\n";
    if (c.global_phase != 0.0) os << "phase " << fmt_angle(c.global_phase) << "\n";
    for (const auto& g : c.gates) {
        os << gate_kind_name(g.kind) << " " << g.q0;
        if (g.q1 >= 0) os << "," << g.q1;
        if (gate_kind_has_angle(g.kind)) {
            os << " " << fmt_angle(g.angle);
            if (g.kind == GateKind::U1q) os << " " << fmt_angle(g.phi);
        }
        os << "\n";
    }
    return os.str();
}

Circuit deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    Circuit c(0);
    bool have_header = false;
    double phase = 0.0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "qubits") {
            int n = 0;
            ls >> n;
            c = Circuit(n);
            have_header = true;
            continue;
        }
        if (!have_header) throw ContractError("circuit text must start with a qubits header");
        if (kind == "phase") {
            ls >> phase;
            continue;
        }
        std::string targets;
        ls >> targets;
        int a = -1, b = -1;
        auto comma = targets.find(',');
        if (comma == std::string::npos) {
            a = std::stoi(targets);
        } else {
            a = std::stoi(targets.substr(0, comma));
            b = std::stoi(targets.substr(comma + 1));
        }
        double angle = 0, phi = 0;
        if (kind == "U1q") {
            ls >> angle >> phi;
            c.add_u1q(a, angle, phi);
        } else if (kind == "Rz") {
            ls >> angle;
            c.add_rz(a, angle);
        } else if (kind == "ZZPhase") {
            ls >> angle;
            c.add_zz(a, b, angle);
        } else if (kind == "XXPhase") {
            ls >> angle;
            c.add_xx(a, b, angle);
        } else if (kind == "YYPhase") {
            ls >> angle;
            c.add_yy(a, b, angle);
        } else if (kind == "H") {
            c.add_h(a);
        } else if (kind == "X") {
            c.add_x(a);
        } else if (kind == "CNOT") {
            c.add_cnot(a, b);
        } else if (kind == "CZ") {
            c.add_cz(a, b);
        } else if (kind == "FSWAP") {
            c.add_fswap(a, b);
        } else {
            throw ContractError("unknown gate kind: " + kind);
        }
    }
    c.global_phase += phase;  // canonical angles normally add no wraps of their own
    return c;
}

}  // namespace lsim
