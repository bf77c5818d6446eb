#include "lsim/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lsim/sim.hpp"

namespace lsim {

double double_occupancy(const ProductState& s, const LatticeSpec& lattice) {
    int n = lattice.n_sites();
    require(s.n_qubits == 2 * n, "state/lattice size mismatch");
    int d = 0;
    for (int k = 0; k < n; ++k)
        if (((s.bits >> k) & 1u) && ((s.bits >> (n + k)) & 1u)) ++d;
    return static_cast<double>(d) / n;
}

std::vector<std::pair<int, int>> legal_hops(const ProductState& s, const LatticeSpec& lattice,
                                            const JWLayout& layout) {
    std::vector<std::pair<int, int>> hops;
    auto occ = [&](int q) { return ((s.bits >> q) & 1u) != 0; };
    for (const auto& [a, b] : lattice.bonds()) {
        for (int spin = 0; spin < 2; ++spin) {
            int qa = spin == 0 ? layout.qubit_up(a) : layout.qubit_down(a);
            int qb = spin == 0 ? layout.qubit_up(b) : layout.qubit_down(b);
            if (occ(qa) && !occ(qb)) hops.emplace_back(qa, qb);
            if (occ(qb) && !occ(qa)) hops.emplace_back(qb, qa);
        }
    }
    return hops;
}

HopProposal propose_hop(const ProductState& s, const LatticeSpec& lattice, const JWLayout& layout,
                        Rng& rng) {
    auto hops = legal_hops(s, lattice, layout);
    if (hops.empty()) return {s, 1.0, 1.0};
    auto [from, to] = hops[rng.uniform_int(hops.size())];
    ProductState next = s;
    next.bits ^= mask_bit(from) | mask_bit(to);
    double p_fwd = 1.0 / static_cast<double>(hops.size());
    double p_rev = 1.0 / static_cast<double>(legal_hops(next, lattice, layout).size());
    return {next, p_fwd, p_rev};
}

bool accept(double D_new, double D_old, double p_fwd, double p_rev, Rng& rng) {
    require(D_old > 0, "current weight must be positive");
    if (D_new <= 0) return false;
    double a = (D_new / D_old) * (p_rev / p_fwd);
    if (a >= 1.0) return true;
    return rng.uniform() < a;
}

namespace {

double evaluate_weight(const ProductState& p, const ChainConfig& cfg, const LatticeSpec& lattice,
                       const HubbardParams& params, const FilterSpec& filter, Rng& ev_rng) {
    const EvaluatorConfig& ev = cfg.evaluator;
    if (ev.mode == EvalMode::exact) return fdos_exact(p, lattice, params, cfg.E, cfg.delta);
    std::optional<long> shots;
    double sigma = 0.0;
    if (ev.mode == EvalMode::trotter_sampled) shots = ev.shots;
    if (ev.mode == EvalMode::noisy) {
        shots = ev.shots;
        sigma = ev.sigma;
    }
    TimeSeries series = timeseries_trotter(p, lattice, params, filter, cfg.E, ev.policy, ev.opts,
                                           shots, sigma, ev_rng);
    return fdos_from_series(series, filter, cfg.E).value;
}

}  // namespace

std::vector<SampleRecord> run_chain(const ChainConfig& cfg, const LatticeSpec& lattice,
                                    const HubbardParams& params, const FilterSpec& filter) {
    require(cfg.n_samples >= 1, "n_samples must be >= 1");
    require(std::abs(cfg.delta - filter.delta) < 1e-9, "chain delta must match the filter");
    long burn = cfg.burn_in >= 0 ? cfg.burn_in : cfg.n_samples / 10;

    JWLayout layout = build_snake_layout(lattice);
    Rng base(cfg.seed);
    Rng mh = base.child(0);
    Rng ev = base.child(1);

    std::map<BitMask, double> memo;
    auto weight = [&](const ProductState& p) {
        auto it = memo.find(p.bits);
        if (it != memo.end()) return it->second;
        double d = evaluate_weight(p, cfg, lattice, params, filter, ev);
        memo.emplace(p.bits, d);
        return d;
    };

    ProductState state = neel_state(lattice, layout);
    double d_cur = weight(state);
    if (d_cur <= 0) {
        // Noise can leave the starting weight non-positive; restart elsewhere.
        auto pool = sector_states(lattice.n_sites(), state.n_up, state.n_down);
        int tries = 0;
        while (d_cur <= 0 && tries++ < 100) {
            state = make_product_state(pool[mh.uniform_int(pool.size())], lattice);
            d_cur = weight(state);
        }
        if (d_cur <= 0) throw ContractError("no positive-weight starting state found");
    }

    std::vector<SampleRecord> records;
    records.reserve(cfg.n_samples);
    for (long step = 0; step < burn + cfg.n_samples; ++step) {
        HopProposal prop = propose_hop(state, lattice, layout, mh);
        double d_new = weight(prop.next);
        bool acc = accept(d_new, d_cur, prop.p_fwd, prop.p_rev, mh);
        if (acc) {
            state = prop.next;
            d_cur = d_new;
        }
        if (step >= burn)
            records.push_back({state, d_cur, double_occupancy(state, lattice), acc});
    }
    return records;
}

double exhaustive_expectation(const LatticeSpec& lattice, const HubbardParams& params, double E,
                              double delta) {
    JWLayout layout = build_snake_layout(lattice);
    ProductState neel = neel_state(lattice, layout);
    auto pool = sector_states(lattice.n_sites(), neel.n_up, neel.n_down);
    if (pool.size() > 1000000) throw ContractError("half-filling state space too large");
    double num = 0, den = 0;
    for (std::uint32_t bits : pool) {
        ProductState p = make_product_state(bits, lattice);
        double d = fdos_exact(p, lattice, params, E, delta);
        num += d * double_occupancy(p, lattice);
        den += d;
    }
    require(den > 0, "all exact weights vanished");
    return num / den;
}

std::vector<double> exhaustive_weights(const LatticeSpec& lattice, const HubbardParams& params,
                                       double E, double delta, int n_up, int n_down) {
    auto pool = sector_states(lattice.n_sites(), n_up, n_down);
    if (pool.size() > 1000000) throw ContractError("sector too large");
    std::vector<double> w;
    w.reserve(pool.size());
    for (std::uint32_t bits : pool)
        w.push_back(fdos_exact(make_product_state(bits, lattice), lattice, params, E, delta));
    return w;
}

BlockingResult blocking_error(const std::vector<double>& samples) {
    if (samples.size() < 64) throw ContractError("blocking needs at least 64 samples");
    BlockingResult out;
    double mean = 0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    out.mean = mean;

    std::vector<double> x = samples;
    while (static_cast<long>(x.size()) >= 8) {
        long n = static_cast<long>(x.size());
        double m = 0;
        for (double v : x) m += v;
        m /= static_cast<double>(n);
        double c0 = 0;
        for (double v : x) c0 += (v - m) * (v - m);
        c0 /= static_cast<double>(n);
        double est = c0 / static_cast<double>(n - 1);  // variance of the mean
        out.levels.push_back({n, est, est * std::sqrt(2.0 / static_cast<double>(n - 1))});
        std::vector<double> next(n / 2);
        for (long i = 0; i < n / 2; ++i) next[i] = 0.5 * (x[2 * i] + x[2 * i + 1]);
        x = std::move(next);
    }

    // Plateau onset: the first level whose estimate has stopped growing
    // relative to its own uncertainty; if the curve never settles, use the
    // deepest level (conservative).
    int k_star = static_cast<int>(out.levels.size()) - 1;
    for (std::size_t k = 0; k + 1 < out.levels.size(); ++k) {
        if (std::abs(out.levels[k + 1].est - out.levels[k].est) <= out.levels[k].uncert) {
            k_star = static_cast<int>(k);
            break;
        }
    }
    out.plateau_level = k_star;
    double best = 0;
    for (int j = 0; j <= k_star; ++j) best = std::max(best, out.levels[j].est);
    out.stderror = std::sqrt(best);
    return out;
}

}  // namespace lsim
