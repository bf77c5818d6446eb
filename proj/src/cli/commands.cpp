#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lsim/filter.hpp"
#include "lsim/interferometry.hpp"
#include "lsim/mitigation.hpp"
#include "lsim/pool.hpp"
#include "lsim/resources.hpp"
#include "lsim/sampler.hpp"
#include "lsim/sim.hpp"

namespace cli {

using json = nlohmann::json;
using lsim::ConfigError;
using lsim::ContractError;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + cfg.out_dir);
    std::ofstream out(dir / name);
    if (!out) throw ConfigError("cannot write " + (dir / name).string());
    out << "# config_hash=" << cfg.hash << " seed=" << cfg.seed << "\n";
    return out;
}

void write_json(const RunConfig& cfg, const std::string& name, json j) {
    j["config_hash"] = cfg.hash;
    j["seed"] = cfg.seed;
    std::ofstream out = open_out(cfg, name);
    out << j.dump(2) << "\n";
}

int effective_jobs(const RunConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double series_variance(double p0, double p_pi, long shots) {
    if (shots <= 0) return 0.0;
    return (p0 * (1 - p0) + p_pi * (1 - p_pi) + 2 * p0 * p_pi) / static_cast<double>(shots);
}

std::map<std::uint32_t, double> soften(const std::map<std::uint32_t, long>& counts) {
    std::map<std::uint32_t, double> soft;
    for (const auto& [k, v] : counts) soft[k] = static_cast<double>(v);
    return soft;
}

}  // namespace

// --- timeseries --------------------------------------------------------------

namespace {

struct TimeseriesRow {
    int m = 0;
    double t = 0;
    long n_2q = 0;
    double re_exact = 0;
    double p0 = 0, p_pi = 0, re_g = 0, sigma = 0;
    // noisy block
    double p0_star = 0, p_pi_star = 0, re_noisy = 0, sigma_noisy = 0;
    // coherent memory-error block
    double p0_mem = 0, p_pi_mem = 0;
    // mitigated block
    double re_mit = 0, sigma_mit = 0, kept = 1, q_used = 1;
};

}  // namespace

int cmd_timeseries(const RunConfig& cfg) {
    if (cfg.energies.size() != 1)
        throw ConfigError("timeseries takes a single energy (use 'energy')");
    const double E = cfg.energies[0];

    if (cfg.dry_run) {
        int nq = cfg.force_qubits > 0 ? cfg.force_qubits : cfg.lattice.n_qubits();
        lsim::FilterSpec filter = lsim::make_filter(nq, cfg.delta, cfg.filter_x);
        json meta;
        meta["n_qubits"] = nq;
        meta["alpha"] = filter.alpha;
        meta["M"] = filter.M;
        meta["R"] = filter.R;
        meta["n_points"] = filter.R + 1;
        meta["t_max"] = filter.t_of(filter.R);
        meta["truncation_bound"] = filter.truncation_bound();
        if (cfg.lattice.x >= 1 && cfg.lattice.y >= 1) {
            lsim::GateCounts gc = lsim::count_gates(cfg.lattice, lsim::Technique::GHZ);
            meta["gates"] = {{"onsite", gc.onsite},
                             {"hopping", gc.hopping},
                             {"ghz", gc.ghz},
                             {"total_2q", gc.total_2q},
                             {"n_qubits", gc.n_qubits}};
        }
        write_json(cfg, "metadata.json", meta);
        return 0;
    }

    cfg.lattice.validate();
    lsim::ProductState psi0 = resolve_state(cfg);
    lsim::FilterSpec filter = lsim::make_filter(cfg.lattice.n_qubits(), cfg.delta, cfg.filter_x);
    lsim::TimeGrid grid = lsim::make_time_grid(filter);
    const std::size_t n = grid.m.size();

    const bool with_noise = cfg.noise.has_value();
    const bool with_memory = with_noise && cfg.noise->memory.has_value();
    const bool with_mit = !cfg.mitigation_method.empty();
    if (with_mit && !with_noise)
        throw ConfigError("mitigation requires a noise block to mitigate");
    if (with_mit && cfg.mitigation_method != "rescale" && !(cfg.noise->eps_2q > 0) &&
        !cfg.noise->shots)
        throw ConfigError(cfg.mitigation_method + " mitigation needs shot-level noise");

    lsim::Rng base(cfg.seed);
    std::vector<TimeseriesRow> rows(n);
    lsim::parallel_for(n, effective_jobs(cfg), [&](std::size_t i) {
        lsim::Rng rng = base.child(i);
        TimeseriesRow& row = rows[i];
        row.m = grid.m[i];
        row.t = grid.t[i];
        int steps = cfg.policy.steps_for(row.m);
        lsim::LoschmidtCircuit lc = lsim::build_loschmidt_circuit(
            psi0, cfg.lattice, cfg.params, row.t, steps, E, cfg.trotter_opts);
        row.n_2q = lc.circuit.count_two_qubit();
        row.re_exact =
            lsim::loschmidt_exact(psi0, cfg.lattice, cfg.params, row.t, E).real();
        lsim::InterferometryOutcome ideal = lsim::run_exact(lc);
        row.p0 = ideal.p0;
        row.p_pi = ideal.p_pi;
        row.re_g = ideal.re_g;

        if (!with_noise) return;
        const lsim::NoiseSpec& ns = *cfg.noise;
        long traj_shots = ns.shots ? *ns.shots : cfg.evaluator.shots;
        lsim::InterferometryOutcome noisy = ideal;
        if (ns.eps_2q > 0)
            noisy = lsim::run_trajectories(lc, ns.eps_2q, traj_shots, rng);
        else if (ns.shots)
            noisy = lsim::run_sampled(lc, *ns.shots, rng);
        row.p0_star = noisy.p0;
        row.p_pi_star = noisy.p_pi;
        row.re_noisy = noisy.p0 - noisy.p_pi;
        double var_noisy = series_variance(noisy.p0, noisy.p_pi, noisy.shots);
        if (ns.sigma_series > 0) {
            row.re_noisy += ns.sigma_series * rng.normal();
            var_noisy += ns.sigma_series * ns.sigma_series;
        }
        row.sigma_noisy = std::sqrt(var_noisy);

        double q_analytic = lsim::q_factor(row.n_2q, lsim::fidelity_survival(ns.eps_2q));
        if (with_memory) {
            lsim::cplx g0 = lsim::loschmidt_exact(psi0, cfg.lattice, cfg.params, row.t, 0.0);
            lsim::ChannelParams cp{q_analytic, 0.0, cfg.lattice.n_qubits()};
            auto [p0m, ppim] = lsim::memory_error_outcomes(g0, E, row.t, *ns.memory, cp);
            row.p0_mem = p0m;
            row.p_pi_mem = ppim;
        }

        if (!with_mit) return;
        double q_pt = cfg.mitigation_q > 0 ? cfg.mitigation_q : q_analytic;
        if (cfg.mitigation_method == "rescale") {
            row.q_used = q_pt;
            row.re_mit = lsim::rescale(row.p0_star, row.p_pi_star, q_pt);
            row.sigma_mit = std::sqrt(var_noisy) / q_pt;
        } else if (cfg.mitigation_method == "symmetry") {
            lsim::SymmetryResult sr = lsim::symmetry_filter(soften(noisy.raw_counts), lc);
            row.kept = sr.kept_fraction;
            // Conditioning on an accepted shot leaves residual survival
            // q / kept_fraction; divide it out so the estimator is unbiased.
            row.q_used = q_pt / sr.kept_fraction;
            row.re_mit = (sr.p0 - sr.p_pi) / row.q_used;
            long n_kept = std::lround(sr.kept_fraction * static_cast<double>(noisy.shots));
            row.sigma_mit =
                std::sqrt(series_variance(sr.p0, sr.p_pi, std::max(1L, n_kept))) / row.q_used;
        } else {  // zne-rescale
            lsim::LoschmidtCircuit folded = lsim::zne_fold(lc);
            lsim::InterferometryOutcome zo;
            if (ns.eps_2q > 0)
                zo = lsim::run_trajectories(folded, ns.eps_2q, traj_shots, rng);
            else
                zo = lsim::run_sampled(folded, *ns.shots, rng);
            lsim::ChannelParams cp = lsim::zne_extract(zo.p0, zo.p_pi, cfg.lattice.n_qubits());
            row.q_used = cp.q;
            row.re_mit = lsim::rescale(row.p0_star, row.p_pi_star, cp.q);
            row.sigma_mit = std::sqrt(var_noisy) / cp.q;
        }
    });

    std::ofstream out = open_out(cfg, "timeseries.csv");
    out << "m,t,n_2q,re_g_exact,p0,p_pi,re_g,sigma";
    if (with_noise) out << ",p0_star,p_pi_star,re_g_noisy,sigma_noisy";
    if (with_memory) out << ",p0_mem,p_pi_mem";
    if (with_mit) out << ",re_g_mitigated,sigma_mitigated,kept_fraction,q_used";
    out << "\n";
    for (const auto& r : rows) {
        out << r.m << "," << fmt(r.t) << "," << r.n_2q << "," << fmt(r.re_exact) << ","
            << fmt(r.p0) << "," << fmt(r.p_pi) << "," << fmt(r.re_g) << "," << fmt(r.sigma);
        if (with_noise)
            out << "," << fmt(r.p0_star) << "," << fmt(r.p_pi_star) << "," << fmt(r.re_noisy)
                << "," << fmt(r.sigma_noisy);
        if (with_memory) out << "," << fmt(r.p0_mem) << "," << fmt(r.p_pi_mem);
        if (with_mit)
            out << "," << fmt(r.re_mit) << "," << fmt(r.sigma_mit) << "," << fmt(r.kept) << ","
                << fmt(r.q_used);
        out << "\n";
    }
    return 0;
}

// --- fdos --------------------------------------------------------------------

int cmd_fdos(const RunConfig& cfg) {
    cfg.lattice.validate();
    lsim::ProductState psi0 = resolve_state(cfg);
    const int nq = cfg.lattice.n_qubits();
    lsim::FilterSpec filter = lsim::make_filter(nq, cfg.delta, cfg.filter_x);
    lsim::FilterSpec filter_half = lsim::make_filter(nq, cfg.delta, cfg.filter_x / 2.0);
    const std::size_t n = cfg.energies.size();

    std::vector<lsim::FdosEstimate> full(n), half(n);
    lsim::Rng base(cfg.seed);
    if (cfg.evaluator.mode == lsim::EvalMode::exact) {
        lsim::Rng r1 = base.child(0), r2 = base.child(1);
        full = lsim::fdos_batch(psi0, cfg.energies, filter, cfg.lattice, cfg.params,
                                cfg.evaluator, r1);
        half = lsim::fdos_batch(psi0, cfg.energies, filter_half, cfg.lattice, cfg.params,
                                cfg.evaluator, r2);
    } else {
        lsim::parallel_for(n, effective_jobs(cfg), [&](std::size_t i) {
            for (int which = 0; which < 2; ++which) {
                lsim::Rng rng = base.child(2 * i + which);
                const lsim::FilterSpec& f = which == 0 ? filter : filter_half;
                std::vector<lsim::FdosEstimate> one =
                    lsim::fdos_batch(psi0, {cfg.energies[i]}, f, cfg.lattice, cfg.params,
                                     cfg.evaluator, rng);
                (which == 0 ? full : half)[i] = one[0];
            }
        });
    }

    std::ofstream out = open_out(cfg, "fdos.csv");
    out << "E,d_series,d_series_xhalf,d_oracle,rel_err,truncation_bound\n";
    for (std::size_t i = 0; i < n; ++i) {
        double oracle =
            lsim::fdos_exact(psi0, cfg.lattice, cfg.params, cfg.energies[i], cfg.delta);
        double rel = oracle != 0.0 ? std::abs(full[i].value - oracle) / oracle
                                   : std::abs(full[i].value);
        out << fmt(cfg.energies[i]) << "," << fmt(full[i].value) << "," << fmt(half[i].value)
            << "," << fmt(oracle) << "," << fmt(rel) << "," << fmt(full[i].truncation_bound)
            << "\n";
    }
    return 0;
}

// --- sample ------------------------------------------------------------------

namespace {

lsim::ChainConfig chain_config(const RunConfig& cfg, double E, std::uint64_t seed,
                               const lsim::EvaluatorConfig& ev) {
    lsim::ChainConfig cc;
    cc.E = E;
    cc.delta = cfg.delta;
    cc.n_samples = cfg.chain_samples;
    cc.burn_in = cfg.chain_burn_in;
    cc.seed = seed;
    cc.evaluator = ev;
    cc.evaluator.policy = cfg.policy;
    cc.evaluator.opts = cfg.trotter_opts;
    return cc;
}

}  // namespace

int cmd_sample(const RunConfig& cfg) {
    cfg.lattice.validate();
    lsim::FilterSpec filter = lsim::make_filter(cfg.lattice.n_qubits(), cfg.delta, cfg.filter_x);

    if (!cfg.chain_sweep) {
        if (cfg.energies.size() != 1)
            throw ConfigError("sample without chain.sweep takes a single energy");
        lsim::ChainConfig cc = chain_config(cfg, cfg.energies[0], cfg.seed, cfg.evaluator);
        std::vector<lsim::SampleRecord> records =
            lsim::run_chain(cc, cfg.lattice, cfg.params, filter);

        std::ofstream out = open_out(cfg, "chain.csv");
        out << "step,state,D,double_occupancy,accepted\n";
        long accepted = 0;
        std::vector<double> occ;
        occ.reserve(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            char state_hex[24];
            // sampled lattices fit the simulator cap, so the mask fits 64 bits
            std::snprintf(state_hex, sizeof state_hex, "0x%llx",
                          static_cast<unsigned long long>(r.state.bits));
            out << i << "," << state_hex << "," << fmt(r.D) << "," << fmt(r.double_occupancy)
                << "," << (r.accepted ? 1 : 0) << "\n";
            accepted += r.accepted ? 1 : 0;
            occ.push_back(r.double_occupancy);
        }
        lsim::BlockingResult blk = lsim::blocking_error(occ);
        json summary;
        summary["E"] = cc.E;
        summary["mean_double_occupancy"] = blk.mean;
        summary["stderr"] = blk.stderror;
        summary["plateau_level"] = blk.plateau_level;
        summary["acceptance_rate"] = static_cast<double>(accepted) / records.size();
        summary["n_samples"] = cfg.chain_samples;
        summary["burn_in"] = cfg.chain_burn_in >= 0 ? cfg.chain_burn_in : cfg.chain_samples / 10;
        write_json(cfg, "summary.json", summary);
        return 0;
    }

    // Sweep mode: noiseless / shot-noise / shot+Gaussian estimates per energy.
    if (cfg.chain_samples < 64)
        throw ConfigError("chain.sweep needs chain.n_samples >= 64 for blocking errors");
    const std::size_t n = cfg.energies.size();
    std::vector<lsim::EvaluatorConfig> variants(3, cfg.evaluator);
    variants[0].mode = lsim::EvalMode::exact;
    variants[1].mode = lsim::EvalMode::trotter_sampled;
    variants[2].mode = lsim::EvalMode::noisy;

    lsim::Rng base(cfg.seed);
    std::vector<std::uint64_t> seeds(3 * n);
    for (auto& s : seeds) s = base.next_u64();

    std::vector<double> est(3 * n), err(3 * n);
    lsim::parallel_for(3 * n, effective_jobs(cfg), [&](std::size_t task) {
        std::size_t v = task / n, i = task % n;
        lsim::ChainConfig cc = chain_config(cfg, cfg.energies[i], seeds[task], variants[v]);
        std::vector<lsim::SampleRecord> records =
            lsim::run_chain(cc, cfg.lattice, cfg.params, filter);
        std::vector<double> occ;
        occ.reserve(records.size());
        for (const auto& r : records) occ.push_back(r.double_occupancy);
        lsim::BlockingResult blk = lsim::blocking_error(occ);
        est[task] = blk.mean;
        err[task] = blk.stderror;
    });

    lsim::JWLayout layout = lsim::build_snake_layout(cfg.lattice);
    lsim::ProductState neel = lsim::neel_state(cfg.lattice, layout);
    auto pool = lsim::sector_states(cfg.lattice.n_sites(), neel.n_up, neel.n_down);
    bool have_exhaustive = pool.size() <= 2000;

    std::ofstream out = open_out(cfg, "sweep.csv");
    out << "E,exhaustive,est_noiseless,err_noiseless,est_shots,err_shots,est_noisy,err_noisy\n";
    for (std::size_t i = 0; i < n; ++i) {
        double exh = have_exhaustive ? lsim::exhaustive_expectation(cfg.lattice, cfg.params,
                                                                    cfg.energies[i], cfg.delta)
                                     : std::nan("");
        out << fmt(cfg.energies[i]) << "," << fmt(exh);
        for (int v = 0; v < 3; ++v)
            out << "," << fmt(est[v * n + i]) << "," << fmt(err[v * n + i]);
        out << "\n";
    }
    return 0;
}

// --- resources ---------------------------------------------------------------

int cmd_resources(const RunConfig& cfg) {
    std::ofstream out = open_out(cfg, "resources.csv");
    out << "L,x,y,encoding,f,n_steps,gates_per_step,total_2q,q,overhead\n";
    for (int L : cfg.res_sizes)
        for (const std::string& enc : cfg.res_encodings)
            for (double f : cfg.res_fidelities) {
                lsim::LatticeSpec lat{L, L};
                lsim::ResourceEstimate est = lsim::shot_overhead(lat, enc, f);
                out << L << "," << lat.x << "," << lat.y << "," << enc << "," << fmt(f) << ","
                    << est.n_steps << "," << est.gates_per_step << "," << est.total_2q << ","
                    << fmt(est.q) << "," << fmt(est.overhead) << "\n";
            }
    return 0;
}

// --- mitigate ----------------------------------------------------------------

int cmd_mitigate(const RunConfig& cfg) {
    if (cfg.mitigate_input.empty())
        throw ConfigError("mitigate needs mitigate.input (a timeseries.csv path)");
    std::string method = cfg.mitigation_method.empty() ? "rescale" : cfg.mitigation_method;
    if (method != "rescale")
        throw ConfigError("offline mitigation supports only rescale; " + method +
                          " needs raw shots (rerun timeseries with mitigation." + method + ")");

    std::ifstream in(cfg.mitigate_input);
    if (!in) throw ConfigError("cannot open " + cfg.mitigate_input);
    std::string line, header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        header = line;
        break;
    }
    if (header.empty()) throw ConfigError("input has no header row");
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return static_cast<long>(i);
        return -1L;
    };
    long c_m = col("m"), c_t = col("t"), c_n2q = col("n_2q");
    long c_p0 = col("p0_star"), c_ppi = col("p_pi_star"), c_sig = col("sigma_noisy");
    if (c_m < 0 || c_t < 0 || c_p0 < 0 || c_ppi < 0)
        throw ConfigError("input lacks noisy columns (expected p0_star/p_pi_star)");
    if (cfg.mitigation_q <= 0) {
        if (!cfg.noise || cfg.noise->eps_2q <= 0)
            throw ConfigError("give mitigation.q or a noise.eps_2q to derive q from");
        if (c_n2q < 0) throw ConfigError("input lacks the n_2q column needed to derive q");
    }

    std::ofstream out = open_out(cfg, "mitigated.csv");
    out << "m,t,re_g_mitigated,sigma_mitigated,q_used\n";
    long rows = 0;
    double q_min = 1.0, q_max = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) f.push_back(c);
        if (f.size() != cols.size())
            throw ConfigError("malformed row in " + cfg.mitigate_input);
        auto num = [&](long idx) { return std::strtod(f[idx].c_str(), nullptr); };
        double q = cfg.mitigation_q > 0
                       ? cfg.mitigation_q
                       : lsim::q_factor(std::lround(num(c_n2q)),
                                        lsim::fidelity_survival(cfg.noise->eps_2q));
        double re_mit = lsim::rescale(num(c_p0), num(c_ppi), q);
        double sigma = c_sig >= 0 ? num(c_sig) / q : 0.0;
        out << f[c_m] << "," << f[c_t] << "," << fmt(re_mit) << "," << fmt(sigma) << ","
            << fmt(q) << "\n";
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
        ++rows;
    }
    if (rows == 0) throw ConfigError("input has no data rows");
    json report;
    report["method"] = method;
    report["input"] = cfg.mitigate_input;
    report["rows"] = rows;
    report["q_min"] = q_min;
    report["q_max"] = q_max;
    write_json(cfg, "mitigation_report.json", report);
    return 0;
}

}  // namespace cli
