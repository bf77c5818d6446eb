#include "config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace cli {

using json = nlohmann::json;
using lsim::ConfigError;

namespace {

void check_keys(const json& j, const std::string& ctx, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(ctx + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + ctx);
}

double get_num(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError(ctx + " must be a number");
    return j.get<double>();
}

long get_int(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ConfigError(ctx + " must be an integer");
    return j.get<long>();
}

bool get_bool(const json& j, const std::string& ctx) {
    if (!j.is_boolean()) throw ConfigError(ctx + " must be a boolean");
    return j.get<bool>();
}

std::string get_str(const json& j, const std::string& ctx) {
    if (!j.is_string()) throw ConfigError(ctx + " must be a string");
    return j.get<std::string>();
}

lsim::EvalMode parse_mode(const std::string& s) {
    if (s == "exact") return lsim::EvalMode::exact;
    if (s == "trotter_exact") return lsim::EvalMode::trotter_exact;
    if (s == "trotter_sampled") return lsim::EvalMode::trotter_sampled;
    if (s == "noisy") return lsim::EvalMode::noisy;
    throw ConfigError("evaluator.mode must be exact|trotter_exact|trotter_sampled|noisy");
}

void parse_into(RunConfig& cfg, const json& root) {
    check_keys(root, "config",
               {"lattice", "params", "energy", "energies", "energy_grid", "filter", "trotter",
                "state", "noise", "mitigation", "evaluator", "chain", "resources", "mitigate",
                "dry_run", "force_qubits", "seed", "out"});

    if (root.contains("lattice")) {
        const auto& j = root["lattice"];
        check_keys(j, "lattice", {"x", "y"});
        if (j.contains("x")) cfg.lattice.x = static_cast<int>(get_int(j["x"], "lattice.x"));
        if (j.contains("y")) cfg.lattice.y = static_cast<int>(get_int(j["y"], "lattice.y"));
        if (cfg.lattice.x < 1 || cfg.lattice.y < 1)
            throw ConfigError("lattice dimensions must be >= 1");
    }
    if (root.contains("params")) {
        const auto& j = root["params"];
        check_keys(j, "params", {"J", "U"});
        if (j.contains("J")) cfg.params.J = get_num(j["J"], "params.J");
        if (j.contains("U")) cfg.params.U = get_num(j["U"], "params.U");
    }

    int energy_sources = root.contains("energy") + root.contains("energies") +
                         root.contains("energy_grid");
    if (energy_sources > 1)
        throw ConfigError("give only one of energy, energies, energy_grid");
    if (root.contains("energy")) cfg.energies = {get_num(root["energy"], "energy")};
    if (root.contains("energies")) {
        if (!root["energies"].is_array() || root["energies"].empty())
            throw ConfigError("energies must be a non-empty array");
        cfg.energies.clear();
        for (const auto& e : root["energies"]) cfg.energies.push_back(get_num(e, "energies[]"));
    }
    if (root.contains("energy_grid")) {
        const auto& j = root["energy_grid"];
        check_keys(j, "energy_grid", {"min", "max", "points"});
        if (!j.contains("min") || !j.contains("max") || !j.contains("points"))
            throw ConfigError("energy_grid needs min, max, points");
        double lo = get_num(j["min"], "energy_grid.min");
        double hi = get_num(j["max"], "energy_grid.max");
        long n = get_int(j["points"], "energy_grid.points");
        if (n < 1) throw ConfigError("energy_grid.points must be >= 1");
        cfg.energies.clear();
        for (long i = 0; i < n; ++i)
            cfg.energies.push_back(n == 1 ? lo : lo + (hi - lo) * i / double(n - 1));
    }

    if (root.contains("filter")) {
        const auto& j = root["filter"];
        check_keys(j, "filter", {"delta", "x"});
        if (j.contains("delta")) cfg.delta = get_num(j["delta"], "filter.delta");
        if (j.contains("x")) cfg.filter_x = get_num(j["x"], "filter.x");
        if (cfg.delta <= 0) throw ConfigError("filter.delta must be positive");
        if (cfg.filter_x <= 0) throw ConfigError("filter.x must be positive");
    }

    if (root.contains("trotter")) {
        const auto& j = root["trotter"];
        check_keys(j, "trotter", {"policy", "steps", "first_step_onsite_as_1q"});
        if (j.contains("policy")) {
            std::string p = get_str(j["policy"], "trotter.policy");
            if (p == "fig2")
                cfg.policy.mode = lsim::TrotterPolicy::Mode::fig2;
            else if (p == "fixed")
                cfg.policy.mode = lsim::TrotterPolicy::Mode::fixed;
            else
                throw ConfigError("trotter.policy must be fig2|fixed");
        }
        if (j.contains("steps")) {
            cfg.policy.fixed_steps = static_cast<int>(get_int(j["steps"], "trotter.steps"));
            if (cfg.policy.fixed_steps < 1) throw ConfigError("trotter.steps must be >= 1");
        }
        if (j.contains("first_step_onsite_as_1q"))
            cfg.trotter_opts.first_step_onsite_as_1q =
                get_bool(j["first_step_onsite_as_1q"], "trotter.first_step_onsite_as_1q");
    }

    if (root.contains("state")) cfg.state = get_str(root["state"], "state");

    if (root.contains("noise")) {
        const auto& j = root["noise"];
        check_keys(j, "noise", {"eps_2q", "shots", "sigma", "memory"});
        lsim::NoiseSpec spec;
        if (j.contains("eps_2q")) spec.eps_2q = get_num(j["eps_2q"], "noise.eps_2q");
        if (j.contains("shots")) spec.shots = get_int(j["shots"], "noise.shots");
        if (j.contains("sigma")) spec.sigma_series = get_num(j["sigma"], "noise.sigma");
        if (j.contains("memory")) {
            const auto& m = j["memory"];
            check_keys(m, "noise.memory", {"kind", "mean", "spread"});
            lsim::ThetaDist dist;
            std::string kind = m.contains("kind") ? get_str(m["kind"], "noise.memory.kind")
                                                  : std::string("point");
            if (kind == "point")
                dist.kind = lsim::ThetaDist::Kind::point;
            else if (kind == "gaussian")
                dist.kind = lsim::ThetaDist::Kind::gaussian;
            else if (kind == "uniform")
                dist.kind = lsim::ThetaDist::Kind::uniform;
            else
                throw ConfigError("noise.memory.kind must be point|gaussian|uniform");
            if (m.contains("mean")) dist.mean = get_num(m["mean"], "noise.memory.mean");
            if (m.contains("spread")) dist.spread = get_num(m["spread"], "noise.memory.spread");
            if (dist.spread < 0) throw ConfigError("noise.memory.spread must be >= 0");
            spec.memory = dist;
        }
        spec.validate();
        cfg.noise = spec;
    }

    if (root.contains("mitigation")) {
        const auto& j = root["mitigation"];
        check_keys(j, "mitigation", {"method", "q"});
        if (j.contains("method")) {
            cfg.mitigation_method = get_str(j["method"], "mitigation.method");
            if (cfg.mitigation_method != "rescale" && cfg.mitigation_method != "symmetry" &&
                cfg.mitigation_method != "zne-rescale")
                throw ConfigError("mitigation.method must be rescale|symmetry|zne-rescale");
        }
        if (j.contains("q")) {
            cfg.mitigation_q = get_num(j["q"], "mitigation.q");
            if (cfg.mitigation_q <= 0 || cfg.mitigation_q > 1)
                throw ConfigError("mitigation.q must be in (0, 1]");
        }
    }

    if (root.contains("evaluator")) {
        const auto& j = root["evaluator"];
        check_keys(j, "evaluator", {"mode", "shots", "sigma"});
        if (j.contains("mode")) cfg.evaluator.mode = parse_mode(get_str(j["mode"], "evaluator.mode"));
        if (j.contains("shots")) {
            cfg.evaluator.shots = get_int(j["shots"], "evaluator.shots");
            if (cfg.evaluator.shots < 1) throw ConfigError("evaluator.shots must be >= 1");
        }
        if (j.contains("sigma")) {
            cfg.evaluator.sigma = get_num(j["sigma"], "evaluator.sigma");
            if (cfg.evaluator.sigma < 0) throw ConfigError("evaluator.sigma must be >= 0");
        }
    }

    if (root.contains("chain")) {
        const auto& j = root["chain"];
        check_keys(j, "chain", {"n_samples", "burn_in", "sweep"});
        if (j.contains("n_samples")) {
            cfg.chain_samples = get_int(j["n_samples"], "chain.n_samples");
            if (cfg.chain_samples < 1) throw ConfigError("chain.n_samples must be >= 1");
        }
        if (j.contains("burn_in")) cfg.chain_burn_in = get_int(j["burn_in"], "chain.burn_in");
        if (j.contains("sweep")) cfg.chain_sweep = get_bool(j["sweep"], "chain.sweep");
    }

    if (root.contains("resources")) {
        const auto& j = root["resources"];
        check_keys(j, "resources", {"sizes", "fidelities", "encodings"});
        if (j.contains("sizes")) {
            if (!j["sizes"].is_array() || j["sizes"].empty())
                throw ConfigError("resources.sizes must be a non-empty array");
            cfg.res_sizes.clear();
            for (const auto& v : j["sizes"]) {
                int L = static_cast<int>(get_int(v, "resources.sizes[]"));
                if (L < 2) throw ConfigError("resources.sizes entries must be >= 2");
                cfg.res_sizes.push_back(L);
            }
        }
        if (j.contains("fidelities")) {
            if (!j["fidelities"].is_array() || j["fidelities"].empty())
                throw ConfigError("resources.fidelities must be a non-empty array");
            cfg.res_fidelities.clear();
            for (const auto& v : j["fidelities"]) {
                double f = get_num(v, "resources.fidelities[]");
                if (f <= 0 || f > 1) throw ConfigError("fidelities must be in (0, 1]");
                cfg.res_fidelities.push_back(f);
            }
        }
        if (j.contains("encodings")) {
            if (!j["encodings"].is_array() || j["encodings"].empty())
                throw ConfigError("resources.encodings must be a non-empty array");
            cfg.res_encodings.clear();
            for (const auto& v : j["encodings"]) {
                std::string e = get_str(v, "resources.encodings[]");
                if (e != "JW" && e != "compact")
                    throw ConfigError("encodings entries must be JW or compact");
                cfg.res_encodings.push_back(e);
            }
        }
    }

    if (root.contains("mitigate")) {
        const auto& j = root["mitigate"];
        check_keys(j, "mitigate", {"input"});
        if (j.contains("input")) cfg.mitigate_input = get_str(j["input"], "mitigate.input");
    }

    if (root.contains("dry_run")) cfg.dry_run = get_bool(root["dry_run"], "dry_run");
    if (root.contains("force_qubits")) {
        cfg.force_qubits = static_cast<int>(get_int(root["force_qubits"], "force_qubits"));
        if (cfg.force_qubits < 1 || cfg.force_qubits > 100)
            throw ConfigError("force_qubits must be in [1, 100]");
    }
    if (root.contains("seed")) {
        long s = get_int(root["seed"], "seed");
        if (s < 0) throw ConfigError("seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (root.contains("out")) cfg.out_dir = get_str(root["out"], "out");
}

json canonical_json(const RunConfig& cfg) {
    json j;
    j["lattice"] = {{"x", cfg.lattice.x}, {"y", cfg.lattice.y}};
    j["params"] = {{"J", cfg.params.J}, {"U", cfg.params.U}};
    j["energies"] = cfg.energies;
    j["filter"] = {{"delta", cfg.delta}, {"x", cfg.filter_x}};
    j["trotter"] = {
        {"policy", cfg.policy.mode == lsim::TrotterPolicy::Mode::fig2 ? "fig2" : "fixed"},
        {"steps", cfg.policy.fixed_steps},
        {"first_step_onsite_as_1q", cfg.trotter_opts.first_step_onsite_as_1q}};
    j["state"] = cfg.state;
    if (cfg.noise) {
        json n = {{"eps_2q", cfg.noise->eps_2q}, {"sigma", cfg.noise->sigma_series}};
        if (cfg.noise->shots) n["shots"] = *cfg.noise->shots;
        if (cfg.noise->memory) {
            const auto& m = *cfg.noise->memory;
            const char* kind = m.kind == lsim::ThetaDist::Kind::point      ? "point"
                               : m.kind == lsim::ThetaDist::Kind::gaussian ? "gaussian"
                                                                           : "uniform";
            n["memory"] = {{"kind", kind}, {"mean", m.mean}, {"spread", m.spread}};
        }
        j["noise"] = n;
    }
    if (!cfg.mitigation_method.empty())
        j["mitigation"] = {{"method", cfg.mitigation_method}, {"q", cfg.mitigation_q}};
    const char* mode = cfg.evaluator.mode == lsim::EvalMode::exact          ? "exact"
                       : cfg.evaluator.mode == lsim::EvalMode::trotter_exact ? "trotter_exact"
                       : cfg.evaluator.mode == lsim::EvalMode::trotter_sampled
                           ? "trotter_sampled"
                           : "noisy";
    j["evaluator"] = {{"mode", mode}, {"shots", cfg.evaluator.shots}, {"sigma", cfg.evaluator.sigma}};
    j["chain"] = {{"n_samples", cfg.chain_samples},
                  {"burn_in", cfg.chain_burn_in},
                  {"sweep", cfg.chain_sweep}};
    j["resources"] = {{"sizes", cfg.res_sizes},
                      {"fidelities", cfg.res_fidelities},
                      {"encodings", cfg.res_encodings}};
    if (!cfg.mitigate_input.empty()) j["mitigate"] = {{"input", cfg.mitigate_input}};
    j["dry_run"] = cfg.dry_run;
    j["force_qubits"] = cfg.force_qubits;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    parse_into(cfg, root);
    return cfg;
}

std::string config_hash(const RunConfig& cfg) {
    std::string text = canonical_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

lsim::ProductState resolve_state(const RunConfig& cfg) {
    if (cfg.state == "neel") {
        lsim::JWLayout layout = lsim::build_snake_layout(cfg.lattice);
        return lsim::neel_state(cfg.lattice, layout);
    }
    if (cfg.state.rfind("0x", 0) == 0) {
        lsim::BitMask bits = 0;
        std::string hex = cfg.state.substr(2);
        try {
            if (hex.empty() || hex.size() > 16) throw std::invalid_argument("length");
            std::size_t used = 0;
            bits = std::stoull(hex, &used, 16);
            if (used != hex.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("state bitmask is not valid hex: " + cfg.state);
        }
        if (bits >> cfg.lattice.n_qubits())
            throw ConfigError("state bitmask has bits outside the register");
        if (bits == 0) throw ConfigError("state must occupy at least one mode");
        return lsim::make_product_state(bits, cfg.lattice);
    }
    throw ConfigError("state must be 'neel' or a 0x-prefixed bitmask");
}

}  // namespace cli
