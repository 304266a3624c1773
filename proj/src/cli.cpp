#include "iontele/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace iontele::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kVerifyTol = 1e-10;

double parse_double_strict(std::string_view sv, const std::string& what) {
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v{};
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc{} || ptr != sv.data() + sv.size())
        throw std::invalid_argument("cannot parse '" + std::string(sv) + "' as " + what);
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string mode_name(RunMode m) {
    return m == RunMode::enumerate ? "enumerate" : "sample";
}

RunMode mode_from_name(const std::string& name) {
    if (name == "enumerate") return RunMode::enumerate;
    if (name == "sample") return RunMode::sampled;
    throw std::invalid_argument("mode must be 'enumerate' or 'sample', got '" + name + "'");
}

ojson complex_json(Cx z) { return ojson::array({z.real(), z.imag()}); }

double ci95_halfwidth(double p_hat, std::uint64_t n) {
    if (n == 0) return 0.0;
    return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

// Maps parameter-constraint violations to exit code 3.
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const NotNormalized& e) {
        err << "validation error: " << e.what() << "\n";
    } catch (const OrderingViolated& e) {
        err << "validation error: " << e.what() << "\n";
    } catch (const NonFinite& e) {
        err << "validation error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
    }
    return 3;
}

int write_output(const std::string& text, const std::string& path, std::ostream& out,
                 std::ostream& err) {
    if (path.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot open '" << path << "' for writing\n";
        return 1;
    }
    file << text;
    return file.good() ? 0 : 1;
}

std::string render_run_csv(const ProtocolResult& r) {
    const bool sampled = r.mode == RunMode::sampled;
    std::string s = "alice_13,alice_25,probability,success_given_branch,success_joint,fidelity";
    if (sampled) s += ",sampled_hits,sampled_successes";
    s += "\n";
    for (const BranchRecord& rec : r.per_branch) {
        s += rec.alice.label_13() + "," + rec.alice.label_25() + "," +
             fmt17(rec.probability) + "," + fmt17(rec.success_given_branch) + "," +
             fmt17(rec.success_joint) + ",";
        if (rec.fidelity) s += fmt17(*rec.fidelity);
        if (sampled)
            s += "," + std::to_string(rec.sampled_hits) + "," +
                 std::to_string(rec.sampled_successes);
        s += "\n";
    }
    s += "# total_success=" + fmt17(r.total_success) + "\n";
    s += "# analytic_success=" + fmt17(r.analytic_success) + "\n";
    s += "# abs_deviation=" + fmt17(std::abs(r.total_success - r.analytic_success)) + "\n";
    if (sampled) {
        s += "# shots=" + std::to_string(r.shots) + "\n";
        s += "# success_count=" + std::to_string(r.success_count) + "\n";
        s += "# empirical_success=" + fmt17(r.empirical_success) + "\n";
        s += "# ci95_halfwidth=" + fmt17(ci95_halfwidth(r.empirical_success, r.shots)) + "\n";
    }
    return s;
}

std::string render_run_json(const ProtocolResult& r, const ProtocolParams& p, double phi) {
    const bool sampled = r.mode == RunMode::sampled;
    ojson j;
    j["schema_version"] = 1;
    j["command"] = "run";
    j["mode"] = mode_name(r.mode);
    j["mode_dim"] = r.mode_dim;
    j["params"] = ojson{{"alpha", complex_json(p.alpha)}, {"beta", complex_json(p.beta)},
                        {"gamma", complex_json(p.gamma)}, {"delta", complex_json(p.delta)},
                        {"a", complex_json(p.a)},         {"b", complex_json(p.b)},
                        {"c", complex_json(p.c)},         {"d", complex_json(p.d)},
                        {"theta1", p.theta1()},           {"theta2", p.theta2()},
                        {"theta3", p.theta3()},           {"theta4", p.theta4()}};
    const PulseSchedule sched = pulse_times(p, phi);
    j["pulse"] = ojson{{"gt1", sched.gt1}, {"gt2", sched.gt2}, {"phi", sched.phi}};
    ojson branches = ojson::array();
    for (const BranchRecord& rec : r.per_branch) {
        ojson b;
        b["alice_13"] = rec.alice.label_13();
        b["alice_25"] = rec.alice.label_25();
        b["probability"] = rec.probability;
        b["success_given_branch"] = rec.success_given_branch;
        b["success_joint"] = rec.success_joint;
        b["fidelity"] = rec.fidelity ? ojson(*rec.fidelity) : ojson(nullptr);
        b["residual_phase_arg"] =
            rec.residual_phase ? ojson(std::arg(*rec.residual_phase)) : ojson(nullptr);
        if (sampled) {
            b["sampled_hits"] = rec.sampled_hits;
            b["sampled_successes"] = rec.sampled_successes;
        }
        branches.push_back(std::move(b));
    }
    j["branches"] = std::move(branches);
    j["total_success"] = r.total_success;
    j["analytic_success"] = r.analytic_success;
    j["abs_deviation"] = std::abs(r.total_success - r.analytic_success);
    if (sampled) {
        j["shots"] = r.shots;
        j["success_count"] = r.success_count;
        j["empirical_success"] = r.empirical_success;
        j["ci95_halfwidth"] = ci95_halfwidth(r.empirical_success, r.shots);
    }
    return j.dump(2) + "\n";
}

struct SweepPoint {
    double b2 = 0.0;
    double d2 = 0.0;
    double success = 0.0;
    double analytic = 0.0;
};

double grid_value(double lo, double hi, int steps, int i) {
    if (steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::vector<SweepPoint> run_sweep_grid(const SweepConfig& cfg) {
    const double b2_min = cfg.b2_min < 0.0 ? cfg.b2_max / cfg.b2_steps : cfg.b2_min;
    const double d2_min = cfg.d2_min < 0.0 ? cfg.d2_max / cfg.d2_steps : cfg.d2_min;
    for (const auto& [lo, hi] : {std::pair{b2_min, cfg.b2_max}, std::pair{d2_min, cfg.d2_max}})
        if (!(lo > 0.0) || lo > hi || hi > 0.5)
            throw OrderingViolated("sweep grid must satisfy 0 < min <= max <= 0.5");

    std::vector<SweepPoint> points;
    points.reserve(static_cast<std::size_t>(cfg.b2_steps) *
                   static_cast<std::size_t>(cfg.d2_steps));
    std::uint64_t point_index = 0;
    for (int i = 0; i < cfg.b2_steps; ++i)
        for (int k = 0; k < cfg.d2_steps; ++k, ++point_index) {
            const double b2 = grid_value(b2_min, cfg.b2_max, cfg.b2_steps, i);
            const double d2 = grid_value(d2_min, cfg.d2_max, cfg.d2_steps, k);
            ProtocolParams p;
            p.alpha = cfg.alpha;
            p.beta = cfg.beta;
            p.gamma = cfg.gamma;
            p.delta = cfg.delta;
            p.a = std::polar(std::sqrt(1.0 - b2), cfg.theta[0]);
            p.b = std::polar(std::sqrt(b2), cfg.theta[1]);
            p.c = std::polar(std::sqrt(1.0 - d2), cfg.theta[2]);
            p.d = std::polar(std::sqrt(d2), cfg.theta[3]);
            SweepPoint pt;
            pt.b2 = b2;
            pt.d2 = d2;
            pt.analytic = analytic_success(p);
            if (cfg.mode == RunMode::enumerate) {
                pt.success = run_enumerate(p, cfg.mode_dim).total_success;
            } else {
                pt.success = run_sampled(p, cfg.shots, {cfg.seed, point_index << 32},
                                         cfg.mode_dim, cfg.threads)
                                 .empirical_success;
            }
            points.push_back(pt);
        }
    return points;
}

std::string render_sweep_csv(const std::vector<SweepPoint>& points) {
    std::string s = "b2,d2,success_enum,success_analytic,abs_dev\n";
    for (const SweepPoint& pt : points)
        s += fmt17(pt.b2) + "," + fmt17(pt.d2) + "," + fmt17(pt.success) + "," +
             fmt17(pt.analytic) + "," + fmt17(std::abs(pt.success - pt.analytic)) + "\n";
    return s;
}

std::string render_sweep_json(const std::vector<SweepPoint>& points, const SweepConfig& cfg) {
    ojson j;
    j["schema_version"] = 1;
    j["command"] = "sweep";
    j["mode"] = mode_name(cfg.mode);
    j["mode_dim"] = cfg.mode_dim;
    ojson rows = ojson::array();
    for (const SweepPoint& pt : points)
        rows.push_back(ojson{{"b2", pt.b2},
                             {"d2", pt.d2},
                             {"success_enum", pt.success},
                             {"success_analytic", pt.analytic},
                             {"abs_dev", std::abs(pt.success - pt.analytic)}});
    j["points"] = std::move(rows);
    return j.dump(2) + "\n";
}

// --- config file support -----------------------------------------------

ojson load_config_json(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file '" + path + "'");
    try {
        return ojson::parse(file);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
}

void expect_keys(const ojson& j, std::initializer_list<const char*> allowed,
                 const std::string& what) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument(what + ": unknown key '" + item.key() + "'");
    }
    if (j.contains("schema_version") && j["schema_version"] != 1)
        throw std::invalid_argument(what + ": unsupported schema_version");
}

Cx config_complex(const ojson& j, const char* key) {
    const ojson& v = j.at(key);
    if (v.is_string()) return parse_complex(v.get<std::string>());
    if (v.is_array() && v.size() == 2)
        return Cx(v[0].get<double>(), v[1].get<double>());
    if (v.is_number()) return Cx(v.get<double>(), 0.0);
    throw std::invalid_argument(std::string("config key '") + key +
                                "' must be a complex string, [re, im], or number");
}

void apply_run_config(const ojson& j, RunConfig& cfg) {
    expect_keys(j,
                {"schema_version", "alpha", "beta", "gamma", "delta", "a", "b", "c", "d",
                 "mode", "shots", "seed", "mode_dim", "threads", "phi", "format", "out"},
                "run config");
    if (j.contains("alpha")) cfg.params.alpha = config_complex(j, "alpha");
    if (j.contains("beta")) cfg.params.beta = config_complex(j, "beta");
    if (j.contains("gamma")) cfg.params.gamma = config_complex(j, "gamma");
    if (j.contains("delta")) cfg.params.delta = config_complex(j, "delta");
    if (j.contains("a")) cfg.params.a = config_complex(j, "a");
    if (j.contains("b")) cfg.params.b = config_complex(j, "b");
    if (j.contains("c")) cfg.params.c = config_complex(j, "c");
    if (j.contains("d")) cfg.params.d = config_complex(j, "d");
    if (j.contains("mode")) cfg.mode = mode_from_name(j["mode"].get<std::string>());
    if (j.contains("shots")) cfg.shots = j["shots"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode_dim")) cfg.mode_dim = j["mode_dim"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    if (j.contains("phi")) cfg.phi = j["phi"].get<double>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
}

void apply_sweep_config(const ojson& j, SweepConfig& cfg) {
    expect_keys(j,
                {"schema_version", "alpha", "beta", "gamma", "delta", "theta1", "theta2",
                 "theta3", "theta4", "b2_min", "b2_max", "b2_steps", "d2_min", "d2_max",
                 "d2_steps", "mode", "shots", "seed", "mode_dim", "threads", "format", "out"},
                "sweep config");
    if (j.contains("alpha")) cfg.alpha = config_complex(j, "alpha");
    if (j.contains("beta")) cfg.beta = config_complex(j, "beta");
    if (j.contains("gamma")) cfg.gamma = config_complex(j, "gamma");
    if (j.contains("delta")) cfg.delta = config_complex(j, "delta");
    for (int t = 0; t < 4; ++t) {
        const std::string key = "theta" + std::to_string(t + 1);
        if (j.contains(key)) cfg.theta[static_cast<std::size_t>(t)] = j[key].get<double>();
    }
    if (j.contains("b2_min")) cfg.b2_min = j["b2_min"].get<double>();
    if (j.contains("b2_max")) cfg.b2_max = j["b2_max"].get<double>();
    if (j.contains("b2_steps")) cfg.b2_steps = j["b2_steps"].get<int>();
    if (j.contains("d2_min")) cfg.d2_min = j["d2_min"].get<double>();
    if (j.contains("d2_max")) cfg.d2_max = j["d2_max"].get<double>();
    if (j.contains("d2_steps")) cfg.d2_steps = j["d2_steps"].get<int>();
    if (j.contains("mode")) cfg.mode = mode_from_name(j["mode"].get<std::string>());
    if (j.contains("shots")) cfg.shots = j["shots"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode_dim")) cfg.mode_dim = j["mode_dim"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
}

}  // namespace

Cx parse_complex(const std::string& text) {
    std::string s;
    for (const char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty complex literal");

    if (const auto at = s.find('@'); at != std::string::npos) {
        if (s.find('@', at + 1) != std::string::npos)
            throw std::invalid_argument("'" + text + "': more than one '@'");
        const double mag = parse_double_strict(std::string_view(s).substr(0, at), "magnitude");
        const double phase =
            parse_double_strict(std::string_view(s).substr(at + 1), "phase");
        return std::polar(mag, phase);
    }

    if (s.back() != 'i' && s.back() != 'I')
        return Cx(parse_double_strict(s, "real part"), 0.0);

    const std::string_view body = std::string_view(s).substr(0, s.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        if (body[k] != '+' && body[k] != '-') continue;
        if (body[k - 1] == 'e' || body[k - 1] == 'E') continue;
        if (split != std::string_view::npos)
            throw std::invalid_argument("'" + text + "': malformed complex literal");
        split = k;
    }

    const auto imag_of = [&](std::string_view part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_double_strict(part, "imaginary part");
    };
    if (split == std::string_view::npos) return Cx(0.0, imag_of(body));
    return Cx(parse_double_strict(body.substr(0, split), "real part"),
              imag_of(body.substr(split)));
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const ProtocolResult result =
                cfg.mode == RunMode::enumerate
                    ? run_enumerate(cfg.params, cfg.mode_dim, cfg.phi)
                    : run_sampled(cfg.params, cfg.shots, {cfg.seed, 0}, cfg.mode_dim,
                                  cfg.threads, cfg.phi);
            const std::string text = cfg.format == "csv"
                                         ? render_run_csv(result)
                                         : render_run_json(result, cfg.params, cfg.phi);
            return write_output(text, cfg.out_path, out, err);
        },
        err);
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const std::vector<SweepPoint> points = run_sweep_grid(cfg);
            const std::string text = cfg.format == "json" ? render_sweep_json(points, cfg)
                                                          : render_sweep_csv(points);
            return write_output(text, cfg.out_path, out, err);
        },
        err);
}

int cmd_verify(std::uint64_t seed, std::uint64_t trials, int mode_dim, std::ostream& out,
               std::ostream& err) {
    std::uint64_t failures = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        RandomStream rng({seed, trial});
        const ProtocolParams params = random_params(rng);
        const ProtocolResult result = run_enumerate(params, mode_dim);

        std::string why;
        if (std::abs(result.total_success - result.analytic_success) > kVerifyTol)
            why = "total success deviates from 4|bd|^2 by " +
                  fmt17(std::abs(result.total_success - result.analytic_success));
        double prob_sum = 0.0;
        for (const BranchRecord& rec : result.per_branch) prob_sum += rec.probability;
        if (why.empty() && std::abs(prob_sum - 1.0) > kVerifyTol)
            why = "branch probabilities sum to " + fmt17(prob_sum);
        if (why.empty())
            for (const BranchRecord& rec : result.per_branch) {
                if (rec.success_joint <= 0.0) continue;
                if (!rec.fidelity || std::abs(*rec.fidelity - 1.0) > kVerifyTol) {
                    why = "branch " + rec.alice.label() + " success fidelity " +
                          (rec.fidelity ? fmt17(*rec.fidelity) : std::string("missing"));
                    break;
                }
            }

        if (!why.empty()) {
            ++failures;
            err << "trial " << trial << ": " << why << "\n";
        }
    }
    out << "verify: " << (trials - failures) << "/" << trials << " trials passed (seed "
        << seed << ")\n";
    return failures == 0 ? 0 : 4;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trapped-ion two-qubit probabilistic teleportation simulator"};
    app.name("iontele");
    app.require_subcommand(1);

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "Simulate one parameter set");
    std::string r_alpha, r_beta, r_gamma, r_delta, r_a, r_b, r_c, r_d;
    std::string r_mode = "enumerate", r_format, r_out, r_config;
    std::uint64_t r_shots = 0, r_seed = 0;
    int r_mode_dim = 4;
    unsigned r_threads = 1;
    double r_phi = 0.0;
    const char* complex_help = " (complex: 're+imi' or 'mag@phase', radians)";
    run_cmd->add_option("--alpha", r_alpha, std::string("payload amplitude on |ee>") + complex_help);
    run_cmd->add_option("--beta", r_beta, "payload amplitude on |eg>");
    run_cmd->add_option("--gamma", r_gamma, "payload amplitude on |ge>");
    run_cmd->add_option("--delta", r_delta, "payload amplitude on |gg>");
    run_cmd->add_option("--a", r_a, "channel (3,4) amplitude on |ee>");
    run_cmd->add_option("--b", r_b, "channel (3,4) amplitude on |gg>");
    run_cmd->add_option("--c", r_c, "channel (5,6) amplitude on |ee>");
    run_cmd->add_option("--d", r_d, "channel (5,6) amplitude on |gg>");
    run_cmd->add_option("--mode", r_mode, "enumerate | sample")
        ->check(CLI::IsMember({"enumerate", "sample"}));
    run_cmd->add_option("--shots", r_shots, "Monte Carlo shots (sample mode)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", r_seed, "RNG seed (sample mode)");
    run_cmd->add_option("--mode-dim", r_mode_dim, "Fock truncation of the motional mode")
        ->check(CLI::Range(2, 32));
    run_cmd->add_option("--threads", r_threads, "sampling workers")->check(CLI::PositiveNumber);
    run_cmd->add_option("--phi", r_phi, "laser phase (radians)");
    run_cmd->add_option("--format", r_format, "csv | json (default json)")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--out", r_out, "write results to PATH instead of stdout");
    run_cmd->add_option("--config", r_config, "JSON config file; flags override");

    // --- sweep ---
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Grid over |b|^2 and |d|^2 with per-point success");
    std::string s_alpha, s_beta, s_gamma, s_delta;
    std::string s_mode = "enumerate", s_format, s_out, s_config;
    std::array<double, 4> s_theta{0.0, 0.0, 0.0, 0.0};
    double s_b2_min = -1.0, s_b2_max = 0.5, s_d2_min = -1.0, s_d2_max = 0.5;
    int s_b2_steps = 5, s_d2_steps = 5, s_mode_dim = 4;
    std::uint64_t s_shots = 0, s_seed = 0;
    unsigned s_threads = 1;
    sweep_cmd->add_option("--alpha", s_alpha, "fixed payload amplitude on |ee>");
    sweep_cmd->add_option("--beta", s_beta, "fixed payload amplitude on |eg>");
    sweep_cmd->add_option("--gamma", s_gamma, "fixed payload amplitude on |ge>");
    sweep_cmd->add_option("--delta", s_delta, "fixed payload amplitude on |gg>");
    sweep_cmd->add_option("--theta1", s_theta[0], "phase of a (radians)");
    sweep_cmd->add_option("--theta2", s_theta[1], "phase of b (radians)");
    sweep_cmd->add_option("--theta3", s_theta[2], "phase of c (radians)");
    sweep_cmd->add_option("--theta4", s_theta[3], "phase of d (radians)");
    sweep_cmd->add_option("--b2-min", s_b2_min, "lowest |b|^2 (default b2-max / b2-steps)");
    sweep_cmd->add_option("--b2-max", s_b2_max, "highest |b|^2, <= 0.5");
    sweep_cmd->add_option("--b2-steps", s_b2_steps)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--d2-min", s_d2_min, "lowest |d|^2 (default d2-max / d2-steps)");
    sweep_cmd->add_option("--d2-max", s_d2_max, "highest |d|^2, <= 0.5");
    sweep_cmd->add_option("--d2-steps", s_d2_steps)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--mode", s_mode, "enumerate | sample")
        ->check(CLI::IsMember({"enumerate", "sample"}));
    sweep_cmd->add_option("--shots", s_shots, "Monte Carlo shots per point (sample mode)")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", s_seed, "RNG seed (sample mode)");
    sweep_cmd->add_option("--mode-dim", s_mode_dim)->check(CLI::Range(2, 32));
    sweep_cmd->add_option("--threads", s_threads)->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--format", s_format, "csv | json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--out", s_out, "write results to PATH instead of stdout");
    sweep_cmd->add_option("--config", s_config, "JSON config file; flags override");

    // --- verify ---
    auto* verify_cmd =
        app.add_subcommand("verify", "Randomized invariant checks over valid parameter sets");
    std::uint64_t v_trials = 200, v_seed = 1;
    int v_mode_dim = 4;
    verify_cmd->add_option("--trials", v_trials, "number of random parameter sets")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", v_seed, "base seed for the parameter draws");
    verify_cmd->add_option("--mode-dim", v_mode_dim)->check(CLI::Range(2, 32));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*run_cmd) {
            RunConfig cfg;
            if (!r_config.empty()) apply_run_config(load_config_json(r_config), cfg);
            const auto set_complex = [&](const char* flag, const std::string& text, Cx& dst) {
                if (run_cmd->count(flag) == 0) return;
                try {
                    dst = parse_complex(text);
                } catch (const std::invalid_argument& e) {
                    throw CLI::ValidationError(flag, e.what());
                }
            };
            set_complex("--alpha", r_alpha, cfg.params.alpha);
            set_complex("--beta", r_beta, cfg.params.beta);
            set_complex("--gamma", r_gamma, cfg.params.gamma);
            set_complex("--delta", r_delta, cfg.params.delta);
            set_complex("--a", r_a, cfg.params.a);
            set_complex("--b", r_b, cfg.params.b);
            set_complex("--c", r_c, cfg.params.c);
            set_complex("--d", r_d, cfg.params.d);
            if (run_cmd->count("--mode")) cfg.mode = mode_from_name(r_mode);
            if (run_cmd->count("--shots")) cfg.shots = r_shots;
            if (run_cmd->count("--seed")) cfg.seed = r_seed;
            if (run_cmd->count("--mode-dim")) cfg.mode_dim = r_mode_dim;
            if (run_cmd->count("--threads")) cfg.threads = r_threads;
            if (run_cmd->count("--phi")) cfg.phi = r_phi;
            if (run_cmd->count("--format")) cfg.format = r_format;
            if (run_cmd->count("--out")) cfg.out_path = r_out;
            return cmd_run(cfg, out, err);
        }
        if (*sweep_cmd) {
            SweepConfig cfg;
            if (!s_config.empty()) apply_sweep_config(load_config_json(s_config), cfg);
            const auto set_complex = [&](const char* flag, const std::string& text, Cx& dst) {
                if (sweep_cmd->count(flag) == 0) return;
                try {
                    dst = parse_complex(text);
                } catch (const std::invalid_argument& e) {
                    throw CLI::ValidationError(flag, e.what());
                }
            };
            set_complex("--alpha", s_alpha, cfg.alpha);
            set_complex("--beta", s_beta, cfg.beta);
            set_complex("--gamma", s_gamma, cfg.gamma);
            set_complex("--delta", s_delta, cfg.delta);
            for (int t = 0; t < 4; ++t) {
                const std::string flag = "--theta" + std::to_string(t + 1);
                if (sweep_cmd->count(flag))
                    cfg.theta[static_cast<std::size_t>(t)] = s_theta[static_cast<std::size_t>(t)];
            }
            if (sweep_cmd->count("--b2-min")) cfg.b2_min = s_b2_min;
            if (sweep_cmd->count("--b2-max")) cfg.b2_max = s_b2_max;
            if (sweep_cmd->count("--b2-steps")) cfg.b2_steps = s_b2_steps;
            if (sweep_cmd->count("--d2-min")) cfg.d2_min = s_d2_min;
            if (sweep_cmd->count("--d2-max")) cfg.d2_max = s_d2_max;
            if (sweep_cmd->count("--d2-steps")) cfg.d2_steps = s_d2_steps;
            if (sweep_cmd->count("--mode")) cfg.mode = mode_from_name(s_mode);
            if (sweep_cmd->count("--shots")) cfg.shots = s_shots;
            if (sweep_cmd->count("--seed")) cfg.seed = s_seed;
            if (sweep_cmd->count("--mode-dim")) cfg.mode_dim = s_mode_dim;
            if (sweep_cmd->count("--threads")) cfg.threads = s_threads;
            if (sweep_cmd->count("--format")) cfg.format = s_format;
            if (sweep_cmd->count("--out")) cfg.out_path = s_out;
            return cmd_sweep(cfg, out, err);
        }
        return cmd_verify(v_seed, v_trials, v_mode_dim, out, err);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace iontele::cli
