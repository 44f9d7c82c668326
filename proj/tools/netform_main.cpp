// Command-line front end: simulate | estimate | mple | gof | counterfactual | stable.
// Every stochastic subcommand requires --seed; all randomness is derived from
// it per job, so results are identical for any --threads value.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netform/config.hpp"
#include "netform/counterfactual.hpp"
#include "netform/dynamics.hpp"
#include "netform/gof.hpp"
#include "netform/inference.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::map<std::string, std::string> overrides;
};

void add_override_option(CLI::App* cmd, CommonArgs& args, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + key, [&args, key](const std::string& v) { args.overrides[key] = v; }, help);
}

netform::RunConfig merged_config(const CommonArgs& args) {
    netform::RunConfig cfg;
    if (!args.config_path.empty()) cfg = netform::RunConfig::from_file(args.config_path);
    for (const auto& [k, v] : args.overrides) cfg.set(k, v);
    return cfg;
}

std::uint64_t require_seed(const netform::RunConfig& cfg) {
    if (!cfg.has("seed")) throw netform::io_error("missing required key: seed (stochastic subcommand)");
    const long long s = cfg.get_int("seed", 0);
    return static_cast<std::uint64_t>(s);
}

int get_threads(const netform::RunConfig& cfg) {
    const long long t = cfg.get_int("threads", 1);
    if (t < 1) throw netform::model_error("threads must be >= 1");
    return static_cast<int>(t);
}

fs::path prepare_out_dir(const netform::RunConfig& cfg) {
    const std::string out = cfg.require_str("out");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw netform::io_error("cannot create output directory '" + out + "': " + ec.message());
    return fs::path(out);
}

netform::FirmTable load_firms_cfg(const netform::RunConfig& cfg) {
    return netform::load_firms(cfg.require_str("firms"));
}

netform::Network load_edges_cfg(const netform::RunConfig& cfg, const netform::FirmTable& firms) {
    if (cfg.has("edges")) return netform::load_edges(cfg.get_str("edges"), firms);
    return netform::Network(firms.size());
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw netform::io_error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw netform::io_error("cannot parse JSON in " + path + ": " + e.what());
    }
}

// theta comes either inline (theta = a0,a1,a2,a3,a4,beta,gamma) or from a
// posterior/estimate summary file.
netform::ParamVector resolve_theta(const netform::RunConfig& cfg) {
    if (cfg.has("theta")) {
        const auto v = cfg.get_double_list("theta");
        if (v.size() != 7)
            throw netform::model_error("invalid theta vector length: expected 7 values, got " +
                                       netform::fmt_int(static_cast<long long>(v.size())));
        std::array<double, 7> a{};
        std::copy(v.begin(), v.end(), a.begin());
        return netform::ParamVector::from_array(a);
    }
    if (cfg.has("summary")) {
        const json j = read_json_file(cfg.get_str("summary"));
        if (!j.contains("params")) throw netform::io_error("summary file has no 'params' object");
        std::array<double, 7> a{};
        for (int k = 0; k < 7; ++k) {
            const auto& p = j["params"];
            const char* name = netform::param_names()[k];
            if (!p.contains(name)) throw netform::io_error(std::string("summary file missing parameter ") + name);
            const auto& entry = p[name];
            if (entry.contains("mean"))
                a[k] = entry["mean"].get<double>();
            else if (entry.contains("estimate"))
                a[k] = entry["estimate"].get<double>();
            else
                throw netform::io_error(std::string("summary entry for ") + name + " has neither mean nor estimate");
        }
        return netform::ParamVector::from_array(a);
    }
    throw netform::io_error("theta required: pass --theta or --summary");
}

std::array<double, 7> spread_list(const std::vector<double>& v, double fallback, const char* what) {
    std::array<double, 7> a;
    a.fill(fallback);
    if (v.empty()) return a;
    if (v.size() == 1) {
        a.fill(v[0]);
        return a;
    }
    if (v.size() != 7) throw netform::model_error(std::string(what) + ": expected 1 or 7 values");
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

void write_text_file(const fs::path& path, const std::string& content) {
    auto out = netform::open_output(path.string());
    out << content;
}

void write_json_file(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto g0 = load_edges_cfg(cfg, firms);
    const auto theta = resolve_theta(cfg);
    const std::uint64_t seed = require_seed(cfg);
    const long long steps = cfg.get_int("steps", netform::default_steps(firms.size()));
    const long long stride = cfg.get_int("trace_stride", std::max<long long>(1, steps / 1000));

    netform::Rng rng = netform::derive_stream(seed, "simulate/chain", 0);
    const auto trace =
        netform::simulate(g0, firms, theta, steps, netform::MeetingProcess::uniform(), rng, stride);

    {
        auto f = netform::open_output((out / "trace.csv").string());
        trace.write_csv(f);
    }
    netform::save_edges(trace.final_network, firms, (out / "final_edges.csv").string());
    std::cout << "simulate: " << steps << " steps, final edges=" << trace.final_network.edge_count() << "\n";
    return 0;
}

netform::ExchangeConfig exchange_config_from(const netform::RunConfig& cfg, int n) {
    netform::ExchangeConfig xc;
    xc.param_draws = cfg.get_int("S", xc.param_draws);
    xc.burn_in = cfg.get_int("burn_in", xc.burn_in);
    xc.aux_steps = cfg.get_int("R", netform::default_steps(n));
    xc.chains = static_cast<int>(cfg.get_int("chains", xc.chains));
    xc.swap_prob = cfg.get_double("swap_prob", xc.swap_prob);
    xc.target_accept = cfg.get_double("target_accept", xc.target_accept);
    xc.adapt = cfg.get_bool("adapt", xc.adapt);
    xc.aux_start_at_observed = cfg.get_str("aux_start", "observed") != "empty";
    xc.proposal_sd = spread_list(cfg.get_double_list("proposal_sd"), 0.0, "proposal_sd");
    if (cfg.has("theta0")) {
        const auto v = cfg.get_double_list("theta0");
        if (v.size() != 7) throw netform::model_error("theta0: expected 7 values");
        std::array<double, 7> a{};
        std::copy(v.begin(), v.end(), a.begin());
        xc.theta0 = netform::ParamVector::from_array(a);
    }
    if (cfg.has("free")) {
        const auto v = cfg.get_double_list("free");
        if (v.size() != 7) throw netform::model_error("free: expected 7 comma-separated 0/1 values");
        for (int k = 0; k < 7; ++k) xc.free_mask[k] = v[static_cast<std::size_t>(k)] != 0;
    }
    return xc;
}

int cmd_mple(const CommonArgs& args);

int cmd_estimate(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    if (cfg.get_bool("mple", false)) return cmd_mple(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto g_obs = load_edges_cfg(cfg, firms);

    netform::Prior prior;
    prior.mean = spread_list(cfg.get_double_list("prior_mean"), 0.0, "prior_mean");
    prior.sd = spread_list(cfg.get_double_list("prior_sd"), 10.0, "prior_sd");

    netform::ExchangeConfig xc = exchange_config_from(cfg, firms.size());
    xc.seed = require_seed(cfg);
    xc.threads = get_threads(cfg);

    const netform::PosteriorSample sample = netform::exchange_sample(g_obs, firms, prior, xc);

    {
        auto f = netform::open_output((out / "draws.csv").string());
        sample.write_draws_csv(f);
    }
    json summary = sample.summary_json();
    if (sample.chains >= 2 && sample.kept_per_chain >= 100)
        summary["diagnostics"] = netform::diagnostics(sample).to_json();
    write_json_file(out / "summary.json", summary);
    std::cout << "estimate: " << sample.total_draws() << " retained draws, acceptance rate "
              << netform::fmt_double(sample.acceptance_rate) << "\n";
    return 0;
}

int cmd_mple(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto g = load_edges_cfg(cfg, firms);
    const bool network_terms = cfg.get_bool("network_terms", true);

    const netform::MpleResult res = netform::mple(g, firms, network_terms);

    json params;
    for (int k = 0; k < 7; ++k) {
        const char* name = netform::param_names()[k];
        params[name] = {{"estimate", res.estimate.as_array()[k]}, {"se", res.se[k]},
                        {"fitted", res.fitted[k]}};
    }
    const json summary = {{"params", params},
                          {"loglik", res.loglik},
                          {"iterations", res.iterations},
                          {"se_note", netform::MpleResult::se_note}};
    write_json_file(out / "summary.json", summary);
    std::cout << "mple: converged in " << res.iterations << " iterations, loglik "
              << netform::fmt_double(res.loglik) << "\n";
    return 0;
}

int cmd_gof(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto g_obs = load_edges_cfg(cfg, firms);
    const auto sample = netform::PosteriorSample::read_draws_csv(cfg.require_str("draws"));
    const std::uint64_t seed = require_seed(cfg);
    const long long m = cfg.get_int("m", 1000);
    const long long steps = cfg.get_int("R", netform::default_steps(firms.size()));
    const double swap_prob = cfg.get_double("swap_prob", 0.001);

    const netform::GofBands bands =
        netform::gof_run(g_obs, firms, sample, m, steps, seed, swap_prob, get_threads(cfg));

    for (const netform::BandFamily* f : {&bands.degree, &bands.geodesic, &bands.esp}) {
        auto fh = netform::open_output((out / ("gof_" + f->name + ".csv")).string());
        f->write_csv(fh);
    }
    write_json_file(out / "summary.json", bands.summary_json());
    std::cout << "gof: m=" << m << " good_fit=" << (bands.good_fit ? "yes" : "no") << "\n";
    return 0;
}

int cmd_counterfactual(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto g_obs = load_edges_cfg(cfg, firms);
    const auto sample = netform::PosteriorSample::read_draws_csv(cfg.require_str("draws"));
    const std::uint64_t seed = require_seed(cfg);

    netform::Scenario sc = netform::Scenario::parse_kind(cfg.require_str("kind"));
    sc.entry_count = cfg.get_int("entry_count", 0);
    sc.entry_state = cfg.get_str("entry_state");
    sc.entry_type = cfg.get_str("entry_type");
    sc.min_capital_q = cfg.get_double("min_capital_q", 0.25);

    netform::Rng entry_rng = netform::derive_stream(seed, "counterfactual/entry", 0);
    auto [firms2, g0] = netform::apply_scenario(firms, g_obs, sc, entry_rng);

    const netform::NetworkSummary baseline = netform::summarize(g_obs, firms);
    const long long m = cfg.get_int("m", 1000);
    const long long steps = cfg.get_int("R", netform::default_steps(firms2.size()));
    const double swap_prob = cfg.get_double("swap_prob", 0.001);

    const netform::CounterfactualResult result = netform::run_counterfactual(
        firms2, g0, sample, m, steps, seed, baseline, swap_prob, get_threads(cfg));

    netform::save_firms(firms2, (out / "cf_firms.csv").string());
    netform::save_edges(g0, firms2, (out / "cf_edges.csv").string());

    auto metric_csv = [&](const std::string& name, auto getter) {
        auto fh = netform::open_output((out / ("cf_" + name + ".csv")).string());
        fh << "sim,value\n";
        for (std::size_t k = 0; k < result.sims.size(); ++k)
            fh << k << ',' << netform::fmt_double(getter(result.sims[k])) << '\n';
    };
    metric_csv("density", [](const netform::NetworkSummary& s) { return s.density; });
    metric_csv("clustering", [](const netform::NetworkSummary& s) { return s.clustering; });
    metric_csv("homophily_type", [](const netform::NetworkSummary& s) { return s.homophily_type; });
    metric_csv("homophily_state", [](const netform::NetworkSummary& s) { return s.homophily_state; });
    metric_csv("mean_degree", [](const netform::NetworkSummary& s) { return s.degree_mean; });
    metric_csv("isolates", [](const netform::NetworkSummary& s) { return static_cast<double>(s.isolates); });
    {
        auto fh = netform::open_output((out / "cf_degree_curve.csv").string());
        fh << "rank,observed,mean,q025,q975\n";
        for (std::size_t r = 0; r < result.degree_curve_mean.size(); ++r) {
            fh << (r + 1) << ',';
            if (r < baseline.degree_sorted_desc.size()) fh << baseline.degree_sorted_desc[r];
            fh << ',' << netform::fmt_double(result.degree_curve_mean[r]) << ','
               << netform::fmt_double(result.degree_curve_q025[r]) << ','
               << netform::fmt_double(result.degree_curve_q975[r]) << '\n';
        }
    }
    write_json_file(out / "summary.json", result.summary_json());
    std::cout << "counterfactual: n " << firms.size() << " -> " << firms2.size() << ", m=" << m << "\n";
    return 0;
}

int cmd_stable(const CommonArgs& args) {
    const auto cfg = merged_config(args);
    const auto out = prepare_out_dir(cfg);
    const auto firms = load_firms_cfg(cfg);
    const auto theta = resolve_theta(cfg);

    const auto masks = netform::find_stable_masks(firms, theta);
    std::string text;
    text += "n=" + netform::fmt_int(firms.size()) + "\n";
    text += "theta=";
    const auto a = theta.as_array();
    for (int k = 0; k < 7; ++k) text += (k ? "," : "") + netform::fmt_double(a[k]);
    text += "\nstable_count=" + netform::fmt_int(static_cast<long long>(masks.size())) + "\n";
    for (std::size_t s = 0; s < masks.size(); ++s) {
        const netform::Network g = netform::Network::from_mask(firms.size(), masks[s]);
        text += "network " + netform::fmt_int(static_cast<long long>(s)) +
                ": edges=" + netform::fmt_int(g.edge_count()) + " {";
        bool first = true;
        for (int i = 0; i < g.size(); ++i)
            for (int j : g.neighbors(i))
                if (j > i) {
                    if (!first) text += ", ";
                    text += firms.firm(i).id + "-" + firms.firm(j).id;
                    first = false;
                }
        text += "}\n";
    }
    write_text_file(out / "stable.txt", text);
    std::cout << "stable: " << masks.size() << " pairwise stable networks\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strategic inter-organizational network formation: simulation, estimation, fit, counterfactuals"};
    app.require_subcommand(1);

    CommonArgs args[6];
    const char* names[6] = {"simulate", "estimate", "mple", "gof", "counterfactual", "stable"};
    const char* descs[6] = {"simulate the link-formation game and trace statistics",
                            "exchange-algorithm posterior for the payoff parameters",
                            "maximum pseudolikelihood estimates",
                            "posterior-predictive goodness-of-fit bands",
                            "policy scenario: transform population and re-simulate equilibria",
                            "enumerate pairwise stable networks (n <= 6)"};
    CLI::App* cmds[6];
    for (int c = 0; c < 6; ++c) {
        cmds[c] = app.add_subcommand(names[c], descs[c]);
        cmds[c]->add_option("--config", args[c].config_path, "flat key=value config file");
        for (const char* key : {"firms", "edges", "out", "seed", "threads"})
            add_override_option(cmds[c], args[c], key, "");
    }
    for (const char* key : {"theta", "summary", "steps", "trace_stride"}) add_override_option(cmds[0], args[0], key, "");
    for (const char* key : {"S", "burn_in", "R", "chains", "proposal_sd", "prior_mean", "prior_sd", "swap_prob",
                            "theta0", "free", "target_accept", "adapt", "aux_start", "mple"})
        add_override_option(cmds[1], args[1], key, "");
    add_override_option(cmds[2], args[2], "network_terms", "include popularity/common-partner terms (default 1)");
    for (const char* key : {"draws", "m", "R", "swap_prob"}) add_override_option(cmds[3], args[3], key, "");
    for (const char* key : {"draws", "m", "R", "swap_prob", "kind", "entry_count", "entry_state", "entry_type",
                            "min_capital_q"})
        add_override_option(cmds[4], args[4], key, "");
    for (const char* key : {"theta", "summary"}) add_override_option(cmds[5], args[5], key, "");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmds[0]->parsed()) return cmd_simulate(args[0]);
        if (cmds[1]->parsed()) return cmd_estimate(args[1]);
        if (cmds[2]->parsed()) return cmd_mple(args[2]);
        if (cmds[3]->parsed()) return cmd_gof(args[3]);
        if (cmds[4]->parsed()) return cmd_counterfactual(args[4]);
        if (cmds[5]->parsed()) return cmd_stable(args[5]);
    } catch (const netform::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const netform::model_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
