#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "netform/gof.hpp"
#include "netform/inference.hpp"

namespace netform {

// Policy scenario over the firm population: market entry of new firms, or a
// minimum-capital rule removing the lower tail of the capital distribution.
struct Scenario {
    enum class Kind { entry, min_capital };
    Kind kind = Kind::entry;
    long long entry_count = 0;
    std::string entry_state;
    std::string entry_type;
    double min_capital_q = 0.25;

    static Scenario parse_kind(const std::string& kind_name) {
        Scenario s;
        if (kind_name == "entry")
            s.kind = Kind::entry;
        else if (kind_name == "min_capital")
            s.kind = Kind::min_capital;
        else
            throw model_error("unknown scenario kind: '" + kind_name + "'");
        return s;
    }

    void validate() const {
        if (kind == Kind::entry) {
            if (entry_count < 0) throw model_error("entry_count must be >= 0");
            if (entry_count > 0 && firm_type_code(entry_type) < 0)
                throw model_error("unknown firm_type for entrants: '" + entry_type + "'");
            if (entry_count > 0 && entry_state.empty()) throw model_error("entry_state must be set");
        } else {
            if (!(min_capital_q > 0.0 && min_capital_q < 1.0))
                throw model_error("min_capital_q must lie strictly inside (0, 1)");
        }
    }
};

// Structural summary of one network; the comparison unit of counterfactual
// runs.
struct NetworkSummary {
    long long n = 0;
    long long edges = 0;
    long long isolates = 0;
    double density = 0;
    double clustering = 0;  // triangles / C(n,3)
    double homophily_type = 0;
    double homophily_state = 0;
    double degree_mean = 0;
    bool zero_edges = false;  // homophily shares reported as 0 in that case
    std::vector<int> degree_sorted_desc;

    nlohmann::json to_json() const {
        return {{"n", n},
                {"edges", edges},
                {"isolates", isolates},
                {"density", density},
                {"clustering", clustering},
                {"homophily_type", homophily_type},
                {"homophily_state", homophily_state},
                {"degree_mean", degree_mean},
                {"zero_edges", zero_edges}};
    }
};

inline NetworkSummary summarize(const Network& g, const FirmTable& x) {
    if (g.size() != x.size()) throw model_error("summarize: network/firm-table size mismatch");
    const long long n = g.size();
    if (n < 3) throw model_error("summarize: need at least 3 firms (clustering undefined below n=3)");
    NetworkSummary s;
    s.n = n;
    const StatVector stats = suff_stats(g, x);
    s.edges = static_cast<long long>(stats.edges);
    s.density = stats.edges / (static_cast<double>(n) * (n - 1) / 2.0);
    s.clustering = stats.triangles / (static_cast<double>(n) * (n - 1) * (n - 2) / 6.0);
    s.zero_edges = s.edges == 0;
    s.homophily_type = s.zero_edges ? 0.0 : stats.sametype / stats.edges;
    s.homophily_state = s.zero_edges ? 0.0 : stats.samestate / stats.edges;
    s.degree_mean = 2.0 * stats.edges / static_cast<double>(n);
    s.degree_sorted_desc.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < g.size(); ++i) {
        s.degree_sorted_desc.push_back(g.degree(i));
        if (g.degree(i) == 0) ++s.isolates;
    }
    std::sort(s.degree_sorted_desc.begin(), s.degree_sorted_desc.end(), std::greater<int>());
    return s;
}

// Transforms the population and the starting network. Entry appends firms
// with generated attributes and no links; min_capital keeps the subgraph on
// firms at or above the empirical capital quantile (nearest rank).
inline std::pair<FirmTable, Network> apply_scenario(const FirmTable& x, const Network& g_obs, const Scenario& sc,
                                                    Rng& rng) {
    if (x.size() != g_obs.size()) throw model_error("apply_scenario: network/firm-table size mismatch");
    sc.validate();
    if (sc.kind == Scenario::Kind::entry) {
        FirmTable x2 = x;
        if (sc.entry_count == 0) return {std::move(x2), g_obs};
        double mu = 0, s2 = 0;
        for (int i = 0; i < x.size(); ++i) mu += x.firm(i).log_capital;
        mu /= x.size();
        for (int i = 0; i < x.size(); ++i) {
            const double d = x.firm(i).log_capital - mu;
            s2 += d * d;
        }
        const double sigma = x.size() > 1 ? std::sqrt(s2 / (x.size() - 1)) : 0.0;
        const int type_code = firm_type_code(sc.entry_type);
        const int state_code = x2.intern_state(sc.entry_state);
        for (long long e = 0; e < sc.entry_count; ++e) {
            Firm f;
            // id unique against the incumbent table
            for (long long suffix = e;; ++suffix) {
                f.id = "entrant_" + fmt_int(suffix);
                if (x2.index_of(f.id) < 0) break;
            }
            f.type = type_code;
            f.state = state_code;
            f.log_capital = rng.normal(mu, sigma);
            // ages resampled from the incumbent empirical distribution
            f.age = x.firm(static_cast<int>(rng.below(static_cast<std::uint64_t>(x.size())))).age;
            x2.append(std::move(f));
        }
        Network g2(x2.size());
        for (int i = 0; i < g_obs.size(); ++i)
            for (int j : g_obs.neighbors(i))
                if (j > i) g2.set_edge(i, j, true);
        return {std::move(x2), std::move(g2)};
    }

    // min_capital: nearest-rank quantile; firms at the threshold survive
    std::vector<double> caps;
    caps.reserve(static_cast<std::size_t>(x.size()));
    for (int i = 0; i < x.size(); ++i) caps.push_back(x.firm(i).log_capital);
    std::sort(caps.begin(), caps.end());
    std::size_t rank = static_cast<std::size_t>(std::ceil(sc.min_capital_q * static_cast<double>(caps.size())));
    rank = std::clamp<std::size_t>(rank, 1, caps.size());
    const double threshold = caps[rank - 1];

    std::vector<int> keep;
    for (int i = 0; i < x.size(); ++i)
        if (x.firm(i).log_capital >= threshold) keep.push_back(i);
    if (keep.size() < 3)
        throw model_error("min_capital removal leaves fewer than 3 firms (" + fmt_int(static_cast<long long>(keep.size())) + ")");

    FirmTable x2;
    std::vector<int> remap(static_cast<std::size_t>(x.size()), -1);
    for (std::size_t new_i = 0; new_i < keep.size(); ++new_i) {
        const Firm& f = x.firm(keep[new_i]);
        Firm g;
        g.id = f.id;
        g.type = f.type;
        g.state = x2.intern_state(x.state_name(f.state));
        g.log_capital = f.log_capital;
        g.age = f.age;
        x2.append(std::move(g));
        remap[static_cast<std::size_t>(keep[new_i])] = static_cast<int>(new_i);
    }
    Network g2(x2.size());
    for (int i = 0; i < g_obs.size(); ++i) {
        if (remap[static_cast<std::size_t>(i)] < 0) continue;
        for (int j : g_obs.neighbors(i)) {
            if (j > i && remap[static_cast<std::size_t>(j)] >= 0)
                g2.set_edge(remap[static_cast<std::size_t>(i)], remap[static_cast<std::size_t>(j)], true);
        }
    }
    return {std::move(x2), std::move(g2)};
}

struct CounterfactualResult {
    NetworkSummary baseline;      // observed network before the policy
    std::vector<NetworkSummary> sims;
    std::vector<double> degree_curve_mean, degree_curve_q025, degree_curve_q975;

    nlohmann::json summary_json() const {
        nlohmann::json j;
        j["baseline"] = baseline.to_json();
        auto metric = [&](const char* name, auto getter) {
            std::vector<double> v;
            v.reserve(sims.size());
            for (const auto& s : sims) v.push_back(getter(s));
            std::sort(v.begin(), v.end());
            double mean = 0;
            for (double w : v) mean += w;
            mean /= v.empty() ? 1.0 : static_cast<double>(v.size());
            j["simulated"][name] = {{"mean", mean},
                                    {"q2.5", detail::quantile_nearest_rank(v, 0.025)},
                                    {"q50", detail::quantile_nearest_rank(v, 0.50)},
                                    {"q97.5", detail::quantile_nearest_rank(v, 0.975)}};
        };
        metric("density", [](const NetworkSummary& s) { return s.density; });
        metric("clustering", [](const NetworkSummary& s) { return s.clustering; });
        metric("homophily_type", [](const NetworkSummary& s) { return s.homophily_type; });
        metric("homophily_state", [](const NetworkSummary& s) { return s.homophily_state; });
        metric("mean_degree", [](const NetworkSummary& s) { return s.degree_mean; });
        metric("isolates", [](const NetworkSummary& s) { return static_cast<double>(s.isolates); });
        j["m"] = static_cast<long long>(sims.size());
        return j;
    }
};

// Re-simulates equilibrium networks for m posterior draws under the
// transformed population, starting each chain at the transformed network.
inline CounterfactualResult run_counterfactual(const FirmTable& x2, const Network& g0,
                                               const PosteriorSample& sample, long long m, long long aux_steps,
                                               std::uint64_t seed, const NetworkSummary& baseline,
                                               double swap_prob = 0.001, int threads = 1) {
    if (m < 1) throw model_error("run_counterfactual: need m >= 1");
    if (m > sample.total_draws())
        throw model_error("run_counterfactual: m exceeds available posterior draws (" + fmt_int(m) + " > " +
                          fmt_int(sample.total_draws()) + ")");
    const long long steps = aux_steps > 0 ? aux_steps : default_steps(x2.size());

    Rng pick_rng = derive_stream(seed, "counterfactual/subsample", 0);
    const std::vector<long long> rows = detail::sample_without_replacement(sample.total_draws(), m, pick_rng);
    const PairTotals totals = PairTotals::compute(x2);

    CounterfactualResult result;
    result.baseline = baseline;
    result.sims.assign(static_cast<std::size_t>(m), {});

    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t k) {
        Rng rng = derive_stream(seed, "counterfactual/sim", k);
        const ParamVector theta = ParamVector::from_array(sample.draw(rows[k]));
        Network g = g0;
        RunningStats stats;
        stats.reset(g, x2);
        for (long long r = 0; r < steps; ++r) mh_step(g, x2, theta, swap_prob, stats, totals, rng);
        result.sims[k] = summarize(g, x2);
    });

    const std::size_t ranks = static_cast<std::size_t>(x2.size());
    std::vector<double> cell(result.sims.size());
    for (std::size_t r = 0; r < ranks; ++r) {
        for (std::size_t s = 0; s < result.sims.size(); ++s)
            cell[s] = static_cast<double>(result.sims[s].degree_sorted_desc[r]);
        double mean = 0;
        for (double v : cell) mean += v;
        result.degree_curve_mean.push_back(mean / static_cast<double>(cell.size()));
        std::vector<double> sorted = cell;
        std::sort(sorted.begin(), sorted.end());
        result.degree_curve_q025.push_back(detail::quantile_nearest_rank(sorted, 0.025));
        result.degree_curve_q975.push_back(detail::quantile_nearest_rank(sorted, 0.975));
    }
    return result;
}

}  // namespace netform
