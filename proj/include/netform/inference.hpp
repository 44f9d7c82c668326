#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netform/dynamics.hpp"
#include "netform/parallel.hpp"
#include "netform/rng.hpp"
#include "netform/stats.hpp"

namespace netform {

inline const std::array<const char*, 7>& param_names() {
    static const std::array<const char*, 7> names = {"alpha0", "alpha1", "alpha2", "alpha3",
                                                     "alpha4", "beta",   "gamma"};
    return names;
}

// Independent normal prior per parameter.
struct Prior {
    std::array<double, 7> mean{};
    std::array<double, 7> sd{10, 10, 10, 10, 10, 10, 10};

    double log_density(const std::array<double, 7>& theta) const {
        double acc = 0;
        for (int k = 0; k < 7; ++k) {
            if (!(sd[k] > 0)) throw model_error("prior standard deviations must be positive");
            const double z = (theta[k] - mean[k]) / sd[k];
            acc += -0.5 * z * z - std::log(sd[k]);
        }
        return acc;
    }
};

struct ExchangeConfig {
    long long param_draws = 50000;  // S, per chain
    long long burn_in = 5000;       // per chain
    long long aux_steps = 0;        // R; 0 selects the n^2 ln n rule
    std::array<double, 7> proposal_sd{};  // all-zero selects the automatic scale
    std::array<bool, 7> free_mask{true, true, true, true, true, true, true};
    std::optional<ParamVector> theta0;  // default: pseudolikelihood fit, else zeros
    int chains = 4;
    std::uint64_t seed = 0;
    int threads = 1;
    double swap_prob = 0.001;
    bool aux_start_at_observed = true;
    bool adapt = true;               // Robbins-Monro proposal scaling during burn-in
    double target_accept = 0.15;
    bool fix_aux_at_observed = false;  // replaces the auxiliary draw by the data; testing hook

    void validate() const {
        if (!(param_draws > burn_in && burn_in >= 0)) throw model_error("need param_draws > burn_in >= 0");
        if (chains < 1) throw model_error("need at least one chain");
        if (aux_steps < 0) throw model_error("aux_steps must be >= 0");
        for (int k = 0; k < 7; ++k)
            if (proposal_sd[k] < 0) throw model_error("proposal_sd must be >= 0");
    }
};

namespace detail {

// type-7 quantile (linear interpolation) on a sorted vector
inline double quantile_sorted(const std::vector<double>& v, double p) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (v.size() == 1) return v[0];
    const double h = p * (static_cast<double>(v.size()) - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = h - static_cast<double>(lo);
    return v[lo] * (1 - w) + v[hi] * w;
}

}  // namespace detail

// Matrix of retained posterior draws (chain-major) with recomputable
// summaries.
struct PosteriorSample {
    int chains = 0;
    long long kept_per_chain = 0;
    std::vector<std::array<double, 7>> draws;
    double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> acceptance_by_chain;
    bool low_acceptance = false;

    long long total_draws() const { return static_cast<long long>(draws.size()); }

    const std::array<double, 7>& draw(long long row) const { return draws[static_cast<std::size_t>(row)]; }

    double mean(int k) const {
        double acc = 0;
        for (const auto& d : draws) acc += d[k];
        return acc / static_cast<double>(draws.size());
    }

    double sd(int k) const {
        const double m = mean(k);
        double acc = 0;
        for (const auto& d : draws) acc += (d[k] - m) * (d[k] - m);
        return draws.size() > 1 ? std::sqrt(acc / static_cast<double>(draws.size() - 1)) : 0.0;
    }

    double quantile(int k, double p) const {
        std::vector<double> v;
        v.reserve(draws.size());
        for (const auto& d : draws) v.push_back(d[k]);
        std::sort(v.begin(), v.end());
        return detail::quantile_sorted(v, p);
    }

    // Monte Carlo standard error of the posterior mean via batch means,
    // batched within each chain.
    double mcse(int k) const {
        double var_of_overall = 0;
        for (int c = 0; c < chains; ++c) {
            const long long L = kept_per_chain;
            const long long B = std::max<long long>(2, static_cast<long long>(std::floor(std::sqrt(static_cast<double>(L)))));
            const long long m = L / B;
            if (m < 1) continue;
            std::vector<double> bm(static_cast<std::size_t>(B), 0.0);
            for (long long b = 0; b < B; ++b) {
                double acc = 0;
                for (long long t = 0; t < m; ++t) acc += draws[static_cast<std::size_t>(c * L + b * m + t)][k];
                bm[static_cast<std::size_t>(b)] = acc / static_cast<double>(m);
            }
            double mb = 0;
            for (double v : bm) mb += v;
            mb /= static_cast<double>(B);
            double s2 = 0;
            for (double v : bm) s2 += (v - mb) * (v - mb);
            s2 /= static_cast<double>(B - 1);
            var_of_overall += s2 / static_cast<double>(B);
        }
        return std::sqrt(var_of_overall) / static_cast<double>(chains);
    }

    // Standard error of a quantile estimate from the spread of per-batch
    // quantiles.
    double quantile_mcse(int k, double p) const {
        std::vector<double> batch_q;
        for (int c = 0; c < chains; ++c) {
            const long long L = kept_per_chain;
            const long long B = std::max<long long>(2, static_cast<long long>(std::floor(std::sqrt(static_cast<double>(L)))));
            const long long m = L / B;
            if (m < 2) continue;
            for (long long b = 0; b < B; ++b) {
                std::vector<double> v;
                v.reserve(static_cast<std::size_t>(m));
                for (long long t = 0; t < m; ++t) v.push_back(draws[static_cast<std::size_t>(c * L + b * m + t)][k]);
                std::sort(v.begin(), v.end());
                batch_q.push_back(detail::quantile_sorted(v, p));
            }
        }
        if (batch_q.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        double mq = 0;
        for (double v : batch_q) mq += v;
        mq /= static_cast<double>(batch_q.size());
        double s2 = 0;
        for (double v : batch_q) s2 += (v - mq) * (v - mq);
        s2 /= static_cast<double>(batch_q.size() - 1);
        return std::sqrt(s2 / static_cast<double>(batch_q.size()));
    }

    void write_draws_csv(std::ostream& out) const {
        out << "chain,iter,alpha0,alpha1,alpha2,alpha3,alpha4,beta,gamma\n";
        for (int c = 0; c < chains; ++c) {
            for (long long t = 0; t < kept_per_chain; ++t) {
                const auto& d = draws[static_cast<std::size_t>(c * kept_per_chain + t)];
                out << c << ',' << t;
                for (int k = 0; k < 7; ++k) out << ',' << fmt_double(d[k]);
                out << '\n';
            }
        }
    }

    static PosteriorSample read_draws_csv(const std::string& path) {
        CsvFile csv = read_csv(path);
        expect_header(csv, {"chain", "iter", "alpha0", "alpha1", "alpha2", "alpha3", "alpha4", "beta", "gamma"},
                      path);
        PosteriorSample s;
        int max_chain = -1;
        for (std::size_t r = 0; r < csv.rows.size(); ++r) {
            const auto& row = csv.rows[r];
            if (row.size() != 9) throw io_error(path + ": malformed draws row");
            const int c = static_cast<int>(parse_int(row[0], "chain"));
            max_chain = std::max(max_chain, c);
            std::array<double, 7> d{};
            for (int k = 0; k < 7; ++k) d[k] = parse_double(row[static_cast<std::size_t>(k + 2)], "draw");
            s.draws.push_back(d);
        }
        if (s.draws.empty()) throw io_error(path + ": no posterior draws");
        s.chains = max_chain + 1;
        if (s.draws.size() % static_cast<std::size_t>(s.chains) != 0)
            throw io_error(path + ": chains have unequal lengths");
        s.kept_per_chain = static_cast<long long>(s.draws.size()) / s.chains;
        return s;
    }

    // One object per parameter with the table columns: mean, sd, mcse and
    // the central 95% credible interval.
    nlohmann::json summary_json() const {
        nlohmann::json params;
        for (int k = 0; k < 7; ++k) {
            params[param_names()[k]] = {
                {"mean", mean(k)}, {"sd", sd(k)}, {"mcse", mcse(k)},
                {"q2.5", quantile(k, 0.025)}, {"q97.5", quantile(k, 0.975)},
            };
        }
        nlohmann::json j;
        j["params"] = params;
        if (std::isfinite(acceptance_rate)) j["acceptance_rate"] = acceptance_rate;
        return j;
    }
};

// ---------------------------------------------------------------------------
// Maximum pseudolikelihood

struct MpleResult {
    ParamVector estimate;
    std::array<double, 7> se{};
    double loglik = 0;
    int iterations = 0;
    std::array<bool, 7> fitted{};
    // Pseudolikelihood treats dyads as independent; the reported standard
    // errors are understated.
    static constexpr const char* se_note = "pseudolikelihood standard errors are understated";
};

namespace detail {

// Cholesky solve of A x = b for a small SPD matrix; returns false when a
// pivot collapses.
template <int P>
bool cholesky_factor(std::array<std::array<double, P>, P>& a) {
    for (int c = 0; c < P; ++c) {
        double d = a[c][c];
        for (int k = 0; k < c; ++k) d -= a[c][k] * a[c][k];
        if (!(d > 1e-12)) return false;
        a[c][c] = std::sqrt(d);
        for (int r = c + 1; r < P; ++r) {
            double v = a[r][c];
            for (int k = 0; k < c; ++k) v -= a[r][k] * a[c][k];
            a[r][c] = v / a[c][c];
        }
    }
    return true;
}

template <int P>
void cholesky_solve(const std::array<std::array<double, P>, P>& l, std::array<double, P>& b, int p) {
    for (int r = 0; r < p; ++r) {
        for (int k = 0; k < r; ++k) b[r] -= l[r][k] * b[k];
        b[r] /= l[r][r];
    }
    for (int r = p - 1; r >= 0; --r) {
        for (int k = r + 1; k < p; ++k) b[r] -= l[k][r] * b[k];
        b[r] /= l[r][r];
    }
}

// Covariates of the dyadic conditional logit: theta . v equals the joint
// surplus of the dyad.
inline std::array<double, 7> dyad_covariates(const Network& g, const FirmTable& x, int i, int j) {
    const int has = g.has_edge(i, j) ? 1 : 0;
    return {2.0,
            x.same_type(i, j) ? 2.0 : 0.0,
            2.0 * x.capdiff(i, j),
            2.0 * x.agediff(i, j),
            x.same_state(i, j) ? 2.0 : 0.0,
            static_cast<double>(g.degree(i) + g.degree(j) - 2 * has),
            4.0 * g.common_neighbors(i, j)};
}

}  // namespace detail

// Maximizes the product of conditional dyad probabilities: a logistic
// regression of the link indicator on change statistics, solved by
// Newton-Raphson. `fixed` supplies values for parameters outside the fit.
inline MpleResult mple(const Network& g, const FirmTable& x, bool include_network_terms = true,
                       const std::array<bool, 7>* mask = nullptr, const ParamVector* fixed = nullptr) {
    if (g.size() != x.size()) throw model_error("mple: network/firm-table size mismatch");
    const int n = g.size();
    if (n < 2) throw model_error("mple: need at least 2 nodes");

    std::array<bool, 7> free{};
    for (int k = 0; k < 7; ++k) {
        const bool in_model = include_network_terms || k < 5;
        free[k] = in_model && (mask == nullptr || (*mask)[k]);
    }
    std::array<double, 7> fixed_values{};
    if (fixed) fixed_values = fixed->as_array();

    std::vector<int> cols;
    for (int k = 0; k < 7; ++k)
        if (free[k]) cols.push_back(k);
    const int p = static_cast<int>(cols.size());
    if (p == 0) throw model_error("mple: no free parameters");

    const long long e = g.edge_count();
    const long long dyads = static_cast<long long>(g.dyad_count());
    if (e == 0 || e == dyads)
        throw model_error("mple: pseudolikelihood maximum does not exist (network is empty or complete)");

    // cache rows unless the dyad count is huge
    const bool cache = dyads <= 2'000'000;
    std::vector<std::array<double, 7>> vrows;
    std::vector<unsigned char> yrows;
    if (cache) {
        vrows.reserve(static_cast<std::size_t>(dyads));
        yrows.reserve(static_cast<std::size_t>(dyads));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                vrows.push_back(detail::dyad_covariates(g, x, i, j));
                yrows.push_back(g.has_edge(i, j) ? 1 : 0);
            }
    }

    std::array<double, 7> theta = fixed_values;
    for (int k : cols) theta[k] = 0;

    double loglik = -HUGE_VAL;
    int iter = 0;
    std::array<std::array<double, 7>, 7> hess{};
    for (iter = 1; iter <= 200; ++iter) {
        double ll = 0;
        std::array<double, 7> grad{};
        for (auto& row : hess) row.fill(0);
        auto accumulate = [&](const std::array<double, 7>& v, int y) {
            double eta = 0;
            for (int k = 0; k < 7; ++k) eta += theta[k] * v[k];
            const double pr = logistic(eta);
            ll += y ? std::log(std::max(pr, 1e-300)) : std::log(std::max(1 - pr, 1e-300));
            const double resid = y - pr;
            const double wt = pr * (1 - pr);
            for (int a = 0; a < p; ++a) {
                grad[a] += resid * v[cols[a]];
                for (int b = 0; b <= a; ++b) hess[a][b] += wt * v[cols[a]] * v[cols[b]];
            }
        };
        if (cache) {
            for (std::size_t r = 0; r < vrows.size(); ++r) accumulate(vrows[r], yrows[r]);
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) accumulate(detail::dyad_covariates(g, x, i, j), g.has_edge(i, j));
        }
        for (int a = 0; a < p; ++a)
            for (int b = a + 1; b < p; ++b) hess[a][b] = hess[b][a];

        if (std::abs(ll - loglik) < 1e-10 && iter > 1) {
            loglik = ll;
            break;
        }
        loglik = ll;

        auto lfac = hess;
        if (!detail::cholesky_factor<7>(lfac)) throw model_error("mple: singular information matrix");
        std::array<double, 7> step{};
        for (int a = 0; a < p; ++a) step[a] = grad[a];
        detail::cholesky_solve<7>(lfac, step, p);
        for (int a = 0; a < p; ++a) theta[cols[a]] += step[a];

        for (int a = 0; a < p; ++a)
            if (std::abs(theta[cols[a]]) > 50)
                throw model_error("mple: estimates diverging (perfect separation suspected)");
    }

    MpleResult res;
    res.estimate = ParamVector::from_array(theta);
    res.loglik = loglik;
    res.iterations = iter;
    res.fitted = free;

    // inverse observed information from the last Hessian
    auto lfac = hess;
    if (!detail::cholesky_factor<7>(lfac)) throw model_error("mple: singular information matrix");
    for (int a = 0; a < p; ++a) {
        std::array<double, 7> unit{};
        unit[a] = 1;
        detail::cholesky_solve<7>(lfac, unit, p);
        res.se[cols[a]] = std::sqrt(std::max(0.0, unit[a]));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Exchange algorithm

// Samples the parameter posterior without evaluating either normalizing
// constant: each proposal is scored by simulating an auxiliary network at
// the proposed parameters and comparing potentials at data and auxiliary
// networks.
inline PosteriorSample exchange_sample(const Network& g_obs, const FirmTable& x, const Prior& prior,
                                       const ExchangeConfig& cfg_in) {
    ExchangeConfig cfg = cfg_in;
    cfg.validate();
    if (g_obs.size() != x.size()) throw model_error("exchange_sample: network/firm-table size mismatch");
    const int n = g_obs.size();
    if (n < 2) throw model_error("exchange_sample: need at least 2 nodes");
    if (g_obs.edge_count() == 0 || g_obs.edge_count() == static_cast<long long>(g_obs.dyad_count()))
        std::cerr << "warning: observed network is empty or complete; the likelihood may have no interior optimum\n";

    const long long aux_steps = cfg.aux_steps > 0 ? cfg.aux_steps : default_steps(n);

    // starting point and proposal scale: pseudolikelihood unless given
    std::array<double, 7> theta_start{};
    if (cfg.theta0) theta_start = cfg.theta0->as_array();
    std::array<double, 7> prop_sd = cfg.proposal_sd;
    const bool need_theta0 = !cfg.theta0.has_value();
    bool need_sd = true;
    for (int k = 0; k < 7; ++k)
        if (prop_sd[k] > 0) need_sd = false;
    if (need_theta0 || need_sd) {
        try {
            const MpleResult m = mple(g_obs, x, true, &cfg.free_mask);
            if (need_theta0)
                for (int k = 0; k < 7; ++k) theta_start[k] = cfg.free_mask[k] ? m.estimate.as_array()[k] : 0.0;
            if (need_sd)
                for (int k = 0; k < 7; ++k) prop_sd[k] = std::clamp(m.se[k], 1e-4, 2.0);
        } catch (const model_error&) {
            if (need_sd) prop_sd.fill(0.1);
        }
    }
    for (int k = 0; k < 7; ++k)
        if (!(prop_sd[k] > 0)) prop_sd[k] = 0.1;

    const StatVector s_obs = suff_stats(g_obs, x);
    const std::array<double, 7> w_obs = canonical_stats(s_obs);
    const PairTotals totals = PairTotals::compute(x);

    const long long kept = cfg.param_draws - cfg.burn_in;
    PosteriorSample sample;
    sample.chains = cfg.chains;
    sample.kept_per_chain = kept;
    sample.draws.assign(static_cast<std::size_t>(cfg.chains) * static_cast<std::size_t>(kept), {});
    sample.acceptance_by_chain.assign(static_cast<std::size_t>(cfg.chains), 0.0);

    parallel_for(static_cast<std::size_t>(cfg.chains), cfg.threads, [&](std::size_t c) {
        Rng rng = derive_stream(cfg.seed, "exchange/chain", c);
        std::array<double, 7> theta = theta_start;
        double log_scale = 0;  // Robbins-Monro multiplier on the proposal scale
        long long accepted_post_burn = 0;
        Network g_aux;
        RunningStats aux_stats;
        for (long long s = 0; s < cfg.param_draws; ++s) {
            std::array<double, 7> prop = theta;
            for (int k = 0; k < 7; ++k)
                if (cfg.free_mask[k]) prop[k] += std::exp(log_scale) * prop_sd[k] * rng.normal();

            double log_alpha = prior.log_density(prop) - prior.log_density(theta);
            if (!cfg.fix_aux_at_observed) {
                if (cfg.aux_start_at_observed) {
                    g_aux = g_obs;
                    aux_stats.s = s_obs;
                } else {
                    g_aux = Network(n);
                    aux_stats.s = StatVector{};
                }
                const ParamVector theta_prop = ParamVector::from_array(prop);
                for (long long r = 0; r < aux_steps; ++r)
                    mh_step(g_aux, x, theta_prop, cfg.swap_prob, aux_stats, totals, rng);
                const std::array<double, 7> w_aux = canonical_stats(aux_stats.s);
                for (int k = 0; k < 7; ++k) log_alpha += (theta[k] - prop[k]) * (w_aux[k] - w_obs[k]);
            }
            if (std::isnan(log_alpha))
                throw model_error("exchange_sample: non-finite potential at iteration " + fmt_int(s) +
                                  " (parameter overflow)");

            const double accept_prob = std::min(1.0, std::exp(log_alpha));
            if (std::log(rng.uniform_oc()) < log_alpha) {
                theta = prop;
                if (s >= cfg.burn_in) ++accepted_post_burn;
            }
            if (cfg.adapt && s < cfg.burn_in)
                log_scale += (accept_prob - cfg.target_accept) / std::pow(static_cast<double>(s + 1), 0.6);
            if (s >= cfg.burn_in)
                sample.draws[c * static_cast<std::size_t>(kept) + static_cast<std::size_t>(s - cfg.burn_in)] =
                    theta;
        }
        sample.acceptance_by_chain[c] = static_cast<double>(accepted_post_burn) / static_cast<double>(kept);
    });

    double acc = 0;
    for (double a : sample.acceptance_by_chain) acc += a;
    sample.acceptance_rate = acc / static_cast<double>(cfg.chains);
    if (sample.acceptance_rate < 0.01) {
        sample.low_acceptance = true;
        std::cerr << "warning: exchange acceptance rate " << sample.acceptance_rate
                  << " after burn-in; consider retuning proposal_sd\n";
    }
    return sample;
}

// ---------------------------------------------------------------------------
// Chain diagnostics

struct DiagnosticsReport {
    std::array<double, 7> mcse{};
    std::array<double, 7> psrf{};
    std::array<double, 7> ess{};
    std::array<bool, 7> psrf_defined{};
    bool any_psrf_above_threshold = false;
    std::vector<std::string> flags;

    nlohmann::json to_json() const {
        nlohmann::json j;
        for (int k = 0; k < 7; ++k) {
            j["params"][param_names()[k]] = {
                {"mcse", mcse[k]},
                {"psrf", psrf_defined[k] ? nlohmann::json(psrf[k]) : nlohmann::json()},
                {"ess", ess[k]},
            };
        }
        j["any_psrf_above_1.1"] = any_psrf_above_threshold;
        j["flags"] = flags;
        return j;
    }
};

// Split-chain potential scale reduction, batch-means MCSE and initial
// positive sequence effective sample size.
inline DiagnosticsReport diagnostics(const PosteriorSample& sample) {
    if (sample.chains < 2) throw model_error("diagnostics: need at least 2 chains");
    if (sample.kept_per_chain < 100) throw model_error("diagnostics: need at least 100 post-burn-in draws per chain");

    DiagnosticsReport rep;
    const long long L = sample.kept_per_chain;
    const long long half = L / 2;

    for (int k = 0; k < 7; ++k) {
        rep.mcse[k] = sample.mcse(k);

        // split each chain into halves
        std::vector<std::vector<double>> seqs;
        for (int c = 0; c < sample.chains; ++c) {
            std::vector<double> a, b;
            for (long long t = 0; t < half; ++t)
                a.push_back(sample.draws[static_cast<std::size_t>(c * L + t)][k]);
            for (long long t = half; t < 2 * half; ++t)
                b.push_back(sample.draws[static_cast<std::size_t>(c * L + t)][k]);
            seqs.push_back(std::move(a));
            seqs.push_back(std::move(b));
        }
        const double m = static_cast<double>(seqs.size());
        const double len = static_cast<double>(half);
        std::vector<double> means, vars;
        for (const auto& s : seqs) {
            double mu = 0;
            for (double v : s) mu += v;
            mu /= len;
            double v2 = 0;
            for (double v : s) v2 += (v - mu) * (v - mu);
            v2 /= (len - 1);
            means.push_back(mu);
            vars.push_back(v2);
        }
        double grand = 0;
        for (double v : means) grand += v;
        grand /= m;
        double between = 0;
        for (double v : means) between += (v - grand) * (v - grand);
        between *= len / (m - 1);
        double within = 0;
        for (double v : vars) within += v;
        within /= m;
        if (within <= 0) {
            rep.psrf_defined[k] = false;
            rep.psrf[k] = std::numeric_limits<double>::quiet_NaN();
            rep.flags.push_back(std::string(param_names()[k]) + ": psrf undefined (zero within-chain variance)");
        } else {
            const double var_plus = (len - 1) / len * within + between / len;
            rep.psrf_defined[k] = true;
            rep.psrf[k] = std::sqrt(var_plus / within);
            if (rep.psrf[k] > 1.1) {
                rep.any_psrf_above_threshold = true;
                rep.flags.push_back(std::string(param_names()[k]) + ": psrf above 1.1");
            }
        }

        // effective sample size per chain via the initial positive sequence
        double ess_total = 0;
        for (int c = 0; c < sample.chains; ++c) {
            std::vector<double> v(static_cast<std::size_t>(L));
            for (long long t = 0; t < L; ++t) v[static_cast<std::size_t>(t)] = sample.draws[static_cast<std::size_t>(c * L + t)][k];
            double mu = 0;
            for (double w : v) mu += w;
            mu /= static_cast<double>(L);
            double c0 = 0;
            for (double w : v) c0 += (w - mu) * (w - mu);
            c0 /= static_cast<double>(L);
            if (c0 <= 0) continue;  // constant chain contributes nothing
            auto gamma_at = [&](long long lag) {
                double acc2 = 0;
                for (long long t = 0; t + lag < L; ++t)
                    acc2 += (v[static_cast<std::size_t>(t)] - mu) * (v[static_cast<std::size_t>(t + lag)] - mu);
                return acc2 / static_cast<double>(L);
            };
            double tau = 1.0;
            for (long long lag = 1; lag + 1 < L; lag += 2) {
                const double pair_sum = (gamma_at(lag) + gamma_at(lag + 1)) / c0;
                if (pair_sum <= 0) break;
                tau += 2.0 * pair_sum;
            }
            ess_total += static_cast<double>(L) / tau;
        }
        rep.ess[k] = ess_total;
    }
    return rep;
}

}  // namespace netform
