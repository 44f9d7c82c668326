#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "netform/rng.hpp"
#include "netform/stats.hpp"

namespace netform {

// Dyad-selection law for the link-updating game. Uniform is the shipped
// default; a strictly positive weight per dyad is accepted for experiments
// (the stationary distribution does not depend on the choice).
class MeetingProcess {
  public:
    static MeetingProcess uniform() { return MeetingProcess{}; }

    static MeetingProcess weighted(std::vector<double> dyad_weights) {
        MeetingProcess m;
        double total = 0;
        for (double w : dyad_weights) {
            if (!(w > 0)) throw model_error("meeting process weights must be strictly positive");
            total += w;
        }
        m.cum_.resize(dyad_weights.size());
        double acc = 0;
        for (std::size_t k = 0; k < dyad_weights.size(); ++k) {
            acc += dyad_weights[k] / total;
            m.cum_[k] = acc;
        }
        m.cum_.back() = 1.0;
        return m;
    }

    bool is_uniform() const { return cum_.empty(); }

    std::size_t sample_dyad(const Network& g, Rng& rng) const {
        if (cum_.empty()) return rng.below(g.dyad_count());
        if (cum_.size() != g.dyad_count()) throw model_error("meeting process sized for a different network");
        const double u = rng.uniform01();
        return static_cast<std::size_t>(std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
    }

    double probability(const Network& g, std::size_t dyad) const {
        if (cum_.empty()) return 1.0 / static_cast<double>(g.dyad_count());
        return cum_[dyad] - (dyad == 0 ? 0.0 : cum_[dyad - 1]);
    }

  private:
    std::vector<double> cum_;
};

// One period of the link-updating game: a dyad meets and resamples its link
// from the conditional law. Stats are kept incrementally.
inline void game_step(Network& g, const FirmTable& x, const ParamVector& theta, const MeetingProcess& meeting,
                      RunningStats& stats, Rng& rng) {
    const auto [i, j] = g.dyad(meeting.sample_dyad(g, rng));
    const bool want = rng.uniform01() < link_probability(g, x, theta, i, j);
    const bool have = g.has_edge(i, j);
    if (want != have) {
        stats.apply_toggle(g, x, i, j, want);
        g.toggle(i, j);
    }
}

// Metropolis-Hastings kernel with the same stationary law: toggles one
// uniform dyad, or with probability swap_prob proposes the complement
// network. Both proposals are symmetric. Returns true when accepted.
inline bool mh_step(Network& g, const FirmTable& x, const ParamVector& theta, double swap_prob,
                    RunningStats& stats, const PairTotals& totals, Rng& rng) {
    if (!(swap_prob >= 0.0 && swap_prob < 1.0)) throw model_error("swap_prob must lie in [0, 1)");
    if (swap_prob > 0.0 && rng.uniform01() < swap_prob) {
        const StatVector comp = complement_stats(g, stats.s, totals);
        const double dq = potential(comp, theta) - potential(stats.s, theta);
        if (std::log(rng.uniform_oc()) < dq) {
            g.complement();
            stats.s = comp;
            return true;
        }
        return false;
    }
    const auto [i, j] = g.dyad(rng.below(g.dyad_count()));
    const bool adding = !g.has_edge(i, j);
    const double dq = (adding ? 1.0 : -1.0) * joint_surplus(g, x, theta, i, j);
    if (std::log(rng.uniform_oc()) < dq) {
        stats.apply_toggle(g, x, i, j, adding);
        g.toggle(i, j);
        return true;
    }
    return false;
}

// Rule-of-thumb chain length for approximate stationarity.
inline long long default_steps(int n) {
    if (n < 2) return 1;
    return static_cast<long long>(std::ceil(static_cast<double>(n) * n * std::log(static_cast<double>(n))));
}

// Statistic snapshots along a simulated chain, plus the final network.
struct ChainTrace {
    long long stride = 1;
    std::vector<long long> steps;
    std::vector<StatVector> stats;
    Network final_network;

    void write_csv(std::ostream& out) const {
        out << "step,E,sametype,capdiff,agediff,samestate,twostars,triangles\n";
        for (std::size_t r = 0; r < steps.size(); ++r) {
            const StatVector& s = stats[r];
            out << steps[r] << ',' << fmt_double(s.edges) << ',' << fmt_double(s.sametype) << ','
                << fmt_double(s.capdiff) << ',' << fmt_double(s.agediff) << ',' << fmt_double(s.samestate) << ','
                << fmt_double(s.twostars) << ',' << fmt_double(s.triangles) << '\n';
        }
    }
};

inline ChainTrace simulate(const Network& g0, const FirmTable& x, const ParamVector& theta, long long steps,
                           const MeetingProcess& meeting, Rng& rng, long long stride = 1) {
    if (steps < 1) throw model_error("simulate: steps must be >= 1");
    if (stride < 1) throw model_error("simulate: stride must be >= 1");
    ChainTrace trace;
    trace.stride = stride;
    Network g = g0;
    RunningStats stats;
    stats.reset(g, x);
    trace.steps.push_back(0);
    trace.stats.push_back(stats.s);
    for (long long t = 1; t <= steps; ++t) {
        game_step(g, x, theta, meeting, stats, rng);
        if (t % stride == 0) {
            trace.steps.push_back(t);
            trace.stats.push_back(stats.s);
        }
    }
    trace.final_network = std::move(g);
    return trace;
}

// A network is pairwise stable (with transfers) when no single-link change
// raises the potential; indifferent deviations do not destabilize.
inline bool is_pairwise_stable(const Network& g, const FirmTable& x, const ParamVector& theta) {
    for (int i = 0; i < g.size(); ++i) {
        for (int j = i + 1; j < g.size(); ++j) {
            const double surplus = joint_surplus(g, x, theta, i, j);
            if (g.has_edge(i, j) ? (surplus < 0) : (surplus > 0)) return false;
        }
    }
    return true;
}

constexpr int kEnumerationLimit = 6;

inline void check_enumeration_size(int n, const char* what) {
    if (n > kEnumerationLimit) throw model_error(std::string(what) + ": exhaustive enumeration limited to n <= 6");
    if (n < 2) throw model_error(std::string(what) + ": need at least 2 nodes");
}

// Stationary distribution over all graphs by explicit enumeration of the
// normalizing constant.
struct ExactDistribution {
    int n = 0;
    std::vector<double> prob;       // indexed by dyad bitmask
    std::vector<double> potential;  // Q per graph

    double total_variation(const std::vector<double>& empirical) const {
        double acc = 0;
        for (std::size_t m = 0; m < prob.size(); ++m) acc += std::abs(prob[m] - empirical[m]);
        return acc / 2.0;
    }
};

inline ExactDistribution exact_distribution(const FirmTable& x, const ParamVector& theta) {
    check_enumeration_size(x.size(), "exact_distribution");
    const int n = x.size();
    const std::size_t count = std::size_t{1} << (n * (n - 1) / 2);
    ExactDistribution dist;
    dist.n = n;
    dist.potential.resize(count);
    dist.prob.resize(count);
    double qmax = -HUGE_VAL;
    for (std::size_t m = 0; m < count; ++m) {
        const Network g = Network::from_mask(n, m);
        dist.potential[m] = potential(suff_stats(g, x), theta);
        qmax = std::max(qmax, dist.potential[m]);
    }
    double z = 0;
    for (std::size_t m = 0; m < count; ++m) {
        dist.prob[m] = std::exp(dist.potential[m] - qmax);
        z += dist.prob[m];
    }
    for (auto& p : dist.prob) p /= z;
    return dist;
}

inline std::vector<std::uint64_t> find_stable_masks(const FirmTable& x, const ParamVector& theta) {
    check_enumeration_size(x.size(), "find_stable");
    const int n = x.size();
    const std::uint64_t count = std::uint64_t{1} << (n * (n - 1) / 2);
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < count; ++m) {
        const Network g = Network::from_mask(n, m);
        if (is_pairwise_stable(g, x, theta)) out.push_back(m);
    }
    return out;
}

inline std::vector<Network> find_stable(const FirmTable& x, const ParamVector& theta) {
    std::vector<Network> out;
    for (std::uint64_t m : find_stable_masks(x, theta)) out.push_back(Network::from_mask(x.size(), m));
    return out;
}

}  // namespace netform
