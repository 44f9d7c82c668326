#pragma once

#include <algorithm>
#include <deque>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netform/inference.hpp"

namespace netform {

// counts[k] = number of nodes with degree k
inline std::vector<long long> degree_distribution(const Network& g) {
    int maxdeg = 0;
    for (int i = 0; i < g.size(); ++i) maxdeg = std::max(maxdeg, g.degree(i));
    std::vector<long long> counts(static_cast<std::size_t>(maxdeg) + 1, 0);
    for (int i = 0; i < g.size(); ++i) ++counts[static_cast<std::size_t>(g.degree(i))];
    return counts;
}

struct GeodesicDistribution {
    std::vector<long long> counts;  // counts[d] = unordered pairs at distance d (index 0 unused)
    long long unreachable = 0;      // pairs split across components
};

inline GeodesicDistribution geodesic_distribution(const Network& g) {
    const int n = g.size();
    GeodesicDistribution out;
    out.counts.assign(2, 0);
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::deque<int> queue;
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(src)] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(v)) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (int j = src + 1; j < n; ++j) {
            const int d = dist[static_cast<std::size_t>(j)];
            if (d < 0) {
                ++out.unreachable;
            } else {
                if (static_cast<std::size_t>(d) >= out.counts.size()) out.counts.resize(static_cast<std::size_t>(d) + 1, 0);
                ++out.counts[static_cast<std::size_t>(d)];
            }
        }
    }
    return out;
}

// counts[k] = number of edges whose endpoints share exactly k partners
inline std::vector<long long> esp_distribution(const Network& g) {
    std::vector<long long> counts(1, 0);
    for (int i = 0; i < g.size(); ++i) {
        for (int j : g.neighbors(i)) {
            if (j <= i) continue;
            const std::size_t k = static_cast<std::size_t>(g.common_neighbors(i, j));
            if (k >= counts.size()) counts.resize(k + 1, 0);
            ++counts[k];
        }
    }
    return counts;
}

struct BandFamily {
    std::string name;
    std::vector<std::string> bins;
    std::vector<double> observed, q025, q25, q50, q75, q975;
    double frac_inside = 0;
    bool pass = false;

    void write_csv(std::ostream& out) const {
        out << "bin,observed,q025,q25,q50,q75,q975\n";
        for (std::size_t b = 0; b < bins.size(); ++b) {
            out << bins[b] << ',' << fmt_double(observed[b]) << ',' << fmt_double(q025[b]) << ','
                << fmt_double(q25[b]) << ',' << fmt_double(q50[b]) << ',' << fmt_double(q75[b]) << ','
                << fmt_double(q975[b]) << '\n';
        }
    }
};

struct GofBands {
    BandFamily degree, geodesic, esp;
    long long m = 0;
    bool good_fit = false;

    nlohmann::json summary_json() const {
        nlohmann::json j;
        for (const BandFamily* f : {&degree, &geodesic, &esp})
            j["families"][f->name] = {{"pass", f->pass}, {"frac_inside", f->frac_inside}};
        j["good_fit"] = good_fit;
        j["m"] = m;
        return j;
    }
};

namespace detail {

// nearest-rank quantile over count data
inline double quantile_nearest_rank(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return v[rank - 1];
}

inline BandFamily make_band_family(const std::string& name, std::vector<std::string> bins,
                                   const std::vector<double>& observed,
                                   const std::vector<std::vector<double>>& sims) {
    BandFamily f;
    f.name = name;
    f.bins = std::move(bins);
    f.observed = observed;
    const std::size_t nbins = f.bins.size();
    std::vector<double> cell(sims.size());
    long long inside = 0;
    for (std::size_t b = 0; b < nbins; ++b) {
        for (std::size_t s = 0; s < sims.size(); ++s) cell[s] = b < sims[s].size() ? sims[s][b] : 0.0;
        f.q025.push_back(quantile_nearest_rank(cell, 0.025));
        f.q25.push_back(quantile_nearest_rank(cell, 0.25));
        f.q50.push_back(quantile_nearest_rank(cell, 0.50));
        f.q75.push_back(quantile_nearest_rank(cell, 0.75));
        f.q975.push_back(quantile_nearest_rank(cell, 0.975));
        if (observed[b] >= f.q025.back() && observed[b] <= f.q975.back()) ++inside;
    }
    f.frac_inside = nbins == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(nbins);
    f.pass = f.frac_inside >= 0.90;
    return f;
}

inline std::vector<double> to_double_vec(const std::vector<long long>& v, std::size_t min_size) {
    std::vector<double> out(std::max(v.size(), min_size), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
    return out;
}

// Draw m distinct indices from [0, total) by partial Fisher-Yates.
inline std::vector<long long> sample_without_replacement(long long total, long long m, Rng& rng) {
    std::vector<long long> idx(static_cast<std::size_t>(total));
    for (long long i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (long long i = 0; i < m; ++i) {
        const long long j = i + static_cast<long long>(rng.below(static_cast<std::uint64_t>(total - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(m));
    return idx;
}

}  // namespace detail

// Posterior-predictive goodness-of-fit bands: m parameter vectors drawn
// without replacement from the posterior, one simulated network each, and
// per-bin quantiles of degree / geodesic / edgewise-shared-partner counts.
inline GofBands gof_run(const Network& g_obs, const FirmTable& x, const PosteriorSample& sample, long long m,
                        long long aux_steps, std::uint64_t seed, double swap_prob = 0.001, int threads = 1) {
    if (m < 1) throw model_error("gof_run: need m >= 1");
    if (m > sample.total_draws())
        throw model_error("gof_run: m exceeds available posterior draws (" + fmt_int(m) + " > " +
                          fmt_int(sample.total_draws()) + ")");
    const long long steps = aux_steps > 0 ? aux_steps : default_steps(g_obs.size());

    Rng pick_rng = derive_stream(seed, "gof/subsample", 0);
    const std::vector<long long> rows = detail::sample_without_replacement(sample.total_draws(), m, pick_rng);

    const PairTotals totals = PairTotals::compute(x);
    std::vector<std::vector<double>> deg_sims(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> geo_sims(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> esp_sims(static_cast<std::size_t>(m));
    std::vector<double> unreachable_sims(static_cast<std::size_t>(m));

    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t k) {
        Rng rng = derive_stream(seed, "gof/sim", k);
        const ParamVector theta = ParamVector::from_array(sample.draw(rows[k]));
        Network g = g_obs;
        RunningStats stats;
        stats.reset(g, x);
        for (long long r = 0; r < steps; ++r) mh_step(g, x, theta, swap_prob, stats, totals, rng);
        deg_sims[k] = detail::to_double_vec(degree_distribution(g), 0);
        const GeodesicDistribution gd = geodesic_distribution(g);
        geo_sims[k] = detail::to_double_vec(gd.counts, 0);
        unreachable_sims[k] = static_cast<double>(gd.unreachable);
        esp_sims[k] = detail::to_double_vec(esp_distribution(g), 0);
    });

    GofBands bands;
    bands.m = m;

    // shared binning: everything observed anywhere, truncated at the max
    const auto obs_deg = detail::to_double_vec(degree_distribution(g_obs), 0);
    const GeodesicDistribution obs_geo = geodesic_distribution(g_obs);
    const auto obs_esp = detail::to_double_vec(esp_distribution(g_obs), 0);

    auto bin_count = [](const std::vector<double>& obs, const std::vector<std::vector<double>>& sims) {
        std::size_t b = obs.size();
        for (const auto& s : sims) b = std::max(b, s.size());
        return b;
    };

    {
        const std::size_t nb = bin_count(obs_deg, deg_sims);
        std::vector<std::string> bins;
        for (std::size_t b = 0; b < nb; ++b) bins.push_back(fmt_int(static_cast<long long>(b)));
        std::vector<double> obs(nb, 0.0);
        std::copy(obs_deg.begin(), obs_deg.end(), obs.begin());
        bands.degree = detail::make_band_family("degree", std::move(bins), obs, deg_sims);
    }
    {
        auto obs_counts = detail::to_double_vec(obs_geo.counts, 0);
        const std::size_t nb = bin_count(obs_counts, geo_sims);  // includes unused index 0
        std::vector<std::string> bins;
        std::vector<double> obs;
        std::vector<std::vector<double>> sims(static_cast<std::size_t>(m));
        for (std::size_t b = 1; b < nb; ++b) {
            bins.push_back(fmt_int(static_cast<long long>(b)));
            obs.push_back(b < obs_counts.size() ? obs_counts[b] : 0.0);
        }
        for (std::size_t s = 0; s < sims.size(); ++s) {
            for (std::size_t b = 1; b < nb; ++b)
                sims[s].push_back(b < geo_sims[s].size() ? geo_sims[s][b] : 0.0);
            sims[s].push_back(unreachable_sims[s]);
        }
        bins.push_back("unreachable");
        obs.push_back(static_cast<double>(obs_geo.unreachable));
        bands.geodesic = detail::make_band_family("geodesic", std::move(bins), obs, sims);
    }
    {
        const std::size_t nb = bin_count(obs_esp, esp_sims);
        std::vector<std::string> bins;
        for (std::size_t b = 0; b < nb; ++b) bins.push_back(fmt_int(static_cast<long long>(b)));
        std::vector<double> obs(nb, 0.0);
        std::copy(obs_esp.begin(), obs_esp.end(), obs.begin());
        bands.esp = detail::make_band_family("esp", std::move(bins), obs, esp_sims);
    }
    bands.good_fit = bands.degree.pass && bands.geodesic.pass && bands.esp.pass;
    return bands;
}

}  // namespace netform
