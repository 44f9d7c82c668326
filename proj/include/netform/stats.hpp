#pragma once

#include <array>
#include <cmath>

#include "netform/firm_table.hpp"
#include "netform/network.hpp"

namespace netform {

// Payoff parameters theta = (alpha0..alpha4, beta, gamma).
struct ParamVector {
    double alpha0 = 0;  // link cost
    double alpha1 = 0;  // same firm type
    double alpha2 = 0;  // abs. log-capital difference
    double alpha3 = 0;  // abs. age difference
    double alpha4 = 0;  // same state
    double beta = 0;    // partner popularity
    double gamma = 0;   // common partners

    std::array<double, 7> as_array() const { return {alpha0, alpha1, alpha2, alpha3, alpha4, beta, gamma}; }

    static ParamVector from_array(const std::array<double, 7>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
    }

    bool finite() const {
        for (double v : as_array())
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// Sufficient statistics over unordered linked pairs, plus 2-stars and
// triangles. These are the arguments of the potential.
struct StatVector {
    double edges = 0;
    double sametype = 0;   // edges between same-type firms
    double capdiff = 0;    // sum of |log-capital difference| over edges
    double agediff = 0;    // sum of |age difference| over edges
    double samestate = 0;  // edges between same-state firms
    double twostars = 0;   // sum_j C(d_j, 2)
    double triangles = 0;  // unordered triangle count

    std::array<double, 7> as_array() const {
        return {edges, sametype, capdiff, agediff, samestate, twostars, triangles};
    }

    StatVector& operator+=(const StatVector& o) {
        edges += o.edges;
        sametype += o.sametype;
        capdiff += o.capdiff;
        agediff += o.agediff;
        samestate += o.samestate;
        twostars += o.twostars;
        triangles += o.triangles;
        return *this;
    }
    StatVector& operator-=(const StatVector& o) {
        edges -= o.edges;
        sametype -= o.sametype;
        capdiff -= o.capdiff;
        agediff -= o.agediff;
        samestate -= o.samestate;
        twostars -= o.twostars;
        triangles -= o.triangles;
        return *this;
    }
};

// Effect of setting one dyad to 1, with every component evaluated on the
// network that excludes the dyad itself: edges = 1, twostars = deg(i)+deg(j),
// triangles = common partners of i and j.
using ChangeStats = StatVector;

// Weighted form of the statistics whose dot product with theta is the
// potential Q. Edge statistics enter twice (both firms collect the edge
// payoff), 2-stars once, triangles four times.
inline std::array<double, 7> canonical_stats(const StatVector& s) {
    return {2 * s.edges, 2 * s.sametype, 2 * s.capdiff, 2 * s.agediff, 2 * s.samestate, s.twostars, 4 * s.triangles};
}

inline double dot7(const std::array<double, 7>& a, const std::array<double, 7>& b) {
    double acc = 0;
    for (int k = 0; k < 7; ++k) acc += a[k] * b[k];
    return acc;
}

inline StatVector suff_stats(const Network& g, const FirmTable& x) {
    if (g.size() != x.size()) throw model_error("suff_stats: network/firm-table size mismatch");
    StatVector s;
    long long triangle_paths = 0;  // sum over edges of common partners; 3 per triangle
    for (int i = 0; i < g.size(); ++i) {
        const double d = g.degree(i);
        s.twostars += d * (d - 1) / 2;
        for (int j : g.neighbors(i)) {
            if (j <= i) continue;
            s.edges += 1;
            s.sametype += x.same_type(i, j) ? 1 : 0;
            s.samestate += x.same_state(i, j) ? 1 : 0;
            s.capdiff += x.capdiff(i, j);
            s.agediff += x.agediff(i, j);
            triangle_paths += g.common_neighbors(i, j);
        }
    }
    s.triangles = static_cast<double>(triangle_paths / 3);
    return s;
}

inline ChangeStats change_stats(const Network& g, const FirmTable& x, int i, int j) {
    if (i == j) throw model_error("change_stats: self-loop dyad");
    ChangeStats d;
    d.edges = 1;
    d.sametype = x.same_type(i, j) ? 1 : 0;
    d.samestate = x.same_state(i, j) ? 1 : 0;
    d.capdiff = x.capdiff(i, j);
    d.agediff = x.agediff(i, j);
    const int has = g.has_edge(i, j) ? 1 : 0;  // evaluate on g without the dyad
    d.twostars = (g.degree(i) - has) + (g.degree(j) - has);
    d.triangles = g.common_neighbors(i, j);
    return d;
}

inline double potential(const StatVector& s, const ParamVector& theta) {
    return dot7(canonical_stats(s), theta.as_array());
}

// Joint surplus of the dyad: MP_ij + MP_ji, equal to the potential change
// from switching g_ij on.
inline double joint_surplus(const Network& g, const FirmTable& x, const ParamVector& theta, int i, int j) {
    return dot7(canonical_stats(change_stats(g, x, i, j)), theta.as_array());
}

inline double logistic(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Conditional probability that the dyad links, given the rest of the
// network. Clamped strictly inside (0, 1) so saturated surpluses stay usable.
inline double link_probability(const Network& g, const FirmTable& x, const ParamVector& theta, int i, int j) {
    static const double kMax = std::nextafter(1.0, 0.0);
    const double p = logistic(joint_surplus(g, x, theta, i, j));
    if (p >= 1.0) return kMax;
    if (p <= 0.0) return std::nextafter(0.0, 1.0);
    return p;
}

// One firm's marginal payoff from the link, on the network without the dyad.
inline double marginal_payoff(const Network& g, const FirmTable& x, const ParamVector& theta, int i, int j) {
    if (i == j) throw model_error("marginal_payoff: self-loop dyad");
    const int has = g.has_edge(i, j) ? 1 : 0;
    const double pop_j = g.degree(j) - has;
    const double common = g.common_neighbors(i, j);
    return theta.alpha0 + theta.alpha1 * (x.same_type(i, j) ? 1 : 0) + theta.alpha2 * x.capdiff(i, j) +
           theta.alpha3 * x.agediff(i, j) + theta.alpha4 * (x.same_state(i, j) ? 1 : 0) + theta.beta * pop_j +
           2.0 * theta.gamma * common;
}

// Sum of all firms' payoffs. Differs from the potential: 2-stars enter twice
// and each triangle pays gamma twice to each of its three members.
inline double welfare(const Network& g, const FirmTable& x, const ParamVector& theta) {
    const StatVector s = suff_stats(g, x);
    const double edge_sum = theta.alpha0 * s.edges + theta.alpha1 * s.sametype + theta.alpha2 * s.capdiff +
                            theta.alpha3 * s.agediff + theta.alpha4 * s.samestate;
    return 2.0 * edge_sum + 2.0 * theta.beta * s.twostars + 6.0 * theta.gamma * s.triangles;
}

// Totals over all unordered pairs; complements and pair-level summaries
// derive edge statistics from them in O(1).
struct PairTotals {
    double pairs = 0;
    double sametype = 0;
    double capdiff = 0;
    double agediff = 0;
    double samestate = 0;

    static PairTotals compute(const FirmTable& x) {
        PairTotals t;
        const int n = x.size();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                t.pairs += 1;
                t.sametype += x.same_type(i, j) ? 1 : 0;
                t.samestate += x.same_state(i, j) ? 1 : 0;
                t.capdiff += x.capdiff(i, j);
                t.agediff += x.agediff(i, j);
            }
        }
        return t;
    }
};

// Statistics of the complement graph, in O(n) given the degrees of g.
// Triangle identity: classify vertex triples by their edge count.
inline StatVector complement_stats(const Network& g, const StatVector& s, const PairTotals& t) {
    const double n = g.size();
    StatVector c;
    c.edges = t.pairs - s.edges;
    c.sametype = t.sametype - s.sametype;
    c.capdiff = t.capdiff - s.capdiff;
    c.agediff = t.agediff - s.agediff;
    c.samestate = t.samestate - s.samestate;
    for (int i = 0; i < g.size(); ++i) {
        const double d = n - 1 - g.degree(i);
        c.twostars += d * (d - 1) / 2;
    }
    const double triples = n * (n - 1) * (n - 2) / 6;
    c.triangles = triples - s.edges * (n - 2) + s.twostars - s.triangles;
    return c;
}

// Incrementally maintained sufficient statistics for a simulation worker.
// apply_toggle must be called before the corresponding Network::toggle;
// change statistics ignore the dyad's own state, so the update is exact.
struct RunningStats {
    StatVector s;

    void reset(const Network& g, const FirmTable& x) { s = suff_stats(g, x); }

    void apply_toggle(const Network& g, const FirmTable& x, int i, int j, bool adding) {
        const ChangeStats d = change_stats(g, x, i, j);
        if (adding)
            s += d;
        else
            s -= d;
    }
};

}  // namespace netform
