#pragma once

#include <string>

#include "netform/firm_table.hpp"
#include "netform/network.hpp"
#include "netform/rng.hpp"

namespace testsupport {

using namespace netform;

inline FirmTable make_firms(int n, Rng& rng, int n_types = 4, int n_states = 5, double cap_mean = 3.0,
                            double cap_sd = 1.0, double age_max = 40.0) {
    static const char* state_pool[] = {"CA", "MA", "NY", "TX", "WA", "IL", "PA", "CT", "NJ", "MN",
                                       "CO", "GA", "FL", "OH", "MD", "VA", "NC", "MI", "UT", "OR"};
    FirmTable t;
    for (int i = 0; i < n; ++i) {
        Firm f;
        char buf[16];
        std::snprintf(buf, sizeof buf, "f%05d", i);
        f.id = buf;
        f.type = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_types)));
        f.state = t.intern_state(state_pool[rng.below(static_cast<std::uint64_t>(std::min(n_states, 20)))]);
        f.log_capital = rng.normal(cap_mean, cap_sd);
        f.age = age_max * rng.uniform01();
        t.append(std::move(f));
    }
    return t;
}

// identical attributes everywhere: only structural terms matter
inline FirmTable make_homogeneous_firms(int n) {
    FirmTable t;
    for (int i = 0; i < n; ++i) {
        Firm f;
        char buf[16];
        std::snprintf(buf, sizeof buf, "f%05d", i);
        f.id = buf;
        f.type = 0;
        f.state = t.intern_state("CA");
        f.log_capital = 2.0;
        f.age = 10.0;
        t.append(std::move(f));
    }
    return t;
}

inline Network random_network(int n, double p, Rng& rng) {
    Network g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) g.toggle(i, j);
    return g;
}

inline ParamVector random_theta(Rng& rng, double scale = 0.5) {
    std::array<double, 7> a{};
    for (auto& v : a) v = rng.normal(0.0, scale);
    return ParamVector::from_array(a);
}

}  // namespace testsupport
