// Generates a synthetic firm population (and optionally a simulated network)
// for demos and experiments.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "netform/dynamics.hpp"
#include "netform/firm_table.hpp"
#include "netform/network.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"synthetic firm population generator"};
    int n = 100;
    std::uint64_t seed = 1;
    std::string out = ".";
    std::string theta_csv;
    long long steps = 0;
    int types = 6, states = 10;
    app.add_option("--n", n, "number of firms");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--theta", theta_csv, "simulate edges at these parameters (7 comma values)");
    app.add_option("--steps", steps, "game steps for the edge simulation (default n^2 ln n)");
    app.add_option("--types", types, "distinct firm types to use (<= 14)");
    app.add_option("--states", states, "distinct states to use");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out);
        netform::Rng rng = netform::derive_stream(seed, "synth/firms", 0);
        netform::FirmTable firms;
        static const char* state_pool[] = {"CA", "MA", "NY", "TX", "WA", "IL", "PA", "CT", "NJ", "MN",
                                           "CO", "GA", "FL", "OH", "MD", "VA", "NC", "MI", "UT", "OR"};
        types = std::clamp(types, 1, 14);
        states = std::clamp(states, 1, 20);
        for (int i = 0; i < n; ++i) {
            netform::Firm f;
            char buf[16];
            std::snprintf(buf, sizeof buf, "f%06d", i);
            f.id = buf;
            f.type = static_cast<int>(rng.below(static_cast<std::uint64_t>(types)));
            f.state = firms.intern_state(state_pool[rng.below(static_cast<std::uint64_t>(states))]);
            f.log_capital = rng.normal(3.5, 1.3);
            f.age = 1.0 + 39.0 * rng.uniform01();
            firms.append(std::move(f));
        }
        firms.sort_by_id();
        netform::save_firms(firms, (fs::path(out) / "firms.csv").string());
        std::cout << "wrote " << n << " firms\n";

        if (!theta_csv.empty()) {
            std::array<double, 7> a{};
            std::size_t k = 0, start = 0;
            for (std::size_t i = 0; i <= theta_csv.size() && k < 8; ++i) {
                if (i == theta_csv.size() || theta_csv[i] == ',') {
                    if (k >= 7) throw netform::model_error("theta: expected 7 values");
                    a[k++] = netform::parse_double(
                        netform::trim(std::string_view(theta_csv).substr(start, i - start)), "theta");
                    start = i + 1;
                }
            }
            if (k != 7) throw netform::model_error("theta: expected 7 values");
            const netform::ParamVector theta = netform::ParamVector::from_array(a);
            if (steps <= 0) steps = netform::default_steps(n);
            netform::Rng sim_rng = netform::derive_stream(seed, "synth/edges", 0);
            const auto trace = netform::simulate(netform::Network(n), firms, theta, steps,
                                                 netform::MeetingProcess::uniform(), sim_rng, steps);
            netform::save_edges(trace.final_network, firms, (fs::path(out) / "edges.csv").string());
            std::cout << "wrote " << trace.final_network.edge_count() << " edges after " << steps << " steps\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
