#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netform/common.hpp"
#include "netform/csv.hpp"
#include "netform/firm_table.hpp"

namespace netform {

// Undirected simple graph over n nodes. Adjacency is a bit-packed upper
// triangle (O(1) membership) mirrored by per-node sorted neighbor lists
// (O(d_i + d_j) common-partner queries) and an explicit degree cache.
// Designed for n up to a few thousand.
class Network {
  public:
    Network() = default;

    explicit Network(int n) : n_(n) {
        if (n < 0) throw model_error("negative node count");
        const std::size_t d = dyad_count();
        bits_.assign((d + 63) / 64, 0ull);
        nbrs_.assign(static_cast<std::size_t>(n), {});
        degree_.assign(static_cast<std::size_t>(n), 0);
        row_offset_.resize(static_cast<std::size_t>(n) + 1);
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            // row i holds dyads (i, i+1..n-1)
            row_offset_[i] = i * static_cast<std::size_t>(n) - i * (i + 1) / 2;
        }
    }

    int size() const { return n_; }
    long long edge_count() const { return edges_; }
    std::size_t dyad_count() const {
        return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2;
    }

    std::size_t dyad_index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return row_offset_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(j - i) - 1;
    }

    std::pair<int, int> dyad(std::size_t k) const {
        auto it = std::upper_bound(row_offset_.begin(), row_offset_.end(), k);
        const int i = static_cast<int>(it - row_offset_.begin()) - 1;
        const int j = i + 1 + static_cast<int>(k - row_offset_[static_cast<std::size_t>(i)]);
        return {i, j};
    }

    bool has_edge(int i, int j) const {
        if (i == j) return false;
        const std::size_t k = dyad_index(i, j);
        return (bits_[k >> 6] >> (k & 63)) & 1ull;
    }

    int degree(int i) const { return degree_[static_cast<std::size_t>(i)]; }
    std::span<const int> neighbors(int i) const { return nbrs_[static_cast<std::size_t>(i)]; }

    // Flips g_ij (and g_ji). All caches stay consistent.
    void toggle(int i, int j) {
        if (i == j) throw model_error("toggle: self-loop dyad");
        const std::size_t k = dyad_index(i, j);
        const bool adding = !((bits_[k >> 6] >> (k & 63)) & 1ull);
        bits_[k >> 6] ^= (1ull << (k & 63));
        list_update(i, j, adding);
        list_update(j, i, adding);
        degree_[static_cast<std::size_t>(i)] += adding ? 1 : -1;
        degree_[static_cast<std::size_t>(j)] += adding ? 1 : -1;
        edges_ += adding ? 1 : -1;
    }

    void set_edge(int i, int j, bool present) {
        if (i == j) throw model_error("set_edge: self-loop dyad");
        if (has_edge(i, j) != present) toggle(i, j);
    }

    // Number of common partners of i and j; never counts i or j themselves,
    // so the result is the same whether or not the i-j link exists.
    int common_neighbors(int i, int j) const {
        const auto& a = nbrs_[static_cast<std::size_t>(i)];
        const auto& b = nbrs_[static_cast<std::size_t>(j)];
        int count = 0;
        std::size_t p = 0, q = 0;
        while (p < a.size() && q < b.size()) {
            if (a[p] == b[q]) {
                ++count;
                ++p;
                ++q;
            } else if (a[p] < b[q]) {
                ++p;
            } else {
                ++q;
            }
        }
        return count;
    }

    // Replaces the graph by its complement.
    void complement() {
        for (auto& w : bits_) w = ~w;
        const std::size_t d = dyad_count();
        if (d & 63) bits_[d >> 6] &= (1ull << (d & 63)) - 1;  // clear padding
        rebuild_from_bits();
    }

    // Compact dyad-bitmask encoding for exhaustive enumeration (n <= 11).
    std::uint64_t mask() const {
        if (dyad_count() > 63) throw model_error("mask: graph too large to encode");
        return bits_.empty() ? 0ull : bits_[0];
    }

    static Network from_mask(int n, std::uint64_t mask) {
        Network g(n);
        if (g.dyad_count() > 63) throw model_error("from_mask: graph too large");
        for (std::size_t k = 0; k < g.dyad_count(); ++k) {
            if ((mask >> k) & 1ull) {
                auto [i, j] = g.dyad(k);
                g.toggle(i, j);
            }
        }
        return g;
    }

    // Test support: verifies every cache against the bit matrix.
    void check_invariants() const {
        long long edges = 0;
        for (int i = 0; i < n_; ++i) {
            const auto& lst = nbrs_[static_cast<std::size_t>(i)];
            if (static_cast<int>(lst.size()) != degree_[static_cast<std::size_t>(i)])
                throw model_error("degree cache out of sync");
            if (!std::is_sorted(lst.begin(), lst.end())) throw model_error("neighbor list not sorted");
            for (int j : lst) {
                if (j == i) throw model_error("self-loop in neighbor list");
                if (!has_edge(i, j)) throw model_error("neighbor list / bit matrix mismatch");
                const auto& back = nbrs_[static_cast<std::size_t>(j)];
                if (!std::binary_search(back.begin(), back.end(), i))
                    throw model_error("asymmetric neighbor lists");
            }
            edges += lst.size();
        }
        if (edges != 2 * edges_) throw model_error("edge count cache out of sync");
    }

  private:
    void list_update(int i, int j, bool adding) {
        auto& lst = nbrs_[static_cast<std::size_t>(i)];
        auto it = std::lower_bound(lst.begin(), lst.end(), j);
        if (adding)
            lst.insert(it, j);
        else
            lst.erase(it);
    }

    void rebuild_from_bits() {
        edges_ = 0;
        for (auto& lst : nbrs_) lst.clear();
        std::fill(degree_.begin(), degree_.end(), 0);
        for (std::size_t k = 0; k < dyad_count(); ++k) {
            if ((bits_[k >> 6] >> (k & 63)) & 1ull) {
                auto [i, j] = dyad(k);
                nbrs_[static_cast<std::size_t>(i)].push_back(j);
                nbrs_[static_cast<std::size_t>(j)].push_back(i);
                ++degree_[static_cast<std::size_t>(i)];
                ++degree_[static_cast<std::size_t>(j)];
                ++edges_;
            }
        }
        for (auto& lst : nbrs_) std::sort(lst.begin(), lst.end());
    }

    int n_ = 0;
    long long edges_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::vector<int>> nbrs_;
    std::vector<int> degree_;
    std::vector<std::size_t> row_offset_;
};

// Loads `src,dst` rows against known firm ids. Reversed duplicates collapse
// to one undirected edge; self-loops are rejected.
inline Network load_edges(const std::string& path, const FirmTable& firms) {
    CsvFile csv = read_csv(path);
    expect_header(csv, {"src", "dst"}, path);
    Network g(firms.size());
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string where = path + " line " + fmt_int(static_cast<long long>(csv.line_numbers[r]));
        if (row.size() != 2) throw io_error(where + ": malformed row, expected 2 fields");
        const int i = firms.index_of(row[0]);
        if (i < 0) throw io_error(where + ": unknown id '" + row[0] + "'");
        const int j = firms.index_of(row[1]);
        if (j < 0) throw io_error(where + ": unknown id '" + row[1] + "'");
        if (i == j) throw io_error(where + ": self-loop on id '" + row[0] + "'");
        g.set_edge(i, j, true);
    }
    return g;
}

inline void save_edges(const Network& g, const FirmTable& firms, const std::string& path) {
    auto out = open_output(path);
    out << "src,dst\n";
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbors(i))
            if (j > i) out << firms.firm(i).id << ',' << firms.firm(j).id << '\n';
}

}  // namespace netform
