#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netform/common.hpp"
#include "netform/csv.hpp"

namespace netform {

// The closed list of recognized firm categories. Unknown categories are
// rejected at load time.
inline const std::array<std::string_view, 14>& firm_type_categories() {
    static const std::array<std::string_view, 14> cats = {
        "Angel Group",
        "Bank Affiliated",
        "Corporate PE/Venture",
        "Endowment/Foundation or Pension Fund",
        "Government Affiliated Program",
        "Incubator/Development Program",
        "Individuals",
        "Insurance Firm Affiliate",
        "Investment Management Firm",
        "Private Equity Advisor or Fund of Funds",
        "Private Equity Firm",
        "SBIC",
        "Service Provider",
        "University Program",
    };
    return cats;
}

inline int firm_type_code(std::string_view name) {
    const auto& cats = firm_type_categories();
    for (std::size_t k = 0; k < cats.size(); ++k)
        if (cats[k] == name) return static_cast<int>(k);
    return -1;
}

struct Firm {
    std::string id;
    int type = -1;        // index into firm_type_categories()
    int state = -1;       // index into FirmTable's interned state names
    double log_capital = 0.0;  // ln of capital under management, millions USD
    double age = 0.0;          // years
};

// Per-firm observable attributes. Node indices used across the project are
// positions in this table; load_firms orders rows by id.
class FirmTable {
  public:
    int size() const { return static_cast<int>(firms_.size()); }
    const Firm& firm(int i) const { return firms_[static_cast<std::size_t>(i)]; }
    const std::vector<Firm>& firms() const { return firms_; }

    int index_of(std::string_view id) const {
        auto it = id_index_.find(std::string(id));
        return it == id_index_.end() ? -1 : it->second;
    }

    int intern_state(std::string_view name) {
        for (std::size_t k = 0; k < state_names_.size(); ++k)
            if (state_names_[k] == name) return static_cast<int>(k);
        state_names_.emplace_back(name);
        return static_cast<int>(state_names_.size()) - 1;
    }
    const std::string& state_name(int code) const { return state_names_[static_cast<std::size_t>(code)]; }
    int state_count() const { return static_cast<int>(state_names_.size()); }

    bool same_type(int i, int j) const { return firms_[i].type == firms_[j].type; }
    bool same_state(int i, int j) const { return firms_[i].state == firms_[j].state; }
    double capdiff(int i, int j) const { return std::abs(firms_[i].log_capital - firms_[j].log_capital); }
    double agediff(int i, int j) const { return std::abs(firms_[i].age - firms_[j].age); }

    // Appends a firm; the caller provides already-validated codes. Used by
    // loaders and by counterfactual population transforms.
    void append(Firm f) {
        if (id_index_.count(f.id)) throw model_error("duplicate firm id: " + f.id);
        id_index_[f.id] = static_cast<int>(firms_.size());
        firms_.push_back(std::move(f));
    }

    void sort_by_id() {
        std::sort(firms_.begin(), firms_.end(), [](const Firm& a, const Firm& b) { return a.id < b.id; });
        id_index_.clear();
        for (std::size_t i = 0; i < firms_.size(); ++i) id_index_[firms_[i].id] = static_cast<int>(i);
    }

  private:
    std::vector<Firm> firms_;
    std::vector<std::string> state_names_;
    std::unordered_map<std::string, int> id_index_;
};

// Loads `id,type,state,capital_musd,age`. Capital is converted to natural
// log at load; every later computation sees log capital only. Missing or
// invalid values are rejected, never imputed.
inline FirmTable load_firms(const std::string& path) {
    CsvFile csv = read_csv(path);
    expect_header(csv, {"id", "type", "state", "capital_musd", "age"}, path);
    FirmTable table;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string where = path + " line " + fmt_int(static_cast<long long>(csv.line_numbers[r]));
        if (row.size() != 5) throw io_error(where + ": malformed row, expected 5 fields");
        Firm f;
        f.id = row[0];
        if (f.id.empty()) throw io_error(where + ": malformed row, empty id");
        if (table.index_of(f.id) >= 0) throw io_error(where + ": duplicate id '" + f.id + "'");
        f.type = firm_type_code(row[1]);
        if (f.type < 0) throw io_error(where + ": unknown firm_type '" + row[1] + "'");
        if (row[2].empty()) throw io_error(where + ": malformed row, empty state");
        f.state = table.intern_state(row[2]);
        const double capital = parse_double(row[3], "capital_musd");
        if (!(capital > 0.0)) throw io_error(where + ": non-positive capital");
        f.log_capital = std::log(capital);
        f.age = parse_double(row[4], "age");
        if (!(f.age >= 0.0) || !std::isfinite(f.age)) throw io_error(where + ": invalid age");
        table.append(std::move(f));
    }
    table.sort_by_id();
    return table;
}

inline void save_firms(const FirmTable& table, const std::string& path) {
    auto out = open_output(path);
    out << "id,type,state,capital_musd,age\n";
    for (int i = 0; i < table.size(); ++i) {
        const Firm& f = table.firm(i);
        out << f.id << ',' << firm_type_categories()[static_cast<std::size_t>(f.type)] << ','
            << table.state_name(f.state) << ',' << fmt_double(std::exp(f.log_capital)) << ','
            << fmt_double(f.age) << '\n';
    }
}

}  // namespace netform
