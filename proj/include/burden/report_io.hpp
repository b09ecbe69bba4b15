#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "burden/aggregation.hpp"
#include "burden/uncertainty.hpp"

namespace burden::report {

using ordered_json = nlohmann::ordered_json;

// All emitted numbers are rounded to 6 decimals before any serialization, so
// CSV, JSON and Markdown carry numerically identical content.
inline double round_to(double v, int decimals) {
    double k = std::pow(10.0, decimals);
    return std::round(v * k) / k;
}
inline double round6(double v) { return round_to(v, 6); }

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", round6(v));
    std::string s = buf;
    auto dot = s.find('.');
    auto last = s.find_last_not_of('0');
    if (last == dot)
        --last;
    s.erase(last + 1);
    if (s == "-0")
        s = "0";
    return s;
}

struct OutTable {
    std::string name;
    std::vector<std::string> columns;
    // cells are either text or a rounded number rendered via fmt()
    std::vector<std::vector<ordered_json>> rows;

    void row(std::vector<ordered_json> r) { rows.push_back(std::move(r)); }
};

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

inline std::string render_cell(const ordered_json& v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "";
    return fmt(v.get<double>());
}

inline void write_csv(const OutTable& t, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path.string());
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << render_cell(r[i]);
        out << '\n';
    }
}

inline void write_json(const OutTable& t, const std::filesystem::path& path) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i)
            obj[t.columns[i]] = r[i].is_number() ? ordered_json(round6(r[i].get<double>()))
                                                 : r[i];
        rows.push_back(std::move(obj));
    }
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path.string());
    out << rows.dump(1) << '\n';
}

inline void write_md(const OutTable& t, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write " + path.string());
    out << "| ";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << t.columns[i] << " | ";
    out << "\n|";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << " --- |";
    out << '\n';
    for (const auto& r : t.rows) {
        out << "| ";
        for (std::size_t i = 0; i < r.size(); ++i)
            out << render_cell(r[i]) << " | ";
        out << '\n';
    }
}

inline void write_table(const OutTable& t, const std::filesystem::path& dir,
                        const std::set<std::string>& formats) {
    for (const auto& f : formats) {
        auto p = dir / (t.name + "." + f);
        if (f == "csv")
            write_csv(t, p);
        else if (f == "json")
            write_json(t, p);
        else if (f == "md")
            write_md(t, p);
        else
            throw ParseError("unknown output format '" + f + "'");
    }
}

// ---------------------------------------------------------------------------
// Deterministic report tables
// ---------------------------------------------------------------------------

inline OutTable build_table2(const ModelResult& m) {
    OutTable t;
    t.name = "table2";
    t.columns = {"row",   "population", "type",       "stage",
                 "men",   "women",      "n",          "cost_million_usd"};
    auto musd = [](double v) { return round_to(v / 1e6, 2); };
    double inc_cost = 0, prev_cost = 0;
    for (const auto& c : m.report.cells)
        (c.pop == Population::Incident ? inc_cost : prev_cost) += c.weighted;
    for (Population pop : all_populations) {
        for (const auto& c : m.report.cells) {
            if (c.pop != pop)
                continue;
            t.row({"cell", to_string(c.pop), to_string(c.key.type),
                   to_string(c.key.stage), std::round(c.cases_male),
                   std::round(c.cases_female), std::round(c.cases),
                   musd(c.weighted)});
        }
        const DeathRow& d =
            pop == Population::Incident ? m.report.incident_death : m.report.prevalent_death;
        t.row({"death", to_string(pop), "", "", std::round(d.deaths_male),
               std::round(d.deaths_female), std::round(d.deaths), musd(d.weighted)});
        double sub = (pop == Population::Incident ? inc_cost : prev_cost) + d.weighted;
        t.row({"subtotal", to_string(pop), "", "", nullptr, nullptr, nullptr, musd(sub)});
    }
    t.row({"total", "", "", "", nullptr, nullptr, nullptr,
           musd(m.report.grand_total)});
    return t;
}

inline OutTable build_cost_cards(const ModelResult& m, Population pop,
                                 const std::string& name,
                                 const SectorShares& shares) {
    OutTable t;
    t.name = name;
    t.columns = {"type", "stage", "public", "social_security", "private", "weighted"};
    for (const auto& [key, card] : m.cards) {
        if (key.first != pop)
            continue;
        t.row({to_string(key.second.type), to_string(key.second.stage),
               round_to(card.total.public_cost, 2), round_to(card.total.social_cost, 2),
               round_to(card.total.private_cost, 2),
               round_to(card.total.weighted(shares), 2)});
    }
    return t;
}

inline OutTable build_s21(const ModelResult& m) {
    OutTable t;
    t.name = "s21_sector_burden";
    t.columns = {"row",    "population", "type",    "stage",
                 "public", "social_security", "private", "total"};
    auto money = [&](const std::string& row, const std::string& pop,
                     const std::string& type, const std::string& stage,
                     const MoneyBySector& c) {
        t.row({row, pop, type, stage, round_to(c.public_cost, 2),
               round_to(c.social_cost, 2), round_to(c.private_cost, 2),
               round_to(sector_sum(c), 2)});
    };
    for (Population pop : all_populations) {
        for (const auto& c : m.report.cells)
            if (c.pop == pop)
                money("cell", to_string(pop), to_string(c.key.type),
                      to_string(c.key.stage), c.cost);
        const DeathRow& d =
            pop == Population::Incident ? m.report.incident_death : m.report.prevalent_death;
        money("death", to_string(pop), "", "", d.cost);
        MoneyBySector sub = (pop == Population::Incident ? m.report.incident_subtotal
                                                         : m.report.prevalent_subtotal) +
                            d.cost;
        money("subtotal", to_string(pop), "", "", sub);
    }
    money("total", "", "", "", m.report.total);
    return t;
}

inline OutTable build_daly(const ModelResult& m) {
    OutTable t;
    t.name = "daly_s5";
    t.columns = {"sex", "yll", "yld", "daly"};
    const auto& h = m.health_loss;
    for (Sex s : all_sexes)
        t.row({to_string(s), round_to(h.yll_by_sex.at(s), 2),
               round_to(h.yld_by_sex.at(s), 2), round_to(h.daly_by_sex.at(s), 2)});
    t.row({"total", round_to(h.yll_total(), 2), round_to(h.yld_total(), 2),
           round_to(h.daly_total(), 2)});
    return t;
}

inline OutTable build_composition(const ModelResult& m, const SectorShares& shares) {
    OutTable t;
    t.name = "composition_fig3";
    t.columns = {"population", "type", "stage", "category", "share", "defined"};
    for (const auto& row : composition_breakdown(m.cards, shares))
        t.row({to_string(row.pop), to_string(row.key.type), to_string(row.key.stage),
               to_string(row.category),
               row.defined ? ordered_json(round6(row.share_weighted)) : ordered_json(),
               row.defined ? "yes" : "no"});
    return t;
}

inline void emit_reports(const ModelResult& m, const ScenarioBundle& b,
                         const std::filesystem::path& dir,
                         const std::set<std::string>& formats) {
    std::filesystem::create_directories(dir);
    const SectorShares& sh = b.manifest.sector_shares;
    write_table(build_table2(m), dir, formats);
    write_table(build_cost_cards(m, Population::Incident, "s17_incident_costs", sh), dir,
                formats);
    write_table(build_cost_cards(m, Population::Prevalent, "s18_prevalent_costs", sh),
                dir, formats);
    write_table(build_s21(m), dir, formats);
    write_table(build_daly(m), dir, formats);
    write_table(build_composition(m, sh), dir, formats);
}

inline void dump_intermediates(const ModelResult& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        OutTable t;
        t.name = "prevalence_by_year";
        t.columns = {"type", "stage", "sex", "year", "survivors"};
        for (const auto& [key, arr] : m.prevalence.survivors)
            for (int y = 1; y <= 5; ++y)
                t.row({to_string(key.first.type), to_string(key.first.stage),
                       to_string(key.second), static_cast<double>(y),
                       round6(arr[static_cast<std::size_t>(y - 1)])});
        write_table(t, dir, {"csv"});
    }
    {
        OutTable t;
        t.name = "case_matrix";
        t.columns = {"population", "type", "stage", "sex", "cases"};
        for (const auto& [key, n] : m.cases.count)
            t.row({to_string(std::get<0>(key)), to_string(std::get<1>(key).type),
                   to_string(std::get<1>(key).stage), to_string(std::get<2>(key)),
                   round6(n)});
        write_table(t, dir, {"csv"});
    }
    {
        OutTable t;
        t.name = "calibration";
        t.columns = {"f1", "f2to5", "incident_deaths", "prevalent_deaths"};
        t.row({round6(m.factors.f1), round6(m.factors.f2to5),
               round6(m.deaths.incident_deaths), round6(m.deaths.prevalent_deaths)});
        write_table(t, dir, {"csv"});
    }
}

// ---------------------------------------------------------------------------
// Simulation report
// ---------------------------------------------------------------------------

inline OutTable build_intervals(const SimulationSummary& s) {
    OutTable t;
    t.name = "table2_intervals";
    t.columns = {"cell",  "value", "mean",       "lower", "upper",
                 "sd",    "iterations", "seed",  "lower_pct", "upper_pct"};
    for (const auto& c : s.cells)
        t.row({c.name, round6(c.base), round6(c.mean), round6(c.lower), round6(c.upper),
               round6(c.sd), static_cast<double>(s.iterations),
               static_cast<double>(s.seed), round6(s.lower_pct), round6(s.upper_pct)});
    return t;
}

inline void emit_simulation(const SimulationSummary& s, const std::filesystem::path& dir,
                            const std::set<std::string>& formats) {
    std::filesystem::create_directories(dir);
    write_table(build_intervals(s), dir, formats);
}

} // namespace burden::report
