#pragma once

#include <map>

#include "burden/bundle.hpp"
#include "burden/epidemiology.hpp"
#include "burden/types.hpp"

namespace burden {

struct HealthLossSummary {
    std::map<Sex, double> yll_by_sex;
    std::map<Sex, double> yld_by_sex;
    std::map<Sex, double> daly_by_sex;
    // YLD per (population, type+stage, sex)
    std::map<std::tuple<Population, StageKey, Sex>, double> yld_cells;

    double yll_total() const { return sum(yll_by_sex); }
    double yld_total() const { return sum(yld_by_sex); }
    double daly_total() const { return sum(daly_by_sex); }

  private:
    static double sum(const std::map<Sex, double>& m) {
        double t = 0;
        for (auto& [s, v] : m)
            t += v;
        return t;
    }
};

// YLL per sex = sum over life-table rows of deaths x life expectancy. The
// deaths-by-age table is consumed directly; model deaths are not spread over
// ages.
inline std::map<Sex, double> compute_yll(const LifeTableDeaths& table) {
    std::map<Sex, double> yll = {{Sex::Male, 0.0}, {Sex::Female, 0.0}};
    for (const auto& row : table)
        yll[row.sex] += row.deaths * row.life_expectancy;
    return yll;
}

// YLD cell = cases x disability weight for the cell's (population, stage
// class); returns the per-cell breakdown alongside per-sex sums.
inline std::pair<std::map<Sex, double>,
                 std::map<std::tuple<Population, StageKey, Sex>, double>>
compute_yld(const CaseMatrix& cases, const DisabilityWeights& dw) {
    std::map<Sex, double> by_sex = {{Sex::Male, 0.0}, {Sex::Female, 0.0}};
    std::map<std::tuple<Population, StageKey, Sex>, double> cells;
    for (auto& [key, n] : cases.count) {
        auto [pop, k, sex] = key;
        double v = n * dw.at(pop, stage_class(k));
        cells[key] = v;
        by_sex[sex] += v;
    }
    return {by_sex, cells};
}

inline HealthLossSummary compute_daly(const LifeTableDeaths& table,
                                      const CaseMatrix& cases,
                                      const DisabilityWeights& dw) {
    HealthLossSummary h;
    h.yll_by_sex = compute_yll(table);
    auto [yld, cells] = compute_yld(cases, dw);
    h.yld_by_sex = yld;
    h.yld_cells = std::move(cells);
    for (Sex s : all_sexes)
        h.daly_by_sex[s] = h.yll_by_sex[s] + h.yld_by_sex[s];
    return h;
}

} // namespace burden
