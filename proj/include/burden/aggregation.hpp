#pragma once

#include <map>
#include <optional>
#include <vector>

#include "burden/bundle.hpp"
#include "burden/costing.hpp"
#include "burden/epidemiology.hpp"
#include "burden/health_loss.hpp"
#include "burden/types.hpp"

namespace burden {

struct BurdenCell {
    Population pop{};
    StageKey key{};
    double cases_male = 0;
    double cases_female = 0;
    double cases = 0;
    MoneyBySector cost; // national totals; coverage shares already embedded
    double weighted = 0; // == sum of the three sector columns
};

struct DeathRow {
    double deaths = 0;
    double deaths_male = 0;
    double deaths_female = 0;
    MoneyBySector cost;
    double weighted = 0;
};

struct BurdenReport {
    std::vector<BurdenCell> cells; // 12 cells in reporting order
    DeathRow incident_death;
    DeathRow prevalent_death;
    MoneyBySector incident_subtotal;  // patient-care cost, incident cells
    MoneyBySector prevalent_subtotal; // patient-care cost, prevalent cells
    MoneyBySector total;              // subtotals + death rows
    double grand_total = 0;
    std::optional<double> share_of_health_expenditure;
    std::optional<double> share_of_gdp;
    HealthLossSummary health_loss;
};

struct CompositionRow {
    Population pop{};
    StageKey key{};
    Category category{};
    double share_weighted = 0;
    MoneyBySector share_by_sector;
    bool defined = true; // false when the card total is zero
};

// ---------------------------------------------------------------------------

// National cost of one cell: patients split across sectors by coverage
// shares, each sector billed at its own per-patient cost. The weighted total
// is then simply the sum of the three sector columns.
inline MoneyBySector cell_burden(double cases, const PatientCostCard& card,
                                 const SectorShares& sh) {
    return {cases * sh.public_share * card.total.public_cost,
            cases * sh.social_security * card.total.social_cost,
            cases * sh.private_share * card.total.private_cost};
}

inline double sector_sum(const MoneyBySector& m) {
    return m.public_cost + m.social_cost + m.private_cost;
}

// Default prevalent-death stage mix when the bundle ships none: prevalent
// cases weighted by their next-year conditional death hazard, year by year.
inline std::map<StageKey, double>
default_prevalent_death_mix(const PrevalenceByYear& prevalence,
                            const CalibrationFactors& f, const SurvivalTable& surv) {
    std::map<StageKey, double> w;
    for (auto& [key, arr] : prevalence.survivors) {
        StageKey k = key.first;
        for (int y = 1; y <= 5; ++y) {
            double n = (y == 1 ? f.f1 : f.f2to5) * arr[static_cast<std::size_t>(y - 1)];
            double s_now = surv.at(k, y);
            // past the table's horizon the last observed hazard is repeated
            double s_next = surv.at(k, std::min(y + 1, 5));
            double s_prev = surv.at(k, std::max(y - 1, 1));
            double cond = y < 5 ? (s_now > 0 ? s_next / s_now : 0.0)
                                : (s_prev > 0 ? s_now / s_prev : 0.0);
            w[k] += n * (1.0 - cond);
        }
    }
    double total = 0;
    for (auto& [k, v] : w)
        total += v;
    if (total > 0)
        for (auto& [k, v] : w)
            v /= total;
    return w;
}

inline std::pair<DeathRow, DeathRow>
death_burden(const DeathSplit& split, const DeathCostCard& costs,
             const std::map<StageKey, double>& prevalent_mix, const SectorShares& sh) {
    double mix_sum = 0;
    for (auto& [k, v] : prevalent_mix)
        mix_sum += v;
    if (std::abs(mix_sum - 1.0) > 1e-9)
        throw std::invalid_argument("death_burden: prevalent death mix does not sum to 1");

    DeathRow inc;
    inc.deaths = split.incident_deaths;
    inc.deaths_male = split.incident_by_sex.at(Sex::Male);
    inc.deaths_female = split.incident_by_sex.at(Sex::Female);
    inc.cost = {split.incident_deaths * sh.public_share * costs.incident.public_cost,
                split.incident_deaths * sh.social_security * costs.incident.social_cost,
                split.incident_deaths * sh.private_share * costs.incident.private_cost};
    inc.weighted = sector_sum(inc.cost);

    DeathRow prev;
    prev.deaths = split.prevalent_deaths;
    prev.deaths_male = split.prevalent_by_sex.at(Sex::Male);
    prev.deaths_female = split.prevalent_by_sex.at(Sex::Female);
    for (auto& [k, m] : prevalent_mix) {
        const MoneyBySector& c = costs.prevalent.at(k);
        double n = split.prevalent_deaths * m;
        prev.cost += MoneyBySector{n * sh.public_share * c.public_cost,
                                   n * sh.social_security * c.social_cost,
                                   n * sh.private_share * c.private_cost};
    }
    prev.weighted = sector_sum(prev.cost);
    return {inc, prev};
}

inline BurdenReport
assemble_report(const CaseMatrix& cases,
                const std::map<std::pair<Population, StageKey>, PatientCostCard>& cards,
                const DeathSplit& split, const DeathCostCard& death_costs,
                const std::map<StageKey, double>& prevalent_mix,
                const HealthLossSummary& health_loss, const ScenarioManifest& manifest) {
    BurdenReport r;
    const SectorShares& sh = manifest.sector_shares;
    for (Population pop : all_populations)
        for (StageKey k : all_stage_keys) {
            BurdenCell c;
            c.pop = pop;
            c.key = k;
            c.cases_male = cases.at(pop, k, Sex::Male);
            c.cases_female = cases.at(pop, k, Sex::Female);
            c.cases = c.cases_male + c.cases_female;
            c.cost = cell_burden(c.cases, cards.at({pop, k}), sh);
            c.weighted = sector_sum(c.cost);
            (pop == Population::Incident ? r.incident_subtotal : r.prevalent_subtotal) +=
                c.cost;
            r.cells.push_back(c);
        }
    auto [inc_d, prev_d] = death_burden(split, death_costs, prevalent_mix, sh);
    r.incident_death = inc_d;
    r.prevalent_death = prev_d;
    r.total = r.incident_subtotal + r.prevalent_subtotal + inc_d.cost + prev_d.cost;
    r.grand_total = sector_sum(r.total);
    if (manifest.denominators.total_health_expenditure_usd)
        r.share_of_health_expenditure =
            r.grand_total / *manifest.denominators.total_health_expenditure_usd;
    if (manifest.denominators.gdp_usd)
        r.share_of_gdp = r.grand_total / *manifest.denominators.gdp_usd;
    r.health_loss = health_loss;
    return r;
}

inline std::vector<CompositionRow> composition_breakdown(
    const std::map<std::pair<Population, StageKey>, PatientCostCard>& cards,
    const SectorShares& sh) {
    std::vector<CompositionRow> out;
    for (Population pop : all_populations)
        for (StageKey k : all_stage_keys) {
            const PatientCostCard& card = cards.at({pop, k});
            double w = card.weighted;
            for (auto& [cat, v] : card.by_category) {
                CompositionRow row;
                row.pop = pop;
                row.key = k;
                row.category = cat;
                if (w > 0) {
                    row.share_weighted = v.weighted(sh) / w;
                    auto safe = [](double a, double b) { return b > 0 ? a / b : 0.0; };
                    row.share_by_sector = {
                        safe(v.public_cost, card.total.public_cost),
                        safe(v.social_cost, card.total.social_cost),
                        safe(v.private_cost, card.total.private_cost)};
                } else {
                    row.defined = false;
                }
                out.push_back(row);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Full deterministic pipeline
// ---------------------------------------------------------------------------

struct ModelResult {
    CaseMatrix cases; // incident + prevalent slices
    PrevalenceByYear prevalence;
    CalibrationFactors factors;
    DeathSplit deaths;
    std::map<std::pair<Population, StageKey>, PatientCostCard> cards;
    DeathCostCard death_costs;
    std::map<StageKey, double> prevalent_death_mix;
    HealthLossSummary health_loss;
    BurdenReport report;
};

inline ModelResult run_model(const ScenarioBundle& b) {
    ModelResult m;
    m.cases = decompose_cases(b.epi.incidence, b.stages, b.epi.sex_split_incident);
    m.prevalence = roll_forward(m.cases, b.survival);
    auto [prev, factors] = calibrate_prevalence(m.prevalence, b.epi);
    m.factors = factors;
    m.cases.merge(prev);
    m.deaths = split_deaths(b.epi);
    for (Population pop : all_populations)
        for (StageKey k : all_stage_keys)
            m.cards[{pop, k}] = annual_patient_cost(pop, k, b);
    m.death_costs = build_death_cost_card(b, m.cards);
    m.prevalent_death_mix =
        b.prevalent_death_mix
            ? *b.prevalent_death_mix
            : default_prevalent_death_mix(m.prevalence, m.factors, b.survival);
    m.health_loss = compute_daly(b.life_table, m.cases, b.disability);
    m.report = assemble_report(m.cases, m.cards, m.deaths, m.death_costs,
                               m.prevalent_death_mix, m.health_loss, b.manifest);
    return m;
}

} // namespace burden
