#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "burden/bundle.hpp"
#include "burden/types.hpp"

namespace burden {

inline constexpr const char* kWardResource = "general_ward";
inline constexpr const char* kPalliativeResource = "palliative_care";

struct PatientCostCard {
    Population pop{};
    StageKey key{};
    std::map<Category, MoneyBySector> by_category;
    MoneyBySector total;
    double weighted = 0; // derived last via the sector shares

    PatientCostCard scaled(double k) const {
        PatientCostCard out = *this;
        for (auto& [c, v] : out.by_category)
            v = k * v;
        out.total = k * total;
        out.weighted = k * weighted;
        return out;
    }
};

struct DeathCostCard {
    MoneyBySector incident;                      // stage-invariant
    std::map<StageKey, MoneyBySector> prevalent; // per (type, stage)
};

// ---------------------------------------------------------------------------

inline double weighted_unit_cost(const MoneyBySector& v, const SectorShares& sh) {
    return v.weighted(sh);
}

// Sum of quantity x unit cost over the given profile rows, accumulated per
// sector into each resource's composition category.
inline std::map<Category, MoneyBySector>
phase_resource_cost(const std::vector<ProfileRow>& rows, const UnitCostTable& costs) {
    std::map<Category, MoneyBySector> out;
    for (const auto& r : rows) {
        auto it = costs.find(r.resource);
        if (it == costs.end())
            throw std::invalid_argument("phase_resource_cost: unresolved resource '" +
                                        r.resource + "'");
        out[it->second.category] += r.quantity * it->second.cost;
    }
    return out;
}

// The per-regimen cost column is each regimen's contribution to the stage
// average, so dividing the named sum by the covered share extrapolates the
// unnamed residual bucket.
inline double extrapolate_drug_cost(const std::vector<Regimen>& regimens) {
    double cost = 0, share = 0;
    for (const auto& r : regimens) {
        cost += r.cost_per_patient_year;
        share += r.share_of_drug_cost;
    }
    if (!(share > 0))
        throw std::invalid_argument("extrapolate_drug_cost: zero covered share");
    return cost / share;
}

// Expected adverse-event cost per patient-year for one regimen-class mix.
// Mixes may sum to < 1: the remainder receives no systemic therapy and
// contributes no adverse-event cost.
inline MoneyBySector adverse_event_cost(const std::map<std::string, double>& mix,
                                        const AdverseEventInputs& ae) {
    MoneyBySector out;
    for (auto& [cls, share] : mix) {
        MoneyBySector cls_cost;
        for (const auto& ev : ae.events) {
            auto it = ae.rates.find({ev, cls});
            if (it == ae.rates.end())
                continue;
            cls_cost += it->second * ae.costs.at(ev);
        }
        out += share * cls_cost;
    }
    return out;
}

inline PatientCostCard annual_patient_cost(Population pop, StageKey key,
                                           const ScenarioBundle& b) {
    PatientCostCard card;
    card.pop = pop;
    card.key = key;

    std::vector<ProfileRow> rows;
    for (const auto& r : b.profiles)
        if (r.pop == pop && r.key == key)
            rows.push_back(r);
    card.by_category = phase_resource_cost(rows, b.unit_costs);

    // drug cost: bundle value is the reproduction path; regimen
    // extrapolation is the fallback estimator
    double drug = 0;
    auto it = b.drug_costs.find({pop, key});
    if (it != b.drug_costs.end()) {
        if (!it->second.regimens.empty() && it->second.cost_per_patient_year == 0 &&
            !it->second.drug_share_of_total)
            drug = extrapolate_drug_cost(it->second.regimens);
        else
            drug = it->second.cost_per_patient_year;
    }
    if (drug > 0)
        card.by_category[Category::Drugs] += MoneyBySector{drug, drug, drug};

    auto mix = b.adverse_events.class_mix.find({pop, key});
    if (mix != b.adverse_events.class_mix.end() && !mix->second.empty()) {
        MoneyBySector aec = adverse_event_cost(mix->second, b.adverse_events);
        if (aec != MoneyBySector{})
            card.by_category[Category::AdverseEvents] += aec;
    }

    for (auto& [c, v] : card.by_category)
        card.total += v;
    card.weighted = card.total.weighted(b.manifest.sector_shares);
    return card;
}

// Incident deaths cost ward days only (the published per-death card
// reconciles to ward days alone).
inline MoneyBySector incident_death_cost(const DeathCostInputs& in,
                                         const UnitCostTable& costs) {
    auto it = costs.find(kWardResource);
    if (it == costs.end())
        throw std::invalid_argument("incident_death_cost: missing ward resource");
    return in.incident_ward_days * it->second.cost;
}

// Prevalent deaths: published per-stage overrides win; otherwise half a
// treatment year plus palliative care plus ward days.
inline MoneyBySector prevalent_death_cost(StageKey key, const PatientCostCard& card,
                                          const DeathCostInputs& in,
                                          const UnitCostTable& costs) {
    auto ov = in.prevalent_overrides.find(key);
    if (ov != in.prevalent_overrides.end())
        return ov->second;
    MoneyBySector out = in.treatment_fraction * card.total;
    if (auto it = costs.find(kPalliativeResource); it != costs.end())
        out += in.palliative_units * it->second.cost;
    if (auto it = costs.find(kWardResource); it != costs.end())
        out += in.ward_days * it->second.cost;
    return out;
}

inline DeathCostCard
build_death_cost_card(const ScenarioBundle& b,
                      const std::map<std::pair<Population, StageKey>,
                                     PatientCostCard>& cards) {
    DeathCostCard d;
    d.incident = incident_death_cost(b.death_costs, b.unit_costs);
    for (StageKey k : all_stage_keys)
        d.prevalent[k] = prevalent_death_cost(k, cards.at({Population::Prevalent, k}),
                                              b.death_costs, b.unit_costs);
    return d;
}

} // namespace burden
