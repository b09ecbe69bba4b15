#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "burden/csv.hpp"
#include "burden/manifest.hpp"
#include "burden/types.hpp"

namespace burden {

// ---------------------------------------------------------------------------
// Input data types
// ---------------------------------------------------------------------------

struct McDefaults {
    int iterations = 10000;
    std::uint64_t seed = 0;
    double lower_pct = 2.5;
    double upper_pct = 97.5;
    auto operator<=>(const McDefaults&) const = default;
};

struct Denominators {
    std::optional<double> gdp_usd;
    std::optional<double> total_health_expenditure_usd;
    auto operator<=>(const Denominators&) const = default;
};

struct ScenarioManifest {
    std::string scenario_name;
    int reference_year = 0;
    double exchange_rate = 1.0; // ARS per USD
    SectorShares sector_shares;
    McDefaults mc_defaults;
    Denominators denominators;
};

struct EpiInputs {
    double incidence = 0;
    double prevalence_1y = 0;
    std::optional<double> prevalence_3y;
    double prevalence_5y = 0;
    double deaths = 0;
    double mi_ratio = 1;
    double sex_split_incident = 0.5; // fraction male
    std::optional<double> sex_split_prevalent_deaths;
};

struct StageDistribution {
    std::map<CancerType, double> type_shares;
    std::map<StageKey, double> stage_shares; // within each type
};

struct SurvivalTable {
    // cumulative survival probability, years 1..5 since diagnosis
    std::map<StageKey, std::array<double, 5>> probability;

    double at(StageKey k, int year) const {
        return probability.at(k).at(static_cast<std::size_t>(year - 1));
    }
};

struct LifeTableRow {
    Sex sex;
    std::string age_group; // opaque label
    double deaths = 0;
    double life_expectancy = 0;
};
using LifeTableDeaths = std::vector<LifeTableRow>;

struct DisabilityWeights {
    std::map<std::pair<Population, StageClass>, double> weight;

    double at(Population p, StageClass c) const {
        auto it = weight.find({p, c});
        if (it == weight.end())
            throw ParseError("missing disability weight for (" + to_string(p) +
                             ", " + to_string(c) + ")");
        return it->second;
    }
};

struct UnitCost {
    MoneyBySector cost;
    Category category = Category::Diagnosis;
};
using UnitCostTable = std::map<std::string, UnitCost>;

enum class Phase { DiagnosisStaging, TreatmentFollowup };

inline std::string to_string(Phase p) {
    return p == Phase::DiagnosisStaging ? "diagnosis_staging" : "treatment_followup";
}
inline Phase parse_phase(const std::string& s) {
    if (s == "diagnosis_staging") return Phase::DiagnosisStaging;
    if (s == "treatment_followup") return Phase::TreatmentFollowup;
    throw ParseError("unknown phase token '" + s + "'");
}

struct ProfileRow {
    Population pop;
    StageKey key;
    Phase phase;
    std::string resource;
    double quantity = 0; // expected amount per patient-year
};
using ResourceProfile = std::vector<ProfileRow>;

struct Regimen {
    std::string name;
    double share_of_drug_cost = 0;
    double cost_per_patient_year = 0;
    auto operator<=>(const Regimen&) const = default;
};

struct DrugCostEntry {
    double cost_per_patient_year = 0; // identical across sectors
    std::optional<double> drug_share_of_total;
    std::vector<Regimen> regimens;
};
using DrugCostInputs = std::map<std::pair<Population, StageKey>, DrugCostEntry>;

inline const std::array<std::string, 4> regimen_classes = {
    "ALK", "antiEGFR", "Immunotherapy", "Chemotherapy"};

struct AdverseEventInputs {
    std::vector<std::string> events;
    std::map<std::pair<std::string, std::string>, double> rates; // (event, class)
    std::map<std::string, MoneyBySector> costs;
    // shares over regimen classes; may sum to < 1 (remainder: no systemic
    // therapy, hence no adverse-event cost)
    std::map<std::pair<Population, StageKey>, std::map<std::string, double>> class_mix;
};

struct DeathCostInputs {
    double incident_ward_days = 0;
    double treatment_fraction = 0; // prevalent formula
    double palliative_units = 0;
    double ward_days = 0;
    std::map<StageKey, MoneyBySector> prevalent_overrides;
};

struct ScenarioBundle {
    ScenarioManifest manifest;
    EpiInputs epi;
    StageDistribution stages;
    SurvivalTable survival;
    LifeTableDeaths life_table;
    DisabilityWeights disability;
    UnitCostTable unit_costs;
    ResourceProfile profiles;
    DrugCostInputs drug_costs;
    AdverseEventInputs adverse_events;
    DeathCostInputs death_costs;
    std::optional<std::map<StageKey, double>> prevalent_death_mix;
    std::vector<std::string> load_warnings;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

inline csv::Table table(const std::filesystem::path& dir, const std::string& name) {
    auto p = dir / name;
    if (!std::filesystem::exists(p))
        throw ParseError("missing mandatory table: " + name);
    return csv::Table::read_file(p.string());
}

inline std::optional<csv::Table> optional_table(const std::filesystem::path& dir,
                                                const std::string& name) {
    auto p = dir / name;
    if (!std::filesystem::exists(p))
        return std::nullopt;
    return csv::Table::read_file(p.string());
}

// Published share tables carry 2-decimal rounding; nudge groups whose sum is
// off by at most `slack` back onto an exact sum of one.
template <typename Map>
bool renormalize(Map& shares, double slack, std::vector<std::string>& warnings,
                 const std::string& what) {
    double sum = 0;
    for (auto& [k, v] : shares)
        sum += v;
    if (std::abs(sum - 1.0) <= 1e-12)
        return true;
    if (std::abs(sum - 1.0) <= slack && sum > 0) {
        for (auto& [k, v] : shares)
            v /= sum;
        warnings.push_back(what + ": shares summed to " + std::to_string(sum) +
                           "; renormalized");
        return true;
    }
    return false; // validator reports the violation
}

} // namespace detail

inline ScenarioBundle load_bundle(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path dir(path);
    if (!fs::exists(dir) || !fs::is_directory(dir))
        throw ParseError("bundle directory not found: " + path);

    ScenarioBundle b;

    // manifest
    auto mpath = dir / "manifest.toml";
    if (!fs::exists(mpath))
        throw ParseError("missing mandatory table: manifest.toml");
    ManifestFile mf = ManifestFile::read_file(mpath.string());
    b.manifest.scenario_name = mf.text("scenario_name");
    b.manifest.reference_year = static_cast<int>(mf.number("reference_year"));
    b.manifest.exchange_rate = mf.number("exchange_rate");
    b.manifest.sector_shares.public_share = mf.number("sector_shares.public");
    b.manifest.sector_shares.social_security = mf.number("sector_shares.social_security");
    b.manifest.sector_shares.private_share = mf.number("sector_shares.private");
    b.manifest.mc_defaults.iterations = static_cast<int>(mf.number("mc_defaults.iterations"));
    b.manifest.mc_defaults.seed = static_cast<std::uint64_t>(mf.number("mc_defaults.seed"));
    auto pct = mf.number_array("mc_defaults.percentiles");
    if (pct.size() != 2)
        throw ParseError("manifest mc_defaults.percentiles: expected two values");
    b.manifest.mc_defaults.lower_pct = pct[0];
    b.manifest.mc_defaults.upper_pct = pct[1];
    b.manifest.denominators.gdp_usd = mf.optional_number("denominators.gdp_usd");
    b.manifest.denominators.total_health_expenditure_usd =
        mf.optional_number("denominators.total_health_expenditure_usd");
    {
        std::map<int, double> sh = {{0, b.manifest.sector_shares.public_share},
                                    {1, b.manifest.sector_shares.social_security},
                                    {2, b.manifest.sector_shares.private_share}};
        if (detail::renormalize(sh, 1e-4, b.load_warnings, "sector_shares")) {
            b.manifest.sector_shares = {sh[0], sh[1], sh[2]};
        }
    }

    // epi.csv
    {
        auto t = detail::table(dir, "epi.csv");
        if (t.size() != 1)
            throw ParseError(t.path() + ": expected exactly one data row");
        b.epi.incidence = t.number(0, "incidence");
        b.epi.prevalence_1y = t.number(0, "prevalence_1y");
        b.epi.prevalence_3y = t.optional_number(0, "prevalence_3y");
        b.epi.prevalence_5y = t.number(0, "prevalence_5y");
        b.epi.deaths = t.number(0, "deaths");
        b.epi.mi_ratio = t.number(0, "mi_ratio");
        b.epi.sex_split_incident = t.number(0, "sex_split_incident");
        b.epi.sex_split_prevalent_deaths = t.optional_number(0, "sex_split_prevalent_deaths");
    }

    // stage_distribution.csv
    {
        auto t = detail::table(dir, "stage_distribution.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto type = parse_cancer_type(t.text(i, "type"));
            auto stage_tok = t.text(i, "stage");
            double share = t.fraction(i, "share");
            if (stage_tok == "ALL")
                b.stages.type_shares[type] = share;
            else {
                auto stage = parse_stage(stage_tok);
                if (!stage_valid(type, stage))
                    throw ParseError(t.where(i, "stage") + ": stage " + stage_tok +
                                     " invalid for " + to_string(type));
                b.stages.stage_shares[{type, stage}] = share;
            }
        }
        detail::renormalize(b.stages.type_shares, 1e-4, b.load_warnings, "type_shares");
        for (CancerType type : {CancerType::NSCLC, CancerType::SCLC}) {
            std::map<StageKey, double> group;
            for (auto& [k, v] : b.stages.stage_shares)
                if (k.type == type)
                    group[k] = v;
            if (detail::renormalize(group, 1e-4, b.load_warnings,
                                    "stage shares " + to_string(type)))
                for (auto& [k, v] : group)
                    b.stages.stage_shares[k] = v;
        }
    }

    // survival.csv
    {
        auto t = detail::table(dir, "survival.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto type = parse_cancer_type(t.text(i, "type"));
            auto stage = parse_stage(t.text(i, "stage"));
            int year = static_cast<int>(t.number(i, "year"));
            if (year < 1 || year > 5)
                throw ParseError(t.where(i, "year") + ": year must be 1..5");
            b.survival.probability[{type, stage}][static_cast<std::size_t>(year - 1)] =
                t.number(i, "probability");
        }
    }

    // life_table.csv
    {
        auto t = detail::table(dir, "life_table.csv");
        for (std::size_t i = 0; i < t.size(); ++i)
            b.life_table.push_back({parse_sex(t.text(i, "sex")), t.text(i, "age_group"),
                                    t.number(i, "deaths"), t.number(i, "life_expectancy")});
    }

    // disability_weights.csv
    {
        auto t = detail::table(dir, "disability_weights.csv");
        for (std::size_t i = 0; i < t.size(); ++i)
            b.disability.weight[{parse_population(t.text(i, "population")),
                                 parse_stage_class(t.text(i, "stage_class"))}] =
                t.number(i, "weight");
    }

    // unit_costs.csv — canonical currency is USD; ARS rows convert at load
    {
        auto t = detail::table(dir, "unit_costs.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::string cur = t.text(i, "currency");
            double k;
            if (cur == "USD")
                k = 1.0;
            else if (cur == "ARS")
                k = 1.0 / b.manifest.exchange_rate;
            else if (cur.empty())
                throw ParseError(t.where(i, "currency") + ": currency field absent");
            else
                throw ParseError(t.where(i, "currency") + ": unknown currency '" + cur + "'");
            UnitCost uc;
            uc.cost = {k * t.number(i, "public"), k * t.number(i, "social"),
                       k * t.number(i, "private")};
            uc.category = parse_category(t.text(i, "category"));
            b.unit_costs[t.text(i, "resource")] = uc;
        }
    }

    // resource_profiles.csv
    {
        auto t = detail::table(dir, "resource_profiles.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            ProfileRow r;
            r.pop = parse_population(t.text(i, "population"));
            r.key = {parse_cancer_type(t.text(i, "type")), parse_stage(t.text(i, "stage"))};
            r.phase = parse_phase(t.text(i, "phase"));
            r.resource = t.text(i, "resource");
            r.quantity = t.number(i, "quantity");
            if (!b.unit_costs.count(r.resource))
                throw ParseError(t.where(i, "resource") + ": unknown resource '" +
                                 r.resource + "'");
            b.profiles.push_back(std::move(r));
        }
    }

    // drug_costs.csv + regimens.csv
    {
        auto t = detail::table(dir, "drug_costs.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::pair<Population, StageKey> key = {
                parse_population(t.text(i, "population")),
                {parse_cancer_type(t.text(i, "type")), parse_stage(t.text(i, "stage"))}};
            DrugCostEntry e;
            e.cost_per_patient_year = t.number(i, "cost_per_patient_year");
            e.drug_share_of_total = t.optional_number(i, "drug_share_of_total");
            b.drug_costs[key] = e;
        }
        if (auto rt = detail::optional_table(dir, "regimens.csv")) {
            for (std::size_t i = 0; i < rt->size(); ++i) {
                std::pair<Population, StageKey> key = {
                    parse_population(rt->text(i, "population")),
                    {parse_cancer_type(rt->text(i, "type")),
                     parse_stage(rt->text(i, "stage"))}};
                b.drug_costs[key].regimens.push_back(
                    {rt->text(i, "regimen"), rt->fraction(i, "share_of_drug_cost"),
                     rt->number(i, "cost_per_patient_year")});
            }
        }
    }

    // adverse events
    {
        auto t = detail::table(dir, "ae_rates.csv");
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::string ev = t.text(i, "event");
            std::string cl = t.text(i, "regimen_class");
            if (std::find(regimen_classes.begin(), regimen_classes.end(), cl) ==
                regimen_classes.end())
                throw ParseError(t.where(i, "regimen_class") + ": unknown class '" + cl + "'");
            if (std::find(b.adverse_events.events.begin(), b.adverse_events.events.end(),
                          ev) == b.adverse_events.events.end())
                b.adverse_events.events.push_back(ev);
            b.adverse_events.rates[{ev, cl}] = t.number(i, "rate");
        }
        auto c = detail::table(dir, "ae_costs.csv");
        for (std::size_t i = 0; i < c.size(); ++i)
            b.adverse_events.costs[c.text(i, "event")] = {
                c.number(i, "public"), c.number(i, "social"), c.number(i, "private")};
        auto m = detail::table(dir, "class_mix.csv");
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::pair<Population, StageKey> key = {
                parse_population(m.text(i, "population")),
                {parse_cancer_type(m.text(i, "type")), parse_stage(m.text(i, "stage"))}};
            b.adverse_events.class_mix[key][m.text(i, "regimen_class")] =
                m.fraction(i, "share");
        }
    }

    // death costs
    {
        auto t = detail::table(dir, "death_costs.csv");
        if (t.size() != 1)
            throw ParseError(t.path() + ": expected exactly one data row");
        b.death_costs.incident_ward_days = t.number(0, "incident_ward_days");
        b.death_costs.treatment_fraction = t.number(0, "treatment_fraction");
        b.death_costs.palliative_units = t.number(0, "palliative_units");
        b.death_costs.ward_days = t.number(0, "ward_days");
        if (auto ov = detail::optional_table(dir, "death_cost_overrides.csv")) {
            for (std::size_t i = 0; i < ov->size(); ++i)
                b.death_costs.prevalent_overrides[{parse_cancer_type(ov->text(i, "type")),
                                                   parse_stage(ov->text(i, "stage"))}] = {
                    ov->number(i, "public"), ov->number(i, "social"),
                    ov->number(i, "private")};
        }
    }

    // prevalent death mix (optional; aggregation derives a default otherwise)
    if (auto t = detail::optional_table(dir, "prevalent_death_mix.csv")) {
        std::map<StageKey, double> mix;
        for (std::size_t i = 0; i < t->size(); ++i)
            mix[{parse_cancer_type(t->text(i, "type")), parse_stage(t->text(i, "stage"))}] =
                t->fraction(i, "share");
        detail::renormalize(mix, 1e-4, b.load_warnings, "prevalent_death_mix");
        b.prevalent_death_mix = mix;
    }

    return b;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline ValidationReport validate_bundle(const ScenarioBundle& b) {
    ValidationReport r;
    r.warnings = b.load_warnings;
    auto err = [&](const std::string& m) { r.errors.push_back(m); };
    auto warn = [&](const std::string& m) { r.warnings.push_back(m); };

    const auto& m = b.manifest;
    if (!(m.exchange_rate > 0))
        err("manifest: exchange_rate must be positive");
    if (!(m.mc_defaults.lower_pct > 0 && m.mc_defaults.upper_pct < 100 &&
          m.mc_defaults.lower_pct < m.mc_defaults.upper_pct))
        err("manifest: percentile pair must be strictly increasing within (0,100)");
    if (m.mc_defaults.iterations < 1)
        err("manifest: iterations must be >= 1");
    const auto& sh = m.sector_shares;
    for (double v : {sh.public_share, sh.social_security, sh.private_share})
        if (v < 0 || v > 1)
            err("sector_shares: share out of [0,1]");
    if (std::abs(sh.sum() - 1.0) > 1e-9)
        err("sector_shares: shares do not sum to 1");

    const auto& e = b.epi;
    if (e.incidence < 0 || e.prevalence_1y < 0 || e.prevalence_5y < 0 || e.deaths < 0)
        err("epi: counts must be nonnegative");
    if (e.prevalence_1y > e.prevalence_5y)
        err("epi: prevalence_1y exceeds prevalence_5y");
    if (!(e.mi_ratio > 0 && e.mi_ratio <= 1))
        err("epi: mi_ratio must be in (0,1]");
    if (e.sex_split_incident < 0 || e.sex_split_incident > 1)
        err("epi: sex_split_incident out of [0,1]");

    double ts = 0;
    for (auto& [t, v] : b.stages.type_shares)
        ts += v;
    if (std::abs(ts - 1.0) > 1e-9)
        err("stage_distribution: type shares do not sum to 1");
    for (CancerType type : {CancerType::NSCLC, CancerType::SCLC}) {
        double s = 0;
        for (auto& [k, v] : b.stages.stage_shares)
            if (k.type == type)
                s += v;
        if (std::abs(s - 1.0) > 1e-9)
            err("stage_distribution: " + to_string(type) + " stage shares do not sum to 1");
    }

    for (StageKey k : all_stage_keys) {
        auto it = b.survival.probability.find(k);
        if (it == b.survival.probability.end()) {
            err("survival: missing (" + to_string(k.type) + ", " + to_string(k.stage) + ")");
            continue;
        }
        double prev = 1.0;
        for (double p : it->second) {
            if (p < 0 || p > 1)
                err("survival: probability out of [0,1] for " + to_string(k.type) + " " +
                    to_string(k.stage));
            if (p > prev + 1e-12)
                err("survival not monotone for " + to_string(k.type) + " " +
                    to_string(k.stage));
            prev = p;
        }
    }

    double lt_deaths = 0;
    std::map<Sex, double> last_le;
    for (const auto& row : b.life_table) {
        if (row.deaths < 0)
            err("life_table: negative deaths in " + row.age_group);
        if (row.life_expectancy < 0)
            err("life_table: negative life expectancy in " + row.age_group);
        lt_deaths += row.deaths;
        auto it = last_le.find(row.sex);
        if (it != last_le.end() && row.life_expectancy > it->second)
            warn("life_table: life expectancy not monotone at " + to_string(row.sex) +
                 " " + row.age_group);
        last_le[row.sex] = row.life_expectancy;
    }
    if (e.deaths > 0 && std::abs(lt_deaths - e.deaths) / e.deaths > 0.005)
        err("life_table: death totals disagree with epi deaths by more than 0.5%");

    for (Population p : all_populations)
        for (StageClass c : {StageClass::Localized, StageClass::Metastatic})
            if (!b.disability.weight.count({p, c}))
                err("disability_weights: missing (" + to_string(p) + ", " + to_string(c) + ")");
    for (auto& [k, w] : b.disability.weight)
        if (w < 0 || w > 1)
            err("disability_weights: weight out of [0,1]");

    for (auto& [res, uc] : b.unit_costs)
        if (uc.cost.public_cost < 0 || uc.cost.social_cost < 0 || uc.cost.private_cost < 0)
            err("unit_costs: negative cost for " + res);

    for (const auto& row : b.profiles) {
        if (row.quantity < 0)
            err("resource_profiles: negative quantity for " + row.resource);
        if (!b.unit_costs.count(row.resource))
            err("resource_profiles: unknown resource " + row.resource);
    }

    for (auto& [key, entry] : b.drug_costs) {
        if (entry.cost_per_patient_year < 0)
            err("drug_costs: negative cost for " + to_string(key.first) + " " +
                to_string(key.second.type) + " " + to_string(key.second.stage));
        double s = 0;
        for (const auto& reg : entry.regimens)
            s += reg.share_of_drug_cost;
        if (s > 1.0 + 1e-9)
            err("regimens: named shares exceed 1 for " + to_string(key.first) + " " +
                to_string(key.second.type) + " " + to_string(key.second.stage));
    }

    for (auto& [k, rate] : b.adverse_events.rates)
        if (rate < 0 || rate > 1)
            err("ae_rates: rate out of [0,1] for " + k.first);
    for (auto& [ev, c] : b.adverse_events.costs)
        if (c.public_cost < 0 || c.social_cost < 0 || c.private_cost < 0)
            err("ae_costs: negative cost for " + ev);
    for (auto& [key, mix] : b.adverse_events.class_mix) {
        double s = 0;
        for (auto& [cl, v] : mix) {
            if (v < 0)
                err("class_mix: negative share");
            s += v;
        }
        if (s > 1.0 + 1e-9)
            err("class_mix: shares exceed 1 for " + to_string(key.first) + " " +
                to_string(key.second.type) + " " + to_string(key.second.stage));
    }

    const auto& d = b.death_costs;
    if (d.incident_ward_days < 0 || d.treatment_fraction < 0 || d.palliative_units < 0 ||
        d.ward_days < 0)
        err("death_costs: negative value");
    for (auto& [k, c] : d.prevalent_overrides)
        if (c.public_cost < 0 || c.social_cost < 0 || c.private_cost < 0)
            err("death_cost_overrides: negative cost");

    if (b.prevalent_death_mix) {
        double s = 0;
        for (auto& [k, v] : *b.prevalent_death_mix) {
            if (v < 0)
                err("prevalent_death_mix: negative share");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9)
            err("prevalent_death_mix: shares do not sum to 1");
    }

    return r;
}

// ---------------------------------------------------------------------------
// Serialization (bundle round trip)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline void save_bundle(const ScenarioBundle& b, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path dir(path);
    fs::create_directories(dir);
    using detail::num;

    {
        std::ofstream out(dir / "manifest.toml");
        const auto& m = b.manifest;
        out << "scenario_name = \"" << m.scenario_name << "\"\n"
            << "reference_year = " << m.reference_year << "\n"
            << "exchange_rate = " << num(m.exchange_rate) << "\n\n[sector_shares]\n"
            << "public = " << num(m.sector_shares.public_share) << "\n"
            << "social_security = " << num(m.sector_shares.social_security) << "\n"
            << "private = " << num(m.sector_shares.private_share) << "\n\n[mc_defaults]\n"
            << "iterations = " << m.mc_defaults.iterations << "\n"
            << "seed = " << m.mc_defaults.seed << "\n"
            << "percentiles = [" << num(m.mc_defaults.lower_pct) << ", "
            << num(m.mc_defaults.upper_pct) << "]\n";
        if (m.denominators.gdp_usd || m.denominators.total_health_expenditure_usd) {
            out << "\n[denominators]\n";
            if (m.denominators.gdp_usd)
                out << "gdp_usd = " << num(*m.denominators.gdp_usd) << "\n";
            if (m.denominators.total_health_expenditure_usd)
                out << "total_health_expenditure_usd = "
                    << num(*m.denominators.total_health_expenditure_usd) << "\n";
        }
    }

    {
        csv::Writer w((dir / "epi.csv").string());
        w.row({"incidence", "prevalence_1y", "prevalence_3y", "prevalence_5y", "deaths",
               "mi_ratio", "sex_split_incident", "sex_split_prevalent_deaths"});
        w.row({num(b.epi.incidence), num(b.epi.prevalence_1y),
               b.epi.prevalence_3y ? num(*b.epi.prevalence_3y) : "",
               num(b.epi.prevalence_5y), num(b.epi.deaths), num(b.epi.mi_ratio),
               num(b.epi.sex_split_incident),
               b.epi.sex_split_prevalent_deaths ? num(*b.epi.sex_split_prevalent_deaths)
                                                : ""});
    }
    {
        csv::Writer w((dir / "stage_distribution.csv").string());
        w.row({"population", "type", "stage", "share"});
        for (auto& [t, v] : b.stages.type_shares)
            w.row({"incident", to_string(t), "ALL", num(v)});
        for (auto& [k, v] : b.stages.stage_shares)
            w.row({"incident", to_string(k.type), to_string(k.stage), num(v)});
    }
    {
        csv::Writer w((dir / "survival.csv").string());
        w.row({"type", "stage", "year", "probability"});
        for (auto& [k, probs] : b.survival.probability)
            for (int y = 1; y <= 5; ++y)
                w.row({to_string(k.type), to_string(k.stage), std::to_string(y),
                       num(probs[static_cast<std::size_t>(y - 1)])});
    }
    {
        csv::Writer w((dir / "life_table.csv").string());
        w.row({"sex", "age_group", "deaths", "life_expectancy"});
        for (const auto& r : b.life_table)
            w.row({to_string(r.sex), r.age_group, num(r.deaths), num(r.life_expectancy)});
    }
    {
        csv::Writer w((dir / "disability_weights.csv").string());
        w.row({"population", "stage_class", "weight"});
        for (auto& [k, v] : b.disability.weight)
            w.row({to_string(k.first), to_string(k.second), num(v)});
    }
    {
        csv::Writer w((dir / "unit_costs.csv").string());
        w.row({"resource", "category", "public", "social", "private", "currency"});
        for (auto& [res, uc] : b.unit_costs)
            w.row({res, to_string(uc.category), num(uc.cost.public_cost),
                   num(uc.cost.social_cost), num(uc.cost.private_cost), "USD"});
    }
    {
        csv::Writer w((dir / "resource_profiles.csv").string());
        w.row({"population", "type", "stage", "phase", "resource", "quantity"});
        for (const auto& r : b.profiles)
            w.row({to_string(r.pop), to_string(r.key.type), to_string(r.key.stage),
                   to_string(r.phase), r.resource, num(r.quantity)});
    }
    {
        csv::Writer w((dir / "drug_costs.csv").string());
        w.row({"population", "type", "stage", "cost_per_patient_year",
               "drug_share_of_total"});
        csv::Writer rw((dir / "regimens.csv").string());
        rw.row({"population", "type", "stage", "regimen", "share_of_drug_cost",
                "cost_per_patient_year"});
        for (auto& [key, e] : b.drug_costs) {
            w.row({to_string(key.first), to_string(key.second.type),
                   to_string(key.second.stage), num(e.cost_per_patient_year),
                   e.drug_share_of_total ? num(*e.drug_share_of_total) : ""});
            for (const auto& reg : e.regimens)
                rw.row({to_string(key.first), to_string(key.second.type),
                        to_string(key.second.stage), reg.name,
                        num(reg.share_of_drug_cost), num(reg.cost_per_patient_year)});
        }
    }
    {
        csv::Writer w((dir / "ae_rates.csv").string());
        w.row({"event", "regimen_class", "rate"});
        for (auto& [k, v] : b.adverse_events.rates)
            w.row({k.first, k.second, num(v)});
        csv::Writer c((dir / "ae_costs.csv").string());
        c.row({"event", "public", "social", "private"});
        for (auto& [ev, v] : b.adverse_events.costs)
            c.row({ev, num(v.public_cost), num(v.social_cost), num(v.private_cost)});
        csv::Writer m((dir / "class_mix.csv").string());
        m.row({"population", "type", "stage", "regimen_class", "share"});
        for (auto& [key, mix] : b.adverse_events.class_mix)
            for (auto& [cl, v] : mix)
                m.row({to_string(key.first), to_string(key.second.type),
                       to_string(key.second.stage), cl, num(v)});
    }
    {
        csv::Writer w((dir / "death_costs.csv").string());
        w.row({"incident_ward_days", "treatment_fraction", "palliative_units", "ward_days"});
        w.row({num(b.death_costs.incident_ward_days), num(b.death_costs.treatment_fraction),
               num(b.death_costs.palliative_units), num(b.death_costs.ward_days)});
        if (!b.death_costs.prevalent_overrides.empty()) {
            csv::Writer ov((dir / "death_cost_overrides.csv").string());
            ov.row({"type", "stage", "public", "social", "private"});
            for (auto& [k, c] : b.death_costs.prevalent_overrides)
                ov.row({to_string(k.type), to_string(k.stage), num(c.public_cost),
                        num(c.social_cost), num(c.private_cost)});
        }
    }
    if (b.prevalent_death_mix) {
        csv::Writer w((dir / "prevalent_death_mix.csv").string());
        w.row({"type", "stage", "share"});
        for (auto& [k, v] : *b.prevalent_death_mix)
            w.row({to_string(k.type), to_string(k.stage), num(v)});
    }
}

// Structural equality for round-trip checks. Load warnings are not part of
// the bundle's identity.
inline bool structurally_equal(const ScenarioBundle& a, const ScenarioBundle& b) {
    auto regs = [](const DrugCostInputs& d) {
        std::map<std::pair<Population, StageKey>,
                 std::pair<double, std::vector<Regimen>>>
            out;
        for (auto& [k, e] : d)
            out[k] = {e.cost_per_patient_year, e.regimens};
        return out;
    };
    auto lt = [](const LifeTableDeaths& t) {
        std::vector<std::tuple<Sex, std::string, double, double>> out;
        for (auto& r : t)
            out.emplace_back(r.sex, r.age_group, r.deaths, r.life_expectancy);
        return out;
    };
    auto prof = [](const ResourceProfile& p) {
        std::map<std::tuple<Population, StageKey, Phase, std::string>, double> out;
        for (auto& r : p)
            out[{r.pop, r.key, r.phase, r.resource}] += r.quantity;
        return out;
    };
    return a.manifest.scenario_name == b.manifest.scenario_name &&
           a.manifest.reference_year == b.manifest.reference_year &&
           a.manifest.exchange_rate == b.manifest.exchange_rate &&
           a.manifest.sector_shares.public_share == b.manifest.sector_shares.public_share &&
           a.manifest.sector_shares.social_security ==
               b.manifest.sector_shares.social_security &&
           a.manifest.sector_shares.private_share == b.manifest.sector_shares.private_share &&
           a.manifest.mc_defaults == b.manifest.mc_defaults &&
           a.manifest.denominators == b.manifest.denominators &&
           a.epi.incidence == b.epi.incidence && a.epi.prevalence_1y == b.epi.prevalence_1y &&
           a.epi.prevalence_3y == b.epi.prevalence_3y &&
           a.epi.prevalence_5y == b.epi.prevalence_5y && a.epi.deaths == b.epi.deaths &&
           a.epi.mi_ratio == b.epi.mi_ratio &&
           a.epi.sex_split_incident == b.epi.sex_split_incident &&
           a.epi.sex_split_prevalent_deaths == b.epi.sex_split_prevalent_deaths &&
           a.stages.type_shares == b.stages.type_shares &&
           a.stages.stage_shares == b.stages.stage_shares &&
           a.survival.probability == b.survival.probability &&
           lt(a.life_table) == lt(b.life_table) &&
           a.disability.weight == b.disability.weight &&
           [&] {
               if (a.unit_costs.size() != b.unit_costs.size())
                   return false;
               for (auto& [k, v] : a.unit_costs) {
                   auto it = b.unit_costs.find(k);
                   if (it == b.unit_costs.end() || it->second.cost != v.cost ||
                       it->second.category != v.category)
                       return false;
               }
               return true;
           }() &&
           prof(a.profiles) == prof(b.profiles) &&
           regs(a.drug_costs) == regs(b.drug_costs) &&
           a.adverse_events.rates == b.adverse_events.rates &&
           a.adverse_events.costs == b.adverse_events.costs &&
           a.adverse_events.class_mix == b.adverse_events.class_mix &&
           a.death_costs.incident_ward_days == b.death_costs.incident_ward_days &&
           a.death_costs.treatment_fraction == b.death_costs.treatment_fraction &&
           a.death_costs.palliative_units == b.death_costs.palliative_units &&
           a.death_costs.ward_days == b.death_costs.ward_days &&
           a.death_costs.prevalent_overrides == b.death_costs.prevalent_overrides &&
           a.prevalent_death_mix == b.prevalent_death_mix;
}

} // namespace burden
