#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace burden {

enum class CancerType { NSCLC, SCLC };
enum class Population { Incident, Prevalent };
enum class Sex { Male, Female };
enum class StageClass { Localized, Metastatic };

// NSCLC stages I-IV, SCLC limited/extended.
enum class Stage { I, II, III, IV, Limited, Extended };

enum class Category {
    Diagnosis,
    Surgery,
    Radiotherapy,
    Drugs,
    DrugAdministration,
    ConsultationLabFollowup,
    Hospitalization,
    AdverseEvents,
    Palliative,
};

inline constexpr std::array<Category, 9> all_categories = {
    Category::Diagnosis,        Category::Surgery,
    Category::Radiotherapy,     Category::Drugs,
    Category::DrugAdministration, Category::ConsultationLabFollowup,
    Category::Hospitalization,  Category::AdverseEvents,
    Category::Palliative,
};

struct StageKey {
    CancerType type;
    Stage stage;
    auto operator<=>(const StageKey&) const = default;
};

inline bool stage_valid(CancerType t, Stage s) {
    if (t == CancerType::NSCLC)
        return s == Stage::I || s == Stage::II || s == Stage::III || s == Stage::IV;
    return s == Stage::Limited || s == Stage::Extended;
}

inline StageClass stage_class(CancerType t, Stage s) {
    if ((t == CancerType::NSCLC && s == Stage::IV) ||
        (t == CancerType::SCLC && s == Stage::Extended))
        return StageClass::Metastatic;
    return StageClass::Localized;
}

inline StageClass stage_class(StageKey k) { return stage_class(k.type, k.stage); }

// The six modelled (type, stage) cells in reporting order.
inline constexpr std::array<StageKey, 6> all_stage_keys = {{
    {CancerType::NSCLC, Stage::I},
    {CancerType::NSCLC, Stage::II},
    {CancerType::NSCLC, Stage::III},
    {CancerType::NSCLC, Stage::IV},
    {CancerType::SCLC, Stage::Limited},
    {CancerType::SCLC, Stage::Extended},
}};

inline constexpr std::array<Population, 2> all_populations = {
    Population::Incident, Population::Prevalent};
inline constexpr std::array<Sex, 2> all_sexes = {Sex::Male, Sex::Female};

// ---- token <-> string -----------------------------------------------------

inline std::string to_string(CancerType t) {
    return t == CancerType::NSCLC ? "NSCLC" : "SCLC";
}
inline std::string to_string(Population p) {
    return p == Population::Incident ? "incident" : "prevalent";
}
inline std::string to_string(Sex s) { return s == Sex::Male ? "male" : "female"; }
inline std::string to_string(StageClass c) {
    return c == StageClass::Localized ? "Localized" : "Metastatic";
}
inline std::string to_string(Stage s) {
    switch (s) {
    case Stage::I: return "I";
    case Stage::II: return "II";
    case Stage::III: return "III";
    case Stage::IV: return "IV";
    case Stage::Limited: return "Limited";
    case Stage::Extended: return "Extended";
    }
    return "?";
}
inline std::string to_string(Category c) {
    switch (c) {
    case Category::Diagnosis: return "diagnosis";
    case Category::Surgery: return "surgery";
    case Category::Radiotherapy: return "radiotherapy";
    case Category::Drugs: return "drugs";
    case Category::DrugAdministration: return "drug_administration";
    case Category::ConsultationLabFollowup: return "consultation_lab_followup";
    case Category::Hospitalization: return "hospitalization";
    case Category::AdverseEvents: return "adverse_events";
    case Category::Palliative: return "palliative";
    }
    return "?";
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline CancerType parse_cancer_type(const std::string& s) {
    if (s == "NSCLC") return CancerType::NSCLC;
    if (s == "SCLC") return CancerType::SCLC;
    throw ParseError("unknown cancer type token '" + s + "'");
}
inline Population parse_population(const std::string& s) {
    if (s == "incident") return Population::Incident;
    if (s == "prevalent") return Population::Prevalent;
    throw ParseError("unknown population token '" + s + "'");
}
inline Sex parse_sex(const std::string& s) {
    if (s == "male") return Sex::Male;
    if (s == "female") return Sex::Female;
    throw ParseError("unknown sex token '" + s + "'");
}
inline Stage parse_stage(const std::string& s) {
    if (s == "I") return Stage::I;
    if (s == "II") return Stage::II;
    if (s == "III") return Stage::III;
    if (s == "IV") return Stage::IV;
    if (s == "Limited") return Stage::Limited;
    if (s == "Extended") return Stage::Extended;
    throw ParseError("unknown stage token '" + s + "'");
}
inline StageClass parse_stage_class(const std::string& s) {
    if (s == "Localized") return StageClass::Localized;
    if (s == "Metastatic") return StageClass::Metastatic;
    throw ParseError("unknown stage class token '" + s + "'");
}
inline Category parse_category(const std::string& s) {
    for (Category c : all_categories)
        if (to_string(c) == s) return c;
    throw ParseError("unknown cost category token '" + s + "'");
}

// ---- money ----------------------------------------------------------------

// Population coverage fractions of the three health subsectors.
struct SectorShares {
    double public_share = 0;
    double social_security = 0;
    double private_share = 0;

    double sum() const { return public_share + social_security + private_share; }
};

// A cost expressed per subsector. The health-system value is always the
// coverage-weighted average of the three sector values.
struct MoneyBySector {
    double public_cost = 0;
    double social_cost = 0;
    double private_cost = 0;

    double weighted(const SectorShares& sh) const {
        return sh.public_share * public_cost + sh.social_security * social_cost +
               sh.private_share * private_cost;
    }

    MoneyBySector& operator+=(const MoneyBySector& o) {
        public_cost += o.public_cost;
        social_cost += o.social_cost;
        private_cost += o.private_cost;
        return *this;
    }
    friend MoneyBySector operator+(MoneyBySector a, const MoneyBySector& b) {
        return a += b;
    }
    friend MoneyBySector operator*(double k, const MoneyBySector& m) {
        return {k * m.public_cost, k * m.social_cost, k * m.private_cost};
    }
    auto operator<=>(const MoneyBySector&) const = default;
};

} // namespace burden
