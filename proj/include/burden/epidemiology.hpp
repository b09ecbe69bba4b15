#pragma once

#include <array>
#include <map>
#include <tuple>

#include "burden/bundle.hpp"
#include "burden/types.hpp"

namespace burden {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct CaseMatrix {
    // cases per (population, type+stage, sex); fractional counts by design,
    // rounding happens only at presentation
    std::map<std::tuple<Population, StageKey, Sex>, double> count;

    double at(Population p, StageKey k, Sex s) const {
        auto it = count.find({p, k, s});
        return it == count.end() ? 0.0 : it->second;
    }
    double cell(Population p, StageKey k) const {
        return at(p, k, Sex::Male) + at(p, k, Sex::Female);
    }
    double total(Population p) const {
        double t = 0;
        for (auto& [key, v] : count)
            if (std::get<0>(key) == p)
                t += v;
        return t;
    }
    CaseMatrix& merge(const CaseMatrix& other) {
        for (auto& [k, v] : other.count)
            count[k] += v;
        return *this;
    }
};

struct PrevalenceByYear {
    // survivors of the k-th preceding annual cohort, k = 1..5 years since
    // diagnosis, under the steady-state assumption (all cohorts = incidence)
    std::map<std::pair<StageKey, Sex>, std::array<double, 5>> survivors;

    double year_total(int year) const {
        double t = 0;
        for (auto& [k, arr] : survivors)
            t += arr[static_cast<std::size_t>(year - 1)];
        return t;
    }
};

struct CalibrationFactors {
    double f1 = 1;    // scale on year-1 survivors
    double f2to5 = 1; // scale on years 2-5 survivors
};

struct DeathSplit {
    double incident_deaths = 0;
    double prevalent_deaths = 0;
    std::map<Sex, double> incident_by_sex;
    std::map<Sex, double> prevalent_by_sex;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline double incidence_from_mortality(double deaths, double mi_ratio) {
    if (!(mi_ratio > 0))
        throw std::invalid_argument("mi_ratio must be positive");
    return deaths / mi_ratio;
}

// Incident slice: count = total x type share x stage share x sex share.
inline CaseMatrix decompose_cases(double total, const StageDistribution& dist,
                                  double male_share) {
    CaseMatrix m;
    for (StageKey k : all_stage_keys) {
        double cell = total * dist.type_shares.at(k.type) * dist.stage_shares.at(k);
        m.count[{Population::Incident, k, Sex::Male}] = cell * male_share;
        m.count[{Population::Incident, k, Sex::Female}] = cell * (1.0 - male_share);
    }
    return m;
}

inline PrevalenceByYear roll_forward(const CaseMatrix& incident,
                                     const SurvivalTable& survival) {
    PrevalenceByYear p;
    for (StageKey k : all_stage_keys)
        for (Sex s : all_sexes) {
            double n = incident.at(Population::Incident, k, s);
            auto& arr = p.survivors[{k, s}];
            for (int y = 1; y <= 5; ++y)
                arr[static_cast<std::size_t>(y - 1)] = n * survival.at(k, y);
        }
    return p;
}

// Two-factor calibration: f1 pins the 1-year prevalence target, f2to5 pins
// the (5-year minus 1-year) remainder. The calibrated total hits
// prevalence_5y by construction.
inline std::pair<CaseMatrix, CalibrationFactors>
calibrate_prevalence(const PrevalenceByYear& raw, const EpiInputs& epi) {
    double y1 = raw.year_total(1);
    double y25 = 0;
    for (int y = 2; y <= 5; ++y)
        y25 += raw.year_total(y);
    double target25 = epi.prevalence_5y - epi.prevalence_1y;
    if ((y1 <= 0 && epi.prevalence_1y > 0) || (y25 <= 0 && target25 > 0))
        throw std::invalid_argument("calibrate_prevalence: zero raw survivor total "
                                    "with nonzero prevalence target");
    CalibrationFactors f;
    f.f1 = y1 > 0 ? epi.prevalence_1y / y1 : 1.0;
    f.f2to5 = y25 > 0 ? target25 / y25 : 1.0;
    CaseMatrix m;
    for (auto& [key, arr] : raw.survivors) {
        double tail = arr[1] + arr[2] + arr[3] + arr[4];
        m.count[{Population::Prevalent, key.first, key.second}] =
            f.f1 * arr[0] + f.f2to5 * tail;
    }
    return {m, f};
}

inline DeathSplit split_deaths(const EpiInputs& epi) {
    if (epi.prevalence_1y > epi.incidence)
        throw std::invalid_argument("split_deaths: prevalence_1y exceeds incidence");
    DeathSplit d;
    d.incident_deaths = epi.incidence - epi.prevalence_1y;
    d.prevalent_deaths = epi.deaths - d.incident_deaths;
    if (d.prevalent_deaths < 0)
        throw std::invalid_argument("split_deaths: negative prevalent deaths "
                                    "(inconsistent epidemiology inputs)");
    double mi = epi.sex_split_incident;
    double mp = epi.sex_split_prevalent_deaths.value_or(mi);
    d.incident_by_sex[Sex::Male] = d.incident_deaths * mi;
    d.incident_by_sex[Sex::Female] = d.incident_deaths * (1.0 - mi);
    d.prevalent_by_sex[Sex::Male] = d.prevalent_deaths * mp;
    d.prevalent_by_sex[Sex::Female] = d.prevalent_deaths * (1.0 - mp);
    return d;
}

} // namespace burden
