#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_common.hpp"

using namespace burden;

namespace {

const SectorShares kShares{0.38, 0.46, 0.16};

struct CellOracle {
    Population pop;
    StageKey key;
    double weighted;
    double public_cost;
};

// frozen deterministic values for the golden bundle
const std::vector<CellOracle> kCardOracle = {
    {Population::Incident, {CancerType::NSCLC, Stage::I}, 3651.118442, 2484.753800},
    {Population::Incident, {CancerType::NSCLC, Stage::II}, 8941.0, 7722.021704},
    {Population::Incident, {CancerType::NSCLC, Stage::III}, 18140.0, 17215.015880},
    {Population::Incident, {CancerType::NSCLC, Stage::IV}, 37356.0, 36815.167579},
    {Population::Incident, {CancerType::SCLC, Stage::Limited}, 4012.0, 3140.301438},
    {Population::Incident, {CancerType::SCLC, Stage::Extended}, 4129.0, 3734.673926},
    {Population::Prevalent, {CancerType::NSCLC, Stage::I}, 11102.0, 10880.078849},
    {Population::Prevalent, {CancerType::NSCLC, Stage::II}, 11102.0, 10880.078849},
    {Population::Prevalent, {CancerType::NSCLC, Stage::III}, 14947.0, 14698.231404},
    {Population::Prevalent, {CancerType::NSCLC, Stage::IV}, 30195.0, 29717.037773},
    {Population::Prevalent, {CancerType::SCLC, Stage::Limited}, 676.0, 521.388069},
    {Population::Prevalent, {CancerType::SCLC, Stage::Extended}, 755.0, 584.577482},
};

} // namespace

TEST_CASE("weighted_unit_cost") {
    CHECK(weighted_unit_cost({6.17, 9.69, 11.98}, kShares) ==
          doctest::Approx(8.72).epsilon(0.001));
    CHECK(weighted_unit_cost({134.52, 237.16, 260.96}, kShares) ==
          doctest::Approx(201.96).epsilon(0.0001));
    CHECK(weighted_unit_cost({42.0, 42.0, 42.0}, kShares) ==
          doctest::Approx(42.0).epsilon(1e-12));
}

TEST_CASE("phase_resource_cost accumulates per category") {
    const auto& b = testutil::golden();
    std::vector<ProfileRow> rows = {{Population::Incident,
                                     {CancerType::NSCLC, Stage::I},
                                     Phase::DiagnosisStaging,
                                     "pulmonologist_consult",
                                     3}};
    auto out = phase_resource_cost(rows, b.unit_costs);
    CHECK(out.at(Category::ConsultationLabFollowup).weighted(kShares) ==
          doctest::Approx(26.16).epsilon(0.001));

    rows = {{Population::Incident,
             {CancerType::SCLC, Stage::Limited},
             Phase::TreatmentFollowup,
             "lobectomy",
             0.10}};
    out = phase_resource_cost(rows, b.unit_costs);
    CHECK(out.at(Category::Surgery).weighted(kShares) ==
          doctest::Approx(106.09).epsilon(0.001));

    CHECK(phase_resource_cost({}, b.unit_costs).empty());

    rows[0].resource = "unknown_thing";
    CHECK_THROWS_AS(phase_resource_cost(rows, b.unit_costs), std::invalid_argument);
}

TEST_CASE("extrapolate_drug_cost divides named cost by covered share") {
    CHECK(extrapolate_drug_cost({{"a", 0.26, 7592.47}, {"b", 0.11, 5774.00}}) ==
          doctest::Approx(36125.6).epsilon(0.0005));
    CHECK(extrapolate_drug_cost({{"a", 0.55, 1988.48}, {"b", 0.42, 648.05}}) ==
          doctest::Approx(2718.1).epsilon(0.0005));
    CHECK(extrapolate_drug_cost({{"only", 1.0, 123.0}}) == doctest::Approx(123.0));
    CHECK_THROWS_AS(extrapolate_drug_cost({{"a", 0.0, 10.0}}), std::invalid_argument);
}

TEST_CASE("adverse_event_cost") {
    const auto& b = testutil::golden();
    auto chemo = adverse_event_cost({{"Chemotherapy", 1.0}}, b.adverse_events);
    CHECK(chemo.weighted(kShares) == doctest::Approx(255.72).epsilon(0.0005));

    AdverseEventInputs zero = b.adverse_events;
    for (auto& [k, r] : zero.rates)
        r = 0;
    CHECK(adverse_event_cost({{"Chemotherapy", 1.0}}, zero).weighted(kShares) == 0.0);

    // single event contribution: immunotherapy pneumonitis
    AdverseEventInputs only;
    only.events = {"pneumonitis"};
    only.rates[{"pneumonitis", "Immunotherapy"}] = 0.031;
    only.costs["pneumonitis"] = {4638.11, 5502.74, 5749.08};
    auto imm = adverse_event_cost({{"Immunotherapy", 1.0}}, only);
    CHECK(imm.weighted(kShares) == doctest::Approx(161.6).epsilon(0.001));

    // a mix summing below one scales the cost down proportionally
    auto half = adverse_event_cost({{"Chemotherapy", 0.5}}, b.adverse_events);
    CHECK(half.weighted(kShares) ==
          doctest::Approx(0.5 * chemo.weighted(kShares)).epsilon(1e-12));
}

TEST_CASE("annual_patient_cost reproduces every frozen card") {
    const auto& b = testutil::golden();
    for (const auto& o : kCardOracle) {
        auto card = annual_patient_cost(o.pop, o.key, b);
        CAPTURE(to_string(o.pop));
        CAPTURE(to_string(o.key.type));
        CAPTURE(to_string(o.key.stage));
        CHECK(card.weighted == doctest::Approx(o.weighted).epsilon(1e-6));
        CHECK(card.total.public_cost == doctest::Approx(o.public_cost).epsilon(1e-6));
        // weighting identity
        CHECK(card.weighted ==
              doctest::Approx(card.total.weighted(kShares)).epsilon(1e-9));
        // category completeness: no cost escapes categorization
        MoneyBySector sum;
        for (auto& [cat, v] : card.by_category)
            sum += v;
        CHECK(sum.public_cost == doctest::Approx(card.total.public_cost).epsilon(1e-12));
        CHECK(sum.social_cost == doctest::Approx(card.total.social_cost).epsilon(1e-12));
        CHECK(sum.private_cost ==
              doctest::Approx(card.total.private_cost).epsilon(1e-12));
    }
}

TEST_CASE("property: cost cards are monotone in quantities and rates") {
    ScenarioBundle b = testutil::golden();
    std::pair<Population, StageKey> cell{Population::Incident,
                                         {CancerType::NSCLC, Stage::III}};
    auto base = annual_patient_cost(cell.first, cell.second, b);

    ScenarioBundle more = b;
    for (auto& r : more.profiles)
        if (r.pop == cell.first && r.key == cell.second)
            r.quantity += 1.0;
    auto bumped = annual_patient_cost(cell.first, cell.second, more);
    CHECK(bumped.total.public_cost >= base.total.public_cost);
    CHECK(bumped.total.social_cost >= base.total.social_cost);
    CHECK(bumped.total.private_cost >= base.total.private_cost);

    ScenarioBundle pricier = b;
    for (auto& [res, uc] : pricier.unit_costs)
        uc.cost = 1.1 * uc.cost;
    auto p = annual_patient_cost(cell.first, cell.second, pricier);
    CHECK(p.weighted >= base.weighted);
}

TEST_CASE("property: homogeneity under lambda scaling of all prices") {
    ScenarioBundle b = testutil::golden();
    const double lambda = 1.75;
    for (auto& [res, uc] : b.unit_costs)
        uc.cost = lambda * uc.cost;
    for (auto& [key, e] : b.drug_costs)
        e.cost_per_patient_year *= lambda;
    for (auto& [ev, c] : b.adverse_events.costs)
        c = lambda * c;
    for (const auto& o : kCardOracle) {
        auto base = annual_patient_cost(o.pop, o.key, testutil::golden());
        auto card = annual_patient_cost(o.pop, o.key, b);
        CHECK(card.weighted == doctest::Approx(lambda * base.weighted).epsilon(1e-12));
    }
}

TEST_CASE("incident_death_cost reproduces the published per-death card") {
    const auto& b = testutil::golden();
    auto c = incident_death_cost(b.death_costs, b.unit_costs);
    CHECK(c.public_cost == doctest::Approx(645.68).epsilon(0.0001));
    CHECK(c.social_cost == doctest::Approx(1138.38).epsilon(0.0001));
    CHECK(c.private_cost == doctest::Approx(1252.61).epsilon(0.0001));
    CHECK(c.weighted(kShares) == doctest::Approx(969.43).epsilon(0.0001));

    DeathCostInputs zero = b.death_costs;
    zero.incident_ward_days = 0;
    CHECK(incident_death_cost(zero, b.unit_costs).weighted(kShares) == 0.0);

    UnitCostTable no_ward;
    CHECK_THROWS_AS(incident_death_cost(b.death_costs, no_ward), std::invalid_argument);
}

TEST_CASE("prevalent_death_cost prefers overrides, keeps the formula otherwise") {
    const auto& b = testutil::golden();
    StageKey n1{CancerType::NSCLC, Stage::I};
    auto card = annual_patient_cost(Population::Prevalent, n1, b);

    auto ov = prevalent_death_cost(n1, card, b.death_costs, b.unit_costs);
    CHECK(ov.weighted(kShares) == doctest::Approx(5778.10).epsilon(0.00001));
    CHECK(ov.public_cost == doctest::Approx(5267.75));

    DeathCostInputs formula = b.death_costs;
    formula.prevalent_overrides.clear();
    auto f = prevalent_death_cost(n1, card, formula, b.unit_costs);
    // 0.5 x 11,102 + 0.4 x 91.70 + 4.8 x 201.96 ~= 6,557
    CHECK(f.weighted(kShares) == doctest::Approx(6557).epsilon(0.001));

    DeathCostInputs zeroed;
    PatientCostCard empty;
    auto z = prevalent_death_cost(n1, empty, zeroed, b.unit_costs);
    CHECK(z.weighted(kShares) == 0.0);
}
