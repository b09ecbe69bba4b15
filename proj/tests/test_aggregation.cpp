#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_common.hpp"

using namespace burden;

namespace {
const SectorShares kShares{0.38, 0.46, 0.16};
}

TEST_CASE("cell_burden embeds the coverage shares") {
    PatientCostCard card;
    card.total = {2478, 4196, 4807};
    auto b = cell_burden(1287, card, kShares);
    CHECK(b.public_cost == doctest::Approx(1211890.68).epsilon(1e-9));
    CHECK(sector_sum(b) ==
          doctest::Approx(1287 * card.total.weighted(kShares)).epsilon(1e-12));
    CHECK(sector_sum(cell_burden(0, card, kShares)) == 0.0);
}

TEST_CASE("death_burden") {
    const auto& m = testutil::golden_model();
    CHECK(m.report.incident_death.weighted ==
          doctest::Approx(5493698).epsilon(0.005));
    CHECK(m.report.prevalent_death.weighted ==
          doctest::Approx(46.76e6).epsilon(0.005));
    CHECK(m.report.incident_death.deaths == doctest::Approx(5667));
    CHECK(m.report.prevalent_death.deaths == doctest::Approx(5062));

    // mix not summing to 1 is an error
    std::map<StageKey, double> bad = m.prevalent_death_mix;
    bad.begin()->second += 0.1;
    CHECK_THROWS_AS(death_burden(m.deaths, m.death_costs, bad, kShares),
                    std::invalid_argument);

    // zero deaths give zero rows
    DeathSplit none;
    none.incident_by_sex = {{Sex::Male, 0.0}, {Sex::Female, 0.0}};
    none.prevalent_by_sex = none.incident_by_sex;
    auto [i0, p0] = death_burden(none, m.death_costs, m.prevalent_death_mix, kShares);
    CHECK(i0.weighted == 0.0);
    CHECK(p0.weighted == 0.0);
}

TEST_CASE("assemble_report hits the frozen national totals") {
    const auto& m = testutil::golden_model();
    const auto& r = m.report;
    CHECK(r.grand_total == doctest::Approx(555701515.57).epsilon(1e-8));
    CHECK(r.total.public_cost == doctest::Approx(204427393.62).epsilon(1e-8));
    CHECK(r.total.social_cost == doctest::Approx(259403997.21).epsilon(1e-8));
    CHECK(r.total.private_cost == doctest::Approx(91870124.74).epsilon(1e-8));
    CHECK(r.incident_death.weighted == doctest::Approx(5493765.70).epsilon(1e-7));
    CHECK(r.prevalent_death.weighted == doctest::Approx(46817544.19).epsilon(1e-7));

    // subtotal identities
    MoneyBySector inc, prev;
    for (const auto& c : r.cells)
        (c.pop == Population::Incident ? inc : prev) += c.cost;
    CHECK(inc.public_cost == doctest::Approx(r.incident_subtotal.public_cost).epsilon(1e-12));
    CHECK(prev.social_cost ==
          doctest::Approx(r.prevalent_subtotal.social_cost).epsilon(1e-12));
    CHECK(r.grand_total ==
          doctest::Approx(sector_sum(r.incident_subtotal) +
                          sector_sum(r.prevalent_subtotal) + r.incident_death.weighted +
                          r.prevalent_death.weighted)
              .epsilon(1e-12));

    // sector consistency: weighted row value = sum of the three sector columns
    for (const auto& c : r.cells)
        CHECK(c.weighted == doctest::Approx(sector_sum(c.cost)).epsilon(1e-12));

    // ratios present because the golden manifest ships denominators
    REQUIRE(r.share_of_health_expenditure.has_value());
    CHECK(*r.share_of_health_expenditure == doctest::Approx(0.014).epsilon(0.05));
    REQUIRE(r.share_of_gdp.has_value());
    CHECK(*r.share_of_gdp == doctest::Approx(r.grand_total / 618.0e9).epsilon(1e-12));
}

TEST_CASE("property: additivity of the report over sexes") {
    const auto& b = testutil::golden();
    const auto& m = testutil::golden_model();
    CaseMatrix men, women;
    for (auto& [k, v] : m.cases.count)
        (std::get<2>(k) == Sex::Male ? men : women).count[k] = v;
    auto rm = assemble_report(men, m.cards, m.deaths, m.death_costs,
                              m.prevalent_death_mix, m.health_loss, b.manifest);
    auto rw = assemble_report(women, m.cards, m.deaths, m.death_costs,
                              m.prevalent_death_mix, m.health_loss, b.manifest);
    for (std::size_t i = 0; i < m.report.cells.size(); ++i) {
        CHECK(rm.cells[i].cases + rw.cells[i].cases ==
              doctest::Approx(m.report.cells[i].cases).epsilon(1e-12));
        CHECK(rm.cells[i].weighted + rw.cells[i].weighted ==
              doctest::Approx(m.report.cells[i].weighted).epsilon(1e-9));
    }
}

TEST_CASE("re-running the deterministic pipeline is bit-identical") {
    const auto& b = testutil::golden();
    auto m1 = run_model(b);
    auto m2 = run_model(b);
    CHECK(m1.report.grand_total == m2.report.grand_total);
    CHECK(m1.report.total.public_cost == m2.report.total.public_cost);
    CHECK(m1.health_loss.daly_total() == m2.health_loss.daly_total());
    for (std::size_t i = 0; i < m1.report.cells.size(); ++i)
        CHECK(m1.report.cells[i].weighted == m2.report.cells[i].weighted);
}

TEST_CASE("composition_breakdown") {
    const auto& m = testutil::golden_model();
    auto rows = composition_breakdown(m.cards, kShares);

    auto share = [&](Population p, StageKey k, Category cat) {
        for (const auto& r : rows)
            if (r.pop == p && r.key == k && r.category == cat)
                return r.share_weighted;
        return -1.0;
    };
    CHECK(share(Population::Incident, {CancerType::NSCLC, Stage::IV}, Category::Drugs) ==
          doctest::Approx(0.95).epsilon(0.01));
    CHECK(share(Population::Prevalent, {CancerType::SCLC, Stage::Limited},
                Category::Drugs) == doctest::Approx(0.18).epsilon(0.03));

    // per-cell weighted shares sum to 1
    for (Population p : all_populations)
        for (StageKey k : all_stage_keys) {
            double s = 0;
            for (const auto& r : rows)
                if (r.pop == p && r.key == k)
                    s += r.share_weighted;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
        }

    // zero-total card is flagged, not NaN-propagated
    std::map<std::pair<Population, StageKey>, PatientCostCard> degenerate;
    PatientCostCard empty;
    empty.pop = Population::Incident;
    empty.key = {CancerType::NSCLC, Stage::I};
    empty.by_category[Category::Diagnosis] = MoneyBySector{};
    for (Population p : all_populations)
        for (StageKey k : all_stage_keys) {
            PatientCostCard c = empty;
            c.pop = p;
            c.key = k;
            degenerate[{p, k}] = c;
        }
    for (const auto& r : composition_breakdown(degenerate, kShares)) {
        CHECK_FALSE(r.defined);
        CHECK(r.share_weighted == 0.0);
    }

    // single-category card has share exactly 1
    auto single = degenerate;
    for (auto& [key, c] : single) {
        c.by_category[Category::Diagnosis] = MoneyBySector{10, 10, 10};
        c.total = MoneyBySector{10, 10, 10};
        c.weighted = c.total.weighted(kShares);
    }
    for (const auto& r : composition_breakdown(single, kShares)) {
        CHECK(r.defined);
        CHECK(r.share_weighted == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("default prevalent death mix is a proper distribution") {
    ScenarioBundle b = testutil::golden();
    b.prevalent_death_mix.reset();
    auto m = run_model(b);
    double s = 0;
    for (auto& [k, v] : m.prevalent_death_mix) {
        CHECK(v >= 0.0);
        s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    // late stages dominate the default hazard-weighted mix
    CHECK(m.prevalent_death_mix.at({CancerType::NSCLC, Stage::IV}) >
          m.prevalent_death_mix.at({CancerType::NSCLC, Stage::I}));
}
