#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "burden/aggregation.hpp"
#include "burden/bundle.hpp"

namespace burden {

// ---------------------------------------------------------------------------
// Deterministic RNG: per-iteration substreams derive from (seed, index) only,
// so results are independent of thread count and scheduling.
// ---------------------------------------------------------------------------

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in (0,1), never exactly 0 or 1
    double uniform() {
        while (true) {
            double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
            if (u > 0.0 && u < 1.0)
                return u;
        }
    }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        mixer.next();
        return mixer;
    }

  private:
    std::uint64_t state_;
};

// Acklam's rational approximation to the standard normal inverse CDF
// (relative error < 1.15e-9 over (0,1)).
inline double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        double q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

// ---------------------------------------------------------------------------
// Uncertainty specification
// ---------------------------------------------------------------------------

struct UncertaintySpec {
    double deaths_sd = 0.13 / 1.96; // around mean 1
    double cost_sd = 0.25 / 1.96;   // around mean 1
    double mi_mean = 0;             // bundle-implied deaths/incidence
    double mi_sd = 0.06 / 1.96;     // absolute

    static UncertaintySpec for_bundle(const ScenarioBundle& b) {
        UncertaintySpec s;
        s.mi_mean = b.epi.deaths / b.epi.incidence;
        return s;
    }
    static UncertaintySpec zero_variance(const ScenarioBundle& b) {
        UncertaintySpec s = for_bundle(b);
        s.deaths_sd = s.cost_sd = s.mi_sd = 0;
        return s;
    }
};

struct Factors {
    double f_deaths = 1;
    double f_cost = 1;
    double mi = 0;
};

// Truncated normal: draws <= 0 are rejected and resampled. A zero sd yields
// the mean exactly (so a zero-variance spec collapses to the central run).
inline double truncated_normal(double mean, double sd, SplitMix64& rng) {
    if (sd == 0)
        return mean;
    while (true) {
        double x = mean + sd * inverse_normal_cdf(rng.uniform());
        if (x > 0)
            return x;
    }
}

inline Factors draw_factors(const UncertaintySpec& spec, SplitMix64& rng) {
    Factors f;
    f.f_deaths = truncated_normal(1.0, spec.deaths_sd, rng);
    f.f_cost = truncated_normal(1.0, spec.cost_sd, rng);
    f.mi = truncated_normal(spec.mi_mean, spec.mi_sd, rng);
    return f;
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

struct CellStats {
    std::string name;
    double base = 0; // deterministic run's value
    double mean = 0;
    double lower = 0;
    double upper = 0;
    double sd = 0;
};

struct SimulationSummary {
    int iterations = 0;
    std::uint64_t seed = 0;
    double lower_pct = 2.5;
    double upper_pct = 97.5;
    std::vector<CellStats> cells;

    const CellStats& cell(const std::string& name) const {
        for (const auto& c : cells)
            if (c.name == name)
                return c;
        throw std::invalid_argument("unknown summary cell: " + name);
    }
};

// Empirical quantile with linear interpolation between order statistics
// (h = (n-1)p): {1..5} at (2.5, 97.5) -> (1.1, 4.9).
inline double quantile_sorted(const std::vector<double>& sorted, double pct) {
    if (sorted.empty())
        throw std::invalid_argument("quantile of empty draw set");
    double h = (static_cast<double>(sorted.size()) - 1.0) * pct / 100.0;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Mean in iteration order, interval by empirical percentiles.
inline CellStats summarize(const std::string& name, const std::vector<double>& draws,
                           double lower_pct, double upper_pct) {
    if (draws.empty())
        throw std::invalid_argument("summarize: empty draw set");
    CellStats s;
    s.name = name;
    // constant draw sets (e.g. a zero-variance spec) must collapse exactly,
    // without summation rounding
    bool constant = std::all_of(draws.begin(), draws.end(),
                                [&](double v) { return v == draws.front(); });
    if (constant) {
        s.mean = s.lower = s.upper = draws.front();
        s.sd = 0;
        return s;
    }
    double sum = 0;
    for (double v : draws)
        sum += v;
    s.mean = sum / static_cast<double>(draws.size());
    double ss = 0;
    for (double v : draws)
        ss += (v - s.mean) * (v - s.mean);
    s.sd = draws.size() > 1 ? std::sqrt(ss / (static_cast<double>(draws.size()) - 1)) : 0;
    std::vector<double> sorted = draws;
    std::sort(sorted.begin(), sorted.end());
    s.lower = quantile_sorted(sorted, lower_pct);
    s.upper = quantile_sorted(sorted, upper_pct);
    return s;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace detail {

// Per-iteration reported values. The pipeline is linear in case counts and
// homogeneous of degree one in costs, so scaling the base run's components
// by the drawn factors is exactly a full re-evaluation:
//   deaths' = deaths x f_deaths;  incidence' = deaths'/mi;
//   every case cell scales by incidence'/incidence = f_deaths x mi_mean/mi;
//   every cost card scales by f_cost.
struct IterationModel {
    std::vector<std::string> names;
    std::vector<double> cell_cases; // 12 cells, reporting order
    std::vector<double> cell_costs; // 12 cells, weighted national
    double inc_subtotal = 0;
    double prev_subtotal = 0;
    MoneyBySector subtotal_by_sector; // incident + prevalent patient care
    double inc_deaths = 0;            // deterministic incident deaths
    double base_deaths = 0;           // bundle total deaths
    double mi_mean = 0;
    MoneyBySector per_inc_death;  // national cost per incident death (shares in)
    MoneyBySector per_prev_death; // national cost per prevalent death (mix folded)
    double yll = 0;
    double yld = 0;

    static IterationModel build(const ScenarioBundle& b, const ModelResult& m) {
        IterationModel im;
        const SectorShares& sh = b.manifest.sector_shares;
        for (const auto& c : m.report.cells) {
            std::string tag = to_string(c.pop) + " " + to_string(c.key.type) + " " +
                              to_string(c.key.stage);
            im.names.push_back("cases " + tag);
            im.cell_cases.push_back(c.cases);
        }
        for (const auto& c : m.report.cells) {
            std::string tag = to_string(c.pop) + " " + to_string(c.key.type) + " " +
                              to_string(c.key.stage);
            im.names.push_back("cost " + tag);
            im.cell_costs.push_back(c.weighted);
        }
        im.inc_subtotal = sector_sum(m.report.incident_subtotal);
        im.prev_subtotal = sector_sum(m.report.prevalent_subtotal);
        im.subtotal_by_sector = m.report.incident_subtotal + m.report.prevalent_subtotal;
        im.inc_deaths = m.deaths.incident_deaths;
        im.base_deaths = b.epi.deaths;
        im.mi_mean = b.epi.deaths / b.epi.incidence;
        im.per_inc_death = {sh.public_share * m.death_costs.incident.public_cost,
                            sh.social_security * m.death_costs.incident.social_cost,
                            sh.private_share * m.death_costs.incident.private_cost};
        for (auto& [k, mix] : m.prevalent_death_mix) {
            const MoneyBySector& c = m.death_costs.prevalent.at(k);
            im.per_prev_death += MoneyBySector{mix * sh.public_share * c.public_cost,
                                               mix * sh.social_security * c.social_cost,
                                               mix * sh.private_share * c.private_cost};
        }
        im.yll = m.health_loss.yll_total();
        im.yld = m.health_loss.yld_total();
        im.names.insert(im.names.end(),
                        {"deaths incident", "deaths prevalent", "death_cost incident",
                         "death_cost prevalent", "subtotal incident",
                         "subtotal prevalent", "sector public", "sector social",
                         "sector private", "grand_total", "daly"});
        return im;
    }

    std::size_t width() const { return names.size(); }

    void evaluate(const Factors& f, double* out) const {
        double case_scale = f.f_deaths * (f.mi == mi_mean ? 1.0 : mi_mean / f.mi);
        std::size_t j = 0;
        for (double c : cell_cases)
            out[j++] = c * case_scale;
        double cost_scale = case_scale * f.f_cost;
        for (double c : cell_costs)
            out[j++] = c * cost_scale;
        double inc_d = inc_deaths * case_scale;
        double prev_d = base_deaths * f.f_deaths - inc_d;
        double inc_dc = inc_d * f.f_cost * sector_sum(per_inc_death);
        double prev_dc = prev_d * f.f_cost * sector_sum(per_prev_death);
        out[j++] = inc_d;
        out[j++] = prev_d;
        out[j++] = inc_dc;
        out[j++] = prev_dc;
        out[j++] = inc_subtotal * cost_scale;
        out[j++] = prev_subtotal * cost_scale;
        double grand = 0;
        auto sector = [&](double sub, double pi, double pp) {
            double v = sub * cost_scale + inc_d * f.f_cost * pi + prev_d * f.f_cost * pp;
            grand += v;
            return v;
        };
        out[j++] = sector(subtotal_by_sector.public_cost, per_inc_death.public_cost,
                          per_prev_death.public_cost);
        out[j++] = sector(subtotal_by_sector.social_cost, per_inc_death.social_cost,
                          per_prev_death.social_cost);
        out[j++] = sector(subtotal_by_sector.private_cost, per_inc_death.private_cost,
                          per_prev_death.private_cost);
        out[j++] = grand;
        out[j++] = yll * f.f_deaths + yld * case_scale;
    }
};

} // namespace detail

inline SimulationSummary simulate(const ScenarioBundle& bundle, int n,
                                  std::uint64_t seed, const UncertaintySpec& spec,
                                  double lower_pct = 2.5, double upper_pct = 97.5,
                                  unsigned threads = 0) {
    if (n < 1)
        throw std::invalid_argument("simulate: iterations must be >= 1");
    ModelResult base = run_model(bundle);
    detail::IterationModel im = detail::IterationModel::build(bundle, base);
    const std::size_t w = im.width();
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> results(un * w);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SplitMix64 rng = SplitMix64::substream(seed, i);
            Factors f = draw_factors(spec, rng);
            im.evaluate(f, &results[i * w]);
        }
    };
    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    if (nthreads <= 1 || un < 2) {
        worker(0, un);
    } else {
        nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(un));
        std::vector<std::thread> pool;
        std::size_t chunk = (un + nthreads - 1) / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            std::size_t b = t * chunk, e = std::min(un, b + chunk);
            if (b < e)
                pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool)
            th.join();
    }

    SimulationSummary s;
    s.iterations = n;
    s.seed = seed;
    s.lower_pct = lower_pct;
    s.upper_pct = upper_pct;
    std::vector<double> baseline(w);
    im.evaluate({1.0, 1.0, spec.mi_mean}, baseline.data());
    std::vector<double> column(un);
    for (std::size_t j = 0; j < w; ++j) {
        for (std::size_t i = 0; i < un; ++i)
            column[i] = results[i * w + j];
        CellStats cs = summarize(im.names[j], column, lower_pct, upper_pct);
        cs.base = baseline[j];
        s.cells.push_back(cs);
    }
    return s;
}

} // namespace burden
