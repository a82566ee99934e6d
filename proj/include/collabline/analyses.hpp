#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "collabline/metrics.hpp"
#include "collabline/sequences.hpp"
#include "collabline/stats.hpp"

namespace collabline {

struct AnalysisConfig {
    HitSpec hit;
    double bound_cutoff = 0;  // set via bind_hit_threshold before hit analyses
    uint64_t min_samples = 100;
    double impact_bin_width = 1.0;
    bool hit_population_team = false;    // quantile over team patents only
    bool include_first_as_inex = false;  // count r=1 as InEx in diversity runs
};

struct TestPoint {
    double bin = 0;
    RankSumResult test;
};

struct SeriesResult {
    std::string label;
    BinnedSeries binned;
    std::vector<TestPoint> tests;
    // Raw per-bin observations, in deterministic order; feeds the per-bin
    // rank-sum tests and the rho ratios.
    std::map<int64_t, std::vector<double>> samples;
};

// Prediction 1: every team patent once as a baseline; observation = (impact
// of baseline, count of strictly subsequent same-team patents). Series binned
// over impact, OLS on the raw observations.
struct P1Result {
    SeriesResult series;
    OlsResult fit;
    std::vector<double> impacts;  // raw observations, canonical order
    std::vector<double> counts;
};
P1Result prediction1(const TeamSequences& seqs, const Dataset& ds,
                     std::span<const double> impact, const AnalysisConfig& cfg);

// Prediction 2: each hit anchors a subsequence r=1 (the hit), 2, ... to the
// end of the team's sequence; mean impact per repetition bin.
SeriesResult prediction2_stay_series(const TeamSequences& seqs, const Dataset& ds,
                                     std::span<const double> impact,
                                     std::span<const HitAnchor> anchors,
                                     const AnalysisConfig& cfg);

// Prediction 3: mean first-patent impact of new teams per aligned repetition,
// with one-sided per-bin tests switch > stay.
SeriesResult prediction3_switch_series(std::span<const SwitchEvent> events,
                                       std::span<const double> impact,
                                       const SeriesResult& stay, const AnalysisConfig& cfg);

struct RhoPoint {
    int64_t r = 0;
    double rho = 0;
    uint64_t n_switch = 0;
    uint64_t n_stay = 0;
};
struct RhoSeries {
    std::vector<RhoPoint> points;
    std::vector<std::string> notes;  // e.g. division-by-zero omissions
};

// rho(r) = switch mean / stay mean wherever both bins meet min_samples.
RhoSeries rho_series(const SeriesResult& stay, const SeriesResult& switch_,
                     uint64_t min_samples);

struct ThresholdRho {
    double threshold = 0;
    SeriesResult stay;
    SeriesResult switch_;
    RhoSeries rho;
};
struct SweepResult {
    std::vector<ThresholdRho> series;
    // Per-bin one-sided tests between the lowest and highest threshold's
    // switch samples (lowest tested as greater).
    std::vector<TestPoint> tests;
};
SweepResult threshold_sweep(const TeamSequences& seqs, const Dataset& ds,
                            std::span<const double> impact,
                            std::span<const double> thresholds, const AnalysisConfig& cfg);

// InEx/Ex split with per-bin one-sided tests (InEx tested as greater).
struct DiversityResult {
    SeriesResult inex;
    SeriesResult ex;
    std::vector<TestPoint> tests;
};

// Technological diversity over exact teams: a patent at r >= 2 is InEx iff it
// carries a class absent from the team's history. All teams, hits ignored.
DiversityResult tech_diversity(const TeamSequences& seqs, const Dataset& ds,
                               std::span<const double> impact, const AnalysisConfig& cfg);

// Team-setup diversity over pairs: a patent at r >= 2 is InEx iff the set of
// co-inventors beyond the pair has not occurred earlier for that pair.
DiversityResult pair_diversity(const PairSequences& seqs, const Dataset& ds,
                               std::span<const double> impact, const AnalysisConfig& cfg);

// Cross-workspace comparison of Prediction 1 observations: per impact bin,
// one-sided rank-sum of subsequent-patent counts (first workspace tested as
// greater).
std::vector<TestPoint> compare_p1(const P1Result& a, const P1Result& b,
                                  const AnalysisConfig& cfg);

// Hit population for quantile binding per config.
std::vector<double> hit_population(const TeamSequences& seqs, const Dataset& ds,
                                   std::span<const double> impact, const AnalysisConfig& cfg);

}  // namespace collabline
