#pragma once

// Straightforward serial implementations kept independent of the main
// pipeline. They are the test oracle and the baseline for the benchmark; do
// not share code with src/ kernels.

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace collabline::reference {

struct Patent {
    std::string id;
    int year = 0;
    std::set<std::string> inventors;
    std::set<std::string> classes;
    double impact = 0;
};

// (year, id)-ordered patent lists per exact inventor set / per pair.
std::map<std::set<std::string>, std::vector<std::string>> team_sequences(
    const std::vector<Patent>& patents);
std::map<std::pair<std::string, std::string>, std::vector<std::string>> pair_sequences(
    const std::vector<Patent>& patents);

// Impact per patent id: citations / cohort mean.
std::map<std::string, double> impact_table(
    const std::vector<Patent>& patents,
    const std::vector<std::pair<std::string, std::string>>& citations);

// Prediction 1 observations: (impact, subsequent count) per team patent,
// keyed by patent id.
std::map<std::string, std::pair<double, long>> prediction1_observations(
    const std::vector<Patent>& patents);

// Hit-anchored stay observations: list of (r, impact, patent id), ordered by
// (team set, hit position, r).
struct StayObs {
    long r = 0;
    double impact = 0;
    std::string patent;
};
std::vector<StayObs> stay_observations(const std::vector<Patent>& patents, double cutoff);

// Switch alignment: (hit team, hit patent, new team, first patent, aligned r).
struct SwitchObs {
    std::set<std::string> hit_team;
    std::string hit_patent;
    std::set<std::string> new_team;
    std::string first_patent;
    long aligned_r = 0;
};
std::vector<SwitchObs> switch_observations(const std::vector<Patent>& patents, double cutoff);

// Exact one-sided rank-sum p by enumeration of all assignments of the pooled
// values to the two groups (permutation oracle; feasible for n1+n2 <= ~16).
double rank_sum_exact_p(std::span<const double> greater, std::span<const double> lesser);

}  // namespace collabline::reference
