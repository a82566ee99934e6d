#include "collabline/reference.hpp"

#include <algorithm>
#include <cmath>

namespace collabline::reference {

namespace {

std::vector<const Patent*> ordered(const std::vector<Patent>& patents) {
    std::vector<const Patent*> out;
    for (const auto& p : patents) out.push_back(&p);
    std::sort(out.begin(), out.end(), [](const Patent* a, const Patent* b) {
        if (a->year != b->year) return a->year < b->year;
        return a->id < b->id;
    });
    return out;
}

}  // namespace

std::map<std::set<std::string>, std::vector<std::string>> team_sequences(
    const std::vector<Patent>& patents) {
    std::map<std::set<std::string>, std::vector<std::string>> out;
    for (const Patent* p : ordered(patents))
        if (p->inventors.size() >= 2) out[p->inventors].push_back(p->id);
    return out;
}

std::map<std::pair<std::string, std::string>, std::vector<std::string>> pair_sequences(
    const std::vector<Patent>& patents) {
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> out;
    for (const Patent* p : ordered(patents)) {
        std::vector<std::string> inv(p->inventors.begin(), p->inventors.end());
        for (size_t i = 0; i < inv.size(); ++i)
            for (size_t j = i + 1; j < inv.size(); ++j)
                out[{inv[i], inv[j]}].push_back(p->id);
    }
    return out;
}

std::map<std::string, double> impact_table(
    const std::vector<Patent>& patents,
    const std::vector<std::pair<std::string, std::string>>& citations) {
    std::map<std::string, long> cites;
    std::map<std::string, int> year_of;
    for (const auto& p : patents) {
        cites[p.id] = 0;
        year_of[p.id] = p.year;
    }
    for (const auto& [citing, cited] : citations) {
        if (!year_of.count(citing) || !year_of.count(cited) || citing == cited) continue;
        ++cites[cited];
    }
    std::map<int, std::pair<double, long>> cohort;  // year -> (sum, count)
    for (const auto& p : patents) {
        cohort[p.year].first += static_cast<double>(cites[p.id]);
        cohort[p.year].second += 1;
    }
    std::map<std::string, double> impact;
    for (const auto& p : patents) {
        auto [sum, count] = cohort[p.year];
        double mean = sum / static_cast<double>(count);
        impact[p.id] = mean > 0 ? static_cast<double>(cites[p.id]) / mean : 0.0;
    }
    return impact;
}

std::map<std::string, std::pair<double, long>> prediction1_observations(
    const std::vector<Patent>& patents) {
    std::map<std::string, double> impact;
    for (const auto& p : patents) impact[p.id] = p.impact;
    std::map<std::string, std::pair<double, long>> out;
    for (const auto& [team, ids] : team_sequences(patents))
        for (size_t k = 0; k < ids.size(); ++k)
            out[ids[k]] = {impact[ids[k]], static_cast<long>(ids.size() - k - 1)};
    return out;
}

std::vector<StayObs> stay_observations(const std::vector<Patent>& patents, double cutoff) {
    std::map<std::string, double> impact;
    for (const auto& p : patents) impact[p.id] = p.impact;
    std::vector<StayObs> out;
    for (const auto& [team, ids] : team_sequences(patents)) {
        for (size_t h = 0; h < ids.size(); ++h) {
            if (!(impact[ids[h]] > cutoff)) continue;
            for (size_t k = h; k < ids.size(); ++k)
                out.push_back({static_cast<long>(k - h + 1), impact[ids[k]], ids[k]});
        }
    }
    return out;
}

std::vector<SwitchObs> switch_observations(const std::vector<Patent>& patents, double cutoff) {
    std::map<std::string, double> impact;
    std::map<std::string, int> year_of;
    for (const auto& p : patents) {
        impact[p.id] = p.impact;
        year_of[p.id] = p.year;
    }
    auto teams = team_sequences(patents);
    std::map<std::string, std::vector<const std::set<std::string>*>> member_teams;
    for (const auto& [team, ids] : teams)
        for (const auto& m : team) member_teams[m].push_back(&team);

    std::vector<SwitchObs> out;
    for (const auto& [team, ids] : teams) {
        for (size_t h = 0; h < ids.size(); ++h) {
            if (!(impact[ids[h]] > cutoff)) continue;
            int hit_year = year_of[ids[h]];
            std::set<const std::set<std::string>*> seen;
            for (const auto& m : team) {
                for (const auto* other : member_teams[m]) {
                    if (*other == team || seen.count(other)) continue;
                    const auto& other_ids = teams[*other];
                    int first_year = year_of[other_ids[0]];
                    if (first_year <= hit_year) continue;
                    seen.insert(other);
                    long count = 0;
                    for (size_t k = h; k < ids.size(); ++k)
                        if (year_of[ids[k]] <= first_year) ++count;
                    out.push_back({team, ids[h], *other, other_ids[0], 1 + count});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SwitchObs& a, const SwitchObs& b) {
        if (a.hit_team != b.hit_team) return a.hit_team < b.hit_team;
        if (a.hit_patent != b.hit_patent) return a.hit_patent < b.hit_patent;
        return a.new_team < b.new_team;
    });
    return out;
}

double rank_sum_exact_p(std::span<const double> greater, std::span<const double> lesser) {
    const size_t n1 = greater.size(), n2 = lesser.size(), N = n1 + n2;
    std::vector<double> pooled(greater.begin(), greater.end());
    pooled.insert(pooled.end(), lesser.begin(), lesser.end());
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    auto midrank = [&](double v) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
        double first = static_cast<double>(lo - sorted.begin()) + 1.0;
        double last = static_cast<double>(hi - sorted.begin());
        return (first + last) / 2.0;
    };
    std::vector<double> ranks(N);
    for (size_t i = 0; i < N; ++i) ranks[i] = midrank(pooled[i]);

    double r_obs = 0;
    for (size_t i = 0; i < n1; ++i) r_obs += ranks[i];
    const double u_obs = r_obs - static_cast<double>(n1 * (n1 + 1)) / 2.0;

    // Enumerate all assignments of n1 pooled positions to the first group.
    long total = 0, at_least = 0;
    std::vector<size_t> pick(n1);
    auto recurse = [&](auto&& self, size_t start, size_t depth, double rsum) -> void {
        if (depth == n1) {
            ++total;
            double u = rsum - static_cast<double>(n1 * (n1 + 1)) / 2.0;
            if (u >= u_obs - 1e-9) ++at_least;
            return;
        }
        for (size_t i = start; i + (n1 - depth) <= N; ++i)
            self(self, i + 1, depth + 1, rsum + ranks[i]);
    };
    recurse(recurse, 0, 0, 0.0);
    return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace collabline::reference
