#include "collabline/sequences.hpp"

#include <algorithm>

namespace collabline {

TeamSequences build_team_sequences(const Dataset& ds) {
    std::vector<PatentIdx> multi;
    for (PatentIdx p = 0; p < ds.n_patents(); ++p)
        if (ds.inventors_of(p).size() >= 2) multi.push_back(p);

    // One comparator does both jobs: group by exact inventor set, order
    // entries by (year, patent index) within the group.
    std::sort(multi.begin(), multi.end(), [&](PatentIdx a, PatentIdx b) {
        auto sa = ds.inventors_of(a), sb = ds.inventors_of(b);
        auto c = std::lexicographical_compare_three_way(sa.begin(), sa.end(), sb.begin(),
                                                        sb.end());
        if (c != 0) return c < 0;
        if (ds.cohort_year(a) != ds.cohort_year(b)) return ds.cohort_year(a) < ds.cohort_year(b);
        return a < b;
    });

    TeamSequences out;
    out.patents = std::move(multi);
    out.offsets.push_back(0);
    for (size_t i = 1; i <= out.patents.size(); ++i) {
        bool boundary = i == out.patents.size();
        if (!boundary) {
            auto sa = ds.inventors_of(out.patents[i - 1]);
            auto sb = ds.inventors_of(out.patents[i]);
            boundary = !std::equal(sa.begin(), sa.end(), sb.begin(), sb.end());
        }
        if (boundary) out.offsets.push_back(static_cast<uint32_t>(i));
    }
    if (out.patents.empty()) out.offsets = {0};
    return out;
}

PairSequences build_pair_sequences(const Dataset& ds) {
    struct Entry {
        PairKey key;
        PatentIdx patent;
    };
    std::vector<Entry> entries;
    size_t total = 0;
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        size_t k = ds.inventors_of(p).size();
        if (k >= 2) total += k * (k - 1) / 2;
    }
    entries.reserve(total);
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        auto invs = ds.inventors_of(p);  // already sorted
        for (size_t i = 0; i + 1 < invs.size(); ++i)
            for (size_t j = i + 1; j < invs.size(); ++j)
                entries.push_back({{invs[i], invs[j]}, p});
    }
    std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key < b.key;
        if (ds.cohort_year(a.patent) != ds.cohort_year(b.patent))
            return ds.cohort_year(a.patent) < ds.cohort_year(b.patent);
        return a.patent < b.patent;
    });

    PairSequences out;
    out.offsets.push_back(0);
    out.patents.reserve(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i == 0 || entries[i].key != entries[i - 1].key) {
            if (i != 0) out.offsets.push_back(static_cast<uint32_t>(i));
            out.keys.push_back(entries[i].key);
        }
        out.patents.push_back(entries[i].patent);
    }
    out.offsets.push_back(static_cast<uint32_t>(entries.size()));
    if (out.keys.empty()) out.offsets = {0};
    return out;
}

std::vector<HitAnchor> find_hit_anchors(const TeamSequences& seqs, const Dataset& ds,
                                        std::span<const double> impact, double cutoff) {
    (void)ds;
    std::vector<HitAnchor> anchors;
    for (size_t t = 0; t < seqs.size(); ++t) {
        auto entries = seqs.entries(t);
        for (uint32_t k = 0; k < entries.size(); ++k)
            if (impact[entries[k]] > cutoff)
                anchors.push_back({static_cast<uint32_t>(t), k});
    }
    return anchors;
}

std::vector<SwitchEvent> find_switch_events(std::span<const HitAnchor> anchors,
                                            const TeamSequences& seqs, const Dataset& ds) {
    // inventor -> teams CSR
    std::vector<std::pair<InventorId, uint32_t>> memberships;
    for (size_t t = 0; t < seqs.size(); ++t)
        for (InventorId m : seqs.members(ds, t))
            memberships.emplace_back(m, static_cast<uint32_t>(t));
    std::sort(memberships.begin(), memberships.end());

    auto teams_of = [&](InventorId m) {
        auto lo = std::lower_bound(memberships.begin(), memberships.end(),
                                   std::make_pair(m, 0u));
        auto hi = std::upper_bound(memberships.begin(), memberships.end(),
                                   std::make_pair(m, UINT32_MAX));
        return std::span<const std::pair<InventorId, uint32_t>>(
            memberships.data() + (lo - memberships.begin()), static_cast<size_t>(hi - lo));
    };

    std::vector<SwitchEvent> events;
    std::vector<uint32_t> candidates;
    for (const HitAnchor& anchor : anchors) {
        auto hit_entries = seqs.entries(anchor.team);
        const int32_t hit_year = ds.cohort_year(hit_entries[anchor.pos]);

        candidates.clear();
        for (InventorId m : seqs.members(ds, anchor.team)) {
            for (auto [mm, t2] : teams_of(m)) {
                if (t2 == anchor.team) continue;
                PatentIdx first = seqs.entries(t2)[0];
                if (ds.cohort_year(first) > hit_year) candidates.push_back(t2);
            }
        }
        // One event per (hit anchor, new team) even when several members are
        // shared.
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (uint32_t t2 : candidates) {
            PatentIdx first = seqs.entries(t2)[0];
            const int32_t first_year = ds.cohort_year(first);
            int64_t count = 0;  // hit-team patents from the hit, dated <= first_year
            for (size_t k = anchor.pos; k < hit_entries.size(); ++k) {
                if (ds.cohort_year(hit_entries[k]) <= first_year)
                    ++count;
                else
                    break;
            }
            SwitchEvent ev;
            ev.hit_team = anchor.team;
            ev.hit_pos = anchor.pos;
            ev.new_team = t2;
            ev.first_patent = first;
            ev.aligned_r = 1 + count;
            // Smallest member common to both teams.
            auto a = seqs.members(ds, anchor.team);
            auto b = seqs.members(ds, t2);
            std::vector<InventorId> shared;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(shared));
            ev.mover = shared.front();
            events.push_back(ev);
        }
    }
    return events;
}

}  // namespace collabline
