#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "collabline/model.hpp"
#include "collabline/workspace.hpp"

namespace collabline {

// Time-ordered repetition sequences. Ordering within a sequence is by cohort
// year, ties broken by ascending patent_id (== ascending patent index).
// Entries of sequence s are patents[offsets[s] .. offsets[s+1]); the 1-based
// repetition of an entry is its position within that range + 1.

struct TeamSequences {
    std::vector<uint32_t> offsets;   // size n_teams + 1
    std::vector<PatentIdx> patents;  // grouped, ordered per team

    size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const PatentIdx> entries(size_t team) const {
        return {patents.data() + offsets[team], offsets[team + 1] - offsets[team]};
    }
    // The team's inventor set is the inventor set of any of its patents.
    std::span<const InventorId> members(const Dataset& ds, size_t team) const {
        return ds.inventors_of(patents[offsets[team]]);
    }
};

struct PairSequences {
    std::vector<PairKey> keys;       // size n_pairs, ascending
    std::vector<uint32_t> offsets;   // size n_pairs + 1
    std::vector<PatentIdx> patents;  // grouped, ordered per pair

    size_t size() const { return keys.size(); }
    std::span<const PatentIdx> entries(size_t pair) const {
        return {patents.data() + offsets[pair], offsets[pair + 1] - offsets[pair]};
    }
};

// Exhaustive, disjoint partition of multi-inventor patents into exact-set
// team sequences, ordered by canonical team key.
TeamSequences build_team_sequences(const Dataset& ds);

// Every patent with n >= 2 inventors appears in all C(n,2) of its pair
// sequences. The co-inventors beyond the pair ("others") are recoverable from
// the patent record.
PairSequences build_pair_sequences(const Dataset& ds);

struct SwitchEvent {
    uint32_t hit_team = 0;      // index into TeamSequences
    uint32_t hit_pos = 0;       // entry index of the anchoring hit
    uint32_t new_team = 0;      // index into TeamSequences
    InventorId mover = 0;       // smallest shared member
    PatentIdx first_patent = kInvalidPatent;
    int64_t aligned_r = 0;      // >= 2
};

struct HitAnchor {
    uint32_t team = 0;
    uint32_t pos = 0;  // entry index of the hit within the team sequence
};

// All hit anchors for a bound cutoff: team entries whose impact strictly
// exceeds it.
std::vector<HitAnchor> find_hit_anchors(const TeamSequences& seqs, const Dataset& ds,
                                        std::span<const double> impact, double cutoff);

// For each hit anchor and each other team sharing a member with the hit team
// whose first patent is dated strictly after the hit, one event. aligned_r =
// 1 + number of hit-team patents from the hit (inclusive) dated <= the new
// team's first patent; a same-year hit-team patent counts first.
std::vector<SwitchEvent> find_switch_events(std::span<const HitAnchor> anchors,
                                            const TeamSequences& seqs, const Dataset& ds);

}  // namespace collabline
