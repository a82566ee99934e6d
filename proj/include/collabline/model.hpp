#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace collabline {

// Interned identifiers. Tables are sorted lexicographically at build time,
// so numeric order equals string order.
using InventorId = uint32_t;
using ClassCode = uint32_t;
using PatentIdx = uint32_t;

constexpr PatentIdx kInvalidPatent = UINT32_MAX;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct UsageError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct WorkspaceError : DataError {
    using DataError::DataError;
};
struct ConfigError : DataError {
    using DataError::DataError;
};
struct SoloTeamError : DataError {
    using DataError::DataError;
};
struct DuplicateInventorError : DataError {
    using DataError::DataError;
};
struct InsufficientDataError : DataError {
    using DataError::DataError;
};
struct EmptyDatasetError : DataError {
    using DataError::DataError;
};

// Canonical team identity: the exact inventor set, sorted. A subset team and
// its superset are distinct keys.
struct TeamKey {
    std::vector<InventorId> members;  // sorted ascending, size >= 2

    bool operator==(const TeamKey&) const = default;
    auto operator<=>(const TeamKey&) const = default;
};

// Canonical unordered pair of distinct inventors.
struct PairKey {
    InventorId a = 0;  // a < b
    InventorId b = 0;

    bool operator==(const PairKey&) const = default;
    auto operator<=>(const PairKey&) const = default;
};

TeamKey make_team_key(std::span<const InventorId> inventors);
std::vector<PairKey> enumerate_pairs(std::span<const InventorId> inventors);

// Hit criterion: top-quantile or absolute impact threshold. A patent is a hit
// iff its impact strictly exceeds the bound cutoff.
struct HitSpec {
    enum class Mode { quantile, absolute };
    Mode mode = Mode::quantile;
    double value = 0.10;

    // Canonical short form used in CLI flags and provenance ("top10", "gt:2").
    std::string label() const;
    static HitSpec parse(const std::string& text);
};

// Normalized impact per patent: citations / cohort mean citations, indexed by
// patent position. Cohorts with zero mean citations map to impact 0.
struct ImpactTable {
    std::vector<double> impact;                 // one per patent
    std::map<int32_t, double> cohort_means;     // year -> mean citation count
    std::map<int32_t, uint64_t> cohort_counts;  // year -> cohort size
};

}  // namespace collabline
