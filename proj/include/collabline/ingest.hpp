#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "collabline/workspace.hpp"

namespace collabline {

struct IngestReport {
    uint64_t n_patents = 0;
    uint64_t n_inventors = 0;
    uint64_t n_teams = 0;  // distinct exact inventor sets of size >= 2
    uint64_t n_citations_kept = 0;
    uint64_t n_citations_dropped = 0;
    int32_t min_year = 0;
    int32_t max_year = 0;

    bool operator==(const IngestReport&) const = default;
    std::string to_json() const;
};

struct IngestOptions {
    bool strict = false;  // promote dropped citation edges to errors
    bool grant_cohorts = false;
};

// Parses the canonical CSV pair, validates, resolves citation edges, and
// materializes the workspace. Re-running on identical inputs yields a
// byte-identical workspace.
IngestReport ingest(const std::filesystem::path& patents_csv,
                    const std::filesystem::path& citations_csv,
                    const std::filesystem::path& workspace,
                    const IngestOptions& opts = {});

// In-memory variant used by the synthetic pipeline and tests.
struct RawPatent {
    std::string id;
    int32_t year = 0;
    int32_t grant_year = INT32_MIN;  // INT32_MIN = absent
    std::vector<std::string> inventors;
    std::vector<std::string> classes;
};

Dataset build_dataset(std::vector<RawPatent> patents,
                      const std::vector<std::pair<std::string, std::string>>& citations,
                      const IngestOptions& opts = {});

IngestReport report_of(const Dataset& ds);

// Recomputes the Table-1-style summary from a stored workspace.
IngestReport summarize(const std::filesystem::path& workspace);

// Canonical CSV export (patents ordered by id, citations sorted); re-ingests
// to an identical workspace.
void export_csv(const Dataset& ds, const std::filesystem::path& patents_csv,
                const std::filesystem::path& citations_csv);

uint64_t count_teams(const Dataset& ds);

}  // namespace collabline
