#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collabline/model.hpp"

namespace collabline {

// In-memory dataset. Patents are stored sorted by patent_id, so a patent's
// index order equals its id's lexicographic order; inventor and class tables
// are sorted the same way, so interned ids compare like the original strings.
struct Dataset {
    std::vector<std::string> inventor_names;
    std::vector<std::string> class_names;
    std::vector<std::string> patent_ids;

    std::vector<int32_t> app_year;                // per patent
    std::vector<int32_t> grant_year;              // empty unless the input had one
    std::vector<uint32_t> inv_offsets;            // CSR, size n+1
    std::vector<InventorId> inv_ids;              // sorted within each patent
    std::vector<uint32_t> cls_offsets;            // CSR, size n+1
    std::vector<ClassCode> cls_ids;               // sorted within each patent

    std::vector<std::pair<PatentIdx, PatentIdx>> edges;  // kept, sorted
    std::vector<uint32_t> citation_count;                // in-degree of kept edges

    uint64_t n_citations_dropped = 0;
    int32_t min_year = 0;
    int32_t max_year = 0;
    bool use_grant_cohorts = false;  // cohort year source for impact

    size_t n_patents() const { return patent_ids.size(); }
    std::span<const InventorId> inventors_of(PatentIdx p) const {
        return {inv_ids.data() + inv_offsets[p], inv_offsets[p + 1] - inv_offsets[p]};
    }
    std::span<const ClassCode> classes_of(PatentIdx p) const {
        return {cls_ids.data() + cls_offsets[p], cls_offsets[p + 1] - cls_offsets[p]};
    }
    int32_t cohort_year(PatentIdx p) const {
        return use_grant_cohorts && !grant_year.empty() ? grant_year[p] : app_year[p];
    }
};

// Workspace directory: patents.bin + citations.bin (+ impact.bin once
// computed) + manifest.json.
void save_workspace(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_workspace(const std::filesystem::path& dir);

void save_impact(const ImpactTable& tbl, const std::filesystem::path& dir);
std::optional<ImpactTable> load_impact(const std::filesystem::path& dir, size_t n_patents);

// Records a bound hit cutoff in the workspace manifest (idempotent).
void record_cutoff(const std::filesystem::path& dir, const std::string& hit_label,
                   double cutoff);

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// FNV-1a digests used for manifests; not cryptographic.
uint64_t fnv1a(std::span<const char> bytes, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t digest_file(const std::filesystem::path& path);
std::string hex64(uint64_t v);

// Fixed decimal formatting for all CSV output (9 significant digits).
std::string fmt_num(double v);

}  // namespace collabline
