#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "collabline/analyses.hpp"

namespace collabline {

// CSV writers with fixed headers, fixed column order, LF endings, and
// %.9g values. All writes are atomic (temp + rename).

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<const SeriesResult*>& series);
void write_tests_csv(const std::filesystem::path& path, const std::vector<TestPoint>& tests);
void write_rho_csv(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, const RhoSeries*>>& series);
void write_ccdf_csv(const std::filesystem::path& path,
                    const std::vector<const CcdfSeries*>& series);
std::string lognormal_fit_json(const std::vector<std::pair<std::string, LogNormalFit>>& fits);

// Writes one manifest.json into `dir` listing command line, config hash,
// input digests, tool version, wall time, and the digests of every output
// file already present in `dir`.
void write_run_manifest(const std::filesystem::path& dir, const std::string& command_line,
                        const std::string& version, uint64_t config_hash,
                        const std::vector<std::pair<std::string, std::string>>& input_digests,
                        double wall_seconds);

// Full figure-series bundle for one workspace and hit spec: distribution
// CCDFs, prediction 1-3, rho, threshold sweep, and both diversity analyses.
void run_report(const std::filesystem::path& workspace, const AnalysisConfig& cfg,
                std::span<const double> sweep_thresholds, const std::filesystem::path& out_dir);

}  // namespace collabline
