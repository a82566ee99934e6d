#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "collabline/ingest.hpp"

namespace collabline {

// Seeded generative simulator of inventor careers. All randomness flows from
// `seed` through a single documented stream; identical config + seed yields
// identical output bytes.
struct GenConfig {
    uint64_t seed = 1;
    uint64_t n_inventors = 1000;
    int32_t start_year = 1980;
    int32_t end_year = 2010;
    uint64_t n_patents = 10000;  // generation target
    double team_size_mu = 0.9;   // log-normal team size, truncated >= 2
    double team_size_sigma = 0.5;
    double base_impact_mu = 0.0;     // mu0 of ln(impact)
    double base_impact_sigma = 1.0;  // sigma0
    double continuation_base = 0.5;  // p0
    double continuation_gain = 0.0;  // alpha: extra continuation prob per unit last impact
    double decline_rate = 0.0;       // beta: per-repetition drop in log-impact
    double diversity_boost = 0.0;    // gamma: log-impact bonus for InEx patents
    uint64_t class_pool = 50;
    double solo_fraction = 0.15;
    double cite_scale = 20.0;  // target mean citations per cohort

    static GenConfig from_json_file(const std::filesystem::path& path);
    std::string to_json() const;
    void validate() const;
};

struct SynthOutput {
    std::vector<RawPatent> patents;
    std::vector<std::pair<std::string, std::string>> citations;  // citing, cited
    std::vector<double> drawn_impact;  // per patent, pre-normalization
};

SynthOutput generate(const GenConfig& cfg);

// Writes canonical patents.csv + citations.csv under `dir`.
void write_synth_csv(const SynthOutput& out, const std::filesystem::path& dir);

}  // namespace collabline
