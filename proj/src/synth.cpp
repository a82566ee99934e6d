#include "collabline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "collabline/workspace.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace collabline {

namespace {

// Single documented stream: every draw funnels through these helpers in
// generation order.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    uint64_t index(uint64_t n) { return static_cast<uint64_t>(uniform() * static_cast<double>(n)) % n; }
    double normal() {
        // Box-Muller, two uniforms per draw, no caching.
        double u1 = uniform(), u2 = uniform();
        if (u1 <= 0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

struct Team {
    std::vector<uint64_t> members;       // inventor indices, sorted
    std::vector<uint64_t> class_union;   // sorted
    uint64_t r = 0;
    double last_impact = 0;
};

std::string inventor_name(uint64_t i) {
    char buf[24];
    snprintf(buf, sizeof(buf), "I%06llu", static_cast<unsigned long long>(i));
    return buf;
}

std::string class_name(uint64_t i) {
    char buf[24];
    snprintf(buf, sizeof(buf), "C%04llu", static_cast<unsigned long long>(i));
    return buf;
}

std::string patent_name(uint64_t i) {
    char buf[24];
    snprintf(buf, sizeof(buf), "P%08llu", static_cast<unsigned long long>(i));
    return buf;
}

}  // namespace

void GenConfig::validate() const {
    if (n_inventors < 2) throw ConfigError("synth: n_inventors must be >= 2");
    if (end_year < start_year) throw ConfigError("synth: end_year < start_year");
    if (n_patents == 0) throw ConfigError("synth: n_patents must be positive");
    if (team_size_sigma < 0 || base_impact_sigma < 0)
        throw ConfigError("synth: sigma parameters must be nonnegative");
    if (decline_rate < 0) throw ConfigError("synth: decline_rate must be >= 0");
    if (solo_fraction < 0 || solo_fraction > 1)
        throw ConfigError("synth: solo_fraction must be in [0,1]");
    if (class_pool == 0) throw ConfigError("synth: class_pool must be positive");
    if (cite_scale <= 0) throw ConfigError("synth: cite_scale must be positive");
}

GenConfig GenConfig::from_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("bad config JSON in " + path.string() + ": " + e.what());
    }
    GenConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_inventors = j.value("n_inventors", cfg.n_inventors);
    cfg.start_year = j.value("start_year", cfg.start_year);
    cfg.end_year = j.value("end_year", cfg.end_year);
    cfg.n_patents = j.value("n_patents", cfg.n_patents);
    cfg.team_size_mu = j.value("team_size_mu", cfg.team_size_mu);
    cfg.team_size_sigma = j.value("team_size_sigma", cfg.team_size_sigma);
    cfg.base_impact_mu = j.value("base_impact_mu", cfg.base_impact_mu);
    cfg.base_impact_sigma = j.value("base_impact_sigma", cfg.base_impact_sigma);
    cfg.continuation_base = j.value("continuation_base", cfg.continuation_base);
    cfg.continuation_gain = j.value("continuation_gain", cfg.continuation_gain);
    cfg.decline_rate = j.value("decline_rate", cfg.decline_rate);
    cfg.diversity_boost = j.value("diversity_boost", cfg.diversity_boost);
    cfg.class_pool = j.value("class_pool", cfg.class_pool);
    cfg.solo_fraction = j.value("solo_fraction", cfg.solo_fraction);
    cfg.cite_scale = j.value("cite_scale", cfg.cite_scale);
    cfg.validate();
    return cfg;
}

std::string GenConfig::to_json() const {
    json j{{"seed", seed},
           {"n_inventors", n_inventors},
           {"start_year", start_year},
           {"end_year", end_year},
           {"n_patents", n_patents},
           {"team_size_mu", team_size_mu},
           {"team_size_sigma", team_size_sigma},
           {"base_impact_mu", base_impact_mu},
           {"base_impact_sigma", base_impact_sigma},
           {"continuation_base", continuation_base},
           {"continuation_gain", continuation_gain},
           {"decline_rate", decline_rate},
           {"diversity_boost", diversity_boost},
           {"class_pool", class_pool},
           {"solo_fraction", solo_fraction},
           {"cite_scale", cite_scale}};
    return j.dump(2) + "\n";
}

SynthOutput generate(const GenConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SynthOutput out;
    out.patents.reserve(cfg.n_patents);
    out.drawn_impact.reserve(cfg.n_patents);

    std::vector<Team> active;
    const int64_t n_years = cfg.end_year - cfg.start_year + 1;

    auto draw_classes = [&]() {
        std::vector<uint64_t> classes;
        uint64_t k = 1 + rng.index(3);  // 1..3 classes
        for (uint64_t i = 0; i < k; ++i) classes.push_back(rng.index(cfg.class_pool));
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        return classes;
    };

    auto emit = [&](const std::vector<uint64_t>& members, const std::vector<uint64_t>& classes,
                    int32_t year, double impact) {
        RawPatent p;
        p.id = patent_name(out.patents.size());
        p.year = year;
        for (uint64_t m : members) p.inventors.push_back(inventor_name(m));
        for (uint64_t c : classes) p.classes.push_back(class_name(c));
        out.patents.push_back(std::move(p));
        out.drawn_impact.push_back(impact);
    };

    auto team_patent = [&](Team& team, int32_t year) {
        auto classes = draw_classes();
        ++team.r;
        bool inex = false;
        if (team.r >= 2)
            inex = std::any_of(classes.begin(), classes.end(), [&](uint64_t c) {
                return !std::binary_search(team.class_union.begin(), team.class_union.end(), c);
            });
        double ln_impact = cfg.base_impact_mu -
                           cfg.decline_rate * static_cast<double>(team.r - 1) +
                           (inex ? cfg.diversity_boost : 0.0) +
                           cfg.base_impact_sigma * rng.normal();
        double impact = std::exp(ln_impact);
        emit(team.members, classes, year, impact);
        team.last_impact = impact;
        for (uint64_t c : classes) {
            auto it = std::lower_bound(team.class_union.begin(), team.class_union.end(), c);
            if (it == team.class_union.end() || *it != c) team.class_union.insert(it, c);
        }
    };

    for (int32_t year = cfg.start_year; year <= cfg.end_year; ++year) {
        // Continuations first, in team creation order.
        std::vector<Team> survivors;
        survivors.reserve(active.size());
        for (Team& team : active) {
            double p = std::clamp(
                cfg.continuation_base + cfg.continuation_gain * team.last_impact, 0.0, 1.0);
            if (rng.uniform() < p) {
                team_patent(team, year);
                survivors.push_back(std::move(team));
            }
        }
        active.swap(survivors);

        // Births up to this year's cumulative quota.
        uint64_t target = cfg.n_patents * static_cast<uint64_t>(year - cfg.start_year + 1) /
                          static_cast<uint64_t>(n_years);
        while (out.patents.size() < target) {
            if (rng.uniform() < cfg.solo_fraction) {
                std::vector<uint64_t> solo{rng.index(cfg.n_inventors)};
                double impact =
                    std::exp(cfg.base_impact_mu + cfg.base_impact_sigma * rng.normal());
                emit(solo, draw_classes(), year, impact);
                continue;
            }
            Team team;
            uint64_t size = static_cast<uint64_t>(std::llround(
                std::exp(cfg.team_size_mu + cfg.team_size_sigma * rng.normal())));
            size = std::clamp<uint64_t>(size, 2, std::min<uint64_t>(12, cfg.n_inventors));
            while (team.members.size() < size) {
                uint64_t m = rng.index(cfg.n_inventors);
                if (std::find(team.members.begin(), team.members.end(), m) ==
                    team.members.end())
                    team.members.push_back(m);
            }
            std::sort(team.members.begin(), team.members.end());
            team_patent(team, year);
            active.push_back(std::move(team));
        }
    }

    // Citations: per cohort, integer counts proportional to drawn impact via
    // largest-remainder rounding, then round-robin citing assignment.
    const size_t n = out.patents.size();
    std::vector<uint64_t> cites(n, 0);
    std::map<int32_t, std::vector<size_t>> cohorts;
    for (size_t i = 0; i < n; ++i) cohorts[out.patents[i].year].push_back(i);
    for (auto& [year, idxs] : cohorts) {
        double total_target = 0;
        std::vector<std::pair<double, size_t>> remainders;
        uint64_t floor_sum = 0;
        for (size_t i : idxs) {
            double t = out.drawn_impact[i] * cfg.cite_scale;
            total_target += t;
            uint64_t fl = static_cast<uint64_t>(std::floor(t));
            cites[i] = fl;
            floor_sum += fl;
            remainders.emplace_back(-(t - std::floor(t)), i);  // negative for desc sort
        }
        int64_t extra = static_cast<int64_t>(std::llround(total_target)) -
                        static_cast<int64_t>(floor_sum);
        if (extra > 0) {
            std::sort(remainders.begin(), remainders.end());
            for (int64_t k = 0; k < extra && k < static_cast<int64_t>(remainders.size()); ++k)
                ++cites[remainders[static_cast<size_t>(k)].second];
        }
    }
    uint64_t g = 0;
    for (size_t i = 0; n >= 2 && i < n; ++i) {
        for (uint64_t k = 0; k < cites[i]; ++k) {
            size_t j = static_cast<size_t>(g % n);
            if (j == i) {
                ++g;
                j = static_cast<size_t>(g % n);
            }
            out.citations.emplace_back(out.patents[j].id, out.patents[i].id);
            ++g;
        }
    }
    return out;
}

void write_synth_csv(const SynthOutput& out, const fs::path& dir) {
    fs::create_directories(dir);
    std::string p = "patent_id,year,inventors,classes\n";
    for (const auto& pat : out.patents) {
        p += pat.id;
        p += ',';
        p += std::to_string(pat.year);
        p += ',';
        for (size_t i = 0; i < pat.inventors.size(); ++i) {
            if (i) p += ';';
            p += pat.inventors[i];
        }
        p += ',';
        for (size_t i = 0; i < pat.classes.size(); ++i) {
            if (i) p += ';';
            p += pat.classes[i];
        }
        p += '\n';
    }
    write_file_atomic(dir / "patents.csv", p);

    std::string c = "citing,cited\n";
    for (const auto& [citing, cited] : out.citations) {
        c += citing;
        c += ',';
        c += cited;
        c += '\n';
    }
    write_file_atomic(dir / "citations.csv", c);
}

}  // namespace collabline
