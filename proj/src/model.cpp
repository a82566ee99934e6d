#include "collabline/model.hpp"

#include <algorithm>
#include <charconv>

namespace collabline {

TeamKey make_team_key(std::span<const InventorId> inventors) {
    if (inventors.size() < 2)
        throw SoloTeamError("team requires more than one inventor, got " +
                            std::to_string(inventors.size()));
    TeamKey key;
    key.members.assign(inventors.begin(), inventors.end());
    std::sort(key.members.begin(), key.members.end());
    if (std::adjacent_find(key.members.begin(), key.members.end()) != key.members.end())
        throw DuplicateInventorError("duplicate inventor id in team");
    return key;
}

std::vector<PairKey> enumerate_pairs(std::span<const InventorId> inventors) {
    std::vector<PairKey> pairs;
    if (inventors.size() < 2) return pairs;
    std::vector<InventorId> sorted(inventors.begin(), inventors.end());
    std::sort(sorted.begin(), sorted.end());
    pairs.reserve(sorted.size() * (sorted.size() - 1) / 2);
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        for (size_t j = i + 1; j < sorted.size(); ++j)
            pairs.push_back({sorted[i], sorted[j]});
    return pairs;
}

std::string HitSpec::label() const {
    char buf[48];
    if (mode == Mode::quantile) {
        snprintf(buf, sizeof(buf), "top%g", value * 100.0);
    } else {
        snprintf(buf, sizeof(buf), "gt:%g", value);
    }
    return buf;
}

HitSpec HitSpec::parse(const std::string& text) {
    HitSpec spec;
    if (text.rfind("top", 0) == 0) {
        spec.mode = Mode::quantile;
        double pct = 0;
        auto [p, ec] = std::from_chars(text.data() + 3, text.data() + text.size(), pct);
        if (ec != std::errc{} || p != text.data() + text.size() || pct <= 0 || pct >= 100)
            throw UsageError("bad hit spec '" + text + "' (expected e.g. top10)");
        spec.value = pct / 100.0;
    } else if (text.rfind("gt:", 0) == 0) {
        spec.mode = Mode::absolute;
        double v = 0;
        auto [p, ec] = std::from_chars(text.data() + 3, text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size() || v <= 0)
            throw UsageError("bad hit spec '" + text + "' (expected e.g. gt:2)");
        spec.value = v;
    } else {
        throw UsageError("bad hit spec '" + text + "' (expected topN or gt:X)");
    }
    return spec;
}

}  // namespace collabline
