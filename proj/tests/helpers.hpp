#pragma once

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "collabline/ingest.hpp"
#include "collabline/reference.hpp"
#include "doctest.h"

namespace testutil {

using collabline::Dataset;
using collabline::RawPatent;

struct Fixture {
    std::vector<RawPatent> patents;
    std::vector<std::pair<std::string, std::string>> citations;

    Fixture& add(std::string id, int year, std::vector<std::string> inventors,
                 std::vector<std::string> classes = {"X"}) {
        RawPatent p;
        p.id = std::move(id);
        p.year = year;
        p.inventors = std::move(inventors);
        p.classes = std::move(classes);
        patents.push_back(std::move(p));
        return *this;
    }
    Fixture& cite(std::string citing, std::string cited) {
        citations.emplace_back(std::move(citing), std::move(cited));
        return *this;
    }
    Dataset build() const { return collabline::build_dataset(patents, citations); }
};

// Impact vector aligned to the dataset's patent index order, from a map of
// id -> impact (unlisted ids get 0).
inline std::vector<double> impacts_for(const Dataset& ds,
                                       const std::vector<std::pair<std::string, double>>& m) {
    std::vector<double> out(ds.n_patents(), 0.0);
    for (const auto& [id, v] : m) {
        auto it = std::lower_bound(ds.patent_ids.begin(), ds.patent_ids.end(), id);
        REQUIRE(it != ds.patent_ids.end());
        REQUIRE(*it == id);
        out[static_cast<size_t>(it - ds.patent_ids.begin())] = v;
    }
    return out;
}

// Reference-view of a dataset plus externally supplied impacts.
inline std::vector<collabline::reference::Patent> reference_view(
    const Dataset& ds, const std::vector<double>& impact) {
    std::vector<collabline::reference::Patent> out;
    for (collabline::PatentIdx p = 0; p < ds.n_patents(); ++p) {
        collabline::reference::Patent rp;
        rp.id = ds.patent_ids[p];
        rp.year = ds.cohort_year(p);
        for (auto m : ds.inventors_of(p)) rp.inventors.insert(ds.inventor_names[m]);
        for (auto c : ds.classes_of(p)) rp.classes.insert(ds.class_names[c]);
        rp.impact = impact.empty() ? 0.0 : impact[p];
        out.push_back(std::move(rp));
    }
    return out;
}

// Small random dataset for property tests: n patents, inventor pool, year
// range, random team sizes 1..4.
inline Fixture random_fixture(std::mt19937& rng, int n_patents, int n_inventors,
                              int year_lo = 2000, int year_hi = 2010, int n_classes = 6) {
    Fixture fx;
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    for (int i = 0; i < n_patents; ++i) {
        char id[16];
        snprintf(id, sizeof(id), "P%05d", i);
        int size = 1 + pick(4);
        std::vector<std::string> inv;
        while (static_cast<int>(inv.size()) < size) {
            std::string name = "I" + std::to_string(pick(n_inventors));
            if (std::find(inv.begin(), inv.end(), name) == inv.end()) inv.push_back(name);
        }
        std::vector<std::string> cls{"C" + std::to_string(pick(n_classes))};
        if (pick(2)) cls.push_back("C" + std::to_string(pick(n_classes)));
        fx.add(id, year_lo + pick(year_hi - year_lo + 1), inv, cls);
    }
    // random citations, some dangling
    int n_edges = n_patents / 2;
    for (int e = 0; e < n_edges; ++e) {
        char a[16], b[16];
        snprintf(a, sizeof(a), "P%05d", pick(n_patents));
        snprintf(b, sizeof(b), "P%05d", pick(n_patents + 3));  // a few unknown ids
        if (std::string(a) != b) fx.cite(a, b);
    }
    return fx;
}

}  // namespace testutil
