#include "doctest.h"

#include <algorithm>
#include <random>

#include "collabline/model.hpp"

using namespace collabline;

TEST_CASE("team keys are order-insensitive") {
    std::vector<InventorId> ab{2, 1};
    std::vector<InventorId> ba{1, 2};
    CHECK(make_team_key(ab) == make_team_key(ba));
    CHECK(make_team_key(ab).members == std::vector<InventorId>{1, 2});
}

TEST_CASE("subset and superset teams are distinct") {
    std::vector<InventorId> ab{1, 2};
    std::vector<InventorId> abc{1, 2, 3};
    CHECK(make_team_key(ab) != make_team_key(abc));
}

TEST_CASE("solo and duplicate inventor sets are rejected") {
    std::vector<InventorId> solo{7};
    CHECK_THROWS_AS(make_team_key(solo), SoloTeamError);
    std::vector<InventorId> dup{1, 2, 1};
    CHECK_THROWS_AS(make_team_key(dup), DuplicateInventorError);
}

TEST_CASE("pair enumeration is complete") {
    std::vector<InventorId> abc{1, 2, 3};
    auto pairs = enumerate_pairs(abc);
    CHECK(pairs == std::vector<PairKey>{{1, 2}, {1, 3}, {2, 3}});

    std::vector<InventorId> ab{1, 2};
    CHECK(enumerate_pairs(ab) == std::vector<PairKey>{{1, 2}});

    std::vector<InventorId> a{1};
    CHECK(enumerate_pairs(a).empty());
}

TEST_CASE("key canonicalization is permutation-invariant") {
    std::mt19937 rng(7);
    for (int it = 0; it < 50; ++it) {
        size_t n = 2 + rng() % 6;
        std::vector<InventorId> set;
        while (set.size() < n) {
            InventorId v = rng() % 100;
            if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
        }
        TeamKey base = make_team_key(set);
        std::vector<InventorId> shuffled = set;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(make_team_key(shuffled) == base);
        CHECK(enumerate_pairs(shuffled).size() == n * (n - 1) / 2);
    }
}

TEST_CASE("hit spec parsing") {
    HitSpec top = HitSpec::parse("top10");
    CHECK(top.mode == HitSpec::Mode::quantile);
    CHECK(top.value == doctest::Approx(0.10));
    CHECK(top.label() == "top10");

    HitSpec abs = HitSpec::parse("gt:2");
    CHECK(abs.mode == HitSpec::Mode::absolute);
    CHECK(abs.value == doctest::Approx(2.0));
    CHECK(abs.label() == "gt:2");

    CHECK_THROWS_AS(HitSpec::parse("bogus"), UsageError);
    CHECK_THROWS_AS(HitSpec::parse("top0"), UsageError);
}
