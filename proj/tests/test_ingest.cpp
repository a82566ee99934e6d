#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "collabline/ingest.hpp"
#include "helpers.hpp"

using namespace collabline;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("collabline_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("ingest fixture with one dangling edge") {
    fs::path dir = tmpdir("ingest_basic");
    write(dir / "patents.csv",
          "patent_id,year,inventors,classes\n"
          "P1,2000,A;B,X\n"
          "P2,2000,A,X\n"
          "P3,2001,A;B;C,X;Y\n"
          "P4,2001,B;C,Y\n"
          "P5,2002,D,Z\n");
    write(dir / "citations.csv",
          "citing,cited\n"
          "P3,P1\n"
          "P4,P2\n"
          "P9,P1\n");
    IngestReport rep = ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws");
    CHECK(rep.n_patents == 5);
    CHECK(rep.n_inventors == 4);
    CHECK(rep.n_teams == 3);
    CHECK(rep.n_citations_kept == 2);
    CHECK(rep.n_citations_dropped == 1);
    CHECK(rep.min_year == 2000);
    CHECK(rep.max_year == 2002);

    CHECK(summarize(dir / "ws") == rep);

    SUBCASE("strict mode promotes the dangling edge") {
        IngestOptions opts;
        opts.strict = true;
        CHECK_THROWS_AS(
            ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws2", opts), DataError);
    }
}

TEST_CASE("header-only input yields an empty workspace") {
    fs::path dir = tmpdir("ingest_empty");
    write(dir / "patents.csv", "patent_id,year,inventors,classes\n");
    write(dir / "citations.csv", "citing,cited\n");
    IngestReport rep = ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws");
    CHECK(rep.n_patents == 0);
    CHECK(rep.n_teams == 0);
    CHECK(summarize(dir / "ws") == rep);
}

TEST_CASE("duplicate inventor in one patent is a hard error naming the line") {
    fs::path dir = tmpdir("ingest_dup");
    write(dir / "patents.csv",
          "patent_id,year,inventors,classes\n"
          "P1,2000,A;B;A,X\n");
    write(dir / "citations.csv", "citing,cited\n");
    try {
        ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws");
        FAIL("expected DuplicateInventorError");
    } catch (const DuplicateInventorError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("duplicate patent_id is a hard error") {
    fs::path dir = tmpdir("ingest_dupid");
    write(dir / "patents.csv",
          "patent_id,year,inventors,classes\n"
          "P1,2000,A,X\n"
          "P1,2001,B,X\n");
    write(dir / "citations.csv", "citing,cited\n");
    CHECK_THROWS_AS(ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws"), DataError);
}

TEST_CASE("re-ingest of identical inputs is byte-identical") {
    fs::path dir = tmpdir("ingest_idem");
    write(dir / "patents.csv",
          "patent_id,year,inventors,classes\n"
          "P2,2001,B;C,Y\n"
          "P1,2000,A;B,X\n");
    write(dir / "citations.csv", "citing,cited\nP2,P1\n");
    ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws1");
    ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws2");
    CHECK(slurp(dir / "ws1" / "patents.bin") == slurp(dir / "ws2" / "patents.bin"));
    CHECK(slurp(dir / "ws1" / "citations.bin") == slurp(dir / "ws2" / "citations.bin"));
}

TEST_CASE("csv round-trip reproduces the workspace") {
    std::mt19937 rng(42);
    testutil::Fixture fx = testutil::random_fixture(rng, 200, 30);
    Dataset ds = fx.build();

    fs::path dir = tmpdir("roundtrip");
    export_csv(ds, dir / "patents.csv", dir / "citations.csv");
    ingest(dir / "patents.csv", dir / "citations.csv", dir / "ws1");
    Dataset ds2 = load_workspace(dir / "ws1");
    export_csv(ds2, dir / "patents2.csv", dir / "citations2.csv");
    CHECK(slurp(dir / "patents.csv") == slurp(dir / "patents2.csv"));
    CHECK(slurp(dir / "citations.csv") == slurp(dir / "citations2.csv"));
}

TEST_CASE("team count equals brute-force distinct inventor sets") {
    std::mt19937 rng(11);
    testutil::Fixture fx = testutil::random_fixture(rng, 1000, 40);
    Dataset ds = fx.build();

    std::set<std::set<std::string>> brute;
    for (const auto& p : fx.patents)
        if (p.inventors.size() >= 2)
            brute.insert(std::set<std::string>(p.inventors.begin(), p.inventors.end()));
    CHECK(count_teams(ds) == brute.size());
}
