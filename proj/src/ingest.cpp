#include "collabline/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace fs = std::filesystem;

namespace collabline {

namespace {

struct RowView {
    std::string_view id;
    int32_t year = 0;
    int32_t grant_year = INT32_MIN;
    std::vector<std::string_view> inventors;
    std::vector<std::string_view> classes;
    uint64_t line = 0;
};

int32_t parse_year(std::string_view s, uint64_t line) {
    int32_t y = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), y);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("line " + std::to_string(line) + ": bad year '" + std::string(s) + "'");
    return y;
}

void split_tokens(std::string_view field, char sep, std::vector<std::string_view>& out) {
    out.clear();
    size_t pos = 0;
    while (pos <= field.size()) {
        size_t next = field.find(sep, pos);
        if (next == std::string_view::npos) next = field.size();
        if (next > pos) out.push_back(field.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::string read_whole(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

// Iterates LF-terminated lines, tolerating a trailing CR and a missing final
// newline.
template <typename Fn>
void for_each_line(std::string_view data, Fn&& fn) {
    size_t pos = 0;
    uint64_t line = 0;
    while (pos < data.size()) {
        size_t nl = data.find('\n', pos);
        if (nl == std::string_view::npos) nl = data.size();
        std::string_view row = data.substr(pos, nl - pos);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        ++line;
        fn(row, line);
        pos = nl + 1;
    }
}

std::vector<std::string_view> split_fields(std::string_view row, uint64_t line, size_t min_n,
                                           size_t max_n) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (true) {
        size_t next = row.find(',', pos);
        if (next == std::string_view::npos) {
            fields.push_back(row.substr(pos));
            break;
        }
        fields.push_back(row.substr(pos, next - pos));
        pos = next + 1;
    }
    if (fields.size() < min_n || fields.size() > max_n)
        throw DataError("line " + std::to_string(line) + ": expected " + std::to_string(min_n) +
                        (max_n > min_n ? "-" + std::to_string(max_n) : "") + " fields, got " +
                        std::to_string(fields.size()));
    return fields;
}

std::vector<std::string> intern_table(std::vector<std::string_view>& occurrences) {
    std::sort(occurrences.begin(), occurrences.end());
    occurrences.erase(std::unique(occurrences.begin(), occurrences.end()), occurrences.end());
    std::vector<std::string> names;
    names.reserve(occurrences.size());
    for (auto v : occurrences) names.emplace_back(v);
    return names;
}

Dataset build_from_rows(std::vector<RowView>& rows,
                        const std::vector<std::tuple<std::string_view, std::string_view,
                                                     uint64_t>>& cite_rows,
                        const IngestOptions& opts) {
    // Canonical patent order is lexicographic by id.
    std::sort(rows.begin(), rows.end(),
              [](const RowView& a, const RowView& b) { return a.id < b.id; });
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i].id == rows[i + 1].id)
            throw DataError("line " + std::to_string(rows[i + 1].line) +
                            ": duplicate patent_id '" + std::string(rows[i].id) + "'");

    Dataset ds;
    ds.use_grant_cohorts = opts.grant_cohorts;
    ds.patent_ids.reserve(rows.size());
    for (const auto& r : rows) ds.patent_ids.emplace_back(r.id);

    std::vector<std::string_view> inv_occ, cls_occ;
    for (const auto& r : rows) {
        inv_occ.insert(inv_occ.end(), r.inventors.begin(), r.inventors.end());
        cls_occ.insert(cls_occ.end(), r.classes.begin(), r.classes.end());
    }
    ds.inventor_names = intern_table(inv_occ);
    ds.class_names = intern_table(cls_occ);

    auto lookup = [](const std::vector<std::string>& table, std::string_view name) {
        auto it = std::lower_bound(table.begin(), table.end(), name);
        return static_cast<uint32_t>(it - table.begin());
    };

    bool any_grant = std::any_of(rows.begin(), rows.end(),
                                 [](const RowView& r) { return r.grant_year != INT32_MIN; });
    if (opts.grant_cohorts && !any_grant)
        throw ConfigError("grant-year cohorts requested but no grant_year column present");

    ds.inv_offsets.push_back(0);
    ds.cls_offsets.push_back(0);
    std::vector<InventorId> tmp;
    for (const auto& r : rows) {
        ds.app_year.push_back(r.year);
        if (any_grant)
            ds.grant_year.push_back(r.grant_year == INT32_MIN ? r.year : r.grant_year);

        tmp.clear();
        for (auto name : r.inventors) tmp.push_back(lookup(ds.inventor_names, name));
        std::sort(tmp.begin(), tmp.end());
        if (std::adjacent_find(tmp.begin(), tmp.end()) != tmp.end())
            throw DuplicateInventorError("line " + std::to_string(r.line) +
                                         ": duplicate inventor id in patent '" +
                                         std::string(r.id) + "'");
        ds.inv_ids.insert(ds.inv_ids.end(), tmp.begin(), tmp.end());
        ds.inv_offsets.push_back(static_cast<uint32_t>(ds.inv_ids.size()));

        tmp.clear();
        for (auto name : r.classes) tmp.push_back(lookup(ds.class_names, name));
        std::sort(tmp.begin(), tmp.end());
        tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
        ds.cls_ids.insert(ds.cls_ids.end(), tmp.begin(), tmp.end());
        ds.cls_offsets.push_back(static_cast<uint32_t>(ds.cls_ids.size()));
    }

    if (!ds.app_year.empty()) {
        auto [mn, mx] = std::minmax_element(ds.app_year.begin(), ds.app_year.end());
        ds.min_year = *mn;
        ds.max_year = *mx;
    }

    auto find_patent = [&](std::string_view id) -> PatentIdx {
        auto it = std::lower_bound(ds.patent_ids.begin(), ds.patent_ids.end(), id);
        if (it == ds.patent_ids.end() || *it != id) return kInvalidPatent;
        return static_cast<PatentIdx>(it - ds.patent_ids.begin());
    };

    ds.citation_count.assign(ds.n_patents(), 0);
    ds.edges.reserve(cite_rows.size());
    for (const auto& [citing, cited, line] : cite_rows) {
        PatentIdx a = find_patent(citing);
        PatentIdx b = find_patent(cited);
        if (a == kInvalidPatent || b == kInvalidPatent || a == b) {
            if (opts.strict)
                throw DataError("line " + std::to_string(line) + ": unresolved citation " +
                                std::string(citing) + " -> " + std::string(cited));
            ++ds.n_citations_dropped;
            continue;
        }
        ds.edges.emplace_back(a, b);
    }
    std::sort(ds.edges.begin(), ds.edges.end());
    for (const auto& [a, b] : ds.edges) ++ds.citation_count[b];
    return ds;
}

}  // namespace

uint64_t count_teams(const Dataset& ds) {
    std::vector<PatentIdx> multi;
    for (PatentIdx p = 0; p < ds.n_patents(); ++p)
        if (ds.inventors_of(p).size() >= 2) multi.push_back(p);
    auto span_less = [&](PatentIdx a, PatentIdx b) {
        auto sa = ds.inventors_of(a), sb = ds.inventors_of(b);
        return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
    };
    std::sort(multi.begin(), multi.end(), span_less);
    uint64_t teams = 0;
    for (size_t i = 0; i < multi.size(); ++i)
        if (i == 0 || span_less(multi[i - 1], multi[i])) ++teams;
    return teams;
}

IngestReport report_of(const Dataset& ds) {
    IngestReport rep;
    rep.n_patents = ds.n_patents();
    rep.n_inventors = ds.inventor_names.size();
    rep.n_teams = count_teams(ds);
    rep.n_citations_kept = ds.edges.size();
    rep.n_citations_dropped = ds.n_citations_dropped;
    rep.min_year = ds.min_year;
    rep.max_year = ds.max_year;
    return rep;
}

std::string IngestReport::to_json() const {
    nlohmann::json j{{"n_patents", n_patents},
                     {"n_inventors", n_inventors},
                     {"n_teams", n_teams},
                     {"n_citations_kept", n_citations_kept},
                     {"n_citations_dropped", n_citations_dropped},
                     {"duration", {min_year, max_year}}};
    return j.dump(2) + "\n";
}

IngestReport ingest(const fs::path& patents_csv, const fs::path& citations_csv,
                    const fs::path& workspace, const IngestOptions& opts) {
    std::string pdata = read_whole(patents_csv);
    std::string cdata = read_whole(citations_csv);

    std::vector<RowView> rows;
    bool saw_header = false;
    for_each_line(pdata, [&](std::string_view row, uint64_t line) {
        if (row.empty()) return;
        if (!saw_header) {
            saw_header = true;
            if (row.rfind("patent_id,", 0) != 0)
                throw DataError("patents file: missing 'patent_id,...' header");
            return;
        }
        auto fields = split_fields(row, line, 4, 5);
        RowView r;
        r.id = fields[0];
        r.year = parse_year(fields[1], line);
        split_tokens(fields[2], ';', r.inventors);
        split_tokens(fields[3], ';', r.classes);
        if (fields.size() == 5) r.grant_year = parse_year(fields[4], line);
        r.line = line;
        if (r.id.empty())
            throw DataError("line " + std::to_string(line) + ": empty patent_id");
        if (r.inventors.empty())
            throw DataError("line " + std::to_string(line) + ": patent with no inventors");
        if (r.classes.empty())
            throw DataError("line " + std::to_string(line) + ": patent with no classes");
        rows.push_back(std::move(r));
    });
    if (!saw_header) throw DataError("patents file is empty (expected header)");

    std::vector<std::tuple<std::string_view, std::string_view, uint64_t>> cite_rows;
    saw_header = false;
    for_each_line(cdata, [&](std::string_view row, uint64_t line) {
        if (row.empty()) return;
        if (!saw_header) {
            saw_header = true;
            if (row.rfind("citing,", 0) != 0)
                throw DataError("citations file: missing 'citing,cited' header");
            return;
        }
        auto fields = split_fields(row, line, 2, 2);
        cite_rows.emplace_back(fields[0], fields[1], line);
    });
    if (!saw_header) throw DataError("citations file is empty (expected header)");

    Dataset ds = build_from_rows(rows, cite_rows, opts);
    save_workspace(ds, workspace);
    return report_of(ds);
}

Dataset build_dataset(std::vector<RawPatent> patents,
                      const std::vector<std::pair<std::string, std::string>>& citations,
                      const IngestOptions& opts) {
    std::vector<RowView> rows;
    rows.reserve(patents.size());
    for (size_t i = 0; i < patents.size(); ++i) {
        const RawPatent& p = patents[i];
        RowView r;
        r.id = p.id;
        r.year = p.year;
        r.grant_year = p.grant_year;
        r.inventors.assign(p.inventors.begin(), p.inventors.end());
        r.classes.assign(p.classes.begin(), p.classes.end());
        r.line = i + 2;  // as if read from a CSV with a header
        rows.push_back(std::move(r));
    }
    std::vector<std::tuple<std::string_view, std::string_view, uint64_t>> cite_rows;
    cite_rows.reserve(citations.size());
    for (size_t i = 0; i < citations.size(); ++i)
        cite_rows.emplace_back(citations[i].first, citations[i].second, i + 2);
    return build_from_rows(rows, cite_rows, opts);
}

IngestReport summarize(const fs::path& workspace) {
    Dataset ds = load_workspace(workspace);
    return report_of(ds);
}

void export_csv(const Dataset& ds, const fs::path& patents_csv, const fs::path& citations_csv) {
    std::string out = "patent_id,year,inventors,classes";
    bool grants = !ds.grant_year.empty();
    if (grants) out += ",grant_year";
    out += "\n";
    for (PatentIdx p = 0; p < ds.n_patents(); ++p) {
        out += ds.patent_ids[p];
        out += ',';
        out += std::to_string(ds.app_year[p]);
        out += ',';
        auto invs = ds.inventors_of(p);
        for (size_t i = 0; i < invs.size(); ++i) {
            if (i) out += ';';
            out += ds.inventor_names[invs[i]];
        }
        out += ',';
        auto clss = ds.classes_of(p);
        for (size_t i = 0; i < clss.size(); ++i) {
            if (i) out += ';';
            out += ds.class_names[clss[i]];
        }
        if (grants) {
            out += ',';
            out += std::to_string(ds.grant_year[p]);
        }
        out += '\n';
    }
    write_file_atomic(patents_csv, out);

    std::string cout_ = "citing,cited\n";
    for (const auto& [a, b] : ds.edges) {
        cout_ += ds.patent_ids[a];
        cout_ += ',';
        cout_ += ds.patent_ids[b];
        cout_ += '\n';
    }
    write_file_atomic(citations_csv, cout_);
}

}  // namespace collabline
