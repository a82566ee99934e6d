#include "collabline/workspace.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace collabline {

namespace {

constexpr uint32_t kPatentsMagic = 0x434c5054;   // "CLPT"
constexpr uint32_t kCitesMagic = 0x434c4354;     // "CLCT"
constexpr uint32_t kImpactMagic = 0x434c494d;    // "CLIM"
constexpr uint32_t kFormatVersion = 1;

struct Writer {
    std::string buf;
    void u32(uint32_t v) { buf.append(reinterpret_cast<const char*>(&v), 4); }
    void i32(int32_t v) { buf.append(reinterpret_cast<const char*>(&v), 4); }
    void u64(uint64_t v) { buf.append(reinterpret_cast<const char*>(&v), 8); }
    void f64(double v) { buf.append(reinterpret_cast<const char*>(&v), 8); }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        buf.append(s);
    }
    template <typename T>
    void vec(const std::vector<T>& v) {
        u64(v.size());
        buf.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }
};

struct Reader {
    const char* p;
    const char* end;
    explicit Reader(const std::string& s) : p(s.data()), end(s.data() + s.size()) {}
    void need(size_t n) const {
        if (static_cast<size_t>(end - p) < n) throw WorkspaceError("truncated workspace file");
    }
    uint32_t u32() {
        need(4);
        uint32_t v;
        std::memcpy(&v, p, 4);
        p += 4;
        return v;
    }
    int32_t i32() { return static_cast<int32_t>(u32()); }
    uint64_t u64() {
        need(8);
        uint64_t v;
        std::memcpy(&v, p, 8);
        p += 8;
        return v;
    }
    double f64() {
        need(8);
        double v;
        std::memcpy(&v, p, 8);
        p += 8;
        return v;
    }
    std::string str() {
        uint32_t n = u32();
        need(n);
        std::string s(p, n);
        p += n;
        return s;
    }
    template <typename T>
    std::vector<T> vec() {
        uint64_t n = u64();
        need(n * sizeof(T));
        std::vector<T> v(n);
        if (n) std::memcpy(static_cast<void*>(v.data()), p, n * sizeof(T));
        p += n * sizeof(T);
        return v;
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WorkspaceError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_strings(Writer& w, const std::vector<std::string>& names) {
    w.u64(names.size());
    for (const auto& s : names) w.str(s);
}

std::vector<std::string> read_strings(Reader& r) {
    uint64_t n = r.u64();
    std::vector<std::string> names;
    names.reserve(n);
    for (uint64_t i = 0; i < n; ++i) names.push_back(r.str());
    return names;
}

json load_manifest(const fs::path& dir) {
    fs::path mf = dir / "manifest.json";
    if (!fs::exists(mf)) return json::object();
    std::ifstream in(mf);
    json j;
    in >> j;
    return j;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw WorkspaceError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw WorkspaceError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

uint64_t fnv1a(std::span<const char> bytes, uint64_t seed) {
    uint64_t h = seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t digest_file(const fs::path& path) { return fnv1a(read_file(path)); }

std::string hex64(uint64_t v) {
    char buf[20];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt_num(double v) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void save_workspace(const Dataset& ds, const fs::path& dir) {
    fs::create_directories(dir);

    Writer pw;
    pw.u32(kPatentsMagic);
    pw.u32(kFormatVersion);
    write_strings(pw, ds.inventor_names);
    write_strings(pw, ds.class_names);
    write_strings(pw, ds.patent_ids);
    pw.vec(ds.app_year);
    pw.u32(ds.grant_year.empty() ? 0u : 1u);
    if (!ds.grant_year.empty()) pw.vec(ds.grant_year);
    pw.vec(ds.inv_offsets);
    pw.vec(ds.inv_ids);
    pw.vec(ds.cls_offsets);
    pw.vec(ds.cls_ids);
    write_file_atomic(dir / "patents.bin", pw.buf);

    Writer cw;
    cw.u32(kCitesMagic);
    cw.u32(kFormatVersion);
    cw.u64(ds.n_citations_dropped);
    cw.vec(ds.edges);
    cw.vec(ds.citation_count);
    write_file_atomic(dir / "citations.bin", cw.buf);

    json mf = load_manifest(dir);
    mf["format_version"] = kFormatVersion;
    mf["n_patents"] = ds.n_patents();
    mf["n_inventors"] = ds.inventor_names.size();
    mf["n_citations_kept"] = ds.edges.size();
    mf["n_citations_dropped"] = ds.n_citations_dropped;
    mf["duration"] = {ds.min_year, ds.max_year};
    mf["cohort_year_source"] = ds.use_grant_cohorts ? "grant" : "application";
    mf["patents_digest"] = hex64(fnv1a(pw.buf));
    mf["citations_digest"] = hex64(fnv1a(cw.buf));
    write_file_atomic(dir / "manifest.json", mf.dump(2) + "\n");
}

Dataset load_workspace(const fs::path& dir) {
    if (!fs::exists(dir / "patents.bin") || !fs::exists(dir / "citations.bin"))
        throw WorkspaceError("not a workspace: " + dir.string());

    Dataset ds;
    {
        std::string data = read_file(dir / "patents.bin");
        Reader r(data);
        if (r.u32() != kPatentsMagic) throw WorkspaceError("bad patents.bin magic");
        if (r.u32() != kFormatVersion) throw WorkspaceError("unsupported patents.bin version");
        ds.inventor_names = read_strings(r);
        ds.class_names = read_strings(r);
        ds.patent_ids = read_strings(r);
        ds.app_year = r.vec<int32_t>();
        if (r.u32()) ds.grant_year = r.vec<int32_t>();
        ds.inv_offsets = r.vec<uint32_t>();
        ds.inv_ids = r.vec<InventorId>();
        ds.cls_offsets = r.vec<uint32_t>();
        ds.cls_ids = r.vec<ClassCode>();
    }
    {
        std::string data = read_file(dir / "citations.bin");
        Reader r(data);
        if (r.u32() != kCitesMagic) throw WorkspaceError("bad citations.bin magic");
        if (r.u32() != kFormatVersion) throw WorkspaceError("unsupported citations.bin version");
        ds.n_citations_dropped = r.u64();
        ds.edges = r.vec<std::pair<PatentIdx, PatentIdx>>();
        ds.citation_count = r.vec<uint32_t>();
    }
    if (ds.app_year.size() != ds.n_patents() || ds.citation_count.size() != ds.n_patents())
        throw WorkspaceError("inconsistent workspace sizes in " + dir.string());

    json mf = load_manifest(dir);
    ds.use_grant_cohorts = mf.value("cohort_year_source", "application") == std::string("grant");
    if (!ds.app_year.empty()) {
        ds.min_year = ds.max_year = ds.app_year[0];
        for (int32_t y : ds.app_year) {
            ds.min_year = std::min(ds.min_year, y);
            ds.max_year = std::max(ds.max_year, y);
        }
    }
    return ds;
}

void save_impact(const ImpactTable& tbl, const fs::path& dir) {
    Writer w;
    w.u32(kImpactMagic);
    w.u32(kFormatVersion);
    w.vec(tbl.impact);
    w.u64(tbl.cohort_means.size());
    for (const auto& [year, mean] : tbl.cohort_means) {
        w.i32(year);
        w.f64(mean);
        w.u64(tbl.cohort_counts.at(year));
    }
    write_file_atomic(dir / "impact.bin", w.buf);

    json mf = load_manifest(dir);
    mf["impact_digest"] = hex64(fnv1a(w.buf));
    write_file_atomic(dir / "manifest.json", mf.dump(2) + "\n");
}

std::optional<ImpactTable> load_impact(const fs::path& dir, size_t n_patents) {
    if (!fs::exists(dir / "impact.bin")) return std::nullopt;
    std::string data = read_file(dir / "impact.bin");
    Reader r(data);
    if (r.u32() != kImpactMagic) throw WorkspaceError("bad impact.bin magic");
    if (r.u32() != kFormatVersion) throw WorkspaceError("unsupported impact.bin version");
    ImpactTable tbl;
    tbl.impact = r.vec<double>();
    uint64_t n = r.u64();
    for (uint64_t i = 0; i < n; ++i) {
        int32_t year = r.i32();
        double mean = r.f64();
        uint64_t count = r.u64();
        tbl.cohort_means[year] = mean;
        tbl.cohort_counts[year] = count;
    }
    if (tbl.impact.size() != n_patents)
        throw WorkspaceError("impact.bin size does not match workspace");
    return tbl;
}

void record_cutoff(const fs::path& dir, const std::string& hit_label, double cutoff) {
    json mf = load_manifest(dir);
    mf["bound_cutoffs"][hit_label] = cutoff;
    write_file_atomic(dir / "manifest.json", mf.dump(2) + "\n");
}

}  // namespace collabline
