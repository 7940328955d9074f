#include "degenlab/io.hpp"

#include "degenlab/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstdio>
#include <cstring>
#include <sstream>

#ifndef DEGENLAB_SOURCE_DIR
#define DEGENLAB_SOURCE_DIR "."
#endif

namespace degenlab {

namespace fs = std::filesystem;

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : path_(path), width_(header.size()) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("io_error", "cannot open " + path.string() + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error("io_error", "CSV row width differs from header in " + path_.string());
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError("missing_column", "CSV has no column '" + name + "'");
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("file_not_found", "cannot read " + path.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

namespace {

template <class T>
T to_le(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::array<unsigned char, sizeof(T)> b;
        std::memcpy(b.data(), &v, sizeof(T));
        std::reverse(b.begin(), b.end());
        std::memcpy(&v, b.data(), sizeof(T));
        return v;
    }
}

} // namespace

void write_snapshot(const fs::path& base, const Field& f, double t, SnapshotDtype dtype) {
    if (base.has_parent_path()) fs::create_directories(base.parent_path());
    fs::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    std::ofstream out(bin, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot open " + bin.string());
    for (const cd& z : f.values) {
        if (dtype == SnapshotDtype::complex128) {
            const double re = to_le(z.real()), im = to_le(z.imag());
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        } else {
            const float re = to_le(static_cast<float>(z.real())), im = to_le(static_cast<float>(z.imag()));
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["N"] = f.grid.N;
    j["L"] = f.grid.L;
    j["rep"] = f.rep == Rep::space ? "space" : "frequency";
    j["t"] = t;
    j["dtype"] = dtype == SnapshotDtype::complex128 ? "complex128" : "complex64";
    write_text(meta, j.dump(2) + "\n");
}

Snapshot read_snapshot(const fs::path& base) {
    fs::path bin = base, meta = base;
    bin += ".bin";
    meta += ".json";
    std::ifstream mj(meta);
    if (!mj) throw ValidationError("file_not_found", "missing sidecar " + meta.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(mj);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid_sidecar", e.what());
    }
    SpectralGrid g{j.at("N").get<int>(), j.at("L").get<double>()};
    const std::string rep = j.at("rep").get<std::string>();
    const std::string dt = j.at("dtype").get<std::string>();
    Snapshot s{Field(g, rep == "space" ? Rep::space : Rep::frequency), j.at("t").get<double>()};
    std::ifstream in(bin, std::ios::binary);
    if (!in) throw ValidationError("file_not_found", "missing " + bin.string());
    for (cd& z : s.field.values) {
        if (dt == "complex128") {
            double re, im;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            z = {to_le(re), to_le(im)};
        } else {
            float re, im;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            z = {to_le(re), to_le(im)};
        }
    }
    if (!in) throw ValidationError("truncated_snapshot", bin.string() + " is shorter than N^2 values");
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot open " + path.string());
    out << text;
}

void write_fit(const fs::path& path, const FitResult& f) { write_text(path, to_json(f) + "\n"); }

std::string git_describe() {
    const std::string cmd = "git -C \"" DEGENLAB_SOURCE_DIR "\" describe --always --dirty 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "unknown";
    char buf[256] = {0};
    std::string out;
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    const int rc = pclose(p);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return rc == 0 && !out.empty() ? out : "unknown";
}

} // namespace degenlab
