#pragma once

#include "degenlab/field.hpp"
#include "degenlab/fit.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace degenlab {

// Shortest round-trip decimal form ("%.17g"), so CSV values re-parse bit-exactly.
std::string fmt_num(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t width_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

enum class SnapshotDtype { complex64, complex128 };

// Raw little-endian values in FFT order plus a JSON sidecar {schema_version, N, L, rep, t, dtype}.
void write_snapshot(const std::filesystem::path& base, const Field& f, double t,
                    SnapshotDtype dtype = SnapshotDtype::complex128);

struct Snapshot {
    Field field;
    double t = 0;
};
Snapshot read_snapshot(const std::filesystem::path& base);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_fit(const std::filesystem::path& path, const FitResult& f);

// `git describe --always --dirty` of the source tree, "unknown" when unavailable.
std::string git_describe();

} // namespace degenlab
