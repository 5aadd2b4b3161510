#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qwork::sweep {

// Labeled numeric table plus the metadata needed to reproduce it (resolved
// configuration, code version, truncation diagnostics).
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json metadata;

    void validate() const;  // column count matches every row
};

// 17-significant-digit decimal form; round-trips a double exactly.
std::string format_double(double v);

// CSV with '#'-prefixed metadata header lines, '.' decimal separator.
void write_csv(const SweepResult& result, std::ostream& out);

// Single JSON document {metadata, columns, rows}; reload is bit-exact.
void write_json(const SweepResult& result, std::ostream& out);

SweepResult read_json(std::istream& in);

// Writes in the requested format ("csv" or "json") to the given path.
void write_file(const SweepResult& result, const std::string& format,
                const std::string& path);

}  // namespace qwork::sweep
