#include "qwork/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qwork::sweep {

void SweepResult::validate() const {
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::logic_error("sweep result: row width does not match column labels");
        }
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    result.validate();
    out << "# " << result.metadata.value("generator", "qwork") << "\n";
    out << "# metadata: " << result.metadata.dump() << "\n";
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        out << (c ? "," : "") << result.columns[c];
    }
    out << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << "\n";
    }
}

void write_json(const SweepResult& result, std::ostream& out) {
    result.validate();
    nlohmann::ordered_json doc;
    doc["metadata"] = result.metadata;
    doc["columns"] = result.columns;
    doc["rows"] = result.rows;
    out << doc.dump(2) << "\n";
}

SweepResult read_json(std::istream& in) {
    const auto doc = nlohmann::ordered_json::parse(in);
    SweepResult result;
    result.metadata = doc.at("metadata");
    result.columns = doc.at("columns").get<std::vector<std::string>>();
    result.rows = doc.at("rows").get<std::vector<std::vector<double>>>();
    result.validate();
    return result;
}

void write_file(const SweepResult& result, const std::string& format,
                const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot open output file: " + path);
    }
    if (format == "csv") {
        write_csv(result, out);
    } else if (format == "json") {
        write_json(result, out);
    } else {
        throw std::invalid_argument("output.format must be csv or json");
    }
    out.flush();
    if (!out) {
        throw std::ios_base::failure("failed writing output file: " + path);
    }
}

}  // namespace qwork::sweep
