#pragma once

#include <string>
#include <vector>

namespace ftn {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

// Comma-separated, first row is the header; every row must match the header
// width (ParseError with line number otherwise).
CsvTable parse_csv_text(const std::string& text, const std::string& origin = "<csv>");
CsvTable load_csv(const std::string& path);

// Renders csv_path as a self-contained SVG next to the CSV (extension
// replaced). kind: "ber-alpha" | "ber-rop" (log BER axis, zero BERs clamped
// to the axis floor with an open marker) | "psd" (linear axes over
// freq_hz/power_db columns). Returns the SVG path.
std::string emit_plot(const std::string& csv_path, const std::string& kind);

}  // namespace ftn
