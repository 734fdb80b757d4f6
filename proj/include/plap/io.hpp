#pragma once

#include "plap/frequency.hpp"
#include "plap/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace plap {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough to reproduce the double exactly.
std::string format_double(double v);

/// FNV-1a over a string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Profile table, columns r,I,D,F,Iprime,F_defined; F is blank where
/// undefined. Values round-trip exactly through the 17-digit serialization.
void write_profile_csv(std::ostream& os, const FrequencyProfile& profile);
FrequencyProfile read_profile_csv(std::istream& is);

nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const DoublingReport& report);

/// Standalone SVG with the radius on the horizontal axis and the selected
/// profile columns as polyline series. Gaps in F (undefined radii) split the
/// polyline; isolated defined points become markers.
void emit_plot(std::ostream& os, const FrequencyProfile& profile,
               bool with_I = true, bool with_D = true, bool with_F = true);

/// File helpers; both throw IoError on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace plap
