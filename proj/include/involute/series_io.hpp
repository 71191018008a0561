#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "involute/series.hpp"

namespace involute {

/// Series document:
///   { "variables": [...], "truncation": D, "mode": "exact" | "float",
///     "terms": [ { "exp": [...], "re": "p/q", "im": "p/q" }, ... ] }
/// Exact coefficients are lowest-terms "p/q" strings, float coefficients
/// JSON numbers. Terms are written in graded lexicographic order. The
/// reader rejects duplicate exponents, wrong arities, terms above the
/// truncation and non-canonical rationals.
nlohmann::json series_to_json(const Series& s);
Series series_from_json(const nlohmann::json& doc);

/// Serialized text is byte-stable: sorted keys, two-space indent, trailing
/// newline.
std::string dump_json(const nlohmann::json& doc);

std::string series_to_string(const Series& s);
Series series_from_string(const std::string& text);

Series read_series_file(const std::filesystem::path& path);
void write_series_file(const std::filesystem::path& path, const Series& s);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace involute
