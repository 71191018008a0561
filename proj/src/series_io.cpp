#include "involute/series_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace involute {

using nlohmann::json;

namespace {

json coefficient_part(const Rational& q) { return format_rational(q); }

Rational exact_part(const json& v, const char* what) {
  if (!v.is_string()) throw Error(Errc::parse_error, std::string(what) + " must be a \"p/q\" string in exact mode");
  return parse_rational(v.get<std::string>(), /*require_canonical=*/true);
}

double float_part(const json& v, const char* what) {
  if (!v.is_number()) throw Error(Errc::parse_error, std::string(what) + " must be a number in float mode");
  return v.get<double>();
}

}  // namespace

json series_to_json(const Series& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) {
    json t;
    t["exp"] = std::vector<unsigned>(e.exponents().begin(), e.exponents().end());
    if (s.mode() == Mode::exact) {
      t["re"] = coefficient_part(c.exact().re);
      t["im"] = coefficient_part(c.exact().im);
    } else {
      t["re"] = c.floating().real();
      t["im"] = c.floating().imag();
    }
    terms.push_back(std::move(t));
  }
  json doc;
  doc["variables"] = s.variables();
  doc["truncation"] = s.truncation();
  doc["mode"] = std::string(mode_name(s.mode()));
  doc["terms"] = std::move(terms);
  return doc;
}

Series series_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(Errc::parse_error, "series document must be an object");
    for (const char* key : {"variables", "truncation", "mode", "terms"})
      if (!doc.contains(key)) throw Error(Errc::parse_error, std::string("missing key '") + key + "'");
    if (!doc["truncation"].is_number_unsigned()) throw Error(Errc::parse_error, "truncation must be a non-negative integer");

    Variables vars = doc["variables"].get<Variables>();
    const unsigned d = doc["truncation"].get<unsigned>();
    const Mode mode = parse_mode(doc["mode"].get<std::string>());
    if (!doc["terms"].is_array()) throw Error(Errc::parse_error, "terms must be an array");

    Series::Builder b(vars, d, mode);
    std::set<MultiIndex> seen;
    for (const auto& t : doc["terms"]) {
      if (!t.is_object() || !t.contains("exp") || !t.contains("re") || !t.contains("im"))
        throw Error(Errc::parse_error, "term needs exp, re and im");
      auto exps = t["exp"].get<std::vector<unsigned>>();
      if (exps.size() != vars.size()) throw Error(Errc::parse_error, "term exponent has the wrong length");
      MultiIndex e(std::move(exps));
      if (e.degree() > d) throw Error(Errc::parse_error, "term degree exceeds truncation");
      if (!seen.insert(e).second) throw Error(Errc::parse_error, "duplicate exponent entry");
      if (mode == Mode::exact)
        b.add(e, ExactComplex(exact_part(t["re"], "re"), exact_part(t["im"], "im")));
      else
        b.add(e, std::complex<double>(float_part(t["re"], "re"), float_part(t["im"], "im")));
    }
    return std::move(b).build();
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_error, ex.what());
  }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string series_to_string(const Series& s) { return dump_json(series_to_json(s)); }

Series series_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_error, ex.what());
  }
  return series_from_json(doc);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_error, path.string() + ": " + ex.what());
  }
}

Series read_series_file(const std::filesystem::path& path) { return series_from_json(read_json_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::parse_error, "cannot write '" + path.string() + "'");
  out << text;
}

void write_series_file(const std::filesystem::path& path, const Series& s) {
  write_text_file(path, series_to_string(s));
}

}  // namespace involute
