#include "indefsl/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "indefsl/errors.hpp"
#include "json.hpp"

namespace indefsl {

namespace {

using nlohmann::json;

int line_of_offset(std::string_view doc, std::size_t offset) {
  offset = std::min(offset, doc.size());
  return 1 + static_cast<int>(std::count(doc.begin(), doc.begin() + offset, '\n'));
}

// Best-effort line of the first occurrence of a key; 0 if not found.
int line_of_key(std::string_view doc, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const std::size_t pos = doc.find(needle);
  return pos == std::string_view::npos ? 0 : line_of_offset(doc, pos);
}

[[noreturn]] void fail(std::string_view doc, const std::string& key, const std::string& field,
                       const std::string& what) {
  std::ostringstream os;
  const int line = line_of_key(doc, key);
  if (line > 0) os << "line " << line << ": ";
  os << "field '" << field << "': " << what;
  throw InputError(os.str());
}

void check_keys(std::string_view doc, const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail(doc, k, where.empty() ? k : where + "." + k, "unknown key");
  }
}

std::vector<double> number_array(std::string_view doc, const json& obj, const std::string& parent,
                                 const std::string& key) {
  const std::string field = parent + "." + key;
  if (!obj.contains(key)) fail(doc, parent, field, "missing");
  const json& arr = obj.at(key);
  if (!arr.is_array()) fail(doc, key, field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      fail(doc, key, field + "[" + std::to_string(i) + "]", "expected a decimal number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

PiecewiseFn coefficient(std::string_view doc, const json& root, const std::string& name) {
  if (!root.contains(name)) fail(doc, name, name, "missing");
  const json& obj = root.at(name);
  if (!obj.is_object()) fail(doc, name, name, "expected an object with breakpoints and values");
  check_keys(doc, obj, name, {"breakpoints", "values"});
  std::vector<double> xs = number_array(doc, obj, name, "breakpoints");
  std::vector<double> vs = number_array(doc, obj, name, "values");
  try {
    return PiecewiseFn(std::move(xs), std::move(vs));
  } catch (const InputError& e) {
    fail(doc, name, name, e.what());
  }
}

}  // namespace

Problem parse_problem(std::string_view doc) {
  json root;
  try {
    root = json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line_of_offset(doc, e.byte > 0 ? e.byte - 1 : 0) << ": malformed document: "
       << e.what();
    throw InputError(os.str());
  }
  if (!root.is_object()) throw InputError("line 1: the problem document must be an object");

  if (root.contains("preset")) {
    check_keys(doc, root, "", {"preset", "mu", "ramp_half_width"});
    const json& preset = root.at("preset");
    if (!preset.is_string() || preset.get<std::string>() != "richardson")
      fail(doc, "preset", "preset", "the only preset is \"richardson\"");
    if (!root.contains("mu")) fail(doc, "preset", "mu", "missing");
    if (!root.at("mu").is_number()) fail(doc, "mu", "mu", "expected a decimal number");
    const double mu = root.at("mu").get<double>();
    if (!std::isfinite(mu)) fail(doc, "mu", "mu", "must be finite");
    double h = kDefaultRampHalfWidth;
    if (root.contains("ramp_half_width")) {
      const json& v = root.at("ramp_half_width");
      if (!v.is_number()) fail(doc, "ramp_half_width", "ramp_half_width", "expected a decimal number");
      h = v.get<double>();
      if (!(h > 0.0 && h < 1.0))
        fail(doc, "ramp_half_width", "ramp_half_width", "must lie in (0, 1)");
    }
    return richardson(mu, h);
  }

  check_keys(doc, root, "", {"q", "w"});
  PiecewiseFn q = coefficient(doc, root, "q");
  PiecewiseFn w = coefficient(doc, root, "w");
  try {
    return detect_flags(std::move(q), std::move(w));
  } catch (const InputError& e) {
    fail(doc, "w", "w", e.what());
  }
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open problem file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace indefsl
