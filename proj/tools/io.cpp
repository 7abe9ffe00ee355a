#include "io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "wfx/error.hpp"

namespace wfx::cli {

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t at = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw UsageError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" + what +
                     ")");
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(what + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(what + ": \"" + key + "\" has the wrong type");
  }
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw UsageError(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw UsageError(what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Inline value or path (relative to base) to a JSON file.
json resolve(const json& j, const fs::path& base) {
  if (j.is_string()) return read_json(base / j.get<std::string>());
  return j;
}

}  // namespace

SpacePtr parse_space(const json& j) {
  const std::string what = "space descriptor";
  const auto n = get<std::vector<std::size_t>>(j, "n", what);
  const int dim = j.contains("dim") ? get<int>(j, "dim", what) : static_cast<int>(n.size());
  if (dim != static_cast<int>(n.size())) throw UsageError(what + ": \"dim\" does not match \"n\"");
  std::size_t cells = 1;
  for (auto k : n) cells *= k;
  const double h = j.contains("h") ? get<double>(j, "h", what) : 1.0 / static_cast<double>(n[0]);
  if (!j.contains("mu") || (j["mu"].is_string() && j["mu"] == "lebesgue")) return MeasureSpace::lebesgue(n, h);
  auto mu = numbers(j["mu"], what + " \"mu\"");
  if (mu.size() != cells) throw UsageError(what + ": \"mu\" has " + std::to_string(mu.size()) + " entries, expected " +
                                           std::to_string(cells));
  return MeasureSpace::with_masses(n, h, std::move(mu));
}

json space_json(const MeasureSpace& s) {
  json j;
  j["dim"] = s.dim();
  json n = json::array();
  for (int a = 0; a < s.dim(); ++a) n.push_back(s.extent(a));
  j["n"] = n;
  j["h"] = s.cell_width();
  if (s.is_lebesgue()) {
    j["mu"] = "lebesgue";
  } else {
    j["mu"] = std::vector<double>(s.masses().begin(), s.masses().end());
  }
  return j;
}

GridFunction parse_function(const json& j, const SpacePtr& hint) {
  const std::string what = "grid function";
  if (!j.is_object() || !j.contains("values")) throw UsageError(what + ": missing \"values\"");
  auto v = numbers(j["values"], what + " \"values\"");
  SpacePtr sp = j.contains("space") ? parse_space(j["space"]) : hint;
  if (!sp) sp = MeasureSpace::lebesgue({v.size()}, 1.0 / static_cast<double>(v.size()));
  if (v.size() != sp->size())
    throw UsageError(what + ": " + std::to_string(v.size()) + " values for " + std::to_string(sp->size()) + " cells");
  return GridFunction(sp, std::move(v));
}

GridFunction load_function(const fs::path& path, const SpacePtr& hint) {
  try {
    return parse_function(read_json(path), hint);
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw UsageError(path.string() + ": " + msg);
  }
}

json function_json(const GridFunction& f) {
  json j;
  j["space"] = space_json(f.grid());
  json vals = json::array();
  for (double x : f.values()) vals.push_back(num(x));
  j["values"] = std::move(vals);
  return j;
}

YoungFunction parse_young(const json& j) {
  const std::string what = "Young function";
  const auto fam = get<std::string>(j, "family", what);
  YoungFunction phi = YoungFunction::linear();
  if (fam == "power") {
    phi = YoungFunction::power(get<double>(j, "p", what));
  } else if (fam == "plog") {
    phi = YoungFunction::plog(get<double>(j, "p", what), j.contains("alpha") ? get<double>(j, "alpha", what) : 1.0);
  } else if (fam == "minmax") {
    phi = YoungFunction::minmax(get<double>(j, "p", what), get<double>(j, "q", what),
                                j.contains("max") ? get<bool>(j, "max", what) : true);
  } else if (fam == "tabulated") {
    phi = YoungFunction::tabulated(numbers(j.at("t"), what + " \"t\""), numbers(j.at("phi"), what + " \"phi\""));
  } else if (fam != "linear") {
    throw UsageError(what + ": unknown family \"" + fam + "\"");
  }
  if (j.contains("r")) phi = phi.rescaled(get<double>(j, "r", what));
  return phi;
}

SpacePtr spec_space(const json& j, const fs::path& base) {
  if (!j.is_object()) throw UsageError("space spec must be a JSON object");
  if (j.contains("space")) return parse_space(resolve(j["space"], base));
  for (const char* key : {"u", "v"})
    if (j.contains(key)) {
      const json f = resolve(j[key], base);
      return parse_function(f, nullptr).space();
    }
  return nullptr;
}

SpaceSpec parse_spec(const json& j, const SpacePtr& space, const fs::path& base) {
  const std::string what = "space spec";
  if (!space) throw UsageError(what + ": no grid given (add \"space\" or pass a data file)");
  const auto fam = get<std::string>(j, "family", what);
  std::optional<SpaceSpec> spec;
  auto exponent = [&](const char* key) {
    const json& x = j.at(key);
    if (x.is_string() && (x == "inf" || x == "infinity")) return std::numeric_limits<double>::infinity();
    return get<double>(j, key, what);
  };
  if (fam == "lp") {
    spec = SpaceSpec::lp(space, exponent("p"));
  } else if (fam == "lorentz") {
    if (!j.contains("p") || !j.contains("q")) throw UsageError(what + ": lorentz needs \"p\" and \"q\"");
    spec = SpaceSpec::lorentz(space, exponent("p"), exponent("q"));
  } else if (fam == "orlicz") {
    if (!j.contains("phi")) throw UsageError(what + ": orlicz needs \"phi\"");
    spec = SpaceSpec::orlicz(space, parse_young(resolve(j["phi"], base)));
  } else if (fam == "varexp") {
    if (!j.contains("exponents")) throw UsageError(what + ": varexp needs \"exponents\"");
    json e = resolve(j["exponents"], base);
    if (e.is_object()) e = e.at("values");
    spec = SpaceSpec::varexp(space, numbers(e, what + " \"exponents\""));
  } else {
    throw UsageError(what + ": unknown family \"" + fam + "\"");
  }
  if (j.contains("u")) spec = spec->with_u(Weight(parse_function(resolve(j["u"], base), space)));
  if (j.contains("v")) spec = spec->with_v(Weight(parse_function(resolve(j["v"], base), space)));
  if (j.contains("r")) spec = spec->with_r(get<double>(j, "r", what));
  return *spec;
}

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
    if (!out) throw UsageError("cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("cannot write " + path.string() + ": " + ec.message());
  }
}

}  // namespace wfx::cli
