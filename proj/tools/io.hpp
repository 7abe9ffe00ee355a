#pragma once

// JSON ingestion and report emission for the wfx command line.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wfx/core_space.hpp"
#include "wfx/spaces.hpp"
#include "wfx/young.hpp"

namespace wfx::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Bad invocation or unreadable input; maps to exit code 3.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses text; syntax errors become UsageError("origin:line:column: ...").
json parse_json(std::string_view text, const std::string& origin);
json read_json(const fs::path& path);

/// {"dim":1,"n":[256],"h":0.0078125,"mu":"lebesgue"|[...]}.
SpacePtr parse_space(const json& j);
json space_json(const MeasureSpace& s);

/// {"values":[...]} with an optional "space" descriptor.  Without one the
/// grid is `hint`, or 1D Lebesgue on [0, 1] with as many cells as values.
GridFunction parse_function(const json& j, const SpacePtr& hint);
GridFunction load_function(const fs::path& path, const SpacePtr& hint = nullptr);
json function_json(const GridFunction& f);

/// {"family":"power","p":2} | {"family":"plog","p":2,"alpha":1} |
/// {"family":"minmax","p":1.5,"q":3,"max":true} | {"family":"tabulated","t":[...],"phi":[...]} |
/// {"family":"linear"}; an optional "r" rescales to Φ(t^r).
YoungFunction parse_young(const json& j);

/// Grid implied by a spec file: its "space" entry, else the grid of its u or v
/// file (inferred as for parse_function), else null.
SpacePtr spec_space(const json& j, const fs::path& base);
/// {"family":"lorentz","p":2,"q":1,"u":"u.json","v":"v.json","r":1}.  Orlicz
/// takes "phi" (object or file); varexp takes "exponents" (array or file).
/// u, v and file references may be inline objects or paths relative to `base`.
SpaceSpec parse_spec(const json& j, const SpacePtr& space, const fs::path& base);

/// Finite numbers as-is; ±∞ and NaN as the strings "inf", "-inf", "nan".
json num(double x);

/// Writes through a sibling temporary and renames, so readers never see a partial file.
void write_atomic(const fs::path& path, const std::string& content);

}  // namespace wfx::cli
