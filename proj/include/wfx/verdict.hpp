#pragma once

namespace wfx {

/// Outcome of a verification.  A failed hypothesis is inconclusive, never a
/// failure of the conclusion.
enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);

}  // namespace wfx
