#pragma once

#include <filesystem>
#include <string>

#include "rmdp/imdp.hpp"
#include "rmdp/model_io.hpp"

namespace rmdp {

// Line-oriented explicit IMDP format:
//
//   imdp <nstates> <alphabet...>
//   init <state>
//   sink <state>                        (optional)
//   label <state> <names...>            (one line per labeled state)
//   t <state> <action> <succ> <lo> <hi> (one line per transition)
//
// Lines starting with '#' are comments. Rows are grouped by (state, action);
// action ids per state must be contiguous from 0. Doubles are written in
// shortest round-trip form. Paths ending in ".gz" are gzip-compressed.

void export_explicit(const IntervalMDP& m, const std::filesystem::path& path);
IntervalMDP import_explicit(const std::filesystem::path& path);

std::string to_explicit_string(const IntervalMDP& m);
/// `source` names the input in diagnostics ("<file>:<line>:<col>: ...").
IntervalMDP parse_explicit(std::string_view text, const std::string& source = "<string>");

}  // namespace rmdp
