#pragma once

#include <string>
#include <string_view>

#include "pathdep/dag.hpp"
#include "pathdep/gaussian.hpp"

namespace pathdep {

struct Model {
    Dag dag;
    GaussianParams params;
};

/// Line-oriented model text; '#' starts a comment.
///
///     node <name>
///     edge <parent> -> <child> <coefficient>
///     var <name> <tau2>
///
/// Every node needs exactly one var line. Grammar problems raise ParseError
/// ("line N: ..."); graph and parameter problems raise the codes of
/// Dag::build and GaussianParams::validate.
Model parse_model(std::string_view text);
/// Reads a file and parses it; an unreadable file is a ParseError.
Model load_model(const std::string& path);

/// Inverse of parse_model; numbers are written in shortest round-trip form.
std::string serialize_model(const Dag& dag, const GaussianParams& params);

/// Shortest decimal that reads back as the same double.
std::string format_double(double v);

}  // namespace pathdep
