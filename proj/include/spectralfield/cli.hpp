#ifndef SPECTRALFIELD_CLI_HPP
#define SPECTRALFIELD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectralfield/field.hpp"

namespace spectralfield::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitHypothesisViolation = 2;
inline constexpr int kExitInconclusive = 3;

/// Parse a FieldSpec JSON document: either {"n","m","entries"} with a
/// symmetric grid of term lists [{"c":..,"e":[..]},...], or
/// {"n","potential":[...]} whose Hessian is taken.
PolyMatrixField parseFieldSpec(const nlohmann::json& doc);

/// "cubic" or "quartic", built through the potential path.
PolyMatrixField builtinField(const std::string& name);

/// Deterministic report serialization: sorted keys, doubles as %.17g,
/// non-finite values as null.
std::string dumpReport(const nlohmann::json& report);

/// Full command-line entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spectralfield::cli

#endif
