#pragma once

// Subcommand drivers shared by the CLI and the C API. Each takes the raw
// config text and returns the rendered report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "cartan/automorphisms.hpp"

namespace cartan {

enum class OutputFormat { Json, Csv };

struct RunOptions {
  std::optional<std::uint64_t> seed;     // overrides "seed" in the config
  std::optional<std::size_t> samples;    // overrides the analysis sample count
  std::size_t workers = 1;
  OutputFormat format = OutputFormat::Json;
};

struct Report {
  std::string text;   // stdout payload
  std::string error;  // structured error record, empty on success
  int exit_code = 0;  // 0 ok, 1 failed check, 2 input error
};

/// metric | check-identities | ratio-profile | testfn | sequence-probe
Report run_command(const std::string& command, const std::string& config_text, const RunOptions& options);

inline constexpr double kIdentityTolerance = 1e-9;

/// 1 when any residual exceeds `tolerance` or a sample left the domain.
int identity_exit_code(const IdentityResiduals& r, double tolerance = kIdentityTolerance);

const char* tool_version();

}  // namespace cartan
