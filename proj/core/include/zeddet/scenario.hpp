#ifndef ZEDDET_SCENARIO_HPP
#define ZEDDET_SCENARIO_HPP

#include "zeddet/harness.hpp"

#include <string>

namespace zeddet {

/// Parses the INI-style scenario schema (see README and tools/scenarios/ for
/// the documented format). Throws ConfigError with field-level messages on
/// missing required keys, unknown keys, or invalid values. sigma2, p_fa,
/// seed, trials and per-tag timing have no defaults by design.
TrialSpec parse_scenario_text(const std::string& text, const std::string& origin);

TrialSpec parse_scenario_file(const std::string& path);

} // namespace zeddet

#endif
