#ifndef ZEDDET_ERRORS_HPP
#define ZEDDET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zeddet {

/// Invalid configuration or parameter combination (scenario files, grid/FSK
/// mismatches, bad thresholds). Messages name the offending field.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A correlator bit window where one of the four sample classes is empty,
/// so the 1/a or 1/b normalization is undefined.
class DegenerateWindow : public std::runtime_error {
public:
  explicit DegenerateWindow(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zeddet

#endif
