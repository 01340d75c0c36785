#ifndef SDST_ERRORS_H_
#define SDST_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sdst {

// Malformed or invalid input data (corpus files, model files, schemas).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

// Non-finite values or failed numerical checks.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

// Bad arguments or configuration supplied by the caller.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace sdst

#endif  // SDST_ERRORS_H_
