#ifndef SAS_ERRORS_HPP
#define SAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sas {

// Invalid or inconsistent input data (bad config, malformed file, broken
// precondition). CLI maps this to exit code 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative fit failed to converge. CLI maps this to exit code 3.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sas

#endif
