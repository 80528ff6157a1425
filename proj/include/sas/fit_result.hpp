#ifndef SAS_FIT_RESULT_HPP
#define SAS_FIT_RESULT_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace sas {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;      // one-sigma standard error
  bool identifiable = true;  // false when the data cannot constrain it
};

struct FitResult {
  std::vector<FitParameter> parameters;
  double residual_norm = 0.0;  // sqrt(sum of squared weighted residuals)
  std::size_t n_points = 0;
  bool converged = false;

  const FitParameter* find(const std::string& name) const {
    for (const auto& p : parameters)
      if (p.name == name) return &p;
    return nullptr;
  }
};

}  // namespace sas

#endif
