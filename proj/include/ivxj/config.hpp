#pragma once
// User hyperparameters of the IVX instrument and confidence level.

#include <cmath>
#include <stdexcept>

namespace ivxj {

struct IvxConfig {
  double c_z = -1.0;       // instrument drift, must be < 0
  double theta = 0.95;     // instrument persistence exponent, in (0,1)
  double ci_level = 0.95;  // two-sided confidence level

  // rho_z = 1 + c_z / T_eff^theta, common across individuals (T_eff = max_i T_i).
  double rho_z(int T_eff) const {
    double r = 1.0 + c_z / std::pow(static_cast<double>(T_eff), theta);
    if (!(r > 0.0 && r < 1.0))
      throw std::invalid_argument("IvxConfig: rho_z must lie in (0,1)");
    return r;
  }

  void validate() const {
    if (!(c_z < 0.0)) throw std::invalid_argument("IvxConfig: c_z must be negative");
    if (!(theta > 0.0 && theta < 1.0))
      throw std::invalid_argument("IvxConfig: theta must lie in (0,1)");
    if (!(ci_level > 0.0 && ci_level < 1.0))
      throw std::invalid_argument("IvxConfig: ci_level must lie in (0,1)");
  }
};

}  // namespace ivxj
