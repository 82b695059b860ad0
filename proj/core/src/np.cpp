#include "zeddet/np.hpp"

#include "zeddet/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>

namespace zeddet {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("q_inverse: p must lie in (0, 1)");
  // Q(x) = p  <=>  erfc(x/sqrt(2)) = 2p
  return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double np_threshold(double var_hat, double p_fa_target) {
  if (!(var_hat > 0.0)) throw ConfigError("np_threshold: variance must be > 0");
  return std::sqrt(var_hat) * q_inverse(p_fa_target);
}

double false_alarm_prob(double r_star, double var) {
  if (!(var > 0.0)) throw ConfigError("false_alarm_prob: variance must be > 0");
  return q_function(r_star / std::sqrt(var));
}

double detection_prob(double r_star, double var, double eta2) {
  if (!(var > 0.0)) throw ConfigError("detection_prob: variance must be > 0");
  if (eta2 < 0.0) throw ConfigError("detection_prob: eta2 must be >= 0");
  return q_function((r_star - eta2) / std::sqrt(var));
}

NpDecision NpDecision::make(double var_hat, double p_fa_target) {
  NpDecision d;
  d.var_hat = var_hat;
  d.p_fa_target = p_fa_target;
  d.r_star = np_threshold(var_hat, p_fa_target);
  d.p_fa_predicted = false_alarm_prob(d.r_star, var_hat);
  return d;
}

double NpDecision::p_d_predicted(double eta2) const {
  return detection_prob(r_star, var_hat, eta2);
}

} // namespace zeddet
