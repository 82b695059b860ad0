#ifndef ZEDDET_NP_HPP
#define ZEDDET_NP_HPP

namespace zeddet {

/// Standard normal tail probability Q(x) = 0.5 * erfc(x / sqrt(2)).
double q_function(double x);

/// Inverse of Q, accurate to machine precision over p in (0, 1).
double q_inverse(double p);

/// Neyman-Pearson threshold r* = sqrt(var) * Q^-1(p_fa).
double np_threshold(double var_hat, double p_fa_target);

/// False alarm probability of threshold r* under H0 variance var: Q(r*/sqrt(var)).
double false_alarm_prob(double r_star, double var);

/// Detection probability at path power eta2: Q((r* - eta2)/sqrt(var)).
double detection_prob(double r_star, double var, double eta2);

/// One calibrated decision rule, for reporting.
struct NpDecision {
  double var_hat = 0.0;
  double p_fa_target = 0.0;
  double r_star = 0.0;
  double p_fa_predicted = 0.0;

  static NpDecision make(double var_hat, double p_fa_target);
  double p_d_predicted(double eta2) const;
};

} // namespace zeddet

#endif
