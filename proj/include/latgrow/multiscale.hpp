#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace latgrow {

struct ScaleParams {
  double epsilon = 0.05;
  double lambda = 0.5;
  double alpha = 4.0;
  double c1 = 1.0;  // encapsulation constant, not known numerically
  double c_fpp = 1.0;
  double c_fpp_prime = 1.0;
  double L1 = 1e6;
  int d = 2;
  int k_max = 50;

  /// Throws DomainError naming the violated condition.
  void validate() const;
};

/// Lengths and times are kept as natural logs; they overflow a double long
/// before k = 50.
struct ScaleRow {
  int k = 0;
  double epsilon_k = 0.0;
  double eps_sum = 0.0;  // sum of epsilon_i for i <= k
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  double lambda_eff = 0.0;
  double log_L = 0.0;
  double log_R = 0.0;
  double log_R_enc = 0.0;
  double log_R_outer = 0.0;
  double log_T1 = 0.0;
};

struct ScaleSchedule {
  ScaleParams params;
  std::vector<ScaleRow> rows;  // rows[k - 1]
  std::string surrogate;
};

/// Box surrogates: R_k = max(L_k, 10 d C' L_k / C^2), L_k = 200 C' k^d R_{k-1}^outer.
ScaleSchedule build_schedule(const ScaleParams& params);

struct ScheduleCheck {
  int k = 0;
  std::string inequality;
  bool pass = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct VerificationReport {
  bool pass = true;
  std::size_t checked = 0;
  std::vector<ScheduleCheck> failures;
  std::vector<ScheduleCheck> informational;  // reported but not part of pass

  nlohmann::json to_json() const;
};

VerificationReport verify_schedule(const ScaleSchedule& schedule);

struct RhoLedger {
  double a = 1.0;
  double c_rec = 1.0;
  double rho_bar = 0.0;
  std::vector<double> log_q;       // per k
  std::vector<double> log_rho;     // per k, -inf for an exact zero
  std::vector<double> log_target;  // -a 2^k
  std::optional<int> first_exceed;

  nlohmann::json to_json() const;
};

/// log q_k = -c_q (R_k^outer)^((d+1)/(2d+4)).
std::vector<double> log_q_sequence(const ScaleSchedule& schedule, double c_q = 1.0);

/// rho_1 = rho_bar, rho_k = c k^(2d(d+2)) rho_{k-1}^2 + c k^(d(d+2)) q_{k-1}.
RhoLedger rho_ledger(double a, double c_rec, double rho_bar, const ScaleSchedule& schedule, double c_q = 1.0);
RhoLedger rho_ledger(double a, double c_rec, double rho_bar, int d, const std::vector<double>& log_q);

struct SensitivityRow {
  std::string constant;
  double factor = 1.0;
  bool schedule_pass = true;
  std::optional<int> first_exceed;
};

/// Re-runs verification and the ledger with c1 and c_q scaled by 0.5 and 2.
std::vector<SensitivityRow> sensitivity(const ScaleParams& params, double a, double c_rec, double rho_bar,
                                        double c_q = 1.0);

/// exp(log_value) in decimal scientific notation with 12 significant digits,
/// valid far outside double range; "exp(x)" once the decimal exponent
/// reaches 10^6.
std::string format_log_value(double log_value);

/// CSV with columns k, eps_k, lambda1_k, lambda2_k, lambda_eff_k, L_k, R_k,
/// R_enc_k, R_outer_k, T1_k, q_k, rho_k_bound.
std::string schedule_csv(const ScaleSchedule& schedule, const RhoLedger& ledger);

}  // namespace latgrow
