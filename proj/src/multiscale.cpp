#include "latgrow/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "latgrow/lattice.hpp"

namespace latgrow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// log-space identities are compared with this relative slack
constexpr double kRelTol = 1e-12;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

nlohmann::json check_json(const ScheduleCheck& c) {
  return {{"k", c.k}, {"inequality", c.inequality}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}};
}

nlohmann::json log_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

}  // namespace

void ScaleParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
  if (!(c1 > 0.0)) throw DomainError("c1 must be positive");
  if (!(c_fpp > 0.0) || !(c_fpp_prime > 0.0)) throw DomainError("FPP box constants must be positive");
  if (c_fpp > c_fpp_prime) throw DomainError("C_FPP must not exceed C'_FPP");
  if (!(L1 > 0.0)) throw DomainError("L1 must be positive");
  if (d < 1) throw DomainError("dimension must be positive");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  // Both sides are monotone or convex in x, so checking x = epsilon covers (0, epsilon].
  double a = lambda * std::exp(2 * epsilon);
  double b = lambda * (1 + 3 * epsilon);
  double c = 1 - 2 * epsilon;
  if (!(a < b && b < c)) {
    std::ostringstream msg;
    msg << "epsilon=" << epsilon << " violates lambda e^{2x} < lambda(1+3x) < 1-2x at lambda=" << lambda
        << " (" << a << ", " << b << ", " << c << ")";
    throw DomainError(msg.str());
  }
}

ScaleSchedule build_schedule(const ScaleParams& p) {
  p.validate();
  ScaleSchedule s;
  s.params = p;
  s.surrogate = "R_k = max(L_k, 10 d C' L_k / C^2) (upper end); L_k = 200 C' k^d R_{k-1}^outer (upper end)";
  const double log_enc = std::log(2 * p.alpha) + (1 + p.c1) / (2 * p.epsilon);
  const double log_r_factor = std::max(0.0, std::log(10.0 * p.d * p.c_fpp_prime / (p.c_fpp * p.c_fpp)));
  const double log_t = 2 * std::log((11 - p.lambda) / 10);
  double eps_sum = 0.0;
  for (int k = 1; k <= p.k_max; ++k) {
    ScaleRow r;
    r.k = k;
    const double lk = std::log(static_cast<double>(k));
    r.epsilon_k = k == 1 ? 0.0 : p.epsilon / (static_cast<double>(k) * k);
    eps_sum += r.epsilon_k;
    r.eps_sum = eps_sum;
    r.lambda1 = std::exp(-eps_sum);
    r.lambda2 = p.lambda * std::exp(eps_sum);
    r.lambda_eff = r.lambda2 / r.lambda1;
    r.log_L = k == 1 ? std::log(p.L1)
                     : std::log(200 * p.c_fpp_prime) + p.d * lk + s.rows.back().log_R_outer;
    r.log_R = r.log_L + log_r_factor;
    r.log_R_enc = r.log_R + log_enc;
    r.log_R_outer = r.log_R_enc + std::log(72.0 / p.epsilon) + 2 * lk;
    r.log_T1 = r.log_R_enc + log_t;
    s.rows.push_back(r);
  }
  return s;
}

VerificationReport verify_schedule(const ScaleSchedule& s) {
  const ScaleParams& p = s.params;
  VerificationReport rep;
  auto check = [&](int k, std::string what, bool ok, double lhs, double rhs) {
    ++rep.checked;
    if (!ok) {
      rep.pass = false;
      rep.failures.push_back({k, std::move(what), false, lhs, rhs});
    }
  };
  auto close = [](double a, double b) { return std::abs(a - b) <= kRelTol * std::max(1.0, std::abs(b)); };

  const double cap = p.lambda * std::exp(2 * p.epsilon);
  const double log_enc_const = (1 + p.c1) / (2 * p.epsilon);
  check(0, "lambda e^{2eps} < 1 - 2eps", cap < 1 - 2 * p.epsilon, cap, 1 - 2 * p.epsilon);
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const ScaleRow& r = s.rows[i];
    const int k = r.k;
    const double lk = std::log(static_cast<double>(k));
    check(k, "sum eps_i <= eps", r.eps_sum <= p.epsilon, r.eps_sum, p.epsilon);
    if (k == 1) {
      // eps_1 = 0 makes lambda_eff equal lambda at the first scale
      check(k, "lambda <= lambda_eff", p.lambda <= r.lambda_eff, p.lambda, r.lambda_eff);
    } else {
      check(k, "lambda < lambda_eff", p.lambda < r.lambda_eff, p.lambda, r.lambda_eff);
    }
    check(k, "lambda_eff <= lambda e^{2eps}", r.lambda_eff <= cap, r.lambda_eff, cap);
    check(k, "lambda_eff < 1 - 2eps", r.lambda_eff < 1 - 2 * p.epsilon, r.lambda_eff, 1 - 2 * p.epsilon);
    check(k, "lambda1_k > e^{-eps}", r.lambda1 > std::exp(-p.epsilon), r.lambda1, std::exp(-p.epsilon));
    check(k, "lambda e^{eps} > lambda2_k", p.lambda * std::exp(p.epsilon) > r.lambda2,
          p.lambda * std::exp(p.epsilon), r.lambda2);
    check(k, "1 - eps > lambda e^{eps}", 1 - p.epsilon > p.lambda * std::exp(p.epsilon), 1 - p.epsilon,
          p.lambda * std::exp(p.epsilon));
    check(k, "R_k >= L_k", r.log_R >= r.log_L, r.log_R, r.log_L);
    double ratio = r.log_R_outer - r.log_R;
    double expect = std::log(144 * p.alpha / p.epsilon) + log_enc_const + 2 * lk;
    check(k, "R_outer/R = 144 alpha e^{(1+c1)/(2eps)} k^2/eps", close(ratio, expect), ratio, expect);
    double t_ratio = r.log_T1 - r.log_R_enc;
    double t_bound = 2 * std::log((11 - r.lambda_eff) / 10);
    check(k, "T1 >= R_enc ((11-lambda_eff)/10)^2", t_ratio >= t_bound - kRelTol, t_ratio, t_bound);
    if (i == 0) continue;

    const ScaleRow& q = s.rows[i - 1];
    check(k, "lambda1 decreasing", r.lambda1 < q.lambda1, r.lambda1, q.lambda1);
    check(k, "lambda2 increasing", r.lambda2 > q.lambda2, r.lambda2, q.lambda2);
    check(k, "lambda_eff increasing", r.lambda_eff > q.lambda_eff, r.lambda_eff, q.lambda_eff);
    check(k, "L increasing", r.log_L > q.log_L, r.log_L, q.log_L);
    check(k, "R increasing", r.log_R > q.log_R, r.log_R, q.log_R);
    check(k, "R_enc increasing", r.log_R_enc > q.log_R_enc, r.log_R_enc, q.log_R_enc);
    check(k, "R_outer increasing", r.log_R_outer > q.log_R_outer, r.log_R_outer, q.log_R_outer);
    // Growth factor with the previous scale's own (k-1)^2 in R_{k-1}^outer.
    double growth = r.log_R - q.log_R;
    double lkm1 = std::log(static_cast<double>(k - 1));
    double factor = std::log(288000.0 * p.d * p.alpha / p.epsilon) + p.d * lk + 2 * lkm1 + log_enc_const;
    check(k, "R_k/R_{k-1} >= 288000 d alpha k^d (k-1)^2 e^{(1+c1)/(2eps)}/eps", growth >= factor - kRelTol,
          growth, factor);
    double literal = std::log(288000.0 * p.d * p.alpha / p.epsilon) + (p.d + 2) * lk + log_enc_const;
    rep.informational.push_back({k, "R_k/R_{k-1} >= 288000 d alpha k^{d+2} e^{(1+c1)/(2eps)}/eps",
                                 growth >= literal - kRelTol, growth, literal});
  }
  return rep;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& c : failures) f.push_back(check_json(c));
  nlohmann::json info = nlohmann::json::array();
  for (const auto& c : informational) info.push_back(check_json(c));
  return {{"pass", pass}, {"checked", checked}, {"failures", f}, {"informational", info}};
}

std::vector<double> log_q_sequence(const ScaleSchedule& s, double c_q) {
  const int d = s.params.d;
  const double expo = static_cast<double>(d + 1) / (2.0 * d + 4.0);
  std::vector<double> out;
  for (const auto& r : s.rows) out.push_back(-c_q * std::exp(expo * r.log_R_outer));
  return out;
}

RhoLedger rho_ledger(double a, double c_rec, double rho_bar, int d, const std::vector<double>& log_q) {
  if (!(a > 0.0)) throw DomainError("a must be positive");
  if (!(c_rec > 0.0)) throw DomainError("recursion constant must be positive");
  if (!(rho_bar >= 0.0 && rho_bar < 1.0)) throw DomainError("rho_bar must lie in [0, 1)");
  RhoLedger led;
  led.a = a;
  led.c_rec = c_rec;
  led.rho_bar = rho_bar;
  led.log_q = log_q;
  const double lc = std::log(c_rec);
  const double e2 = 2.0 * d * (d + 2);
  const double e1 = static_cast<double>(d) * (d + 2);
  for (std::size_t i = 0; i < log_q.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    double v;
    if (k == 1) {
      v = rho_bar > 0.0 ? std::log(rho_bar) : kNegInf;
    } else {
      double lk = std::log(static_cast<double>(k));
      double prev = led.log_rho.back();
      double sq = prev == kNegInf ? kNegInf : lc + e2 * lk + 2 * prev;
      double qq = log_q[i - 1] == kNegInf ? kNegInf : lc + e1 * lk + log_q[i - 1];
      v = log_add(sq, qq);
    }
    double target = -a * std::ldexp(1.0, k);
    led.log_rho.push_back(v);
    led.log_target.push_back(target);
    if (!led.first_exceed && v > target) led.first_exceed = k;
  }
  return led;
}

RhoLedger rho_ledger(double a, double c_rec, double rho_bar, const ScaleSchedule& s, double c_q) {
  return rho_ledger(a, c_rec, rho_bar, s.params.d, log_q_sequence(s, c_q));
}

nlohmann::json RhoLedger::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < log_rho.size(); ++i) {
    rows.push_back({{"k", i + 1}, {"log_q", log_json(log_q[i])}, {"log_rho", log_json(log_rho[i])},
                    {"log_target", log_target[i]}});
  }
  return {{"a", a}, {"c_rec", c_rec}, {"rho_bar", rho_bar},
          {"first_exceed", first_exceed ? nlohmann::json(*first_exceed) : nlohmann::json(nullptr)},
          {"rows", rows}};
}

std::vector<SensitivityRow> sensitivity(const ScaleParams& params, double a, double c_rec, double rho_bar,
                                        double c_q) {
  std::vector<SensitivityRow> out;
  for (double f : {0.5, 1.0, 2.0}) {
    ScaleParams p = params;
    p.c1 *= f;
    auto s = build_schedule(p);
    out.push_back({"c1", f, verify_schedule(s).pass, rho_ledger(a, c_rec, rho_bar, s, c_q).first_exceed});
  }
  auto s = build_schedule(params);
  bool ok = verify_schedule(s).pass;
  for (double f : {0.5, 2.0}) {
    out.push_back({"c_q", f, ok, rho_ledger(a, c_rec, rho_bar, s, c_q * f).first_exceed});
  }
  return out;
}

std::string format_log_value(double log_value) {
  if (log_value == kNegInf) return "0";
  if (std::isinf(log_value) || std::isnan(log_value)) return "nan";
  double l10 = log_value / std::log(10.0);
  if (std::abs(l10) < 300) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", std::exp(log_value));
    return buf;
  }
  if (std::abs(l10) >= 1e6) {
    // a decimal mantissa would carry no correct digits here
    char buf[64];
    std::snprintf(buf, sizeof buf, "exp(%.12g)", log_value);
    return buf;
  }
  double e = std::floor(l10);
  double m = std::pow(10.0, l10 - e);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11f", m);
  if (buf[1] != '.') {
    // mantissa rounded up to 10
    m /= 10;
    e += 1;
  }
  std::snprintf(buf, sizeof buf, "%.11fe%+.0f", m, e);
  return buf;
}

std::string schedule_csv(const ScaleSchedule& s, const RhoLedger& led) {
  std::ostringstream out;
  out << "k,eps_k,lambda1_k,lambda2_k,lambda_eff_k,L_k,R_k,R_enc_k,R_outer_k,T1_k,q_k,rho_k_bound\n";
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const ScaleRow& r = s.rows[i];
    out << r.k << ',' << num(r.epsilon_k) << ',' << num(r.lambda1) << ',' << num(r.lambda2) << ','
        << num(r.lambda_eff) << ',' << format_log_value(r.log_L) << ',' << format_log_value(r.log_R) << ','
        << format_log_value(r.log_R_enc) << ',' << format_log_value(r.log_R_outer) << ','
        << format_log_value(r.log_T1) << ',' << (i < led.log_q.size() ? format_log_value(led.log_q[i]) : "")
        << ',' << (i < led.log_rho.size() ? format_log_value(led.log_rho[i]) : "") << '\n';
  }
  return out.str();
}

}  // namespace latgrow
