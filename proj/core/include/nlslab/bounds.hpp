#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlslab {

struct BoundsInput {
  double gamma = 1;
  double L = 6.283185307179586;
  double norm_f = 1;
  double mu = 10;
  double v_X = 1;
  double c = 2;
  double xi = 1.0 / 7.0;
  int m = 8;  // observed modes; enters L_W and the condition map
  std::string c_source = "user";
  // Per-display replacements for c, keyed by the quantity whose formula
  // carries it (see c_override_keys()). Absent keys use c.
  std::map<std::string, double> c_override;

  double c_for(const std::string& key) const;
  void validate() const;
};

// K1 and K2 cover every H1 chain and the final chain; K5, K6, K7 cover every
// H2 chain.
const std::vector<std::string>& c_override_keys();

// One parametric H1 chain seeded with an L2 radius R:
// K1 = 6 g F R + 6 mu g V R + mu^2 c^2 R^6 / g + 2 mu F R + 2 mu^2 V R + 2 mu V R
// K2 = c^2 R^6 / (16 xi) + c R^4 / 2 + 2 F R + 2 mu V R + (1 - xi) R^2
// K3 = 3 g K2 / (1 - xi) + K1,  K4 = K3 (1 - xi) / (g (1 - 4 xi))
// R1 = sqrt((K4 + K2) / (1 - xi))
struct H1Chain {
  double K1 = 0, K2 = 0, K3 = 0, K4 = 0, R1 = 0;
};

// H2 chain from an L2 radius R0 and an H1 radius R1.
struct H2Chain {
  double K5 = 0, K6 = 0, K7 = 0, R2 = 0;
};

struct Condition {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool strict = false;
  bool holds = false;
  // Smallest m for which the condition holds; empty for mu conditions.
  std::optional<double> min_m;
};

struct BoundsReport {
  BoundsInput input;

  double Rt0 = 0;
  H1Chain tt;       // seeded with Rt0
  H1Chain t;        // seeded with R0
  H2Chain t2;       // (R0, Rt1)
  double R0 = 0, K1 = 0, K2 = 0, R1 = 0;
  H2Chain f2;       // (R0, R1)
  double Rp = 0, Rinf = 0;

  double R0_0 = 0, R1_0 = 0, R2_0 = 0, Rp_0 = 0, Rinf_0 = 0, R = 0;

  double K8 = 0, K9 = 0, K10 = 0, K11 = 0, LW = 0;

  std::vector<Condition> conditions;

  // Named entries in report order, e.g. "Rtt1", "K9", "mucondition_lhs".
  std::vector<std::pair<std::string, double>> entries() const;
  double get(const std::string& name) const;
};

H1Chain h1_chain(double gamma, double F, double mu, double V, double c, double xi, double R);
H2Chain h2_chain(double gamma, double F, double mu, double V, double c, double R0, double R1);

BoundsReport compute_report(const BoundsInput& in);

// (E1), (E2), the two mu conditions, the two m conditions and the
// determining-modes count, evaluated at the given m and mu.
std::vector<Condition> check_conditions(const BoundsReport& r, double m, double mu);

// Minimal m from a threshold X on m + 1: strict (m+1) > X, otherwise (m+1) >= X.
double min_m_for(double X, bool strict);

enum class OrderParam { mu, gamma, norm_f };
std::string to_string(OrderParam p);
OrderParam order_param_from_string(const std::string& s);

struct OrderFit {
  std::string constant;
  OrderParam param = OrderParam::mu;
  double slope = 0;
  std::vector<double> x, y;
};

// Log-spaced samples on [lo, hi] (at least four decades); least-squares
// slope of log(constant) against log(parameter) over the decade at the
// asymptotic end (high end for mu and norm_f, low end for gamma).
OrderFit asymptotic_order_fit(const BoundsInput& base, const std::string& constant, OrderParam param, double lo,
                              double hi, int samples);

// Human readable table of every entry and condition.
std::string format_report_table(const BoundsReport& r);
std::string report_to_json(const BoundsReport& r);
BoundsInput bounds_input_from_json(const std::string& text);

}  // namespace nlslab
