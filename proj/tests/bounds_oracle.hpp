#pragma once

// Second, straight-line transcription of the bounds formulas. It shares no
// code with the library and keeps the library's evaluation order so the
// comparison can be bitwise.

#include <cmath>
#include <map>
#include <string>

namespace oracle {

inline std::map<std::string, double> bounds(double g, double L, double F, double mu, double V, double c, double xi,
                                            double m, const std::map<std::string, double>& over = {}) {
  auto C = [&](const char* k) { return over.count(k) ? over.at(k) : c; };
  const double PI = 3.14159265358979323846;
  std::map<std::string, double> o;

  // tilde-tilde chain seeded with Rt0
  const double Rt0 = F / g + std::sqrt(mu / g) * V;
  o["Rt0"] = Rt0;
  double R = Rt0;
  const double Ktt1 = 6 * g * F * R + 6 * mu * g * V * R + mu * mu * C("K1") * C("K1") * std::pow(R, 6) / g + 2 * mu * F * R +
                      2 * mu * mu * V * R + 2 * mu * V * R;
  const double Ktt2 = C("K2") * C("K2") * std::pow(R, 6) / (16 * xi) + 0.5 * C("K2") * std::pow(R, 4) + 2 * F * R + 2 * mu * V * R +
                      (1 - xi) * R * R;
  const double Ktt3 = 3 * g * Ktt2 / (1 - xi) + Ktt1;
  const double Ktt4 = Ktt3 * (1 - xi) / (g * (1 - 4 * xi));
  const double Rtt1 = std::sqrt((Ktt4 + Ktt2) / (1 - xi));
  o["Ktt1"] = Ktt1, o["Ktt2"] = Ktt2, o["Ktt3"] = Ktt3, o["Ktt4"] = Ktt4, o["Rtt1"] = Rtt1;

  // final L2 radius
  const double R0 = F / std::sqrt(g * (g + mu)) + std::sqrt(mu / (g + mu)) * V + std::sqrt(mu / (g + mu));
  o["R0"] = R0;

  // tilde chain seeded with R0
  R = R0;
  const double Kt1 = 6 * g * F * R + 6 * mu * g * V * R + mu * mu * C("K1") * C("K1") * std::pow(R, 6) / g + 2 * mu * F * R +
                     2 * mu * mu * V * R + 2 * mu * V * R;
  const double Kt2 = C("K2") * C("K2") * std::pow(R, 6) / (16 * xi) + 0.5 * C("K2") * std::pow(R, 4) + 2 * F * R + 2 * mu * V * R +
                     (1 - xi) * R * R;
  const double Kt3 = 3 * g * Kt2 / (1 - xi) + Kt1;
  const double Kt4 = Kt3 * (1 - xi) / (g * (1 - 4 * xi));
  const double Rt1 = std::sqrt((Kt4 + Kt2) / (1 - xi));
  o["Kt1"] = Kt1, o["Kt2"] = Kt2, o["Kt3"] = Kt3, o["Kt4"] = Kt4, o["Rt1"] = Rt1;

  // tilde H2 chain on (R0, Rt1)
  {
    const double a = std::sqrt(R0) * Rt1 * Rt1;
    const double b = R0 * Rt1 * (R0 * R0 * Rt1 + (g + mu) * R0 + mu * V + F);
    const double K5 = C("K5") * std::pow(a, 4) / std::pow(g, 3) + C("K5") * b * b / g;
    const double q = R0 * R0 * Rt1;
    const double K6 = 2 * K5 + C("K6") * mu * mu * V * V / g + C("K6") * g * mu * mu * V * V + C("K6") * g * F * F + C("K6") * mu * q * q +
                      C("K6") * mu * F * F + C("K6") * std::pow(mu, 3) * V * V;
    const double K7 = C("K7") * (R0 * std::pow(Rt1, 3) + F * F + mu * mu * V * V);
    o["Kt5"] = K5, o["Kt6"] = K6, o["Kt7"] = K7, o["Rt2"] = std::sqrt(4 * K6 / g + 4 * K7) + R0;
  }

  // final H1 chain
  const double K1 = 6 * g * F * R0 + 6 * mu * g * V * R0 + mu * (C("K1") * C("K1") * std::pow(R0, 6) + R0 * R0) + 2 * mu +
                    2 * mu * F * R0 + 2 * mu * V * R0;
  const double K2 = 3 * C("K2") * C("K2") * std::pow(R0, 6) / 16 + 0.5 * C("K2") * std::pow(R0, 4) + 2 * F * R0 + 2 * mu * V * R0 +
                    2.0 / 3.0 * R0 * R0;
  const double R1 = std::sqrt(((1.5 * mu + 6 * g) * K2 + K1) / (g + mu));
  o["K1"] = K1, o["K2"] = K2, o["R1"] = R1;

  // final H2 chain on (R0, R1)
  const double a = std::sqrt(R0) * R1 * R1;
  const double b = R0 * R1 * (R0 * R0 * R1 + (g + mu) * R0 + mu * V + F);
  const double K5 = C("K5") * std::pow(a, 4) / std::pow(g, 3) + C("K5") * b * b / g;
  const double q = R0 * R0 * R1;
  const double K6 = 2 * K5 + C("K6") * mu * mu * V * V / g + C("K6") * g * mu * mu * V * V + C("K6") * g * F * F + C("K6") * mu * q * q +
                    C("K6") * mu * F * F + C("K6") * std::pow(mu, 3) * V * V;
  const double K7 = C("K7") * (R0 * std::pow(R1, 3) + F * F + mu * mu * V * V);
  const double R2 = std::sqrt(4 * K6 / g + 4 * K7) + R0;
  const double Rp = R2 + C("Rp") * R0 * R0 * R1 + (g + mu) * R0 + F + mu * V;
  const double Rinf = C("Rinf") * R0 * R1;
  o["K5"] = K5, o["K6"] = K6, o["K7"] = K7, o["R2"] = R2, o["Rp"] = Rp, o["Rinf"] = Rinf;

  // mu = 0, |v|_X = 0
  const double R0_0 = F / std::sqrt(g * (g + 0.0)) + std::sqrt(0.0 / (g + 0.0)) * 0.0 + std::sqrt(0.0 / (g + 0.0));
  const double K1_0 = 6 * g * F * R0_0 + 6 * 0.0 * g * 0.0 * R0_0 + 0.0 * (C("K1") * C("K1") * std::pow(R0_0, 6) + R0_0 * R0_0) +
                      2 * 0.0 + 2 * 0.0 * F * R0_0 + 2 * 0.0 * 0.0 * R0_0;
  const double K2_0 = 3 * C("K2") * C("K2") * std::pow(R0_0, 6) / 16 + 0.5 * C("K2") * std::pow(R0_0, 4) + 2 * F * R0_0 +
                      2 * 0.0 * 0.0 * R0_0 + 2.0 / 3.0 * R0_0 * R0_0;
  const double R1_0 = std::sqrt(((1.5 * 0.0 + 6 * g) * K2_0 + K1_0) / (g + 0.0));
  const double a0 = std::sqrt(R0_0) * R1_0 * R1_0;
  const double b0 = R0_0 * R1_0 * (R0_0 * R0_0 * R1_0 + (g + 0.0) * R0_0 + 0.0 * 0.0 + F);
  const double K5_0 = C("K5") * std::pow(a0, 4) / std::pow(g, 3) + C("K5") * b0 * b0 / g;
  const double q0 = R0_0 * R0_0 * R1_0;
  const double K6_0 = 2 * K5_0 + C("K6") * 0.0 * 0.0 * 0.0 * 0.0 / g + C("K6") * g * 0.0 * 0.0 * 0.0 * 0.0 + C("K6") * g * F * F +
                      C("K6") * 0.0 * q0 * q0 + C("K6") * 0.0 * F * F + C("K6") * std::pow(0.0, 3) * 0.0 * 0.0;
  const double K7_0 = C("K7") * (R0_0 * std::pow(R1_0, 3) + F * F + 0.0 * 0.0 * 0.0 * 0.0);
  const double R2_0 = std::sqrt(4 * K6_0 / g + 4 * K7_0) + R0_0;
  const double Rp_0 = R2_0 + C("Rp") * R0_0 * R0_0 * R1_0 + (g + 0.0) * R0_0 + F + 0.0 * 0.0;
  const double Rinf_0 = C("Rinf") * R0_0 * R1_0;
  o["R0_0"] = R0_0, o["R1_0"] = R1_0, o["R2_0"] = R2_0, o["Rp_0"] = Rp_0, o["Rinf_0"] = Rinf_0;
  o["R"] = R0_0 + Rp_0;

  // difference chain
  const double g13 = std::pow(g, -1.0 / 3.0);
  const double mix = std::sqrt(Rinf) * std::sqrt(Rinf_0);
  const double K8 = mu * (Rinf + Rinf_0) + mu * mix + std::sqrt(Rinf_0) * Rp +
                    g13 * std::pow(Rinf_0, 2.0 / 3.0) * std::pow(Rp, 4.0 / 3.0) + std::sqrt(Rinf) * Rp_0 +
                    g13 * std::pow(Rinf, 2.0 / 3.0) * std::pow(Rp_0, 4.0 / 3.0);
  const double K9 = mix * (K8 + g * (Rinf + Rinf_0 + mix));
  const double K10 = Rinf * ((mu + g) * Rinf + g13 * std::pow(Rinf, 2.0 / 3.0) * std::pow(Rp, 4.0 / 3.0));
  const double K11 =
      std::sqrt((C("K11") * g * Rinf_0 + C("K11") * g13 * std::pow(Rinf_0, 2.0 / 3.0) * std::pow(Rp_0, 4.0 / 3.0)) / g);
  const double kappa = 2 * PI / L;
  const double LW =
      (m * m + C("LW") * Rinf + g + mu + 1) * (C("LW") * Rinf * (mu + 3 * g * mu) / (kappa * kappa * (m + 1) * (m + 1) * g)) + mu;
  o["K8"] = K8, o["K9"] = K9, o["K10"] = K10, o["K11"] = K11, o["LW"] = LW;

  o["mucondition_lhs"] = mix;
  o["mcondition2_lhs"] = C("mcondition2") * L * L * K9 / (2 * g * g);
  o["mucondition2_lhs"] = C("mucondition2") * R0 * R1;
  o["mcondition3_lhs"] = C("mcondition3") * L * L * K10 / (2 * g * g);
  o["modes_thm31"] = L / (2 * PI) * K11 - 1;
  return o;
}

}  // namespace oracle
