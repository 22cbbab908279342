#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

struct Plant {
  double f_ref, z0, m, k, c;
};

inline double force_law(const Plant& p, double u, double z) {
  return p.f_ref * u * std::pow(1.0 + z / p.z0, -4.0);
}

// Classic RK4 on (z, v) with constant drive and a fixed target.
inline std::vector<double> rk4_positions(const Plant& p, double u, double z_target, double z,
                                         double v, double h, std::size_t steps,
                                         std::size_t every) {
  auto accel = [&](double zz, double vv) {
    return (force_law(p, u, zz) + p.k * (z_target - zz) - p.c * vv) / p.m;
  };
  std::vector<double> out{z};
  for (std::size_t i = 1; i <= steps; ++i) {
    const double k1z = v, k1v = accel(z, v);
    const double k2z = v + 0.5 * h * k1v, k2v = accel(z + 0.5 * h * k1z, v + 0.5 * h * k1v);
    const double k3z = v + 0.5 * h * k2v, k3v = accel(z + 0.5 * h * k2z, v + 0.5 * h * k2v);
    const double k4z = v + h * k3v, k4v = accel(z + h * k3z, v + h * k3v);
    z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (i % every == 0) out.push_back(z);
  }
  return out;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Mean of ambient*(1 + a*sin(2*pi*f*s + phase)) over [t - w, t], midpoint
// rule with step h (1 us by default).
inline double window_mean_ambient(double ambient, double amp, double hz, double phase,
                                  double t, double w, double h = 1e-6) {
  const auto n = static_cast<std::size_t>(std::llround(w / h));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = t - w + (static_cast<double>(i) + 0.5) * h;
    sum += ambient * (1.0 + amp * std::sin(2.0 * std::numbers::pi * hz * s + phase));
  }
  return sum / static_cast<double>(n);
}

// Counts rising edges through `trig`, requiring a dip to trig - hyst between
// counted edges.
inline int count_triggers(const std::vector<double>& p, double trig, double hyst,
                          bool armed = true) {
  int count = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (armed && p[i - 1] < trig && p[i] >= trig) {
      ++count;
      armed = false;
    } else if (!armed && p[i] <= trig - hyst) {
      armed = true;
    }
  }
  return count;
}

// Brute-force step count written directly from the light/quantizer formulas.
inline int brute_force_steps(double ambient, double floor_frac) {
  const double z_max = 0.04;
  std::vector<int> codes;
  for (int i = 0; i <= 4000; ++i) {
    const double r = std::min(1.0, i * 1e-5 / z_max);
    const double x = ambient * (floor_frac + (1.0 - floor_frac) * r);
    codes.push_back(static_cast<int>(std::clamp(std::floor(127.0 * x + 0.5), 0.0, 127.0)));
  }
  const int lo = *std::min_element(codes.begin(), codes.end());
  const int hi = *std::max_element(codes.begin(), codes.end());
  std::set<int> steps;
  for (int c : codes) {
    if (static_cast<double>(hi - c) / (hi - lo) >= 0.05) steps.insert(c);
  }
  return static_cast<int>(steps.size());
}

}  // namespace oracle
