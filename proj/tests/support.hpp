#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "scdt/signal.hpp"
#include "scdt/transform.hpp"

namespace scdt::testing {

using Fn = std::function<double(double)>;

inline Signal sample(const Fn& f, std::size_t n, double lo = 0.0, double hi = 1.0) {
  auto grid = linspace(lo, hi, n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(grid[i]);
  return Signal(std::move(grid), std::move(v));
}

inline double gauss(double t, double mu, double sigma) {
  const double z = (t - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

/// Smooth, compactly supported bump (1 - z^2)^2 on |z| < 1.
inline double biweight(double t, double mu, double width) {
  const double z = (t - mu) / width;
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return q * q;
}

/// Smooth signed signal: two to four compactly supported bumps of both signs
/// inside [0, 1], with at least one bump of each sign.
class RandomSmooth {
 public:
  explicit RandomSmooth(std::uint64_t seed) : eng_(seed) {}

  Fn next() {
    std::uniform_real_distribution<double> center(0.2, 0.8);
    std::uniform_real_distribution<double> width(0.08, 0.2);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_int_distribution<int> count(2, 4);
    struct Bump {
      double mu, width, a;
    };
    std::vector<Bump> bumps;
    const int n = count(eng_);
    for (int i = 0; i < n; ++i) {
      const double sign = i == 0 ? 1.0 : i == 1 ? -1.0 : (eng_() & 1 ? 1.0 : -1.0);
      bumps.push_back({center(eng_), width(eng_), sign * amp(eng_)});
    }
    return [bumps](double t) {
      double v = 0.0;
      for (const Bump& b : bumps) v += b.a * biweight(t, b.mu, b.width);
      return v;
    };
  }

  /// Next draw whose positive and negative parts both carry mass above 0.02.
  Fn next_mixed() {
    while (true) {
      Fn f = next();
      double pos = 0.0;
      double neg = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double v = f((i + 0.5) / 1000.0) / 1000.0;
        (v > 0.0 ? pos : neg) += std::abs(v);
      }
      if (pos > 0.02 && neg > 0.02) return f;
    }
  }

 private:
  std::mt19937_64 eng_;
};

/// Twenty smooth test signals of different shapes on [0, 1].
inline std::vector<Fn> smooth_suite() {
  constexpr double pi = std::numbers::pi;
  std::vector<Fn> suite{
      [](double t) { return gauss(t, 0.5, 0.1); },
      [](double t) { return gauss(t, 0.3, 0.05) + 0.5 * gauss(t, 0.7, 0.08); },
      [](double t) { return gauss(t, 0.35, 0.07) - gauss(t, 0.65, 0.07); },
      [=](double t) { return std::sin(2 * pi * t); },
      [=](double t) { return std::sin(4 * pi * t); },
      [=](double t) { return std::sin(pi * t); },
      [=](double t) { return -std::sin(3 * pi * t); },
      [=](double t) { return std::cos(5 * pi * (t - 0.5)) * gauss(t, 0.5, 0.1); },
      [=](double t) { return std::sin(10 * pi * (t - 0.5)) * gauss(t, 0.5, 0.1); },
      [](double t) { return t * (1 - t); },
      [](double t) { return (t - 0.3) * (t - 0.7) * 10; },
      [](double t) { return std::exp(-3 * t) - 0.4; },
      [=](double t) { return gauss(t, 0.5, 0.12) * std::cos(2 * pi * t); },
      [](double t) { return 2 * gauss(t, 0.2, 0.04) - gauss(t, 0.5, 0.06) + gauss(t, 0.8, 0.05); },
      [=](double t) { return std::sin(2 * pi * t) + 0.5 * std::sin(6 * pi * t); },
      [](double t) { return 1.0 + 0.5 * t; },
      [=](double t) { return std::tanh(8 * (t - 0.5)) * gauss(t, 0.5, 0.2); },
      [](double t) { return gauss(t, 0.5, 0.2) - 0.5; },
      [=](double t) { return std::sin(2 * pi * t * t); },
      [](double t) { return t * t * t - 0.2; },
  };
  return suite;
}

/// W2 between two nonnegative functions on [lo, hi], computed without the
/// library. The cumulative distributions are trapezoid sums on a fine grid,
/// so both quantiles are piecewise linear in u; the integral of their squared
/// difference is evaluated exactly over the merged u breakpoints. Flat
/// stretches of a cumulative sum (gaps of the support) become exact jumps.
inline double w2_oracle(const Fn& f1, const Fn& f2, double lo, double hi, std::size_t fine = 400000) {
  const double h = (hi - lo) / static_cast<double>(fine);
  auto cumulative = [&](const Fn& f) {
    std::vector<double> c(fine + 1, 0.0);
    for (std::size_t i = 0; i < fine; ++i) {
      const double a = lo + h * static_cast<double>(i);
      c[i + 1] = c[i] + 0.5 * h * (std::max(f(a), 0.0) + std::max(f(a + h), 0.0));
    }
    for (double& x : c) x /= c.back();
    c.back() = 1.0;
    return c;
  };
  const auto c1 = cumulative(f1);
  const auto c2 = cumulative(f2);
  // Quantile on segment j (c[j] < c[j+1]) at u.
  auto q = [&](const std::vector<double>& c, std::size_t j, double u) {
    return lo + h * (static_cast<double>(j) + (u - c[j]) / (c[j + 1] - c[j]));
  };
  auto next_segment = [&](const std::vector<double>& c, std::size_t j) {
    while (j < fine && !(c[j + 1] > c[j])) ++j;
    return j;
  };
  std::size_t j1 = next_segment(c1, 0);
  std::size_t j2 = next_segment(c2, 0);
  double u = 0.0;
  double total = 0.0;
  while (j1 < fine && j2 < fine) {
    const double end = std::min(c1[j1 + 1], c2[j2 + 1]);
    if (end > u) {
      const double d0 = q(c1, j1, u) - q(c2, j2, u);
      const double d1 = q(c1, j1, end) - q(c2, j2, end);
      total += (end - u) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
      u = end;
    }
    if (c1[j1 + 1] <= u) j1 = next_segment(c1, j1 + 1);
    if (c2[j2 + 1] <= u) j2 = next_segment(c2, j2 + 1);
  }
  return std::sqrt(total);
}

inline double relative_l1(const Signal& got, const Signal& want) { return l1_distance(got, want) / l1_norm(want); }

}  // namespace scdt::testing
