#include "scdt/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scdt/error.hpp"
#include "detail/piecewise.hpp"

namespace scdt {

namespace {

[[noreturn]] void fail_at(const char* what, std::size_t index) {
  std::ostringstream msg;
  msg << what << " at index " << index;
  throw ValidationError(msg.str());
}

}  // namespace

void validate_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw ValidationError("grid needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) fail_at("non-finite grid value", i);
    if (i > 0 && !(grid[i] > grid[i - 1])) fail_at("grid not strictly increasing", i);
  }
}

Signal::Signal(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    std::ostringstream msg;
    msg << "length mismatch: grid has " << grid_.size() << " points, values has "
        << values_.size() << " (first unmatched index "
        << std::min(grid_.size(), values_.size()) << ")";
    throw ValidationError(msg.str());
  }
  validate_grid(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) fail_at("non-finite signal value", i);
}

Signal Signal::zeros(std::vector<double> grid) {
  std::vector<double> v(grid.size(), 0.0);
  return Signal(std::move(grid), std::move(v));
}

double Signal::operator()(double t) const {
  return detail::interpolate(grid_, values_, t);
}

bool Signal::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Signal make_signal(std::vector<double> grid, std::vector<double> values) {
  return Signal(std::move(grid), std::move(values));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("linspace needs at least 2 points");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

double l1_norm(const Signal& s) {
  const auto t = s.grid();
  const auto v = s.values();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    total += detail::abs_linear_integral(v[i], v[i + 1], t[i + 1] - t[i]);
  return total;
}

std::pair<SignalPart, SignalPart> jordan_decompose(const Signal& s) {
  const auto t = s.grid();
  const auto v = s.values();
  std::vector<double> grid;
  std::vector<double> pos;
  std::vector<double> neg;
  grid.reserve(t.size() + 16);
  pos.reserve(t.size() + 16);
  neg.reserve(t.size() + 16);

  auto push = [&](double time, double value) {
    grid.push_back(time);
    pos.push_back(value > 0.0 ? value : 0.0);
    neg.push_back(value < 0.0 ? -value : 0.0);
  };

  for (std::size_t i = 0; i < t.size(); ++i) {
    push(t[i], v[i]);
    if (i + 1 < t.size() && ((v[i] > 0.0 && v[i + 1] < 0.0) || (v[i] < 0.0 && v[i + 1] > 0.0))) {
      const double crossing = t[i] + (t[i + 1] - t[i]) * v[i] / (v[i] - v[i + 1]);
      if (crossing > t[i] && crossing < t[i + 1]) push(crossing, 0.0);
    }
  }

  Signal plus(grid, std::move(pos));
  Signal minus(std::move(grid), std::move(neg));
  const double mp = l1_norm(plus);
  const double mm = l1_norm(minus);
  const double threshold = kZeroPartTolerance * (mp + mm + 1.0);
  return {SignalPart{std::move(plus), mp, mp < threshold},
          SignalPart{std::move(minus), mm, mm < threshold}};
}

// ---------------------------------------------------------------------------
// Warps

Warp Warp::affine(double omega, double tau, bool normalize) {
  return Warp{AffineWarp{omega, tau}, 1.0, normalize};
}

Warp Warp::power(double exponent, bool normalize) {
  return Warp{PowerWarp{exponent}, 1.0, normalize};
}

Warp Warp::tabulated(std::vector<double> grid, std::vector<double> values, bool normalize) {
  return Warp{TabulatedWarp{std::move(grid), std::move(values)}, 1.0, normalize};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nodal derivative of a tabulated function: central differences inside,
// one-sided at the ends.
std::vector<double> nodal_derivative(const TabulatedWarp& w) {
  const auto& x = w.grid;
  const auto& y = w.values;
  const std::size_t n = x.size();
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
  return d;
}

}  // namespace

double Warp::operator()(double t) const {
  return std::visit(
      overloaded{
          [t](const AffineWarp& a) { return a.omega * t + a.tau; },
          [t](const PowerWarp& p) { return std::pow(t, p.exponent); },
          [t](const TabulatedWarp& tab) {
            if (t < tab.grid.front() || t > tab.grid.back())
              throw ValidationError("time outside tabulated warp domain");
            return detail::interpolate_inside(tab.grid, tab.values, t);
          },
      },
      kind);
}

double Warp::derivative(double t) const {
  return std::visit(
      overloaded{
          [](const AffineWarp& a) { return a.omega; },
          [t](const PowerWarp& p) {
            if (p.exponent == 1.0) return 1.0;
            return p.exponent * std::pow(t, p.exponent - 1.0);
          },
          [t](const TabulatedWarp& tab) {
            if (t < tab.grid.front() || t > tab.grid.back())
              throw ValidationError("time outside tabulated warp domain");
            const auto d = nodal_derivative(tab);
            return detail::interpolate_inside(tab.grid, d, t);
          },
      },
      kind);
}

double Warp::inverse(double y) const {
  return std::visit(
      overloaded{
          [y](const AffineWarp& a) { return (y - a.tau) / a.omega; },
          [y](const PowerWarp& p) {
            if (y < 0.0) throw ValidationError("power warp inverse of a negative value");
            return std::pow(y, 1.0 / p.exponent);
          },
          [y](const TabulatedWarp& tab) {
            if (y < tab.values.front() || y > tab.values.back())
              throw ValidationError("value outside tabulated warp range");
            return detail::interpolate_inside(tab.values, tab.grid, y);
          },
      },
      kind);
}

std::pair<double, double> Warp::domain() const {
  return std::visit(
      overloaded{
          [](const AffineWarp&) { return std::pair{-kInf, kInf}; },
          [](const PowerWarp&) { return std::pair{0.0, kInf}; },
          [](const TabulatedWarp& tab) { return std::pair{tab.grid.front(), tab.grid.back()}; },
      },
      kind);
}

std::pair<double, double> Warp::range() const {
  return std::visit(
      overloaded{
          [](const AffineWarp&) { return std::pair{-kInf, kInf}; },
          [](const PowerWarp&) { return std::pair{0.0, kInf}; },
          [](const TabulatedWarp& tab) {
            return std::pair{tab.values.front(), tab.values.back()};
          },
      },
      kind);
}

void validate_warp(const Warp& w) {
  if (!(w.scale > 0.0) || !std::isfinite(w.scale))
    throw ValidationError("warp scale must be positive");
  std::visit(overloaded{
                 [](const AffineWarp& a) {
                   if (!(a.omega > 0.0) || !std::isfinite(a.omega) || !std::isfinite(a.tau))
                     throw ValidationError("affine warp needs omega > 0");
                 },
                 [](const PowerWarp& p) {
                   if (!(p.exponent > 0.0) || !std::isfinite(p.exponent))
                     throw ValidationError("power warp needs exponent > 0");
                 },
                 [](const TabulatedWarp& tab) {
                   if (tab.grid.size() != tab.values.size())
                     throw ValidationError("tabulated warp length mismatch");
                   validate_grid(tab.grid);
                   for (std::size_t i = 1; i < tab.values.size(); ++i)
                     if (!(tab.values[i] > tab.values[i - 1]))
                       fail_at("tabulated warp not strictly increasing", i);
                 },
             },
             w.kind);
}

Signal apply_warp(const Signal& s, const Warp& w, std::size_t resolution) {
  validate_warp(w);
  const auto [rlo, rhi] = w.range();
  if (s.front() < rlo || s.back() > rhi)
    throw ValidationError("signal domain not covered by the warp range");
  const double lo = w.inverse(s.front());
  const double hi = w.inverse(s.back());
  if (!(hi > lo)) throw ValidationError("warp is not increasing on the signal domain");

  const std::size_t n = resolution == 0 ? s.size() : resolution;
  std::vector<double> grid = linspace(lo, hi, n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = std::clamp(w(grid[i]), s.front(), s.back());
    double v = w.scale * s(g);
    // Zero values stay zero where g' is singular (power warps at t = 0).
    if (w.normalize && v != 0.0) v *= w.derivative(grid[i]);
    if (!std::isfinite(v)) fail_at("warped signal is unbounded", i);
    values[i] = v;
  }
  return Signal(std::move(grid), std::move(values));
}

Signal resample(const Signal& s, std::span<const double> grid) {
  validate_grid(grid);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = s(grid[i]);
  return Signal(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

Signal operator-(const Signal& s) { return scaled(s, -1.0); }

Signal scaled(const Signal& s, double factor) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (double& x : v) x *= factor;
  return Signal(std::vector<double>(s.grid().begin(), s.grid().end()), std::move(v));
}

double l1_distance(const Signal& a, const Signal& b) {
  const auto breaks = detail::merge_breakpoints(a.grid(), b.grid(),
                                                std::min(a.front(), b.front()),
                                                std::max(a.back(), b.back()));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double u = breaks[i];
    const double v = breaks[i + 1];
    const auto [a0, a1] = detail::cell_values(a.grid(), a.values(), u, v);
    const auto [b0, b1] = detail::cell_values(b.grid(), b.values(), u, v);
    total += detail::abs_linear_integral(a0 - b0, a1 - b1, v - u);
  }
  return total;
}

}  // namespace scdt
