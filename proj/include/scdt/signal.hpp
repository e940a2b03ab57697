#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace scdt {

/// Real-valued signal sampled on a strictly increasing grid.
///
/// Between samples the signal is linear; outside [grid.front(), grid.back()]
/// it is zero. Instances are immutable once constructed.
class Signal {
 public:
  /// Throws ValidationError naming the offending index when the grid is not
  /// strictly increasing, an entry is not finite, the lengths differ or
  /// fewer than two samples are given.
  Signal(std::vector<double> grid, std::vector<double> values);

  static Signal zeros(std::vector<double> grid);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return grid_.size(); }
  double front() const { return grid_.front(); }
  double back() const { return grid_.back(); }

  /// Piecewise-linear evaluation; zero outside the grid.
  double operator()(double t) const;

  bool is_zero() const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

Signal make_signal(std::vector<double> grid, std::vector<double> values);

/// `n` equally spaced points from `lo` to `hi` inclusive, endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Throws ValidationError unless `grid` is strictly increasing, finite and has
/// at least two points.
void validate_grid(std::span<const double> grid);

/// Integral of |s| under the piecewise-linear interpretation. This is the
/// trapezoid rule over the grid, with cells that change sign split at their
/// zero crossing.
double l1_norm(const Signal& s);

/// A nonnegative part of a Jordan decomposition.
struct SignalPart {
  Signal signal;
  double mass = 0.0;
  /// Set when mass < 1e-12 * (total mass + 1); such a part is treated as
  /// identically zero downstream.
  bool negligible = true;
};

/// Splits s into (s+, s-) with s = s+ - s-.
///
/// Both parts live on the grid of s refined by the zero crossings of its
/// linear interpolant, so their supports only meet at isolated points.
std::pair<SignalPart, SignalPart> jordan_decompose(const Signal& s);

/// Relative threshold below which a Jordan part counts as zero.
inline constexpr double kZeroPartTolerance = 1e-12;

struct AffineWarp {
  double omega = 1.0;
  double tau = 0.0;
};

struct PowerWarp {
  double exponent = 1.0;
};

struct TabulatedWarp {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Strictly increasing time deformation g, applied as lambda * g' * s o g.
struct Warp {
  std::variant<AffineWarp, PowerWarp, TabulatedWarp> kind;
  double scale = 1.0;
  bool normalize = true;

  static Warp affine(double omega, double tau, bool normalize = true);
  static Warp power(double exponent, bool normalize = true);
  static Warp tabulated(std::vector<double> grid, std::vector<double> values,
                        bool normalize = true);

  double operator()(double t) const;
  double derivative(double t) const;
  double inverse(double y) const;

  /// Closed interval on which g is defined.
  std::pair<double, double> domain() const;
  /// Closed interval g(domain()).
  std::pair<double, double> range() const;
};

/// Throws ValidationError for omega <= 0, exponent <= 0, scale <= 0 or a
/// non-increasing table.
void validate_warp(const Warp& w);

/// Returns lambda * g'(t) * s(g(t)) (or lambda * s(g(t)) without
/// normalization) on a uniform grid over g^{-1}([s.front(), s.back()]).
/// `resolution` = 0 keeps the input grid length.
Signal apply_warp(const Signal& s, const Warp& w, std::size_t resolution = 0);

/// Piecewise-linear interpolation of s at the target grid, zero outside.
Signal resample(const Signal& s, std::span<const double> grid);

Signal operator-(const Signal& s);
Signal scaled(const Signal& s, double factor);

/// L1 distance between two signals evaluated on the union of their grids
/// (exact for the piecewise-linear interpretation up to crossing cells).
double l1_distance(const Signal& a, const Signal& b);

}  // namespace scdt
