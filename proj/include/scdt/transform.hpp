#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scdt/signal.hpp"

namespace scdt {

/// Cumulative distribution of a nonnegative signal, tabulated on its grid.
struct Cdf {
  std::vector<double> grid;
  std::vector<double> values;  ///< 0 at the first point, 1 at the last
};

/// Parameters that fully determine a reference density.
///
/// Textual form is `kind:lo:hi:n`, e.g. `uniform:0:1:1000`. Supported kinds
/// are `uniform` and `gaussian` (mean at the midpoint, standard deviation a
/// quarter of the domain width, truncated to the domain). Trailing fields
/// may be dropped (`uniform`, `uniform:0:1`) and keep their defaults; a
/// lone `lo` is an error.
struct ReferenceSpec {
  std::string kind = "uniform";
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 1000;

  std::string to_string() const;
  static ReferenceSpec parse(std::string_view text);
  bool operator==(const ReferenceSpec&) const = default;
};

/// Strictly positive, L1-normalized reference density s0 with its CDF and
/// the quadrature weights of L2(s0).
class Reference {
 public:
  explicit Reference(const ReferenceSpec& spec = {});

  const ReferenceSpec& spec() const { return spec_; }
  /// Canonical identity string, equal to spec().to_string().
  const std::string& label() const { return label_; }
  const Signal& density() const { return density_; }
  const Cdf& cdf() const { return cdf_; }
  std::span<const double> grid() const { return density_.grid(); }
  std::size_t size() const { return density_.size(); }
  /// Trapezoid weights times density: sum_i weight_i f(x_i)^2 = ||f||^2_{L2(s0)}.
  std::span<const double> weights() const { return weights_; }
  std::span<const double> sqrt_weights() const { return sqrt_weights_; }
  /// Smallest grid spacing of the reference.
  double cell_width() const { return cell_width_; }

 private:
  ReferenceSpec spec_;
  std::string label_;
  Signal density_;
  Cdf cdf_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
  double cell_width_ = 0.0;
};

using ReferencePtr = std::shared_ptr<const Reference>;

ReferencePtr make_reference(const ReferenceSpec& spec = {});

/// A map from the reference domain, sampled on the reference grid.
struct TransportMap {
  std::vector<double> grid;
  std::vector<double> values;

  /// min_i (values[i+1] - values[i]); +inf for a single sample.
  double monotonicity_margin() const;
  bool is_monotone(double tol = 1e-9) const { return monotonicity_margin() >= -tol; }
};

/// Signed cumulative distribution transform (f+, a, f-, b). A missing map is
/// the zero part; its mass must then be 0.
struct Scdt {
  ReferencePtr reference;
  std::optional<TransportMap> f_plus;
  double a = 0.0;
  std::optional<TransportMap> f_minus;
  double b = 0.0;

  bool is_zero() const { return !f_plus && !f_minus; }
};

/// Flattened SCDT: [f+ * sqrt(w), a, f- * sqrt(w), b] so that Euclidean
/// distances equal distances in (L2(s0) x R)^2.
struct EmbeddingVector {
  std::vector<double> coords;
  std::string reference;
  std::size_t grid_length = 0;
};

/// Throws ValidationError("empty distribution") for zero mass and for
/// negative values.
Cdf cdf(const Signal& s);

/// Generalized inverse inf{t : F(t) >= u} with linear interpolation on
/// increasing segments. u = 0 maps to the start of the support (the last
/// point where F is still 0). Throws RangeError outside [0, 1].
double quantile(const Cdf& F, double u);

/// CDT s* = F_s^dagger o F_s0 of the normalized nonnegative signal s.
TransportMap cdt_forward(const Signal& s, const Reference& ref);

/// Density of T#s0 on a uniform grid over [min T, max T].
///
/// Map cells whose image is much longer than their neighbours' are treated
/// as jumps of the map, so no mass is spread over the gap they bridge.
/// Throws ValidationError for non-monotone maps and for constant maps
/// ("atomic pushforward unsupported"). `out_resolution` = 0 uses ref.size().
Signal pushforward(const TransportMap& T, const Reference& ref, std::size_t out_resolution = 0);

/// Like pushforward(), but sorts a non-monotone map first and replaces a
/// constant map by a unit-mass triangular bump one reference cell wide.
Signal pushforward_relaxed(const TransportMap& T, const Reference& ref,
                           std::size_t out_resolution = 0);

Scdt scdt_forward(const Signal& s, ReferencePtr ref);

/// a f+#s0 - b f-#s0 as a piecewise-linear signal on the union of both
/// parts' breakpoints. Every image cell [f(x_i), f(x_i+1)] carries exactly
/// its reference mass, so scdt_forward of the result reproduces the map
/// values of a tuple from the SCDT image. Cells bridging a gap of the
/// support keep their mass next to their ends. `out_resolution` > 0
/// resamples the result onto that many uniform points. Throws
/// ValidationError for malformed tuples (mass/map pairing, negative masses,
/// non-monotone maps) and constant maps.
Signal scdt_inverse(const Scdt& t, std::size_t out_resolution = 0);

/// Result of inverting a tuple that may lie outside the SCDT image.
struct RelaxedInverse {
  Signal signal;
  /// ||f - sort(f)||_{L2(s0)} per part; 0 for monotone maps.
  double rearrangement_plus = 0.0;
  double rearrangement_minus = 0.0;
  /// A negative mass was clamped to zero and its part dropped.
  bool mass_clamped = false;
};

/// Inverse that never rejects: negative masses are clamped to 0, maps are
/// monotonically rearranged, constant maps fall back to a triangle one
/// reference cell wide.
RelaxedInverse scdt_inverse_relaxed(const Scdt& t, std::size_t out_resolution = 0);

/// Transform of g' s o g from the transform of s: each map becomes g^{-1} o f.
Scdt compose_warp(const Scdt& t, const Warp& w);

struct ValidityReport {
  double plus_margin = std::numeric_limits<double>::infinity();
  double minus_margin = std::numeric_limits<double>::infinity();
  bool monotone = true;
  bool pairing_ok = true;
  bool overlap_checked = false;
  double overlap = 0.0;
  double tolerance = 0.0;
  bool in_embedding_space = true;
};

inline constexpr double kDefaultOverlapTolerance = 1e-6;

/// Membership test for the SCDT image: monotone maps, consistent zero pairing
/// and overlap = integral of min(a f+#s0, b f-#s0) <= tol * min(a, b), with
/// both pushforwards reconstructed as in scdt_inverse().
ValidityReport validate_scdt(const Scdt& t, double tol = kDefaultOverlapTolerance);

EmbeddingVector flatten(const Scdt& t, const Reference& ref);

/// Inverse of flatten(). A block is the zero part when its mass and all its
/// map coordinates are exactly 0.
Scdt unflatten(const EmbeddingVector& v, ReferencePtr ref);

/// ||f - g||_{L2(s0)}; a missing map is the zero function.
double l2_distance(const std::optional<TransportMap>& f, const std::optional<TransportMap>& g,
                   const Reference& ref);

}  // namespace scdt
