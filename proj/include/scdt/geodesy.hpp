#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scdt/signal.hpp"
#include "scdt/transform.hpp"

namespace scdt {

/// Wasserstein-2 distance between the normalized versions of two nonnegative
/// signals, ||s1* - s2*||_{L2(s0)}. Throws ValidationError for zero mass.
double w2(const Signal& s1, const Signal& s2, const Reference& ref);

/// Per-component contributions to the generalized Wasserstein distance.
struct DistanceBreakdown {
  double plus_map = 0.0;    ///< ||f1+ - f2+||_{L2(s0)}
  double plus_mass = 0.0;   ///< |a1 - a2|
  double minus_map = 0.0;   ///< ||f1- - f2-||_{L2(s0)}
  double minus_mass = 0.0;  ///< |b1 - b2|
  double total = 0.0;
};

/// Distance between two tuples in (L2(s0) x R)^2. Missing maps count as the
/// zero function. Throws ValidationError when the references differ.
double scdt_distance(const Scdt& t1, const Scdt& t2);
DistanceBreakdown scdt_distance_breakdown(const Scdt& t1, const Scdt& t2);

/// Generalized Wasserstein-2 distance D_S, computed in embedding coordinates.
double ds_distance(const Signal& s1, const Signal& s2, const ReferencePtr& ref);

/// D_S from part-wise W2 distances of the normalized Jordan parts and their
/// mass differences. Only defined when all four parts are nonzero; throws
/// ValidationError otherwise.
double ds_distance_partwise(const Signal& s1, const Signal& s2, const ReferencePtr& ref);

/// Componentwise (1 - alpha) t0 + alpha t1 with the zero-part convention.
Scdt interpolate_tuples(const Scdt& t0, const Scdt& t1, double alpha);

/// Point p_alpha of the transport path between s and s_tilde: per sign part,
/// masses and maps are convex-combined and pushed forward, then subtracted.
/// p_0 = s and p_1 = s_tilde exactly. Throws RangeError for alpha outside
/// [0, 1].
Signal path_point(const Signal& s, const Signal& s_tilde, double alpha, const ReferencePtr& ref,
                  std::size_t out_resolution = 0);

/// Same, starting from precomputed transforms (alpha strictly inside (0, 1)
/// is where this differs from simply returning an endpoint).
Signal path_point(const Scdt& t, const Scdt& t_tilde, double alpha,
                  std::size_t out_resolution = 0);

struct PathPointSet {
  std::vector<double> alphas;
  std::vector<Signal> points;
  std::vector<double> segment_distances;  ///< D_i between consecutive points
  double endpoint_distance = 0.0;         ///< D between the first and last point

  double total_length() const;
  /// sum D_i / D; 1 when both vanish, +inf when only D vanishes.
  double gap_ratio() const;
};

std::vector<double> default_alphas();

/// Throws ValidationError unless alphas start at 0, end at 1 and increase.
void validate_alphas(const std::vector<double>& alphas);

PathPointSet geodesic_path(const Signal& s, const Signal& s_tilde,
                           const std::vector<double>& alphas, const ReferencePtr& ref,
                           std::size_t out_resolution = 0);

struct ConstantSpeedReport {
  double max_deviation = 0.0;
  double distance = 0.0;
  /// D_S(s, s_tilde) = 0; the deviation is not defined.
  bool degenerate_zero = false;
};

/// Every (alpha, beta) pair of a k x k grid on [0, 1].
std::vector<std::pair<double, double>> alpha_beta_grid(std::size_t k);

/// max |D(p_alpha, p_beta) - |alpha - beta| D(s, s_tilde)| / D(s, s_tilde).
ConstantSpeedReport constant_speed_check(const Signal& s, const Signal& s_tilde,
                                         const ReferencePtr& ref,
                                         const std::vector<std::pair<double, double>>& pairs);

struct MidpointDiagnostic {
  ValidityReport report;
  bool identical = false;  ///< the endpoints have identical transforms

  /// True when the midpoint tuple leaves the SCDT image, which rules out any
  /// geodesic between the endpoints.
  bool no_geodesic() const { return !report.in_embedding_space; }
  std::string verdict() const;
};

/// Checks whether the midpoint of the straight segment between the two
/// transforms is itself a transform. Passing is necessary, not sufficient,
/// for a geodesic to exist.
MidpointDiagnostic geodesic_midpoint_diagnostic(const Signal& s, const Signal& s_tilde,
                                                const ReferencePtr& ref,
                                                double tol = kDefaultOverlapTolerance);

}  // namespace scdt
