#include "scdt/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "scdt/error.hpp"

namespace scdt {

double w2(const Signal& s1, const Signal& s2, const Reference& ref) {
  const TransportMap f1 = cdt_forward(s1, ref);
  const TransportMap f2 = cdt_forward(s2, ref);
  return l2_distance(f1, f2, ref);
}

DistanceBreakdown scdt_distance_breakdown(const Scdt& t1, const Scdt& t2) {
  if (!t1.reference || !t2.reference || t1.reference->label() != t2.reference->label())
    throw ValidationError("SCDT tuples use different references");
  const Reference& ref = *t1.reference;
  DistanceBreakdown d;
  d.plus_map = l2_distance(t1.f_plus, t2.f_plus, ref);
  d.minus_map = l2_distance(t1.f_minus, t2.f_minus, ref);
  d.plus_mass = std::abs(t1.a - t2.a);
  d.minus_mass = std::abs(t1.b - t2.b);
  d.total = std::sqrt(d.plus_map * d.plus_map + d.plus_mass * d.plus_mass +
                      d.minus_map * d.minus_map + d.minus_mass * d.minus_mass);
  return d;
}

double scdt_distance(const Scdt& t1, const Scdt& t2) { return scdt_distance_breakdown(t1, t2).total; }

double ds_distance(const Signal& s1, const Signal& s2, const ReferencePtr& ref) {
  return scdt_distance(scdt_forward(s1, ref), scdt_forward(s2, ref));
}

double ds_distance_partwise(const Signal& s1, const Signal& s2, const ReferencePtr& ref) {
  const auto [p1, m1] = jordan_decompose(s1);
  const auto [p2, m2] = jordan_decompose(s2);
  if (p1.negligible || m1.negligible || p2.negligible || m2.negligible)
    throw ValidationError("part-wise distance needs nonzero positive and negative parts");
  const double wp = w2(p1.signal, p2.signal, *ref);
  const double wm = w2(m1.signal, m2.signal, *ref);
  const double da = p1.mass - p2.mass;
  const double db = m1.mass - m2.mass;
  return std::sqrt(wp * wp + wm * wm + da * da + db * db);
}

Scdt interpolate_tuples(const Scdt& t0, const Scdt& t1, double alpha) {
  if (!t0.reference || !t1.reference || t0.reference->label() != t1.reference->label())
    throw ValidationError("SCDT tuples use different references");
  const Reference& ref = *t0.reference;
  auto part = [&](const std::optional<TransportMap>& f0, double m0,
                  const std::optional<TransportMap>& f1, double m1,
                  double& mass) -> std::optional<TransportMap> {
    mass = (1.0 - alpha) * m0 + alpha * m1;
    if (!(mass > 0.0)) {
      mass = 0.0;
      return std::nullopt;
    }
    TransportMap f{std::vector<double>(ref.grid().begin(), ref.grid().end()),
                   std::vector<double>(ref.size(), 0.0)};
    for (std::size_t i = 0; i < ref.size(); ++i)
      f.values[i] = (1.0 - alpha) * (f0 ? f0->values[i] : 0.0) + alpha * (f1 ? f1->values[i] : 0.0);
    return f;
  };
  Scdt out;
  out.reference = t0.reference;
  out.f_plus = part(t0.f_plus, t0.a, t1.f_plus, t1.a, out.a);
  out.f_minus = part(t0.f_minus, t0.b, t1.f_minus, t1.b, out.b);
  return out;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "path parameter " << alpha << " outside [0, 1]";
    throw RangeError(msg.str());
  }
}

}  // namespace

Signal path_point(const Scdt& t, const Scdt& t_tilde, double alpha, std::size_t out_resolution) {
  check_alpha(alpha);
  return scdt_inverse_relaxed(interpolate_tuples(t, t_tilde, alpha), out_resolution).signal;
}

Signal path_point(const Signal& s, const Signal& s_tilde, double alpha, const ReferencePtr& ref,
                  std::size_t out_resolution) {
  check_alpha(alpha);
  if (alpha == 0.0) return s;
  if (alpha == 1.0) return s_tilde;
  return path_point(scdt_forward(s, ref), scdt_forward(s_tilde, ref), alpha, out_resolution);
}

double PathPointSet::total_length() const {
  double total = 0.0;
  for (double d : segment_distances) total += d;
  return total;
}

double PathPointSet::gap_ratio() const {
  const double total = total_length();
  if (endpoint_distance == 0.0)
    return total == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return total / endpoint_distance;
}

std::vector<double> default_alphas() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

void validate_alphas(const std::vector<double>& alphas) {
  if (alphas.size() < 2) throw ValidationError("alpha grid needs at least 2 values");
  if (alphas.front() != 0.0 || alphas.back() != 1.0)
    throw ValidationError("alpha grid must start at 0 and end at 1");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1])) {
      std::ostringstream msg;
      msg << "alpha grid not increasing at index " << i;
      throw ValidationError(msg.str());
    }
}

PathPointSet geodesic_path(const Signal& s, const Signal& s_tilde,
                           const std::vector<double>& alphas, const ReferencePtr& ref,
                           std::size_t out_resolution) {
  validate_alphas(alphas);
  const Scdt t = scdt_forward(s, ref);
  const Scdt tt = scdt_forward(s_tilde, ref);

  PathPointSet path;
  path.alphas = alphas;
  std::vector<Scdt> transforms;
  transforms.reserve(alphas.size());
  for (double alpha : alphas) {
    if (alpha == 0.0) {
      path.points.push_back(s);
      transforms.push_back(t);
    } else if (alpha == 1.0) {
      path.points.push_back(s_tilde);
      transforms.push_back(tt);
    } else {
      path.points.push_back(path_point(t, tt, alpha, out_resolution));
      transforms.push_back(scdt_forward(path.points.back(), ref));
    }
  }
  for (std::size_t i = 1; i < transforms.size(); ++i)
    path.segment_distances.push_back(scdt_distance(transforms[i - 1], transforms[i]));
  path.endpoint_distance = scdt_distance(transforms.front(), transforms.back());
  return path;
}

std::vector<std::pair<double, double>> alpha_beta_grid(std::size_t k) {
  const auto a = linspace(0.0, 1.0, k);
  std::vector<std::pair<double, double>> pairs;
  for (double x : a)
    for (double y : a) pairs.emplace_back(x, y);
  return pairs;
}

ConstantSpeedReport constant_speed_check(const Signal& s, const Signal& s_tilde,
                                         const ReferencePtr& ref,
                                         const std::vector<std::pair<double, double>>& pairs) {
  const Scdt t = scdt_forward(s, ref);
  const Scdt tt = scdt_forward(s_tilde, ref);
  ConstantSpeedReport report;
  report.distance = scdt_distance(t, tt);
  if (report.distance == 0.0) {
    report.degenerate_zero = true;
    return report;
  }

  std::map<double, Scdt> cache;
  auto transform_at = [&](double alpha) -> const Scdt& {
    check_alpha(alpha);
    auto it = cache.find(alpha);
    if (it != cache.end()) return it->second;
    Scdt value = alpha == 0.0   ? t
                 : alpha == 1.0 ? tt
                                : scdt_forward(path_point(t, tt, alpha), ref);
    return cache.emplace(alpha, std::move(value)).first->second;
  };

  for (const auto& [alpha, beta] : pairs) {
    if (alpha == beta) continue;
    const double d = scdt_distance(transform_at(alpha), transform_at(beta));
    const double expected = std::abs(alpha - beta) * report.distance;
    report.max_deviation = std::max(report.max_deviation, std::abs(d - expected) / report.distance);
  }
  return report;
}

std::string MidpointDiagnostic::verdict() const {
  if (identical) return "identical signals: the constant path is trivially a geodesic";
  if (no_geodesic()) return "no geodesic: midpoint leaves embedding space";
  return "candidate valid: midpoint lies in the embedding space";
}

MidpointDiagnostic geodesic_midpoint_diagnostic(const Signal& s, const Signal& s_tilde,
                                                const ReferencePtr& ref, double tol) {
  const Scdt t = scdt_forward(s, ref);
  const Scdt tt = scdt_forward(s_tilde, ref);
  MidpointDiagnostic diag;
  diag.identical = scdt_distance(t, tt) == 0.0;
  diag.report = validate_scdt(interpolate_tuples(t, tt, 0.5), tol);
  return diag;
}

}  // namespace scdt
