#include "scdt/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "detail/format.hpp"
#include "detail/piecewise.hpp"
#include "detail/reconstruct.hpp"
#include "scdt/error.hpp"

namespace scdt {

// ---------------------------------------------------------------------------
// Reference

std::string ReferenceSpec::to_string() const {
  return kind + ":" + detail::shortest(lo) + ":" + detail::shortest(hi) + ":" + std::to_string(n);
}

ReferenceSpec ReferenceSpec::parse(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    fields.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  ReferenceSpec spec;
  if (fields.empty() || fields.size() > 4 || fields[0].empty())
    throw ValidationError("reference spec must look like kind:lo:hi:n, got '" + std::string(text) + "'");
  spec.kind = std::string(fields[0]);
  if (fields.size() >= 3) {
    const auto lo = detail::parse_double(fields[1]);
    const auto hi = detail::parse_double(fields[2]);
    if (!lo || !hi) throw ValidationError("bad reference domain in '" + std::string(text) + "'");
    spec.lo = *lo;
    spec.hi = *hi;
  } else if (fields.size() == 2) {
    throw ValidationError("reference spec needs both domain ends: '" + std::string(text) + "'");
  }
  if (fields.size() == 4) {
    const auto n = detail::parse_double(fields[3]);
    if (!n || *n < 2 || *n != std::floor(*n))
      throw ValidationError("bad reference resolution in '" + std::string(text) + "'");
    spec.n = static_cast<std::size_t>(*n);
  }
  return spec;
}

namespace {

std::vector<double> reference_values(const ReferenceSpec& spec, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  if (spec.kind == "uniform") {
    std::fill(v.begin(), v.end(), 1.0 / (spec.hi - spec.lo));
  } else if (spec.kind == "gaussian") {
    const double mid = 0.5 * (spec.lo + spec.hi);
    const double sigma = 0.25 * (spec.hi - spec.lo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = (grid[i] - mid) / sigma;
      v[i] = std::exp(-0.5 * z * z);
    }
  } else {
    throw ValidationError("unknown reference kind '" + spec.kind + "'");
  }
  return v;
}

Signal build_reference_density(const ReferenceSpec& spec) {
  if (!(spec.hi > spec.lo) || !std::isfinite(spec.lo) || !std::isfinite(spec.hi))
    throw ValidationError("reference domain must satisfy lo < hi");
  if (spec.n < 2) throw ValidationError("reference needs at least 2 points");
  auto grid = linspace(spec.lo, spec.hi, spec.n);
  auto values = reference_values(spec, grid);
  Signal raw(grid, values);
  const double mass = l1_norm(raw);
  for (double& x : values) x /= mass;
  return Signal(std::move(grid), std::move(values));
}

}  // namespace

Reference::Reference(const ReferenceSpec& spec)
    : spec_(spec),
      label_(spec.to_string()),
      density_(build_reference_density(spec)),
      cdf_(scdt::cdf(density_)) {
  const auto x = density_.grid();
  const auto d = density_.values();
  const std::size_t n = x.size();
  weights_.resize(n);
  sqrt_weights_.resize(n);
  cell_width_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i] - x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] - x[i] : 0.0;
    weights_[i] = 0.5 * (left + right) * d[i];
    sqrt_weights_[i] = std::sqrt(weights_[i]);
    if (i + 1 < n) cell_width_ = std::min(cell_width_, right);
  }
}

ReferencePtr make_reference(const ReferenceSpec& spec) {
  return std::make_shared<const Reference>(spec);
}

// ---------------------------------------------------------------------------
// Maps

double TransportMap::monotonicity_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) margin = std::min(margin, values[i] - values[i - 1]);
  return margin;
}

Cdf cdf(const Signal& s) {
  const auto t = s.grid();
  const auto v = s.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0.0) {
      std::ostringstream msg;
      msg << "cdf needs a nonnegative signal (negative value at index " << i << ")";
      throw ValidationError(msg.str());
    }
  Cdf F{std::vector<double>(t.begin(), t.end()), std::vector<double>(t.size(), 0.0)};
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    acc += 0.5 * (v[i - 1] + v[i]) * (t[i] - t[i - 1]);
    F.values[i] = acc;
  }
  if (!(acc > 0.0)) throw ValidationError("empty distribution");
  for (double& x : F.values) x /= acc;
  F.values.front() = 0.0;
  F.values.back() = 1.0;
  return F;
}

namespace {

// Quantile with the search restricted to indices >= hint. Successive calls
// with nondecreasing u may reuse the updated hint.
double quantile_from(const Cdf& F, double u, std::size_t& hint) {
  const auto& v = F.values;
  const auto& g = F.grid;
  if (u == 0.0) {
    const auto it = std::upper_bound(v.begin(), v.end(), 0.0);
    const std::size_t k = static_cast<std::size_t>(it - v.begin()) - 1;
    hint = k;
    return g[k];
  }
  const auto first = v.begin() + static_cast<std::ptrdiff_t>(std::min(hint, v.size() - 1));
  const auto it = std::lower_bound(first, v.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - v.begin());
  hint = j;
  if (v[j] == u) return g[j];
  const double w = (u - v[j - 1]) / (v[j] - v[j - 1]);
  return g[j - 1] + w * (g[j] - g[j - 1]);
}

}  // namespace

double quantile(const Cdf& F, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    std::ostringstream msg;
    msg << "quantile level " << u << " outside [0, 1]";
    throw RangeError(msg.str());
  }
  std::size_t hint = 0;
  return quantile_from(F, u, hint);
}

TransportMap cdt_forward(const Signal& s, const Reference& ref) {
  const Cdf F = cdf(s);
  const auto& u = ref.cdf().values;
  TransportMap map{std::vector<double>(ref.grid().begin(), ref.grid().end()),
                   std::vector<double>(u.size())};
  std::size_t hint = 0;
  for (std::size_t i = 0; i < u.size(); ++i) map.values[i] = quantile_from(F, u[i], hint);
  if (!map.is_monotone()) throw std::logic_error("cdt_forward produced a decreasing map");
  return map;
}

// ---------------------------------------------------------------------------
// Pushforward

namespace {

constexpr double kJumpFactor = 4.0;
constexpr std::size_t kJumpWindow = 3;

// Nondecreasing tabulated map viewed as piecewise linear between reference
// nodes; each cell carries the reference mass F0[i+1] - F0[i].
struct MapModel {
  std::vector<double> y;
  std::span<const double> F0;
  std::vector<char> jump;
};

MapModel build_model(std::vector<double> y, const Reference& ref) {
  MapModel m{std::move(y), ref.cdf().values, {}};
  const std::size_t cells = m.y.size() - 1;
  std::vector<double> slowness(cells);
  for (std::size_t i = 0; i < cells; ++i)
    slowness[i] = (m.y[i + 1] - m.y[i]) / (m.F0[i + 1] - m.F0[i]);

  m.jump.assign(cells, 0);
  std::vector<double> window;
  for (std::size_t i = 0; i < cells; ++i) {
    if (!(m.y[i + 1] > m.y[i])) continue;
    window.clear();
    const std::size_t lo = i >= kJumpWindow ? i - kJumpWindow : 0;
    const std::size_t hi = std::min(cells - 1, i + kJumpWindow);
    for (std::size_t k = lo; k <= hi; ++k)
      if (k != i) window.push_back(slowness[k]);
    if (window.empty()) continue;
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    if (slowness[i] > kJumpFactor * *mid) m.jump[i] = 1;
  }
  return m;
}

bool is_degenerate(std::span<const double> y) {
  const double lo = y.front();
  const double hi = y.back();
  return !(hi - lo > 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)}));
}

// Evaluates the pushforward CDF at nondecreasing query points.
class PushforwardCdf {
 public:
  explicit PushforwardCdf(const MapModel& m) : m_(m) {}

  double operator()(double q) {
    const auto& y = m_.y;
    if (q <= y.front()) return 0.0;
    if (q >= y.back()) return 1.0;
    while (cursor_ + 1 < y.size() && y[cursor_ + 1] < q) ++cursor_;
    const std::size_t c = cursor_;  // y[c] < q <= y[c + 1]
    const double dm = m_.F0[c + 1] - m_.F0[c];
    if (m_.jump[c]) return m_.F0[c] + 0.5 * dm;
    const double w = (q - y[c]) / (y[c + 1] - y[c]);
    return m_.F0[c] + w * dm;
  }

 private:
  const MapModel& m_;
  std::size_t cursor_ = 0;
};

Signal pushforward_model(const MapModel& m, std::size_t n) {
  if (n < 2) throw ValidationError("pushforward needs an output resolution of at least 2");
  const double lo = m.y.front();
  const double hi = m.y.back();
  std::vector<double> grid = linspace(lo, hi, n);
  const double h = (hi - lo) / static_cast<double>(n - 1);

  PushforwardCdf F(m);
  std::vector<double> half(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) half[j] = F(lo + (static_cast<double>(j) + 0.5) * h);

  std::vector<double> density(n);
  density[0] = half[0] / (0.5 * h);
  density[n - 1] = (1.0 - half[n - 2]) / (0.5 * h);
  for (std::size_t j = 1; j + 1 < n; ++j) density[j] = (half[j] - half[j - 1]) / h;
  return Signal(std::move(grid), std::move(density));
}

void check_map_grid(const TransportMap& T, const Reference& ref) {
  if (T.values.size() != ref.size())
    throw ValidationError("transport map is not sampled on the reference grid");
}

Signal unit_bump(double center, double half_width) {
  return Signal({center - half_width, center, center + half_width}, {0.0, 1.0 / half_width, 0.0});
}

double weighted_mean(std::span<const double> values, const Reference& ref) {
  double acc = 0.0;
  const auto w = ref.weights();
  for (std::size_t i = 0; i < values.size(); ++i) acc += w[i] * values[i];
  return acc / std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

Signal pushforward(const TransportMap& T, const Reference& ref, std::size_t out_resolution) {
  check_map_grid(T, ref);
  if (!T.is_monotone()) throw ValidationError("pushforward needs a nondecreasing map");
  std::vector<double> y = T.values;
  detail::make_nondecreasing(y);
  if (is_degenerate(y)) throw ValidationError("atomic pushforward unsupported");
  return pushforward_model(build_model(std::move(y), ref),
                           out_resolution == 0 ? ref.size() : out_resolution);
}

Signal pushforward_relaxed(const TransportMap& T, const Reference& ref,
                           std::size_t out_resolution) {
  check_map_grid(T, ref);
  std::vector<double> y = T.values;
  if (T.is_monotone())
    detail::make_nondecreasing(y);
  else
    std::sort(y.begin(), y.end());
  if (is_degenerate(y)) return unit_bump(weighted_mean(y, ref), ref.cell_width());
  return pushforward_model(build_model(std::move(y), ref),
                           out_resolution == 0 ? ref.size() : out_resolution);
}

// ---------------------------------------------------------------------------
// SCDT

Scdt scdt_forward(const Signal& s, ReferencePtr ref) {
  if (!ref) throw ValidationError("scdt_forward needs a reference");
  auto [plus, minus] = jordan_decompose(s);
  Scdt t;
  if (!plus.negligible) {
    t.f_plus = cdt_forward(plus.signal, *ref);
    t.a = plus.mass;
  }
  if (!minus.negligible) {
    t.f_minus = cdt_forward(minus.signal, *ref);
    t.b = minus.mass;
  }
  t.reference = std::move(ref);
  return t;
}

namespace {

void check_tuple(const Scdt& t) {
  if (!t.reference) throw ValidationError("SCDT tuple has no reference");
  auto part = [&](const std::optional<TransportMap>& f, double mass, const char* name) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
      throw ValidationError(std::string("negative or non-finite mass for ") + name);
    if (f.has_value() != (mass > 0.0))
      throw ValidationError(std::string("malformed zero pairing for ") + name);
    if (f) check_map_grid(*f, *t.reference);
  };
  part(t.f_plus, t.a, "positive part");
  part(t.f_minus, t.b, "negative part");
}

// Sorted nodes of a map; non-monotone maps are rearranged.
std::vector<double> sorted_nodes(const TransportMap& T) {
  std::vector<double> y = T.values;
  if (T.is_monotone())
    detail::make_nondecreasing(y);
  else
    std::sort(y.begin(), y.end());
  return y;
}

Signal to_resolution(Signal s, std::size_t out_resolution) {
  if (out_resolution == 0) return s;
  if (out_resolution < 2) throw ValidationError("output resolution must be at least 2");
  return resample(s, linspace(s.front(), s.back(), out_resolution));
}

// Profiles of both parts; a degenerate map becomes a bump when `relaxed`.
std::pair<std::optional<detail::Profile>, std::optional<detail::Profile>> part_profiles(
    const std::optional<std::vector<double>>& plus, double a,
    const std::optional<std::vector<double>>& minus, double b, const Reference& ref, bool relaxed) {
  std::optional<detail::PartNodes> p;
  std::optional<detail::PartNodes> m;
  std::optional<detail::Profile> pp;
  std::optional<detail::Profile> mp;
  auto degenerate_profile = [&](const std::vector<double>& y, double mass) {
    if (!relaxed) throw ValidationError("atomic pushforward unsupported");
    return detail::bump(weighted_mean(y, ref), ref.cell_width(), mass);
  };
  if (plus) {
    if (is_degenerate(*plus))
      pp = degenerate_profile(*plus, a);
    else
      p = detail::PartNodes{*plus, a};
  }
  if (minus) {
    if (is_degenerate(*minus))
      mp = degenerate_profile(*minus, b);
    else
      m = detail::PartNodes{*minus, b};
  }
  if (p) pp = detail::reconstruct(*p, m ? &*m : nullptr, ref);
  if (m) mp = detail::reconstruct(*m, p ? &*p : nullptr, ref);
  return {std::move(pp), std::move(mp)};
}

}  // namespace

Signal scdt_inverse(const Scdt& t, std::size_t out_resolution) {
  check_tuple(t);
  const Reference& ref = *t.reference;
  if (t.is_zero()) return Signal::zeros(std::vector<double>(ref.grid().begin(), ref.grid().end()));
  std::optional<std::vector<double>> plus;
  std::optional<std::vector<double>> minus;
  for (const auto* f : {&t.f_plus, &t.f_minus})
    if (*f && !(*f)->is_monotone()) throw ValidationError("inverse needs nondecreasing maps");
  if (t.f_plus) plus = sorted_nodes(*t.f_plus);
  if (t.f_minus) minus = sorted_nodes(*t.f_minus);
  auto [pp, mp] = part_profiles(plus, t.a, minus, t.b, ref, false);
  return to_resolution(detail::combine(pp, mp), out_resolution);
}

RelaxedInverse scdt_inverse_relaxed(const Scdt& t, std::size_t out_resolution) {
  if (!t.reference) throw ValidationError("SCDT tuple has no reference");
  const Reference& ref = *t.reference;
  bool clamped = false;
  double rearrangement[2] = {0.0, 0.0};
  std::optional<std::vector<double>> nodes[2];
  const std::optional<TransportMap>* maps[2] = {&t.f_plus, &t.f_minus};
  const double masses[2] = {t.a, t.b};
  for (int k = 0; k < 2; ++k) {
    if (masses[k] < 0.0) clamped = true;
    if (!(masses[k] > 0.0)) continue;
    TransportMap map = *maps[k] ? **maps[k]
                                : TransportMap{std::vector<double>(ref.grid().begin(), ref.grid().end()),
                                               std::vector<double>(ref.size(), 0.0)};
    check_map_grid(map, ref);
    nodes[k] = sorted_nodes(map);
    if (!map.is_monotone()) {
      TransportMap sorted{map.grid, *nodes[k]};
      rearrangement[k] = l2_distance(map, sorted, ref);
    }
  }
  if (!nodes[0] && !nodes[1])
    return RelaxedInverse{Signal::zeros(std::vector<double>(ref.grid().begin(), ref.grid().end())),
                          0.0, 0.0, clamped};
  auto [pp, mp] = part_profiles(nodes[0], t.a, nodes[1], t.b, ref, true);
  return RelaxedInverse{to_resolution(detail::combine(pp, mp), out_resolution), rearrangement[0],
                        rearrangement[1], clamped};
}

Scdt compose_warp(const Scdt& t, const Warp& w) {
  validate_warp(w);
  if (!w.normalize)
    throw ValidationError("composition property needs a normalized warp (g' s o g)");
  Scdt out = t;
  auto apply = [&](std::optional<TransportMap>& f) {
    if (!f) return;
    for (double& v : f->values) v = w.inverse(v);
  };
  apply(out.f_plus);
  apply(out.f_minus);
  out.a *= w.scale;
  out.b *= w.scale;
  return out;
}

// ---------------------------------------------------------------------------
// Validity

ValidityReport validate_scdt(const Scdt& t, double tol) {
  ValidityReport r;
  r.tolerance = tol;
  r.pairing_ok = t.reference != nullptr && t.a >= 0.0 && t.b >= 0.0 &&
                 t.f_plus.has_value() == (t.a > 0.0) && t.f_minus.has_value() == (t.b > 0.0);
  if (t.f_plus) r.plus_margin = t.f_plus->monotonicity_margin();
  if (t.f_minus) r.minus_margin = t.f_minus->monotonicity_margin();
  r.monotone = r.plus_margin >= -1e-9 && r.minus_margin >= -1e-9;
  if (r.pairing_ok && t.f_plus && t.f_minus) {
    const Reference& ref = *t.reference;
    r.overlap_checked = true;
    auto [pp, mp] = part_profiles(sorted_nodes(*t.f_plus), t.a, sorted_nodes(*t.f_minus), t.b, ref, true);
    r.overlap = detail::overlap(*pp, *mp);
  }
  r.in_embedding_space = r.pairing_ok && r.monotone &&
                         (!r.overlap_checked || r.overlap <= tol * std::min(t.a, t.b));
  return r;
}

// ---------------------------------------------------------------------------
// Embedding coordinates

EmbeddingVector flatten(const Scdt& t, const Reference& ref) {
  if (!t.reference || t.reference->label() != ref.label())
    throw ValidationError("SCDT tuple was computed with a different reference");
  const std::size_t n = ref.size();
  const auto sw = ref.sqrt_weights();
  EmbeddingVector v{std::vector<double>(2 * n + 2, 0.0), ref.label(), n};
  auto block = [&](const std::optional<TransportMap>& f, std::size_t offset) {
    if (!f) return;
    check_map_grid(*f, ref);
    for (std::size_t i = 0; i < n; ++i) v.coords[offset + i] = f->values[i] * sw[i];
  };
  block(t.f_plus, 0);
  v.coords[n] = t.a;
  block(t.f_minus, n + 1);
  v.coords[2 * n + 1] = t.b;
  return v;
}

Scdt unflatten(const EmbeddingVector& v, ReferencePtr ref) {
  if (!ref || v.reference != ref->label() || v.grid_length != ref->size() ||
      v.coords.size() != 2 * ref->size() + 2)
    throw ValidationError("embedding vector does not match the reference");
  const std::size_t n = ref->size();
  const auto sw = ref->sqrt_weights();
  auto block = [&](std::size_t offset, double mass) -> std::optional<TransportMap> {
    const auto first = v.coords.begin() + static_cast<std::ptrdiff_t>(offset);
    const bool zero = mass == 0.0 && std::all_of(first, first + static_cast<std::ptrdiff_t>(n),
                                                  [](double x) { return x == 0.0; });
    if (zero) return std::nullopt;
    TransportMap f{std::vector<double>(ref->grid().begin(), ref->grid().end()),
                   std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) f.values[i] = v.coords[offset + i] / sw[i];
    return f;
  };
  Scdt t;
  t.a = v.coords[n];
  t.b = v.coords[2 * n + 1];
  t.f_plus = block(0, t.a);
  t.f_minus = block(n + 1, t.b);
  t.reference = std::move(ref);
  return t;
}

double l2_distance(const std::optional<TransportMap>& f, const std::optional<TransportMap>& g,
                   const Reference& ref) {
  const auto w = ref.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = (f ? f->values[i] : 0.0) - (g ? g->values[i] : 0.0);
    acc += w[i] * d * d;
  }
  return std::sqrt(acc);
}

}  // namespace scdt
