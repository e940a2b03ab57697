#include "detail/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "detail/piecewise.hpp"
#include "scdt/error.hpp"

namespace scdt::detail {

namespace {

constexpr double kGapFactor = 4.0;
constexpr std::size_t kGapWindow = 3;
constexpr double kTailSliver = 1e-6;

// Image cells with strictly increasing nodes. Zero-width cells (atoms) are
// folded into their neighbours.
struct Cells {
  std::vector<double> y;
  std::vector<double> m;

  std::size_t count() const { return m.size(); }
  double width(std::size_t i) const { return y[i + 1] - y[i]; }
  double density(std::size_t i) const { return m[i] / width(i); }
};

Cells compress(const PartNodes& part, std::span<const double> F0) {
  Cells c;
  std::vector<double> atom;
  c.y.push_back(part.y.front());
  atom.push_back(0.0);
  for (std::size_t i = 0; i + 1 < part.y.size(); ++i) {
    const double dm = part.mass * (F0[i + 1] - F0[i]);
    if (part.y[i + 1] > c.y.back()) {
      c.y.push_back(part.y[i + 1]);
      c.m.push_back(dm);
      atom.push_back(0.0);
    } else {
      atom.back() += dm;
    }
  }
  if (c.m.empty()) throw ValidationError("atomic pushforward unsupported");
  const std::size_t last = c.count();
  for (std::size_t k = 0; k <= last; ++k) {
    if (atom[k] == 0.0) continue;
    if (k == 0) {
      c.m.front() += atom[k];
    } else if (k == last) {
      c.m.back() += atom[k];
    } else {
      c.m[k - 1] += 0.5 * atom[k];
      c.m[k] += 0.5 * atom[k];
    }
  }
  return c;
}

// A cell is a gap when it is much slower than its neighbours (a jump of the
// map) or when the other part is much denser inside it.
std::vector<char> classify(const Cells& c, const Cells* f) {
  const std::size_t n = c.count();
  std::vector<double> slowness(n);
  for (std::size_t i = 0; i < n; ++i) slowness[i] = c.width(i) / c.m[i];

  std::vector<char> gap(n, 0);
  std::vector<double> window;
  for (std::size_t i = 0; i < n; ++i) {
    window.clear();
    const std::size_t lo = i >= kGapWindow ? i - kGapWindow : 0;
    const std::size_t hi = std::min(n - 1, i + kGapWindow);
    for (std::size_t k = lo; k <= hi; ++k)
      if (k != i) window.push_back(slowness[k]);
    if (!window.empty()) {
      const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      if (slowness[i] > kGapFactor * *mid) gap[i] = 1;
    }
    if (gap[i] || f == nullptr) continue;

    const double a = c.y[i];
    const double b = c.y[i + 1];
    const auto first = std::lower_bound(f->y.begin(), f->y.end(), a);
    double densest = 0.0;
    for (auto j = static_cast<std::size_t>(first - f->y.begin()); j < f->count() && f->y[j + 1] <= b; ++j)
      densest = std::max(densest, f->density(j));
    if (densest > kGapFactor * c.density(i)) gap[i] = 1;
  }
  return gap;
}

class ProfileBuilder {
 public:
  void add(double x, double v) {
    if (!p_.x.empty() && !(x > p_.x.back())) return;
    p_.x.push_back(x);
    p_.v.push_back(v);
  }
  Profile take() { return std::move(p_); }

 private:
  Profile p_;
};

}  // namespace

Profile reconstruct(const PartNodes& part, const PartNodes* foreign, const Reference& ref) {
  const auto F0 = std::span<const double>(ref.cdf().values);
  const Cells c = compress(part, F0);
  std::optional<Cells> f;
  if (foreign) f = compress(*foreign, F0);
  const std::vector<char> gap = classify(c, f ? &*f : nullptr);
  const std::size_t n = c.count();

  std::vector<double> node(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const bool left = k > 0;
    const bool right = k < n;
    if ((left && gap[k - 1]) || (right && gap[k])) continue;
    if (left && right) {
      const double dl = c.density(k - 1);
      const double dr = c.density(k);
      node[k] = std::min(0.5 * (dl + dr), 2.0 * std::min(dl, dr));
    } else if (!f || c.y[k] < f->y.front() || c.y[k] > f->y.back()) {
      // A support end away from the other part keeps the cell density.
      node[k] = c.density(left ? k - 1 : k);
    }
  }

  // Each end of a gap cell keeps part of the cell mass, either as a ramp down
  // from the density of the regular neighbour or, when that would not fit or
  // there is no regular neighbour, as a triangle standing on the node.
  struct Flank {
    double width = 0.0;
    bool ramp = false;
  };
  std::vector<Flank> left(n);
  std::vector<Flank> right(n);
  std::vector<double> mass_left(n, 0.0);
  std::vector<double> mass_right(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!gap[i]) continue;
    const double a = c.y[i];
    const double b = c.y[i + 1];
    double room_left = 0.5 * (b - a);
    double room_right = room_left;
    bool interleaved = false;
    if (f) {
      const auto lo = std::upper_bound(f->y.begin(), f->y.end(), a);
      const auto hi = std::lower_bound(f->y.begin(), f->y.end(), b);
      if (lo < hi) {
        interleaved = true;
        room_left = std::min(room_left, 0.5 * (*lo - a));
        room_right = std::min(room_right, 0.5 * (b - *(hi - 1)));
      }
    }
    // A thin tail at a support end stays next to the bulk; only a sliver
    // marks the far end so the end node is preserved.
    double share = 0.5;
    if (!interleaved && i + 1 == n && n > 1) share = 1.0 - kTailSliver;
    if (!interleaved && i == 0 && n > 1) share = kTailSliver;
    mass_left[i] = share * c.m[i];
    mass_right[i] = c.m[i] - mass_left[i];
    left[i].width = room_left;
    if (i > 0 && !gap[i - 1]) {
      const double v = c.density(i - 1);
      if (2.0 * mass_left[i] / v <= room_left) {
        left[i] = {2.0 * mass_left[i] / v, true};
        node[i] = v;
      } else {
        left[i].width = std::min(room_left, c.width(i - 1));
      }
    }
    right[i].width = room_right;
    if (i + 1 < n && !gap[i + 1]) {
      const double v = c.density(i + 1);
      if (2.0 * mass_right[i] / v <= room_right) {
        right[i] = {2.0 * mass_right[i] / v, true};
        node[i + 1] = v;
      } else {
        right[i].width = std::min(room_right, c.width(i + 1));
      }
    }
  }

  ProfileBuilder out;
  out.add(c.y.front(), node.front());
  for (std::size_t i = 0; i < n; ++i) {
    const double a = c.y[i];
    const double b = c.y[i + 1];
    if (!gap[i]) {
      const double mid = 2.0 * c.density(i) - 0.5 * (node[i] + node[i + 1]);
      out.add(0.5 * (a + b), mid);
      out.add(b, node[i + 1]);
      continue;
    }
    if (!left[i].ramp) out.add(a + 0.5 * left[i].width, 2.0 * mass_left[i] / left[i].width);
    out.add(a + left[i].width, 0.0);
    out.add(b - right[i].width, 0.0);
    if (!right[i].ramp) out.add(b - 0.5 * right[i].width, 2.0 * mass_right[i] / right[i].width);
    out.add(b, node[i + 1]);
  }
  return out.take();
}

Profile bump(double center, double half_width, double mass) {
  return Profile{{center - half_width, center, center + half_width}, {0.0, mass / half_width, 0.0}};
}

namespace {

double eval(const Profile& p, double t) { return interpolate(p.x, p.v, t); }

}  // namespace

Signal combine(const std::optional<Profile>& plus, const std::optional<Profile>& minus) {
  if (plus && !minus) return Signal(plus->x, plus->v);
  if (minus && !plus) {
    std::vector<double> v(minus->v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -minus->v[i];
    return Signal(minus->x, std::move(v));
  }
  if (!plus) throw ValidationError("nothing to combine");
  const std::vector<double> grid =
      merge_breakpoints(plus->x, minus->x, std::min(plus->x.front(), minus->x.front()),
                        std::max(plus->x.back(), minus->x.back()));
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = eval(*plus, grid[i]) - eval(*minus, grid[i]);
  return Signal(grid, std::move(values));
}

double overlap(const Profile& plus, const Profile& minus) {
  const double lo = std::max(plus.x.front(), minus.x.front());
  const double hi = std::min(plus.x.back(), minus.x.back());
  if (!(hi > lo)) return 0.0;
  const std::vector<double> grid = merge_breakpoints(plus.x, minus.x, lo, hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    total += min_linear_integral(eval(plus, grid[i]), eval(plus, grid[i + 1]), eval(minus, grid[i]),
                                 eval(minus, grid[i + 1]), grid[i + 1] - grid[i]);
  return total;
}

}  // namespace scdt::detail
