#include "scdt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "scdt/error.hpp"

namespace scdt {

void LabeledDataset::validate() const {
  if (signals.size() != labels.size()) throw ValidationError("signals and labels differ in length");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] < 0) {
      std::ostringstream msg;
      msg << "negative label at index " << i;
      throw ValidationError(msg.str());
    }
}

bool LabeledDataset::shares_grid() const {
  for (std::size_t i = 1; i < signals.size(); ++i) {
    const auto a = signals[0].grid();
    const auto b = signals[i].grid();
    if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  return true;
}

std::string LabeledDataset::class_name(int label) const {
  if (label >= 0 && static_cast<std::size_t>(label) < class_names.size() &&
      !class_names[label].empty())
    return class_names[label];
  return std::to_string(label);
}

std::string to_string(TemplateId id) {
  switch (id) {
    case TemplateId::gabor: return "gabor";
    case TemplateId::sawtooth_apodized: return "sawtooth_apodized";
    case TemplateId::square_apodized: return "square_apodized";
  }
  return "unknown";
}

TemplateId parse_template_id(std::string_view name) {
  for (auto id : {TemplateId::gabor, TemplateId::sawtooth_apodized, TemplateId::square_apodized})
    if (name == to_string(id)) return id;
  throw ValidationError("unknown template '" + std::string(name) + "'");
}

Signal make_template(TemplateId id, std::span<const double> grid, const TemplateParams& p) {
  validate_grid(grid);
  if (!(p.width > 0.0)) throw ValidationError("template window width must be positive");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - p.center;
    const double window = std::exp(-d * d / (2.0 * p.width * p.width));
    const double x = p.frequency * d;
    double wave = 0.0;
    switch (id) {
      case TemplateId::gabor: wave = std::cos(2.0 * std::numbers::pi * x); break;
      case TemplateId::sawtooth_apodized: wave = 2.0 * (x - std::floor(x + 0.5)); break;
      case TemplateId::square_apodized: {
        const double c = std::cos(2.0 * std::numbers::pi * x);
        wave = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
        break;
      }
    }
    values[i] = wave * window;
  }
  return Signal(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

void DatasetSpec::validate() const {
  if (templates.empty()) throw ValidationError("dataset needs at least one template");
  if (!(omega_lo > 0.0) || !(omega_hi >= omega_lo))
    throw ValidationError("omega range must be positive and ordered");
  if (!(tau_hi >= tau_lo)) throw ValidationError("tau range must be ordered");
  if (train_per_class < 1 || test_per_class < 1)
    throw ValidationError("sample counts per class must be at least 1");
  if (resolution < 2) throw ValidationError("resolution must be at least 2");
}

namespace {

double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace

Experiment1 make_experiment1(const DatasetSpec& spec) {
  spec.validate();
  const auto grid = linspace(0.0, 1.0, spec.resolution);
  Experiment1 out;
  out.train.source = out.test.source = "experiment1";
  for (std::size_t c = 0; c < spec.templates.size(); ++c) {
    const TemplateId id = spec.templates[c];
    out.templates.push_back(make_template(id, grid, spec.params));
    out.train.class_names.push_back(to_string(id));
    out.test.class_names.push_back(to_string(id));

    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32), static_cast<std::uint32_t>(c)};
    std::mt19937_64 eng(seq);
    auto draw = [&](LabeledDataset& into) {
      const double omega = spec.omega_lo + (spec.omega_hi - spec.omega_lo) * uniform01(eng);
      const double tau = spec.tau_lo + (spec.tau_hi - spec.tau_lo) * uniform01(eng);
      into.signals.push_back(apply_warp(out.templates[c], Warp::affine(omega, tau)));
      into.labels.push_back(static_cast<int>(c));
    };
    for (std::size_t i = 0; i < spec.train_per_class; ++i) draw(out.train);
    for (std::size_t i = 0; i < spec.test_per_class; ++i) draw(out.test);
  }
  return out;
}

std::pair<Signal, Signal> counterexample_pair(std::size_t resolution) {
  if (resolution < 4) throw ValidationError("counterexample needs resolution >= 4");
  auto grid = linspace(-1.0, 1.0, resolution);
  std::vector<double> v(resolution);
  for (std::size_t i = 0; i < resolution; ++i) v[i] = grid[i] < 0.0 ? 1.0 : -1.0;
  Signal s1(grid, v);
  return {s1, -s1};
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::fig2_top: return "fig2_top";
    case FigureId::fig2_bottom: return "fig2_bottom";
    case FigureId::fig3_top: return "fig3_top";
    case FigureId::fig3_bottom: return "fig3_bottom";
  }
  return "unknown";
}

FigureId parse_figure_id(std::string_view name) {
  for (auto id : {FigureId::fig2_top, FigureId::fig2_bottom, FigureId::fig3_top, FigureId::fig3_bottom})
    if (name == to_string(id)) return id;
  throw ValidationError("unknown figure '" + std::string(name) + "'");
}

std::pair<Signal, Signal> figure_signals(FigureId id, std::size_t resolution) {
  if (resolution < 100) throw ValidationError("figure signals need resolution >= 100");
  const auto grid = linspace(0.0, 1.0, resolution);
  auto sampled = [&](auto f) {
    std::vector<double> v(resolution);
    for (std::size_t i = 0; i < resolution; ++i) v[i] = f(grid[i]);
    return Signal(grid, std::move(v));
  };
  const double pi = std::numbers::pi;
  switch (id) {
    case FigureId::fig2_top:
      return {Signal::zeros(grid), sampled([&](double t) { return std::sin(2.0 * pi * t); })};
    case FigureId::fig2_bottom: {
      Signal s = sampled([&](double t) { return -std::sin(3.0 * pi * t); });
      return {s, apply_warp(s, Warp::power(2.0))};
    }
    case FigureId::fig3_top: {
      Signal s = sampled([](double t) { return t <= 0.5 ? -1.0 : 1.0; });
      return {s, -s};
    }
    case FigureId::fig3_bottom: {
      Signal s = sampled([&](double t) { return -std::sin(3.0 * pi * t); });
      return {s, apply_warp(s, Warp::power(2.0, false))};
    }
  }
  throw ValidationError("unknown figure");
}

}  // namespace scdt
