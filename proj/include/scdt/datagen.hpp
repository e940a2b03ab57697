#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scdt/dataset.hpp"
#include "scdt/signal.hpp"

namespace scdt {

enum class TemplateId { gabor, sawtooth_apodized, square_apodized };

std::string to_string(TemplateId id);
/// Throws ValidationError for unknown names.
TemplateId parse_template_id(std::string_view name);

/// Carrier frequency, window center and Gaussian window width.
struct TemplateParams {
  double frequency = 5.0;
  double center = 0.5;
  double width = 0.1;
};

/// Waveform at frequency f shifted to the center, times the window
/// exp(-(t - c)^2 / (2 width^2)).
Signal make_template(TemplateId id, std::span<const double> grid, const TemplateParams& params = {});

struct DatasetSpec {
  std::vector<TemplateId> templates{TemplateId::gabor, TemplateId::sawtooth_apodized,
                                    TemplateId::square_apodized};
  TemplateParams params;
  double omega_lo = 0.7;
  double omega_hi = 1.4;
  double tau_lo = -0.2;
  double tau_hi = 0.2;
  std::size_t train_per_class = 10;
  std::size_t test_per_class = 40;
  std::size_t resolution = 1000;
  std::uint64_t seed = 0;

  /// Throws ValidationError for non-positive omega ranges, reversed ranges,
  /// zero counts or resolutions below 2.
  void validate() const;
};

struct Experiment1 {
  std::vector<Signal> templates;  ///< indexed by class label
  LabeledDataset train;
  LabeledDataset test;
};

/// Per class, draws (omega, tau) uniformly and emits the normalized affine
/// warp of the class template. Class c uses its own stream seeded from
/// (seed, c), so the result does not depend on generation order.
Experiment1 make_experiment1(const DatasetSpec& spec);

/// Step signals 1 on [-1, 0) minus 1 on [0, 1], and their negation, sampled
/// on [-1, 1]. The jump at 0 spans one grid cell. Throws ValidationError for
/// resolution < 4.
std::pair<Signal, Signal> counterexample_pair(std::size_t resolution = 1000);

enum class FigureId { fig2_top, fig2_bottom, fig3_top, fig3_bottom };

std::string to_string(FigureId id);
FigureId parse_figure_id(std::string_view name);

/// Endpoint pairs of the worked path examples on [0, 1]. Throws
/// ValidationError for resolution < 100.
std::pair<Signal, Signal> figure_signals(FigureId id, std::size_t resolution = 1000);

}  // namespace scdt
