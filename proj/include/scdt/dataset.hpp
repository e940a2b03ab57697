#pragma once

#include <string>
#include <vector>

#include "scdt/signal.hpp"

namespace scdt {

/// Labeled collection of signals. Signals may live on different grids; the
/// UCR loader produces a shared grid.
struct LabeledDataset {
  std::vector<Signal> signals;
  std::vector<int> labels;
  /// Optional display names indexed by label.
  std::vector<std::string> class_names;
  std::string source;

  std::size_t size() const { return signals.size(); }
  /// Throws ValidationError for length mismatches or negative labels.
  void validate() const;
  bool shares_grid() const;
  /// Name of a label, or its decimal form when no name is known.
  std::string class_name(int label) const;
};

}  // namespace scdt
