#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scdt/dataset.hpp"
#include "scdt/datagen.hpp"
#include "scdt/geodesy.hpp"
#include "scdt/signal.hpp"
#include "scdt/subspace.hpp"
#include "scdt/transform.hpp"

namespace scdt {

/// Two columns `t,value`, optional header row. Throws IoError when the file
/// cannot be opened and ParseError naming the line for malformed rows.
Signal read_signal_csv(const std::filesystem::path& path);
Signal parse_signal_csv(std::string_view text);
void write_signal_csv(const std::filesystem::path& path, const Signal& s);
std::string format_signal_csv(const Signal& s);

struct UcrOptions {
  /// '\t', ',' or 0 to detect per file (tab, then comma, then blanks).
  char delimiter = 0;
  /// Keep only these labels (all when empty). Every listed label must occur.
  std::vector<int> classes;
  /// Keep at most this many rows per class, in file order (0 = all).
  std::size_t per_class_limit = 0;
  /// Add -min(series) to each series with a negative minimum.
  bool shift_min_zero = false;
};

/// UCR archive rows `label<delim>v1<delim>...<delim>vL`. Series are placed on
/// a uniform grid over [0, 1]; values are not renormalized. Throws ParseError
/// for ragged rows, missing or non-numeric values and non-integral or
/// negative labels.
LabeledDataset read_ucr(const std::filesystem::path& path, const UcrOptions& options = {});
LabeledDataset parse_ucr(std::string_view text, const UcrOptions& options = {},
                         std::string source = "text");

/// Structured text with fields reference, grid_length, f_plus, a, f_minus, b.
std::string format_scdt(const Scdt& t);
Scdt parse_scdt(std::string_view text);
void write_scdt(const std::filesystem::path& path, const Scdt& t);
Scdt read_scdt(const std::filesystem::path& path);

/// Versioned model file (`format_version: 1`).
std::string format_model(const SubspaceModel& model);
SubspaceModel parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const SubspaceModel& model);
SubspaceModel load_model(const std::filesystem::path& path);

std::string format_dataset_spec(const DatasetSpec& spec);
DatasetSpec parse_dataset_spec(std::string_view text);

enum class FigureFormat { csv, svg };

/// CSV: `<prefix>_p<i>.csv` per path point and `<prefix>_summary.csv` with
/// one row per segment. SVG: `<prefix>.svg` with one panel per point and the
/// segment distances between panels. Returns the files written.
std::vector<std::filesystem::path> emit_path_figure(const std::filesystem::path& prefix,
                                                    const PathPointSet& path, FigureFormat format,
                                                    const std::string& title = {});

std::string format_path_summary(const PathPointSet& path);

/// One panel per signal laid out in a row; `captions` label the panels and
/// `gaps` (size panels - 1) annotate the space between neighbours.
std::string render_svg_row(const std::vector<Signal>& panels, const std::vector<std::string>& captions,
                           const std::vector<std::string>& gaps, const std::string& title);

/// Reads a whole file; throws IoError.
std::string read_text(const std::filesystem::path& path);
/// Writes a whole file, creating parent directories; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace scdt
