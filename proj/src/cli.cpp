#include "scdt/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "detail/format.hpp"
#include "scdt/datagen.hpp"
#include "scdt/error.hpp"
#include "scdt/io.hpp"
#include "scdt/subspace.hpp"

namespace scdt::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void CliConfig::validate() const {
  if (reference.n < 64) throw ValidationError("reference resolution must be at least 64");
  validate_alphas(alphas);
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be nonnegative");
  if (resolution < 100) throw ValidationError("demo resolution must be at least 100");
}

namespace {

// ---------------------------------------------------------------------------
// Reports: built as JSON, printed either as JSON or as indented text.

std::string sig6(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Json num(double x) {
  if (!std::isfinite(x)) return sig6(x);
  return std::strtod(sig6(x).c_str(), nullptr);
}

Json nums(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return sig6(j.get<double>());
  return j.dump();
}

bool all_scalar(const Json& j) {
  for (const auto& v : j) if (v.is_structured()) return false;
  return true;
}

void print_text(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : j.items()) {
    if (v.is_object()) {
      out << pad << key << ":\n";
      print_text(out, v, indent + 2);
    } else if (v.is_array() && all_scalar(v)) {
      out << pad << key << ":";
      for (const auto& x : v) out << ' ' << scalar_text(x);
      out << '\n';
    } else if (v.is_array()) {
      out << pad << key << ":\n";
      for (const auto& item : v) {
        if (item.is_object() && all_scalar(item)) {
          out << pad << "  -";
          bool first = true;
          for (const auto& [k, x] : item.items()) {
            out << (first ? " " : ", ") << k << ": " << scalar_text(x);
            first = false;
          }
          out << '\n';
        } else if (item.is_object()) {
          out << pad << "  -\n";
          print_text(out, item, indent + 4);
        } else {
          out << pad << "  - " << scalar_text(item) << '\n';
        }
      }
    } else {
      out << pad << key << ": " << scalar_text(v) << '\n';
    }
  }
}

void emit(std::ostream& out, const CliConfig& cfg, const std::string& command, Json body) {
  Json report;
  report["command"] = command;
  report["seed"] = cfg.seed;
  report["reference"] = cfg.reference.to_string();
  for (auto& [k, v] : body.items()) report[k] = std::move(v);
  if (cfg.json)
    out << report.dump(2) << '\n';
  else
    print_text(out, report, 0);
}

// ---------------------------------------------------------------------------
// Inputs

fs::path in_out_dir(const CliConfig& cfg, const fs::path& name) {
  if (name.is_absolute() || name.has_parent_path()) return name;
  return cfg.out_dir / name;
}

struct SignalPair {
  Signal a;
  Signal b;
  std::string name;
};

SignalPair load_pair(const std::string& demo, const std::vector<std::string>& files, const CliConfig& cfg) {
  if (!demo.empty()) {
    if (!files.empty()) throw ValidationError("give either --demo or two input files");
    if (demo == "counterexample") {
      auto [a, b] = counterexample_pair(cfg.resolution);
      return {std::move(a), std::move(b), demo};
    }
    auto [a, b] = figure_signals(parse_figure_id(demo), cfg.resolution);
    return {std::move(a), std::move(b), demo};
  }
  if (files.size() != 2) throw ValidationError("expected two input files or --demo");
  return {read_signal_csv(files[0]), read_signal_csv(files[1]), files[0] + " " + files[1]};
}

struct DataOptions {
  std::string demo;
  std::string spec_file;
  std::string train;
  std::string test;
  std::string model;
  std::vector<int> classes;
  std::size_t limit = 0;
  bool shift_min_zero = false;
  std::string method = "ns";
  std::size_t k = 5;
  std::string out;
  std::vector<std::size_t> samples;
  bool all = false;
  std::string plot;
};

struct Data {
  std::optional<LabeledDataset> train;
  std::optional<LabeledDataset> test;
  std::string source;
};

UcrOptions ucr_options(const DataOptions& o) {
  UcrOptions u;
  u.classes = o.classes;
  u.per_class_limit = o.limit;
  u.shift_min_zero = o.shift_min_zero;
  return u;
}

Data load_data(const DataOptions& o, const CliConfig& cfg) {
  Data d;
  if (!o.demo.empty()) {
    if (o.demo != "experiment1") throw ValidationError("unknown classification demo '" + o.demo + "'");
    DatasetSpec spec = o.spec_file.empty() ? DatasetSpec{} : parse_dataset_spec(read_text(o.spec_file));
    spec.seed = cfg.seed;
    Experiment1 e = make_experiment1(spec);
    d.train = std::move(e.train);
    d.test = std::move(e.test);
    d.source = "experiment1";
  }
  if (!o.train.empty()) {
    d.train = read_ucr(o.train, ucr_options(o));
    d.source = o.train;
  }
  if (!o.test.empty()) d.test = read_ucr(o.test, ucr_options(o));
  return d;
}

// A model file is loaded unless an explicit training file asks for a fresh
// fit; `fit` always fits and treats --model as its output.
SubspaceModel obtain_model(const DataOptions& o, const Data& d, const CliConfig& cfg, bool may_load = true) {
  if (may_load && !o.model.empty() && o.train.empty()) return load_model(o.model);
  if (!d.train) throw ValidationError("need --train, --model or --demo experiment1");
  FitOptions f;
  f.method = parse_method(o.method);
  f.nls_k = o.k;
  return fit(*d.train, make_reference(cfg.reference), f);
}

const LabeledDataset& require_test(const Data& d) {
  if (!d.test) throw ValidationError("need --test or --demo experiment1");
  return *d.test;
}

std::optional<FigureFormat> plot_format(const std::string& plot) {
  if (plot.empty() || plot == "none") return std::nullopt;
  if (plot == "csv") return FigureFormat::csv;
  if (plot == "svg") return FigureFormat::svg;
  throw ValidationError("--plot must be csv, svg or none");
}

Json file_list(const std::vector<fs::path>& files) {
  Json a = Json::array();
  for (const auto& f : files) a.push_back(f.string());
  return a;
}

Json path_json(const PathPointSet& path) {
  Json j;
  j["alphas"] = nums(path.alphas);
  j["segment_distances"] = nums(path.segment_distances);
  j["D"] = num(path.endpoint_distance);
  j["sum_D_i"] = num(path.total_length());
  j["gap_ratio"] = num(path.gap_ratio());
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_transform(const std::string& input, std::string out_file, const CliConfig& cfg, std::ostream& out) {
  const Signal s = read_signal_csv(input);
  const Scdt t = scdt_forward(s, make_reference(cfg.reference));
  if (out_file.empty()) out_file = fs::path(input).stem().string() + ".scdt.json";
  const fs::path target = in_out_dir(cfg, out_file);
  write_scdt(target, t);

  Json j;
  j["input"] = input;
  j["a"] = num(t.a);
  j["b"] = num(t.b);
  j["plus_part"] = t.f_plus.has_value();
  j["minus_part"] = t.f_minus.has_value();
  const double norm = l1_norm(s);
  if (norm > 0.0) j["roundtrip_l1"] = num(l1_distance(scdt_inverse(t), s) / norm);
  j["output"] = target.string();
  emit(out, cfg, "transform", std::move(j));
}

void cmd_invert(const std::string& input, std::string out_file, std::size_t res, const std::string& compare,
                const CliConfig& cfg, std::ostream& out) {
  const Scdt t = read_scdt(input);
  const Signal s = scdt_inverse(t, res);
  if (out_file.empty()) {
    std::string stem = fs::path(input).filename().string();
    if (const auto pos = stem.find(".scdt"); pos != std::string::npos) stem.resize(pos);
    out_file = stem + ".inverse.csv";
  }
  const fs::path target = in_out_dir(cfg, out_file);
  write_signal_csv(target, s);

  Json j;
  j["input"] = input;
  j["samples"] = s.size();
  if (!compare.empty()) {
    const Signal original = read_signal_csv(compare);
    const double norm = l1_norm(original);
    const double err = l1_distance(s, original);
    j["l1_error"] = num(norm > 0.0 ? err / norm : err);
  }
  j["output"] = target.string();
  emit(out, cfg, "invert", std::move(j));
}

void cmd_distance(const SignalPair& p, const CliConfig& cfg, std::ostream& out) {
  const ReferencePtr ref = make_reference(cfg.reference);
  const DistanceBreakdown d = scdt_distance_breakdown(scdt_forward(p.a, ref), scdt_forward(p.b, ref));
  Json j;
  j["input"] = p.name;
  j["D"] = num(d.total);
  j["breakdown"] = {{"plus_map", num(d.plus_map)},
                    {"plus_mass", num(d.plus_mass)},
                    {"minus_map", num(d.minus_map)},
                    {"minus_mass", num(d.minus_mass)}};
  const auto [p1, m1] = jordan_decompose(p.a);
  const auto [p2, m2] = jordan_decompose(p.b);
  if (!p1.negligible && !m1.negligible && !p2.negligible && !m2.negligible)
    j["partwise"] = {{"W2_plus", num(w2(p1.signal, p2.signal, *ref))},
                     {"W2_minus", num(w2(m1.signal, m2.signal, *ref))},
                     {"D", num(ds_distance_partwise(p.a, p.b, ref))}};
  emit(out, cfg, "distance", std::move(j));
}

void cmd_geodesic(const SignalPair& p, const std::string& plot, std::string prefix, const CliConfig& cfg,
                  std::ostream& out) {
  const PathPointSet path = geodesic_path(p.a, p.b, cfg.alphas, make_reference(cfg.reference));
  Json j;
  j["input"] = p.name;
  Json summary = path_json(path);
  for (auto& [k, v] : summary.items()) j[k] = std::move(v);
  if (const auto fmt = plot_format(plot)) {
    if (prefix.empty()) prefix = "geodesic_" + (p.name.find(' ') == std::string::npos ? p.name : "path");
    j["files"] = file_list(emit_path_figure(in_out_dir(cfg, prefix), path, *fmt, p.name));
  }
  emit(out, cfg, "geodesic", std::move(j));
}

void cmd_diagnose(const SignalPair& p, std::size_t grid, const CliConfig& cfg, std::ostream& out) {
  const ReferencePtr ref = make_reference(cfg.reference);
  const MidpointDiagnostic m = geodesic_midpoint_diagnostic(p.a, p.b, ref, cfg.tolerance);
  const ConstantSpeedReport c = constant_speed_check(p.a, p.b, ref, alpha_beta_grid(grid));
  Json j;
  j["input"] = p.name;
  j["verdict"] = m.verdict();
  j["midpoint"] = {{"in_embedding_space", m.report.in_embedding_space},
                   {"monotone", m.report.monotone},
                   {"overlap", num(m.report.overlap)},
                   {"tolerance", num(m.report.tolerance)}};
  Json cs;
  cs["grid"] = std::to_string(grid) + "x" + std::to_string(grid);
  cs["D"] = num(c.distance);
  if (c.degenerate_zero) {
    cs["degenerate_zero"] = true;
    cs["status"] = "degenerate: D = 0, deviation undefined";
  } else {
    cs["max_deviation"] = num(c.max_deviation);
    cs["status"] = c.max_deviation < 0.01 ? "constant-speed deviation < 0.01" : "constant-speed deviation >= 0.01";
  }
  j["constant_speed"] = std::move(cs);
  emit(out, cfg, "diagnose", std::move(j));
}

Json class_summary(const SubspaceModel& m, const LabeledDataset* train) {
  Json a = Json::array();
  for (const ClassSubspace& c : m.classes) {
    Json e;
    e["label"] = c.label;
    e["name"] = c.name;
    e["rank"] = c.basis.cols();
    if (train) {
      std::size_t count = 0;
      for (int l : train->labels) count += l == c.label;
      e["samples"] = count;
    }
    a.push_back(std::move(e));
  }
  return a;
}

void cmd_fit(const DataOptions& o, const CliConfig& cfg, std::ostream& out) {
  const Data d = load_data(o, cfg);
  if (!d.train) throw ValidationError("need --train or --demo experiment1");
  const SubspaceModel m = obtain_model(o, d, cfg, false);
  const fs::path target = in_out_dir(cfg, o.out.empty() ? (o.model.empty() ? "model.json" : o.model) : o.out);
  save_model(target, m);
  Json j;
  j["source"] = d.source;
  j["method"] = to_string(m.method);
  if (m.method == Method::nls) j["k"] = m.nls_k;
  j["classes"] = class_summary(m, &*d.train);
  j["model"] = target.string();
  emit(out, cfg, "classify fit", std::move(j));
}

void cmd_predict(const DataOptions& o, const CliConfig& cfg, std::ostream& out) {
  const Data d = load_data(o, cfg);
  const SubspaceModel m = obtain_model(o, d, cfg);
  const LabeledDataset& test = require_test(d);
  Json rows = Json::array();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Prediction p = predict(m, test.signals[i]);
    correct += p.label == test.labels[i];
    Json r;
    r["index"] = i;
    r["label"] = test.labels[i];
    r["predicted"] = p.label;
    for (std::size_t c = 0; c < p.class_labels.size(); ++c)
      r["D_" + std::to_string(p.class_labels[c])] = num(p.distances[c]);
    rows.push_back(std::move(r));
  }
  Json j;
  j["source"] = d.source;
  j["method"] = to_string(m.method);
  if (m.method == Method::nls) j["k"] = m.nls_k;
  j["classes"] = class_summary(m, d.train ? &*d.train : nullptr);
  j["test_samples"] = test.size();
  j["correct"] = correct;
  j["accuracy"] = num(test.size() ? static_cast<double>(correct) / static_cast<double>(test.size()) : 0.0);
  if (cfg.verbosity > 0 || cfg.json) j["predictions"] = std::move(rows);
  emit(out, cfg, "classify predict", std::move(j));
}

void cmd_paths(const DataOptions& o, const CliConfig& cfg, std::ostream& out) {
  const Data d = load_data(o, cfg);
  const SubspaceModel m = obtain_model(o, d, cfg);
  const LabeledDataset& test = require_test(d);
  const auto fmt = plot_format(o.plot);

  std::vector<std::size_t> indices = o.samples;
  if (o.all) {
    indices.clear();
    for (std::size_t i = 0; i < test.size(); ++i) indices.push_back(i);
  }
  if (indices.empty()) indices.push_back(0);

  Json rows = Json::array();
  std::size_t correct = 0;
  std::size_t own_smallest = 0;
  std::size_t own_smallest_correct = 0;
  for (std::size_t i : indices) {
    if (i >= test.size()) throw ValidationError("sample index " + std::to_string(i) + " out of range");
    const Signal& s = test.signals[i];
    const Prediction pred = predict(m, s);
    Json r;
    r["index"] = i;
    r["label"] = test.labels[i];
    r["predicted"] = pred.label;
    Json per_class = Json::array();
    double own = 0.0;
    double best_other = std::numeric_limits<double>::infinity();
    for (const ClassSubspace& c : m.classes) {
      const Projection proj = project(m, c.label, s);
      const PathReport pr = projection_path_report(s, proj.inverse.signal, m.reference, cfg.alphas);
      Json e;
      e["class"] = c.label;
      e["residual"] = num(proj.residual);
      e["D"] = num(pr.path.endpoint_distance);
      e["sum_D_i"] = num(pr.path.total_length());
      e["gap_ratio"] = num(pr.gap_ratio);
      if (fmt) {
        const std::string prefix = (o.out.empty() ? std::string("paths") : o.out) + "_s" + std::to_string(i) +
                                   "_c" + std::to_string(c.label);
        const auto files = emit_path_figure(in_out_dir(cfg, prefix), pr.path, *fmt,
                                            "sample " + std::to_string(i) + " to class " + c.name);
        e["figure"] = files.back().string();
      }
      per_class.push_back(std::move(e));
      if (c.label == test.labels[i])
        own = pr.gap_ratio;
      else
        best_other = std::min(best_other, pr.gap_ratio);
    }
    const bool ok = pred.label == test.labels[i];
    const bool smallest = own < best_other;
    correct += ok;
    own_smallest += smallest;
    own_smallest_correct += ok && smallest;
    r["own_gap_smallest"] = smallest;
    r["classes"] = std::move(per_class);
    rows.push_back(std::move(r));
  }
  Json j;
  j["source"] = d.source;
  j["method"] = to_string(m.method);
  j["samples"] = std::move(rows);
  j["correct"] = correct;
  j["own_gap_smallest"] = own_smallest;
  j["own_gap_smallest_among_correct"] =
      num(correct ? static_cast<double>(own_smallest_correct) / static_cast<double>(correct) : 0.0);
  emit(out, cfg, "classify paths", std::move(j));
}

void cmd_datagen(const std::string& what, const std::string& spec_file, const std::string& prefix,
                 const CliConfig& cfg, std::ostream& out) {
  Json j;
  std::vector<fs::path> files;
  if (what == "experiment1") {
    DatasetSpec spec = spec_file.empty() ? DatasetSpec{} : parse_dataset_spec(read_text(spec_file));
    spec.seed = cfg.seed;
    const Experiment1 e = make_experiment1(spec);
    const std::string base = prefix.empty() ? "experiment1" : prefix;
    auto write_split = [&](const LabeledDataset& ds, const std::string& suffix) {
      std::string text;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        text += std::to_string(ds.labels[i]);
        for (double v : ds.signals[i].values()) text += '\t' + detail::shortest(v);
        text += '\n';
      }
      files.push_back(in_out_dir(cfg, base + suffix));
      write_text(files.back(), text);
    };
    write_split(e.train, "_TRAIN.tsv");
    write_split(e.test, "_TEST.tsv");
    files.push_back(in_out_dir(cfg, base + "_spec.json"));
    write_text(files.back(), format_dataset_spec(spec));
    j["train_samples"] = e.train.size();
    j["test_samples"] = e.test.size();
  } else {
    auto [a, b] = what == "counterexample" ? counterexample_pair(cfg.resolution)
                                           : figure_signals(parse_figure_id(what), cfg.resolution);
    const std::string base = prefix.empty() ? what : prefix;
    files.push_back(in_out_dir(cfg, base + "_a.csv"));
    write_signal_csv(files.back(), a);
    files.push_back(in_out_dir(cfg, base + "_b.csv"));
    write_signal_csv(files.back(), b);
  }
  j["dataset"] = what;
  j["files"] = file_list(files);
  emit(out, cfg, "datagen", std::move(j));
}

}  // namespace

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  if (const char* dir = std::getenv("SCDT_OUT_DIR"); dir && *dir) cfg.out_dir = dir;
  std::string ref_text = cfg.reference.to_string();

  CLI::App app{"Signed cumulative distribution transform toolkit", "scdt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--ref", ref_text, "Reference density kind:lo:hi:n")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed, echoed in the report")->capture_default_str();
    sub->add_flag("--json", cfg.json, "Print the report as JSON");
    sub->add_option("--out-dir", cfg.out_dir, "Directory for written files (default $SCDT_OUT_DIR or .)");
    sub->add_flag("-v,--verbose", cfg.verbosity, "More detail");
    sub->add_option("--tol", cfg.tolerance, "Overlap tolerance of the embedding test")->capture_default_str();
    sub->add_option("--resolution", cfg.resolution, "Samples of generated demo signals")->capture_default_str();
  };

  std::string input;
  std::string out_file;
  std::vector<std::string> pair_files;
  std::string demo;
  std::string plot;
  std::size_t inverse_res = 0;
  std::string compare;
  std::size_t grid = 5;
  DataOptions data;
  std::string datagen_what;
  std::string spec_file;

  auto* transform = app.add_subcommand("transform", "Signal CSV to SCDT file");
  transform->add_option("input", input, "Signal CSV (t,value)")->required();
  transform->add_option("--out", out_file, "Output SCDT file");
  common(transform);

  auto* invert = app.add_subcommand("invert", "SCDT file to signal CSV");
  invert->add_option("input", input, "SCDT file")->required();
  invert->add_option("--out", out_file, "Output CSV");
  invert->add_option("--samples", inverse_res, "Resample onto this many uniform points (0 keeps breakpoints)");
  invert->add_option("--compare", compare, "Original signal CSV; prints the relative L1 error");
  common(invert);

  const std::string demo_help = "Built-in pair: fig2_top, fig2_bottom, fig3_top, fig3_bottom, counterexample";
  auto* distance = app.add_subcommand("distance", "Generalized Wasserstein distance of two signals");
  distance->add_option("inputs", pair_files, "Two signal CSVs")->expected(0, 2);
  distance->add_option("--demo", demo, demo_help);
  common(distance);

  auto* geodesic = app.add_subcommand("geodesic", "Sample the transport path between two signals");
  geodesic->add_option("inputs", pair_files, "Two signal CSVs")->expected(0, 2);
  geodesic->add_option("--demo", demo, demo_help);
  geodesic->add_option("--alphas", cfg.alphas, "Comma-separated path parameters from 0 to 1")->delimiter(',');
  geodesic->add_option("--plot", plot, "Write the path figure: csv, svg or none");
  geodesic->add_option("--out", out_file, "File prefix of the figure");
  common(geodesic);

  auto* diagnose = app.add_subcommand("diagnose", "Midpoint and constant-speed checks of the transport path");
  diagnose->add_option("inputs", pair_files, "Two signal CSVs")->expected(0, 2);
  diagnose->add_option("--demo", demo, demo_help);
  diagnose->add_option("--grid", grid, "Points per axis of the (alpha, beta) grid")->capture_default_str();
  common(diagnose);

  auto* classify = app.add_subcommand("classify", "Subspace classification in transform space");
  classify->require_subcommand(1);
  auto classify_options = [&](CLI::App* sub) {
    sub->add_option("--demo", data.demo, "Built-in data: experiment1");
    sub->add_option("--spec", data.spec_file, "Dataset spec file for the demo");
    sub->add_option("--train", data.train, "UCR training file");
    sub->add_option("--test", data.test, "UCR test file");
    sub->add_option("--model", data.model, "Model file");
    sub->add_option("--method", data.method, "ns or nls")->capture_default_str();
    sub->add_option("--k", data.k, "Neighbours of the local subspace (nls)")->capture_default_str();
    sub->add_option("--classes", data.classes, "Keep only these labels")->delimiter(',');
    sub->add_option("--limit", data.limit, "Rows kept per class and file (0 = all)");
    sub->add_flag("--shift-min-zero", data.shift_min_zero, "Shift series with negative values to minimum 0");
    sub->add_option("--out", data.out, "Output file or prefix");
    common(sub);
  };
  auto* fit_cmd = classify->add_subcommand("fit", "Fit class subspaces and save the model");
  classify_options(fit_cmd);
  auto* predict_cmd = classify->add_subcommand("predict", "Predict labels of a test set");
  classify_options(predict_cmd);
  auto* paths_cmd = classify->add_subcommand("paths", "Transport paths from test samples to their projections");
  classify_options(paths_cmd);
  paths_cmd->add_option("--samples", data.samples, "Test indices")->delimiter(',');
  paths_cmd->add_flag("--all", data.all, "Every test sample");
  paths_cmd->add_option("--alphas", cfg.alphas, "Comma-separated path parameters")->delimiter(',');
  paths_cmd->add_option("--plot", data.plot, "Write path figures: csv, svg or none");

  auto* datagen = app.add_subcommand("datagen", "Write built-in datasets and figure pairs");
  datagen->add_option("what", datagen_what,
                      "experiment1, fig2_top, fig2_bottom, fig3_top, fig3_bottom or counterexample")
      ->required();
  datagen->add_option("--spec", spec_file, "Dataset spec file (experiment1)");
  datagen->add_option("--out", out_file, "File prefix");
  common(datagen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cfg.reference = ReferenceSpec::parse(ref_text);
    if (cfg.out_dir.empty()) cfg.out_dir = ".";
    cfg.validate();
    if (transform->parsed()) {
      cmd_transform(input, out_file, cfg, out);
    } else if (invert->parsed()) {
      cmd_invert(input, out_file, inverse_res, compare, cfg, out);
    } else if (distance->parsed()) {
      cmd_distance(load_pair(demo, pair_files, cfg), cfg, out);
    } else if (geodesic->parsed()) {
      cmd_geodesic(load_pair(demo, pair_files, cfg), plot, out_file, cfg, out);
    } else if (diagnose->parsed()) {
      if (grid < 2) throw ValidationError("--grid must be at least 2");
      cmd_diagnose(load_pair(demo, pair_files, cfg), grid, cfg, out);
    } else if (fit_cmd->parsed()) {
      cmd_fit(data, cfg, out);
    } else if (predict_cmd->parsed()) {
      cmd_predict(data, cfg, out);
    } else if (paths_cmd->parsed()) {
      cmd_paths(data, cfg, out);
    } else if (datagen->parsed()) {
      cmd_datagen(datagen_what, spec_file, out_file, cfg, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace scdt::cli
