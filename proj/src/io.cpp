#include "scdt/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "detail/format.hpp"
#include "scdt/error.hpp"

namespace scdt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i == line.size()) break;
      const std::size_t j = line.find_first_of(" \t\r", i);
      out.push_back(line.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
      if (j == std::string_view::npos) break;
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail_line(const std::string& where, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << where << ": line " << line << ": " << what;
  throw ParseError(msg.str());
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what());
  }
}

template <class F>
auto with_json_errors(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid ") + what + ": " + e.what());
  }
}

json map_json(const std::optional<TransportMap>& f) {
  if (!f) return nullptr;
  return f->values;
}

json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw ParseError("matrix size does not match its data");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

void check_version(const json& j) {
  if (!j.is_object() || !j.contains("format_version"))
    throw ParseError("missing format_version");
  const auto v = j.at("format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    throw ParseError("unsupported format_version " + v.dump());
}

}  // namespace

// ---------------------------------------------------------------------------
// Files

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buf.str();
}

void write_text(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Signal CSV

Signal parse_signal_csv(std::string_view text) {
  std::vector<double> grid;
  std::vector<double> values;
  const auto lines = split_lines(text);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto fields = split_fields(lines[i], ',');
    std::optional<double> t;
    std::optional<double> v;
    if (fields.size() == 2) {
      t = detail::parse_double(fields[0]);
      v = detail::parse_double(fields[1]);
    }
    if (!t || !v) {
      if (first && fields.size() == 2) {
        first = false;
        continue;
      }
      fail_line("signal csv", i + 1, "expected two numeric columns t,value");
    }
    first = false;
    grid.push_back(*t);
    values.push_back(*v);
  }
  if (grid.size() < 2) throw ParseError("signal csv: fewer than two samples");
  return Signal(std::move(grid), std::move(values));
}

Signal read_signal_csv(const fs::path& path) { return parse_signal_csv(read_text(path)); }

std::string format_signal_csv(const Signal& s) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += detail::shortest(s.grid()[i]);
    out += ',';
    out += detail::shortest(s.values()[i]);
    out += '\n';
  }
  return out;
}

void write_signal_csv(const fs::path& path, const Signal& s) { write_text(path, format_signal_csv(s)); }

// ---------------------------------------------------------------------------
// UCR

LabeledDataset parse_ucr(std::string_view text, const UcrOptions& options, std::string source) {
  const std::set<int> wanted(options.classes.begin(), options.classes.end());
  std::map<int, std::size_t> kept;
  LabeledDataset ds;
  ds.source = std::move(source);
  std::size_t length = 0;
  std::vector<double> grid;

  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (blank(line)) continue;
    char delim = options.delimiter;
    if (delim == 0) delim = line.find('\t') != std::string_view::npos ? '\t'
                           : line.find(',') != std::string_view::npos ? ','
                                                                     : ' ';
    const auto fields = split_fields(line, delim);
    if (fields.size() < 3) fail_line(ds.source, i + 1, "expected a label and at least two values");

    const auto label_value = detail::parse_double(fields[0]);
    if (!label_value || *label_value != std::floor(*label_value) || std::abs(*label_value) > 1e9)
      fail_line(ds.source, i + 1, "label is not an integer");
    if (*label_value < 0) fail_line(ds.source, i + 1, "negative label");
    const int label = static_cast<int>(*label_value);

    if (length == 0) {
      length = fields.size() - 1;
      grid = linspace(0.0, 1.0, length);
    } else if (fields.size() - 1 != length) {
      std::ostringstream msg;
      msg << "ragged row: " << fields.size() - 1 << " values, expected " << length;
      fail_line(ds.source, i + 1, msg.str());
    }

    if (!wanted.empty() && !wanted.count(label)) continue;
    if (options.per_class_limit > 0 && kept[label] >= options.per_class_limit) continue;

    std::vector<double> values(length);
    for (std::size_t k = 0; k < length; ++k) {
      const auto v = detail::parse_double(fields[k + 1]);
      if (!v || !std::isfinite(*v)) {
        std::ostringstream msg;
        msg << "missing or non-numeric value in column " << k + 2;
        fail_line(ds.source, i + 1, msg.str());
      }
      values[k] = *v;
    }
    if (options.shift_min_zero) {
      const double lo = *std::min_element(values.begin(), values.end());
      if (lo < 0.0)
        for (double& v : values) v -= lo;
    }
    ds.signals.emplace_back(grid, std::move(values));
    ds.labels.push_back(label);
    ++kept[label];
  }
  for (int label : wanted)
    if (!kept.count(label)) throw ParseError(ds.source + ": label " + std::to_string(label) + " not found");
  if (ds.signals.empty()) throw ParseError(ds.source + ": no series");
  return ds;
}

LabeledDataset read_ucr(const fs::path& path, const UcrOptions& options) {
  return parse_ucr(read_text(path), options, path.string());
}

// ---------------------------------------------------------------------------
// SCDT

std::string format_scdt(const Scdt& t) {
  if (!t.reference) throw ValidationError("SCDT tuple has no reference");
  json j{{"format_version", kFormatVersion},
         {"reference", t.reference->label()},
         {"grid_length", t.reference->size()},
         {"f_plus", map_json(t.f_plus)},
         {"a", t.a},
         {"f_minus", map_json(t.f_minus)},
         {"b", t.b}};
  return j.dump(1) + "\n";
}

Scdt parse_scdt(std::string_view text) {
  const json j = parse_json(text, "SCDT file");
  check_version(j);
  return with_json_errors("SCDT file", [&] {
    const ReferencePtr ref = make_reference(ReferenceSpec::parse(j.at("reference").get<std::string>()));
    if (j.at("grid_length").get<std::size_t>() != ref->size())
      throw ParseError("grid_length does not match the reference");
    Scdt t;
    t.reference = ref;
    auto part = [&](const char* key) -> std::optional<TransportMap> {
      const json& f = j.at(key);
      if (f.is_null()) return std::nullopt;
      auto values = f.get<std::vector<double>>();
      if (values.size() != ref->size()) throw ParseError(std::string(key) + " has the wrong length");
      return TransportMap{std::vector<double>(ref->grid().begin(), ref->grid().end()), std::move(values)};
    };
    t.f_plus = part("f_plus");
    t.a = j.at("a").get<double>();
    t.f_minus = part("f_minus");
    t.b = j.at("b").get<double>();
    if (t.f_plus.has_value() != (t.a > 0.0) || t.f_minus.has_value() != (t.b > 0.0) || t.a < 0.0 ||
        t.b < 0.0)
      throw ParseError("mass and map pairing is inconsistent");
    return t;
  });
}

void write_scdt(const fs::path& path, const Scdt& t) { write_text(path, format_scdt(t)); }
Scdt read_scdt(const fs::path& path) { return parse_scdt(read_text(path)); }

// ---------------------------------------------------------------------------
// Models

std::string format_model(const SubspaceModel& model) {
  if (!model.fitted()) throw ValidationError("model is not fitted");
  json classes = json::array();
  for (const ClassSubspace& c : model.classes) {
    json jc{{"label", c.label}, {"name", c.name}, {"basis", matrix_json(c.basis)}};
    if (model.method == Method::nls) jc["training"] = matrix_json(c.training);
    classes.push_back(std::move(jc));
  }
  json j{{"format_version", kFormatVersion},
         {"reference", model.reference->label()},
         {"method", to_string(model.method)},
         {"nls_k", model.nls_k},
         {"rank_policy", {{"rel_tol", model.rank_policy.rel_tol}}},
         {"classes", std::move(classes)}};
  return j.dump(1) + "\n";
}

SubspaceModel parse_model(std::string_view text) {
  const json j = parse_json(text, "model file");
  check_version(j);
  return with_json_errors("model file", [&] {
    SubspaceModel m;
    m.reference = make_reference(ReferenceSpec::parse(j.at("reference").get<std::string>()));
    m.method = parse_method(j.at("method").get<std::string>());
    m.nls_k = j.at("nls_k").get<std::size_t>();
    m.rank_policy.rel_tol = j.at("rank_policy").at("rel_tol").get<double>();
    const auto dim = static_cast<Eigen::Index>(m.dimension());
    for (const json& jc : j.at("classes")) {
      ClassSubspace c;
      c.label = jc.at("label").get<int>();
      c.name = jc.at("name").get<std::string>();
      c.basis = matrix_from_json(jc.at("basis"));
      if (c.basis.rows() != dim) throw ParseError("basis length does not match the reference");
      if (m.method == Method::nls) {
        c.training = matrix_from_json(jc.at("training"));
        if (c.training.rows() != dim) throw ParseError("training vector length does not match the reference");
      } else {
        c.training.resize(dim, 0);
      }
      if (!m.classes.empty() && c.label <= m.classes.back().label)
        throw ParseError("class labels must be increasing");
      m.classes.push_back(std::move(c));
    }
    if (m.classes.empty()) throw ParseError("model has no classes");
    return m;
  });
}

void save_model(const fs::path& path, const SubspaceModel& model) { write_text(path, format_model(model)); }
SubspaceModel load_model(const fs::path& path) { return parse_model(read_text(path)); }

// ---------------------------------------------------------------------------
// Dataset specs

std::string format_dataset_spec(const DatasetSpec& spec) {
  std::vector<std::string> templates;
  for (TemplateId id : spec.templates) templates.push_back(to_string(id));
  json j{{"format_version", kFormatVersion},
         {"templates", templates},
         {"params",
          {{"frequency", spec.params.frequency}, {"center", spec.params.center}, {"width", spec.params.width}}},
         {"omega", {spec.omega_lo, spec.omega_hi}},
         {"tau", {spec.tau_lo, spec.tau_hi}},
         {"train_per_class", spec.train_per_class},
         {"test_per_class", spec.test_per_class},
         {"resolution", spec.resolution},
         {"seed", spec.seed}};
  return j.dump(1) + "\n";
}

DatasetSpec parse_dataset_spec(std::string_view text) {
  const json j = parse_json(text, "dataset spec");
  check_version(j);
  return with_json_errors("dataset spec", [&] {
    DatasetSpec spec;
    spec.templates.clear();
    for (const json& t : j.at("templates")) spec.templates.push_back(parse_template_id(t.get<std::string>()));
    const json& p = j.at("params");
    spec.params = {p.at("frequency").get<double>(), p.at("center").get<double>(), p.at("width").get<double>()};
    const auto omega = j.at("omega").get<std::vector<double>>();
    const auto tau = j.at("tau").get<std::vector<double>>();
    if (omega.size() != 2 || tau.size() != 2) throw ParseError("ranges need two entries");
    spec.omega_lo = omega[0];
    spec.omega_hi = omega[1];
    spec.tau_lo = tau[0];
    spec.tau_hi = tau[1];
    spec.train_per_class = j.at("train_per_class").get<std::size_t>();
    spec.test_per_class = j.at("test_per_class").get<std::size_t>();
    spec.resolution = j.at("resolution").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.validate();
    return spec;
  });
}

// ---------------------------------------------------------------------------
// Path figures

namespace {

std::string number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return detail::shortest(x);
}

}  // namespace

std::string format_path_summary(const PathPointSet& path) {
  std::string out = "alpha_from,alpha_to,D_i,D,sum_D_i,gap_ratio\n";
  const std::string tail = "," + number(path.endpoint_distance) + "," + number(path.total_length()) + "," +
                           number(path.gap_ratio()) + "\n";
  for (std::size_t i = 0; i < path.segment_distances.size(); ++i)
    out += number(path.alphas[i]) + "," + number(path.alphas[i + 1]) + "," +
           number(path.segment_distances[i]) + tail;
  return out;
}

std::vector<fs::path> emit_path_figure(const fs::path& prefix, const PathPointSet& path, FigureFormat format,
                                       const std::string& title) {
  validate_alphas(path.alphas);
  if (path.points.size() != path.alphas.size() || path.segment_distances.size() + 1 != path.alphas.size())
    throw ValidationError("path point set is inconsistent");
  auto sibling = [&](const std::string& suffix) {
    fs::path p = prefix;
    p += suffix;
    return p;
  };
  std::vector<fs::path> written;
  if (format == FigureFormat::csv) {
    for (std::size_t i = 0; i < path.points.size(); ++i) {
      written.push_back(sibling("_p" + std::to_string(i) + ".csv"));
      write_signal_csv(written.back(), path.points[i]);
    }
    written.push_back(sibling("_summary.csv"));
    write_text(written.back(), format_path_summary(path));
    return written;
  }
  std::vector<std::string> captions;
  std::vector<std::string> gaps;
  for (double a : path.alphas) captions.push_back("alpha = " + number(a));
  for (std::size_t i = 0; i < path.segment_distances.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "D%zu = %.3g", i + 1, path.segment_distances[i]);
    gaps.emplace_back(buf);
  }
  char head[160];
  std::snprintf(head, sizeof head, "D = %.3g, sum D_i = %.3g, ratio = %.3g", path.endpoint_distance,
                path.total_length(), path.gap_ratio());
  const std::string full = title.empty() ? std::string(head) : title + ": " + head;
  written.push_back(sibling(".svg"));
  write_text(written.back(), render_svg_row(path.points, captions, gaps, full));
  return written;
}

}  // namespace scdt
