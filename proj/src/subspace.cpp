#include "scdt/subspace.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "scdt/error.hpp"

namespace scdt {

std::string to_string(Method m) { return m == Method::ns ? "ns" : "nls"; }

Method parse_method(std::string_view name) {
  if (name == "ns") return Method::ns;
  if (name == "nls") return Method::nls;
  throw ValidationError("unknown method '" + std::string(name) + "'");
}

std::size_t SubspaceModel::class_index(int label) const {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (classes[c].label == label) return c;
  throw ValidationError("unknown class label " + std::to_string(label));
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& vectors, const RankPolicy& policy) {
  if (vectors.cols() == 0) return Eigen::MatrixXd(vectors.rows(), 0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  if (sigma.size() > 0 && sigma(0) > 0.0)
    while (rank < sigma.size() && sigma(rank) > policy.rel_tol * sigma(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::VectorXd embed(const Signal& s, const ReferencePtr& ref) {
  const EmbeddingVector v = flatten(scdt_forward(s, ref), *ref);
  return Eigen::Map<const Eigen::VectorXd>(v.coords.data(), static_cast<Eigen::Index>(v.coords.size()));
}

SubspaceModel fit(const LabeledDataset& train, ReferencePtr ref, const FitOptions& options) {
  train.validate();
  if (!ref) throw ValidationError("fit needs a reference");
  if (train.size() == 0) throw ValidationError("empty training set");
  if (options.method == Method::nls && options.nls_k == 0)
    throw ValidationError("nls_k must be at least 1");

  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < train.size(); ++i) members[train.labels[i]].push_back(i);

  SubspaceModel model;
  model.reference = ref;
  model.method = options.method;
  model.nls_k = options.nls_k;
  model.rank_policy = options.rank_policy;
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  for (const auto& [label, idx] : members) {
    if (options.method == Method::nls && idx.size() < options.nls_k) {
      std::ostringstream msg;
      msg << "class " << label << " has " << idx.size() << " samples, fewer than nls_k = "
          << options.nls_k;
      throw ValidationError(msg.str());
    }
    ClassSubspace cls;
    cls.label = label;
    cls.name = train.class_name(label);
    cls.training.resize(dim, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
      cls.training.col(static_cast<Eigen::Index>(j)) = embed(train.signals[idx[j]], ref);
    cls.basis = orthonormal_basis(cls.training, options.rank_policy);
    model.classes.push_back(std::move(cls));
  }
  return model;
}

Eigen::MatrixXd class_basis(const SubspaceModel& model, std::size_t class_index,
                            const Eigen::VectorXd& query) {
  const ClassSubspace& cls = model.classes.at(class_index);
  if (model.method == Method::ns) return cls.basis;

  const Eigen::Index count = cls.training.cols();
  std::vector<double> dist(static_cast<std::size_t>(count));
  for (Eigen::Index j = 0; j < count; ++j)
    dist[static_cast<std::size_t>(j)] = (cls.training.col(j) - query).squaredNorm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto k = static_cast<std::ptrdiff_t>(std::min<std::size_t>(model.nls_k, order.size()));
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double da = dist[static_cast<std::size_t>(a)];
    const double db = dist[static_cast<std::size_t>(b)];
    return da < db || (da == db && a < b);
  });
  Eigen::MatrixXd local(cls.training.rows(), k);
  for (std::ptrdiff_t j = 0; j < k; ++j) local.col(j) = cls.training.col(order[static_cast<std::size_t>(j)]);
  return orthonormal_basis(local, model.rank_policy);
}

namespace {

void require_fitted(const SubspaceModel& model) {
  if (!model.fitted()) throw ValidationError("model is not fitted");
}

double residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& x) {
  return (x - basis * (basis.transpose() * x)).norm();
}

Prediction argmin(const SubspaceModel& model, std::vector<double> distances) {
  Prediction p;
  std::size_t best = 0;
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    p.class_labels.push_back(model.classes[c].label);
    if (distances[c] < distances[best]) best = c;
  }
  p.label = model.classes[best].label;
  p.distances = std::move(distances);
  return p;
}

}  // namespace

Prediction predict_embedding(const SubspaceModel& model, const Eigen::VectorXd& x) {
  require_fitted(model);
  if (x.size() != static_cast<Eigen::Index>(model.dimension()))
    throw ValidationError("embedding vector length does not match the model");
  std::vector<double> distances;
  for (std::size_t c = 0; c < model.classes.size(); ++c)
    distances.push_back(residual(class_basis(model, c, x), x));
  return argmin(model, std::move(distances));
}

Prediction predict(const SubspaceModel& model, const Signal& s) {
  require_fitted(model);
  return predict_embedding(model, embed(s, model.reference));
}

Projection project(const SubspaceModel& model, int label, const Signal& s,
                   std::size_t out_resolution) {
  require_fitted(model);
  const std::size_t c = model.class_index(label);
  const Eigen::VectorXd x = embed(s, model.reference);
  const Eigen::MatrixXd basis = class_basis(model, c, x);

  const Eigen::VectorXd coords = basis * (basis.transpose() * x);
  EmbeddingVector v{std::vector<double>(coords.data(), coords.data() + coords.size()),
                    model.reference->label(), model.reference->size()};
  Scdt tuple = unflatten(v, model.reference);
  const ValidityReport validity = validate_scdt(tuple);
  RelaxedInverse inverse = scdt_inverse_relaxed(
      tuple, out_resolution == 0 ? model.reference->size() : out_resolution);
  return Projection{label, coords, (x - coords).norm(), std::move(tuple), validity, std::move(inverse)};
}

PathReport projection_path_report(const Signal& s, const Signal& s_tilde, const ReferencePtr& ref,
                                  const std::vector<double>& alphas) {
  PathReport r;
  r.path = geodesic_path(s, s_tilde, alphas, ref);
  r.gap_ratio = r.path.gap_ratio();
  return r;
}

Prediction predict_by_path_length(const SubspaceModel& model, const Signal& s,
                                  const std::vector<double>& alphas) {
  require_fitted(model);
  std::vector<double> lengths;
  for (const ClassSubspace& cls : model.classes) {
    const Projection p = project(model, cls.label, s);
    lengths.push_back(geodesic_path(s, p.inverse.signal, alphas, model.reference).total_length());
  }
  return argmin(model, std::move(lengths));
}

}  // namespace scdt
