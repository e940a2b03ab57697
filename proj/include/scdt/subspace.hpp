#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scdt/dataset.hpp"
#include "scdt/geodesy.hpp"
#include "scdt/transform.hpp"

namespace scdt {

enum class Method { ns, nls };

std::string to_string(Method m);
/// Throws ValidationError for anything but "ns" and "nls".
Method parse_method(std::string_view name);

/// Singular directions with sigma <= rel_tol * sigma_max are dropped.
struct RankPolicy {
  double rel_tol = 1e-8;
};

struct FitOptions {
  Method method = Method::ns;
  std::size_t nls_k = 5;
  RankPolicy rank_policy;
};

struct ClassSubspace {
  int label = 0;
  std::string name;
  /// Orthonormal columns spanning the class's embedding vectors.
  Eigen::MatrixXd basis;
  /// Training embedding vectors as columns, kept for local subspaces.
  Eigen::MatrixXd training;
};

struct SubspaceModel {
  ReferencePtr reference;
  Method method = Method::ns;
  std::size_t nls_k = 5;
  RankPolicy rank_policy;
  /// Sorted by label; ties between classes go to the lower index.
  std::vector<ClassSubspace> classes;

  bool fitted() const { return reference && !classes.empty(); }
  std::size_t dimension() const { return 2 * reference->size() + 2; }
  /// Index into classes; throws ValidationError for unknown labels.
  std::size_t class_index(int label) const;
};

/// Orthonormal basis of the column span of `vectors`.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& vectors, const RankPolicy& policy);

/// Throws ValidationError for an empty training set, NLS classes with fewer
/// than nls_k samples, or nls_k = 0.
SubspaceModel fit(const LabeledDataset& train, ReferencePtr ref, const FitOptions& options = {});

/// Embedding coordinates of scdt_forward(s) as an Eigen vector.
Eigen::VectorXd embed(const Signal& s, const ReferencePtr& ref);

/// Basis used for a class and a query: the class basis for NS, the span of
/// the nls_k training vectors nearest to the query for NLS.
Eigen::MatrixXd class_basis(const SubspaceModel& model, std::size_t class_index,
                            const Eigen::VectorXd& query);

struct Prediction {
  int label = 0;
  std::vector<int> class_labels;
  /// Distance to each class, in class order.
  std::vector<double> distances;
};

/// Throws ValidationError for an unfitted model.
Prediction predict(const SubspaceModel& model, const Signal& s);
Prediction predict_embedding(const SubspaceModel& model, const Eigen::VectorXd& x);

struct Projection {
  int label = 0;
  Eigen::VectorXd coords;  ///< projected embedding vector
  double residual = 0.0;   ///< distance from the query to the subspace
  Scdt tuple;              ///< un-flattened projection, possibly outside the SCDT image
  ValidityReport validity;
  RelaxedInverse inverse;  ///< signal-space projection with repair diagnostics
};

/// Projects onto the class subspace and inverts the result. The signal-space
/// projection is sampled on a uniform grid of `out_resolution` points (the
/// reference size when 0), like an ordinary input series.
Projection project(const SubspaceModel& model, int label, const Signal& s,
                   std::size_t out_resolution = 0);

struct PathReport {
  PathPointSet path;
  double gap_ratio = 1.0;
};

PathReport projection_path_report(const Signal& s, const Signal& s_tilde, const ReferencePtr& ref,
                                  const std::vector<double>& alphas = default_alphas());

/// Experimental: the distance to each class is the length sum D_i of the
/// sampled path from s to its projection onto that class.
Prediction predict_by_path_length(const SubspaceModel& model, const Signal& s,
                                  const std::vector<double>& alphas = default_alphas());

}  // namespace scdt
