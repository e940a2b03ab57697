#include <doctest.h>

#include <cmath>

#include "scdt/datagen.hpp"
#include "scdt/error.hpp"
#include "scdt/subspace.hpp"
#include "support.hpp"

using namespace scdt;
using namespace scdt::testing;

namespace {

const ReferencePtr& small_ref() {
  static const ReferencePtr ref = make_reference({"uniform", 0.0, 1.0, 200});
  return ref;
}

Experiment1 small_experiment(std::uint64_t seed = 1) {
  DatasetSpec spec;
  spec.resolution = 400;
  spec.train_per_class = 8;
  spec.test_per_class = 10;
  spec.seed = seed;
  return make_experiment1(spec);
}

}  // namespace

TEST_CASE("orthonormal basis drops dependent columns") {
  Eigen::MatrixXd v(4, 3);
  v << 1, 2, 0,  //
      0, 0, 1,   //
      1, 2, 0,   //
      0, 0, 0;
  const Eigen::MatrixXd b = orthonormal_basis(v, {});
  CHECK(b.cols() == 2);
  const Eigen::MatrixXd gram = b.transpose() * b;
  CHECK((gram - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  // Every input column lies in the span.
  CHECK((v - b * (b.transpose() * v)).norm() < 1e-12);
}

TEST_CASE("method names") {
  CHECK(parse_method("ns") == Method::ns);
  CHECK(parse_method("nls") == Method::nls);
  CHECK(to_string(Method::nls) == "nls");
  CHECK_THROWS_AS(parse_method("knn"), ValidationError);
}

TEST_CASE("fit preconditions") {
  LabeledDataset empty;
  CHECK_THROWS_AS(fit(empty, small_ref()), ValidationError);
  const Experiment1 e = small_experiment();
  CHECK_THROWS_AS(fit(e.train, small_ref(), {Method::nls, 9}), ValidationError);
  CHECK_THROWS_AS(fit(e.train, small_ref(), {Method::nls, 0}), ValidationError);
  SubspaceModel unfitted;
  CHECK_THROWS_AS(predict(unfitted, e.test.signals[0]), ValidationError);
}

TEST_CASE("ns classifier on in-model data") {
  const Experiment1 e = small_experiment();
  const SubspaceModel m = fit(e.train, small_ref());
  REQUIRE(m.classes.size() == 3);
  CHECK(m.dimension() == 402);
  for (const ClassSubspace& c : m.classes) {
    CHECK(c.basis.rows() == 402);
    CHECK(c.basis.cols() >= 1);
    CHECK(c.basis.cols() <= 8);
  }
  for (std::size_t i = 0; i < e.test.size(); ++i) {
    const Prediction p = predict(m, e.test.signals[i]);
    CHECK(p.label == e.test.labels[i]);
    CHECK(p.distances.size() == 3);
  }
  CHECK_THROWS_AS(m.class_index(7), ValidationError);
}

TEST_CASE("nls classifier on in-model data") {
  const Experiment1 e = small_experiment(2);
  const SubspaceModel m = fit(e.train, small_ref(), {Method::nls, 4});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < e.test.size(); ++i) correct += predict(m, e.test.signals[i]).label == e.test.labels[i];
  CHECK(correct == e.test.size());
}

TEST_CASE("nls with all training vectors equals ns") {
  const Experiment1 e = small_experiment(3);
  const SubspaceModel ns = fit(e.train, small_ref());
  const SubspaceModel nls = fit(e.train, small_ref(), {Method::nls, 8});
  for (std::size_t i = 0; i < 5; ++i) {
    const Prediction a = predict(ns, e.test.signals[i]);
    const Prediction b = predict(nls, e.test.signals[i]);
    for (std::size_t c = 0; c < 3; ++c) CHECK(a.distances[c] == doctest::Approx(b.distances[c]).epsilon(1e-8));
  }
}

TEST_CASE("ties go to the lower class index") {
  LabeledDataset d;
  const Signal s = sample([](double t) { return gauss(t, 0.5, 0.1); }, 300);
  d.signals = {s, s};
  d.labels = {4, 2};
  const SubspaceModel m = fit(d, small_ref());
  CHECK(m.classes.front().label == 2);
  CHECK(predict(m, s).label == 2);
}

TEST_CASE("projection of a training sample is itself") {
  const Experiment1 e = small_experiment(4);
  const SubspaceModel m = fit(e.train, small_ref());
  const Projection p = project(m, e.train.labels[0], e.train.signals[0]);
  CHECK(p.residual < 1e-9);
  CHECK(p.validity.in_embedding_space);
  CHECK(p.inverse.signal.size() == small_ref()->size());
  // The projection is the sample's own transform, so inverting it matches
  // inverting that transform directly.
  const Signal direct = scdt_inverse(scdt_forward(e.train.signals[0], small_ref()), small_ref()->size());
  CHECK(relative_l1(p.inverse.signal, direct) < 1e-6);
}

TEST_CASE("projection paths rank the own class first") {
  const Experiment1 e = small_experiment(5);
  const SubspaceModel m = fit(e.train, small_ref());
  for (std::size_t i = 0; i < e.test.size(); i += 7) {
    const Signal& s = e.test.signals[i];
    double own = 0.0;
    double other = 1e300;
    for (const ClassSubspace& c : m.classes) {
      const Projection p = project(m, c.label, s);
      const double g = projection_path_report(s, p.inverse.signal, m.reference).gap_ratio;
      if (c.label == e.test.labels[i])
        own = g;
      else
        other = std::min(other, g);
    }
    CHECK(own < 1.1);
    CHECK(own < other);
  }
}

TEST_CASE("prediction is deterministic") {
  const Experiment1 e = small_experiment(6);
  const SubspaceModel a = fit(e.train, small_ref());
  const SubspaceModel b = fit(e.train, small_ref());
  const Prediction pa = predict(a, e.test.signals[3]);
  const Prediction pb = predict(b, e.test.signals[3]);
  CHECK(pa.label == pb.label);
  CHECK(pa.distances == pb.distances);
  CHECK(predict_by_path_length(a, e.test.signals[3]).label == e.test.labels[3]);
}
