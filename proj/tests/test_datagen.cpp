#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scdt/datagen.hpp"
#include "scdt/error.hpp"
#include "support.hpp"

using namespace scdt;
using namespace scdt::testing;

TEST_CASE("template names") {
  for (TemplateId id : {TemplateId::gabor, TemplateId::sawtooth_apodized, TemplateId::square_apodized})
    CHECK(parse_template_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_template_id("chirp"), ValidationError);
  for (FigureId id : {FigureId::fig2_top, FigureId::fig2_bottom, FigureId::fig3_top, FigureId::fig3_bottom})
    CHECK(parse_figure_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_figure_id("fig9"), ValidationError);
}

TEST_CASE("gabor template") {
  const auto grid = linspace(0.0, 1.0, 1001);
  const Signal g = make_template(TemplateId::gabor, grid);
  // cos(2 pi f (t - c)) exp(-(t - c)^2 / (2 w^2)) with f = 5, c = 0.5, w = 0.1.
  for (double t : {0.3, 0.45, 0.5, 0.62}) {
    const double want = std::cos(2 * std::numbers::pi * 5 * (t - 0.5)) * gauss(t, 0.5, 0.1);
    CHECK(g(t) == doctest::Approx(want).epsilon(1e-9));
  }
  const Signal saw = make_template(TemplateId::sawtooth_apodized, grid);
  const Signal sq = make_template(TemplateId::square_apodized, grid);
  // Near the ends only the apodizing window is left: exp(-0.48^2 / 0.02).
  const double tail = std::exp(-0.48 * 0.48 / 0.02);
  CHECK(saw(0.02) == doctest::Approx(-0.8 * tail).epsilon(1e-9));
  CHECK(sq(0.98) == doctest::Approx(-tail).epsilon(1e-9));
  CHECK(std::abs(sq(0.98)) < 1e-5);
}

TEST_CASE("experiment datasets are seeded") {
  DatasetSpec spec;
  spec.resolution = 200;
  spec.seed = 42;
  const Experiment1 a = make_experiment1(spec);
  const Experiment1 b = make_experiment1(spec);
  CHECK(a.train.size() == 30);
  CHECK(a.test.size() == 120);
  for (std::size_t i = 0; i < a.test.size(); ++i) CHECK(l1_distance(a.test.signals[i], b.test.signals[i]) == 0.0);

  spec.seed = 43;
  const Experiment1 c = make_experiment1(spec);
  CHECK(l1_distance(a.train.signals[0], c.train.signals[0]) > 0.0);

  // Each class has its own stream: fewer test samples leave training draws
  // and earlier test draws untouched.
  spec.seed = 42;
  spec.test_per_class = 5;
  const Experiment1 d = make_experiment1(spec);
  CHECK(l1_distance(a.train.signals[25], d.train.signals[25]) == 0.0);
  CHECK(l1_distance(a.test.signals[40], d.test.signals[5]) == 0.0);
}

TEST_CASE("experiment samples are warped templates") {
  DatasetSpec spec;
  spec.resolution = 300;
  const Experiment1 e = make_experiment1(spec);
  for (std::size_t i = 0; i < e.train.size(); ++i) {
    const int label = e.train.labels[i];
    // A normalized affine warp keeps positive and negative mass.
    const auto [tp, tm] = jordan_decompose(e.templates[static_cast<std::size_t>(label)]);
    const auto [sp, sm] = jordan_decompose(e.train.signals[i]);
    CHECK(sp.mass == doctest::Approx(tp.mass).epsilon(0.05));
    CHECK(sm.mass == doctest::Approx(tm.mass).epsilon(0.05));
  }
}

TEST_CASE("dataset spec validation") {
  DatasetSpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.omega_lo = 0.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.tau_lo = 0.5;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.train_per_class = 0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = {};
  spec.resolution = 1;
  CHECK_THROWS_AS(make_experiment1(spec), ValidationError);
}

TEST_CASE("counterexample pair") {
  const auto [s1, s2] = counterexample_pair(1000);
  CHECK(s1.front() == -1.0);
  CHECK(s1.back() == 1.0);
  CHECK(s1(-0.5) == 1.0);
  CHECK(s1(0.5) == -1.0);
  CHECK(s2(-0.5) == -1.0);
  CHECK_THROWS_AS(counterexample_pair(3), ValidationError);
}

TEST_CASE("figure pairs") {
  const auto [a, b] = figure_signals(FigureId::fig3_top, 1000);
  CHECK(a(0.25) == -1.0);
  CHECK(a(0.75) == 1.0);
  CHECK(b(0.25) == 1.0);
  const auto [z, s] = figure_signals(FigureId::fig2_top, 1000);
  CHECK(z.is_zero());
  CHECK(s(0.25) == doctest::Approx(1.0).epsilon(1e-5));
  // fig2_bottom uses g' s o g with g(t) = t^2, fig3_bottom s o g.
  const auto [p, q] = figure_signals(FigureId::fig2_bottom, 1000);
  const auto [p3, q3] = figure_signals(FigureId::fig3_bottom, 1000);
  const double t = 0.6;
  const double sg = -std::sin(3 * std::numbers::pi * t * t);
  CHECK(q(t) == doctest::Approx(2 * t * sg).epsilon(1e-4));
  CHECK(q3(t) == doctest::Approx(sg).epsilon(1e-4));
  CHECK(l1_distance(p, p3) == 0.0);
  CHECK_THROWS_AS(figure_signals(FigureId::fig2_top, 99), ValidationError);
}
