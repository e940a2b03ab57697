#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scdt/error.hpp"
#include "scdt/geodesy.hpp"
#include "scdt/transform.hpp"
#include "support.hpp"

using namespace scdt;
using namespace scdt::testing;

namespace {

TransportMap map_on(const ReferencePtr& ref, const Fn& f) {
  TransportMap m{std::vector<double>(ref->grid().begin(), ref->grid().end()), {}};
  for (double x : m.grid) m.values.push_back(f(x));
  return m;
}

double max_map_error(const TransportMap& m, const Fn& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.grid.size(); ++i) worst = std::max(worst, std::abs(m.values[i] - f(m.grid[i])));
  return worst;
}

}  // namespace

TEST_CASE("reference specs") {
  const ReferencePtr ref = make_reference();
  CHECK(ref->size() == 1000);
  CHECK(ref->label() == "uniform:0:1:1000");
  CHECK(l1_norm(ref->density()) == doctest::Approx(1.0).epsilon(1e-9));
  double total = 0.0;
  for (double w : ref->weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const ReferenceSpec g = ReferenceSpec::parse("gaussian:-1:1:257");
  CHECK(g.kind == "gaussian");
  CHECK(ReferenceSpec::parse(g.to_string()) == g);
  const Reference gr(g);
  CHECK(l1_norm(gr.density()) == doctest::Approx(1.0).epsilon(1e-9));
  for (double v : gr.density().values()) CHECK(v > 0.0);

  CHECK(ReferenceSpec::parse("uniform:-1:1").n == 1000);
  CHECK(ReferenceSpec::parse("gaussian").hi == 1.0);
  CHECK_THROWS_AS(ReferenceSpec::parse("uniform:0"), ValidationError);
  CHECK_THROWS_AS(ReferenceSpec::parse("uniform:0:1:2:5"), ValidationError);
  CHECK_THROWS_AS(make_reference(ReferenceSpec::parse("cauchy:0:1:10")), ValidationError);
  CHECK_THROWS_AS(make_reference(ReferenceSpec::parse("uniform:1:0:10")), ValidationError);
  CHECK_THROWS_AS(make_reference(ReferenceSpec::parse("uniform:0:1:1")), ValidationError);
}

TEST_CASE("cdf of simple densities") {
  const Cdf u = cdf(Signal({0.0, 1.0}, {1.0, 1.0}));
  CHECK(u.values.front() == 0.0);
  CHECK(u.values.back() == 1.0);
  const Cdf shifted = cdf(Signal(linspace(2.0, 3.0, 11), std::vector<double>(11, 4.0)));
  CHECK(shifted.values[5] == doctest::Approx(0.5));
  const Cdf tri = cdf(Signal({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0}));
  CHECK(tri.values[1] == doctest::Approx(0.5));
  CHECK_THROWS_WITH_AS(cdf(Signal::zeros({0.0, 1.0})), "empty distribution", ValidationError);
  CHECK_THROWS_AS(cdf(Signal({0.0, 1.0}, {1.0, -1.0})), ValidationError);
}

TEST_CASE("quantile follows the inf convention") {
  const Cdf uniform{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(quantile(uniform, 0.25) == doctest::Approx(0.25));
  const Cdf flat{{0.0, 0.4, 0.6, 1.0}, {0.0, 0.5, 0.5, 1.0}};
  CHECK(quantile(flat, 0.5) == doctest::Approx(0.4));
  const Cdf shifted{{2.0, 3.0}, {0.0, 1.0}};
  CHECK(quantile(shifted, 1.0) == doctest::Approx(3.0));
  // Leading zeros: u = 0 maps to where the mass starts.
  const Cdf late{{0.0, 0.3, 1.0}, {0.0, 0.0, 1.0}};
  CHECK(quantile(late, 0.0) == doctest::Approx(0.3));
  CHECK_THROWS_AS(quantile(uniform, -0.1), RangeError);
  CHECK_THROWS_AS(quantile(uniform, 1.5), RangeError);
}

TEST_CASE("cdt of uniform densities is affine") {
  const ReferencePtr ref = make_reference();
  const TransportMap m = cdt_forward(Signal(linspace(2.0, 3.0, 50), std::vector<double>(50, 1.0)), *ref);
  CHECK(max_map_error(m, [](double x) { return 2.0 + x; }) < 1e-12);
  // Uniform on (0.5, 1]: the step is resolved within one grid cell.
  const Signal half = sample([](double t) { return t > 0.5 ? 1.0 : 0.0; }, 1000);
  CHECK(max_map_error(cdt_forward(half, *ref), [](double x) { return 0.5 + 0.5 * x; }) < 2e-3);
}

TEST_CASE("cdt of a gaussian against the analytic quantile") {
  // Truncation at 0 and 1 is beyond 6 sigma, so u in [0.01, 0.99] is
  // unaffected by it.
  const ReferencePtr ref = make_reference({"uniform", 0.0, 1.0, 101});
  const double sigma = 0.07;
  const Signal s = sample([&](double t) { return gauss(t, 0.5, sigma); }, 4001);
  const TransportMap m = cdt_forward(s, *ref);
  for (std::size_t i = 1; i + 1 < m.grid.size(); ++i) {
    // Inverse normal CDF by bisection on erfc.
    const double u = m.grid[i];
    double lo = -10.0, hi = 10.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::numbers::sqrt2) < u ? lo : hi) = mid;
    }
    CHECK(m.values[i] == doctest::Approx(0.5 + sigma * lo).epsilon(1e-5));
  }
}

TEST_CASE("cdt maps are nondecreasing") {
  const ReferencePtr ref = make_reference();
  RandomSmooth gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Scdt t = scdt_forward(sample(gen.next_mixed(), 800), ref);
    REQUIRE(t.f_plus);
    REQUIRE(t.f_minus);
    CHECK(t.f_plus->monotonicity_margin() >= -1e-9);
    CHECK(t.f_minus->monotonicity_margin() >= -1e-9);
  }
}

TEST_CASE("scdt masses and zero conventions") {
  const ReferencePtr ref = make_reference();
  const Scdt zero = scdt_forward(Signal::zeros(linspace(0, 1, 100)), ref);
  CHECK(zero.is_zero());
  CHECK(zero.a == 0.0);
  CHECK(zero.b == 0.0);
  CHECK(scdt_inverse(zero).is_zero());

  const Signal pos = sample([](double t) { return gauss(t, 0.5, 0.1); }, 500);
  const Scdt tp = scdt_forward(pos, ref);
  CHECK(tp.f_plus);
  CHECK_FALSE(tp.f_minus);
  CHECK(tp.b == 0.0);
  CHECK(tp.a == doctest::Approx(l1_norm(pos)));

  const Scdt tn = scdt_forward(-pos, ref);
  CHECK_FALSE(tn.f_plus);
  CHECK(tn.b == doctest::Approx(l1_norm(pos)));
}

TEST_CASE("inverse of a forward transform reproduces the transform") {
  const ReferencePtr ref = make_reference();
  RandomSmooth gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Scdt t = scdt_forward(sample(gen.next(), 1000), ref);
    const Scdt back = scdt_forward(scdt_inverse(t), ref);
    CHECK(back.a == doctest::Approx(t.a).epsilon(1e-12));
    CHECK(back.b == doctest::Approx(t.b).epsilon(1e-12));
    CHECK(scdt_distance(t, back) < 1e-10);
  }
}

TEST_CASE("round trip error stays below one percent") {
  const ReferencePtr ref = make_reference();
  for (const Fn& f : smooth_suite()) {
    const Signal s = sample(f, 1000);
    CHECK(relative_l1(scdt_inverse(scdt_forward(s, ref)), s) < 1e-2);
  }
}

TEST_CASE("resampled inverse keeps the mass") {
  const ReferencePtr ref = make_reference();
  const Signal s = sample(smooth_suite()[2], 1000);
  const Signal r = scdt_inverse(scdt_forward(s, ref), 700);
  CHECK(r.size() == 700);
  CHECK(l1_norm(r) == doctest::Approx(l1_norm(s)).epsilon(1e-2));
}

TEST_CASE("inverse rejects malformed tuples") {
  const ReferencePtr ref = make_reference({"uniform", 0.0, 1.0, 100});
  const TransportMap id = map_on(ref, [](double x) { return x; });
  Scdt t{ref, id, 1.0, std::nullopt, 0.0};
  CHECK_NOTHROW(scdt_inverse(t));

  Scdt missing{ref, std::nullopt, 1.0, std::nullopt, 0.0};
  CHECK_THROWS_AS(scdt_inverse(missing), ValidationError);
  Scdt negative{ref, id, -1.0, std::nullopt, 0.0};
  CHECK_THROWS_AS(scdt_inverse(negative), ValidationError);
  Scdt decreasing{ref, map_on(ref, [](double x) { return 1.0 - x; }), 1.0, std::nullopt, 0.0};
  CHECK_THROWS_AS(scdt_inverse(decreasing), ValidationError);
  Scdt constant{ref, map_on(ref, [](double) { return 0.5; }), 1.0, std::nullopt, 0.0};
  CHECK_THROWS_WITH_AS(scdt_inverse(constant), "atomic pushforward unsupported", ValidationError);
}

TEST_CASE("relaxed inverse repairs out-of-image tuples") {
  const ReferencePtr ref = make_reference({"uniform", 0.0, 1.0, 200});
  Scdt wiggly{ref, map_on(ref, [](double x) { return x + 0.05 * std::sin(40 * x); }), 1.0, std::nullopt, 0.0};
  const RelaxedInverse r = scdt_inverse_relaxed(wiggly);
  CHECK(r.rearrangement_plus > 0.0);
  CHECK(r.rearrangement_minus == 0.0);
  CHECK(l1_norm(r.signal) == doctest::Approx(1.0).epsilon(1e-9));

  Scdt negative{ref, map_on(ref, [](double x) { return x; }), -0.5, map_on(ref, [](double x) { return 2 + x; }), 1.0};
  const RelaxedInverse n = scdt_inverse_relaxed(negative);
  CHECK(n.mass_clamped);
  const auto [p, m] = jordan_decompose(n.signal);
  CHECK(p.negligible);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-9));

  Scdt constant{ref, map_on(ref, [](double) { return 0.5; }), 2.0, std::nullopt, 0.0};
  CHECK(l1_norm(scdt_inverse_relaxed(constant).signal) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("pushforward of a map") {
  const ReferencePtr ref = make_reference({"uniform", 0.0, 1.0, 400});
  const Signal u = pushforward(map_on(ref, [](double x) { return 2.0 + x; }), *ref);
  CHECK(u.front() == doctest::Approx(2.0));
  CHECK(u.back() == doctest::Approx(3.0));
  CHECK(l1_norm(u) == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(u.values()[i] == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_WITH_AS(pushforward(map_on(ref, [](double) { return 0.3; }), *ref),
                       "atomic pushforward unsupported", ValidationError);
  const Signal bump = pushforward_relaxed(map_on(ref, [](double) { return 0.3; }), *ref);
  CHECK(l1_norm(bump) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("embedding coordinates") {
  const ReferencePtr ref = make_reference();
  RandomSmooth gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Scdt t1 = scdt_forward(sample(gen.next(), 600), ref);
    const Scdt t2 = scdt_forward(sample(gen.next(), 600), ref);
    const EmbeddingVector e1 = flatten(t1, *ref);
    const EmbeddingVector e2 = flatten(t2, *ref);
    CHECK(e1.coords.size() == 2 * ref->size() + 2);
    CHECK(e1.reference == ref->label());
    double d2 = 0.0;
    for (std::size_t i = 0; i < e1.coords.size(); ++i) d2 += (e1.coords[i] - e2.coords[i]) * (e1.coords[i] - e2.coords[i]);
    CHECK(std::sqrt(d2) == doctest::Approx(scdt_distance(t1, t2)).epsilon(1e-6));

    const Scdt back = unflatten(e1, ref);
    CHECK(back.a == doctest::Approx(t1.a).epsilon(1e-14));
    CHECK(scdt_distance(back, t1) < 1e-12);
  }
  const Scdt zero = unflatten(flatten(scdt_forward(Signal::zeros({0.0, 1.0}), ref), *ref), ref);
  CHECK(zero.is_zero());

  EmbeddingVector wrong = flatten(scdt_forward(sample(gen.next(), 100), ref), *ref);
  wrong.coords.pop_back();
  CHECK_THROWS_AS(unflatten(wrong, ref), ValidationError);
  CHECK_THROWS_AS(flatten(scdt_forward(sample(gen.next(), 100), ref), Reference({"uniform", 0, 1, 64})),
                  ValidationError);
}

TEST_CASE("validity of tuples") {
  const ReferencePtr ref = make_reference();
  RandomSmooth gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const ValidityReport r = validate_scdt(scdt_forward(sample(gen.next_mixed(), 1000), ref));
    CHECK(r.in_embedding_space);
    CHECK(r.overlap_checked);
    CHECK(r.overlap == doctest::Approx(0.0));
  }
  // Same map for both parts: the pushforwards coincide.
  const TransportMap id = map_on(ref, [](double x) { return x; });
  const ValidityReport clash = validate_scdt(Scdt{ref, id, 1.0, id, 1.0});
  CHECK_FALSE(clash.in_embedding_space);
  CHECK(clash.overlap == doctest::Approx(1.0).epsilon(1e-6));

  const ValidityReport pairing = validate_scdt(Scdt{ref, std::nullopt, 1.0, std::nullopt, 0.0});
  CHECK_FALSE(pairing.pairing_ok);
  CHECK_FALSE(pairing.in_embedding_space);

  const ValidityReport decreasing = validate_scdt(Scdt{ref, map_on(ref, [](double x) { return -x; }), 1.0, std::nullopt, 0.0});
  CHECK_FALSE(decreasing.monotone);
  CHECK_FALSE(decreasing.in_embedding_space);
}

TEST_CASE("composition property") {
  const ReferencePtr ref = make_reference();
  const Signal s = sample(smooth_suite()[2], 1000);
  for (const Warp& w : {Warp::affine(1.3, 0.1), Warp::power(2.0)}) {
    const Scdt direct = scdt_forward(apply_warp(s, w), ref);
    const Scdt composed = compose_warp(scdt_forward(s, ref), w);
    CHECK(scdt_distance(direct, composed) < 1e-3);
  }
  Warp scaled = Warp::affine(1.0, 0.0);
  scaled.scale = 3.0;
  const Scdt t = scdt_forward(s, ref);
  CHECK(compose_warp(t, scaled).a == doctest::Approx(3.0 * t.a));
  CHECK_THROWS_AS(compose_warp(t, Warp::power(2.0, false)), ValidationError);
}
