#include <doctest.h>

#include <cmath>
#include <random>

#include "iaf/bifurcation.hpp"
#include "iaf/error.hpp"
#include "iaf/strobe.hpp"
#include "oracle.hpp"

using namespace iaf;

namespace {
const ModelSpec pstar = ModelSpec::linear(-0.5, 0.2, 1.0);
const oracle::Linear lin{-0.5, 0.2, 1.0};
}  // namespace

TEST_CASE("strobe images") {
  const Forcing f(10.0 / 3.0, 1.0, 0.2);
  const auto r0 = strobe(pstar, f, 0.0);
  CHECK(r0.spikes == 0);
  CHECK(r0.spike_times.empty());
  CHECK(r0.image == doctest::Approx(0.582650).epsilon(1e-6));

  const auto r1 = strobe(pstar, f, 0.5);
  const auto o1 = lin.strobe(10.0 / 3.0, 1.0, 0.2, 0.5);
  REQUIRE(r1.spikes == 1);
  REQUIRE(o1.spikes == 1);
  CHECK(r1.spike_times[0] == doctest::Approx(o1.times[0]).epsilon(1e-12));
  CHECK(r1.image == doctest::Approx(o1.image).epsilon(1e-12));
  CHECK(r1.spike_times[0] == doctest::Approx(0.1583941).epsilon(1e-6));
  CHECK(r1.image == doctest::Approx(0.2293962).epsilon(1e-6));

  const auto silent = strobe(pstar, Forcing(0.0, 3.0, 0.4), 0.7);
  CHECK(silent.spikes == 0);
  CHECK(silent.image == doctest::Approx(lin.flow(0.0, 3.0, 0.7)).epsilon(1e-13));

  CHECK_THROWS_AS(strobe(pstar, f, 1.0), DomainError);
  CHECK_THROWS_AS(strobe(pstar, f, -0.1), DomainError);
}

TEST_CASE("strobe against event oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double A = 6.0 * u(rng);
    const double T = 0.01 + 8.0 * u(rng);
    const double d = 0.02 + 0.96 * u(rng);
    const double x0 = 0.999 * u(rng);
    const auto r = strobe(pstar, Forcing(A, T, d), x0);
    const auto o = lin.strobe(A, T, d, x0);
    REQUIRE(r.spikes == o.spikes);
    CHECK(std::abs(r.image - o.image) < 1e-12);
    CHECK(r.image >= 0.0);
    CHECK(r.image < 1.0);
    REQUIRE(r.spike_times.size() == static_cast<std::size_t>(r.spikes));
    for (std::size_t k = 0; k < r.spike_times.size(); ++k) {
      CHECK(std::abs(r.spike_times[k] - o.times[k]) < 1e-10);
      CHECK(r.spike_times[k] > 0.0);
      CHECK(r.spike_times[k] <= d * T);
      if (k > 0) CHECK(r.spike_times[k] > r.spike_times[k - 1]);
    }
  }
}

TEST_CASE("runaway guard") {
  const StroboscopicMap capped(pstar, Forcing(10.0 / 3.0, 100.0, 0.5), 10);
  CHECK_THROWS_AS(capped.step(0.0), RunawayError);
}

TEST_CASE("boundary sigma") {
  const auto s1 = boundary_sigma(pstar, Forcing(10.0 / 3.0, 1.0, 0.2));
  REQUIRE(s1);
  CHECK(s1->n == 1);
  // Backward flow from the threshold over the whole pulse.
  const double oracle_sigma = lin.flow(10.0 / 3.0, -0.2, 1.0);
  CHECK(s1->sigma == doctest::Approx(oracle_sigma).epsilon(1e-12));
  CHECK(s1->sigma == doctest::Approx(0.361963).epsilon(1e-6));

  const auto s4 = boundary_sigma(pstar, Forcing(10.0 / 3.0, 5.0, 0.2));
  REQUIRE(s4);
  CHECK(s4->n == 4);
  const double delta = *lin.hit(10.0 / 3.0, 0.0);
  CHECK(s4->sigma == doctest::Approx(lin.flow(10.0 / 3.0, -(1.0 - 3.0 * delta), 1.0)).epsilon(1e-12));
  CHECK(s4->sigma == doctest::Approx(0.7381205).epsilon(1e-6));

  CHECK_FALSE(boundary_sigma(pstar, Forcing(0.25, 1.0, 0.5)));
}

TEST_CASE("boundary splits the spike count") {
  for (double T : {0.7, 1.0, 3.3, 5.0, 12.0}) {
    const Forcing f(10.0 / 3.0, T, 0.2);
    const auto b = boundary_sigma(pstar, f);
    REQUIRE(b);
    const auto at = strobe(pstar, f, b->sigma);
    CHECK(at.spikes == b->n);
    CHECK(strobe(pstar, f, std::nextafter(b->sigma, 0.0)).spikes == b->n - 1);
    const double right = strobe(pstar, f, b->sigma + 1e-11).image;
    CHECK(std::abs(at.image - right) < 1e-9);
    for (int i = 0; i < 200; ++i) {
      const double x = 0.999 * i / 199.0;
      CHECK(strobe(pstar, f, x).spikes == (x >= b->sigma ? b->n : b->n - 1));
    }
  }
}

TEST_CASE("rotation numbers and words") {
  CHECK(rotation_number("LR") == Rational(1, 2));
  CHECK(rotation_number("LLLLR") == Rational(1, 5));
  CHECK(rotation_number("L") == Rational(0, 1));
  CHECK_THROWS_AS(rotation_number("LXR"), DomainError);
  CHECK_THROWS_AS(rotation_number(""), DomainError);
  CHECK(canonical_rotation("RLRLR") == "LRLRR");
  CHECK(canonical_rotation("RL") == "LR");
  CHECK(canonical_rotation("RRL") == "LRR");
  CHECK(canonical_rotation("L") == "L");
}

TEST_CASE("attractor in the silent region") {
  const Forcing f(0.25, 2.0, 0.5);
  const auto o = attractor(pstar, f);
  CHECK(o.converged);
  CHECK(o.period_p == 1);
  CHECK(o.spikes_n == 0);
  CHECK(o.eta == Rational(0, 1));
  CHECK(o.rho == Rational(0, 1));
  CHECK(o.rate == 0.0);
  CHECK(o.single_branch);
  CHECK(o.word == "L");
  CHECK(o.points[0] == doctest::Approx(lin.silent_fixed_point(0.25, 2.0, 0.5)).epsilon(1e-9));
  CHECK(std::abs(o.points[0] - 0.5887703) < 1e-6);
  CHECK(o.contraction_margin > 0.0);
}

TEST_CASE("attractor inside the one-spike window") {
  const double t_r = bif_T(pstar, 1, CollisionSide::Right, 10.0 / 3.0, 0.2).T;
  const double t_l = bif_T(pstar, 1, CollisionSide::Left, 10.0 / 3.0, 0.2).T;
  const double T = 0.5 * (t_r + t_l);
  const auto o = attractor(pstar, Forcing(10.0 / 3.0, T, 0.2));
  CHECK(o.converged);
  CHECK(o.period_p == 1);
  CHECK(o.spikes_n == 1);
  CHECK(o.eta == Rational(1, 1));
  CHECK(o.rate == doctest::Approx(1.0 / T).epsilon(1e-15));
}

TEST_CASE("attractor invariants and long periods") {
  const auto o = attractor(pstar, Forcing(10.0 / 3.0, 100.0, 0.2));
  CHECK(o.converged);
  CHECK((o.eta == Rational(65, 1) || o.eta == Rational(66, 1)));
  CHECK(std::abs(o.rate - 0.2 / *lin.hit(10.0 / 3.0, 0.0)) / 0.6554 < 0.02);

  const Forcing f(10.0 / 3.0, 1.0, 0.2);
  const auto q = attractor(pstar, f);
  REQUIRE(q.converged);
  CHECK(q.eta == Rational(q.spikes_n, q.period_p));
  CHECK(q.rate == doctest::Approx(q.eta.to_double() / 1.0).epsilon(1e-15));
  CHECK(q.word.size() == static_cast<std::size_t>(q.period_p));
  CHECK(q.word == canonical_rotation(q.word));
  // eta = n + rho when the word mixes n and n + 1 spikes.
  const auto b = boundary_sigma(pstar, f);
  REQUIRE(b);
  CHECK(q.eta == Rational(b->n - 1, 1) + q.rho);
  double x = q.points[0];
  for (std::int64_t k = 0; k < q.period_p; ++k) x = strobe(pstar, f, x).image;
  CHECK(std::abs(x - q.points[0]) < 1e-9);
}

TEST_CASE("attractor seed independence") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int i = 0; i < 40; ++i) {
    const Forcing f(0.5 + 4.0 * u(rng), 0.3 + 6.0 * u(rng), 0.05 + 0.9 * u(rng));
    if (!(contraction_margin(pstar, f) > 0.0)) continue;
    AttractorOptions a;
    a.seed = 0.999 * u(rng);
    AttractorOptions b;
    b.seed = 0.999 * u(rng);
    const auto oa = attractor(pstar, f, a);
    const auto ob = attractor(pstar, f, b);
    CHECK(oa.period_p == ob.period_p);
    CHECK(oa.spikes_n == ob.spikes_n);
    CHECK(oa.eta == ob.eta);
    CHECK(oa.word == ob.word);
    CHECK(std::abs(oa.rate - ob.rate) < 1e-6);
    ++tested;
  }
  CHECK(tested > 10);
}

TEST_CASE("fixed points by branch") {
  const auto x0 = fixed_point(pstar, Forcing(0.25, 2.0, 0.5), 0);
  REQUIRE(x0);
  CHECK(*x0 == doctest::Approx(lin.silent_fixed_point(0.25, 2.0, 0.5)).epsilon(1e-12));
  CHECK(std::abs(*x0 - 0.5887703) < 1e-6);
  CHECK_FALSE(fixed_point(pstar, Forcing(0.25, 2.0, 0.5), 1));

  const double t_r = bif_T(pstar, 1, CollisionSide::Right, 10.0 / 3.0, 0.2).T;
  const double t_l = bif_T(pstar, 1, CollisionSide::Left, 10.0 / 3.0, 0.2).T;
  const Forcing f(10.0 / 3.0, 0.5 * (t_r + t_l), 0.2);
  const auto x1 = fixed_point(pstar, f, 1);
  REQUIRE(x1);
  CHECK(std::abs(strobe(pstar, f, *x1).image - *x1) < 1e-12);
  CHECK_FALSE(fixed_point(pstar, Forcing(10.0 / 3.0, 0.5 * t_r, 0.2), 1));
  CHECK_THROWS_AS(fixed_point(pstar, f, -1), DomainError);
}

TEST_CASE("nonlinear field against RK4") {
  auto f = [](double x) { return 0.2 - 0.5 * x - 0.3 * x * x; };
  const auto quad = ModelSpec::generic(f, [](double x) { return -0.5 - 0.6 * x; }, 1.0);
  REQUIRE(validate_hypotheses(quad).passed());
  const oracle::Rk4 rk{f, 1.0, 1e-4};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double A = 4.0 * u(rng);
    const double T = 0.1 + 3.0 * u(rng);
    const double d = 0.1 + 0.8 * u(rng);
    const double x0 = 0.99 * u(rng);
    const auto r = strobe(quad, Forcing(A, T, d), x0);
    const auto o = rk.strobe(A, T, d, x0);
    CHECK(r.spikes == o.spikes);
    CHECK(std::abs(r.image - o.image) < 1e-6);
  }
}
