#include <doctest.h>

#include <cmath>

#include "iaf/bifurcation.hpp"
#include "iaf/error.hpp"
#include "iaf/strobe.hpp"
#include "oracle.hpp"

using namespace iaf;

namespace {
const ModelSpec pstar = ModelSpec::linear(-0.5, 0.2, 1.0);
const oracle::Linear lin{-0.5, 0.2, 1.0};
}  // namespace

TEST_CASE("zero-spike collision A0") {
  const auto p = bif_A(pstar, 0, CollisionSide::Zero, 0.5, 2.0);
  // Oracle: relax from the threshold for T - dT, then the pulse level that
  // brings that state back to the threshold in dT.
  const double x0 = lin.flow(0.0, 1.0, 1.0);
  CHECK(x0 == doctest::Approx(0.4 + 0.6 * std::exp(-0.5)).epsilon(1e-14));
  const double e = std::exp(-0.5 * 1.0);
  // theta = xs + (x0 - xs) e, xs = -(b + A)/a  =>  xs = (theta - x0 e)/(1 - e)
  const double xs = (1.0 - x0 * e) / (1.0 - e);
  const double A_oracle = 0.5 * xs - 0.2;
  CHECK(p.A == doctest::Approx(A_oracle).epsilon(1e-12));
  CHECK(p.A == doctest::Approx(0.48196).epsilon(1e-5));
  CHECK(p.fixed_point == doctest::Approx(x0).epsilon(1e-14));
  CHECK(p.residual < kBifResidualTolerance);

  CHECK(std::abs(bif_A(pstar, 0, CollisionSide::Zero, 0.5, 1e-4).A - 0.6) < 1e-3);
  // Left with n = 0 is the same collision.
  CHECK(bif_A(pstar, 0, CollisionSide::Left, 0.5, 2.0).A == p.A);
}

TEST_CASE("right collision asymptote and errors") {
  CHECK(std::abs(bif_A(pstar, 1, CollisionSide::Right, 0.5, 200.0).A - 0.3) < 1e-3);
  CHECK_THROWS_AS(bif_A(pstar, 0, CollisionSide::Right, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(bif_A(pstar, 2, CollisionSide::Zero, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(bif_A(pstar, 1, CollisionSide::Right, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bif_T(pstar, 1, CollisionSide::Right, 0.25, 0.5), NotFoundError);
  CHECK_THROWS_AS(bif_T(pstar, 0, CollisionSide::Zero, 10.0 / 3.0, 0.2), NotFoundError);
}

TEST_CASE("window ordering and fixed-point existence") {
  for (double T : {0.5, 2.0, 7.0}) {
    for (std::int64_t n = 1; n <= 3; ++n) {
      const double a_r = bif_A(pstar, n, CollisionSide::Right, 0.5, T).A;
      const double a_l = bif_A(pstar, n, CollisionSide::Left, 0.5, T).A;
      CHECK(a_r < a_l);
      const double inside = 0.5 * (a_r + a_l);
      CHECK(fixed_point(pstar, Forcing(inside, T, 0.5), n).has_value());
      CHECK_FALSE(fixed_point(pstar, Forcing(a_r * (1 - 1e-6), T, 0.5), n).has_value());
      CHECK_FALSE(fixed_point(pstar, Forcing(a_l * (1 + 1e-6), T, 0.5), n).has_value());
    }
  }
}

TEST_CASE("right collision puts the fixed point on sigma") {
  const auto p = bif_A(pstar, 2, CollisionSide::Right, 0.5, 3.0);
  const auto b = boundary_sigma(pstar, Forcing(p.A * (1 + 1e-12), 3.0, 0.5));
  REQUIRE(b);
  CHECK(b->n == 2);
  CHECK(std::abs(b->sigma - p.fixed_point) < 1e-8);
}

TEST_CASE("curves decrease in T") {
  double prev_r = INFINITY;
  double prev_l = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const double T = 0.1 * std::pow(500.0, i / 19.0);
    const double r = bif_A(pstar, 2, CollisionSide::Right, 0.3, T).A;
    const double l = bif_A(pstar, 2, CollisionSide::Left, 0.3, T).A;
    CHECK(r < prev_r);
    CHECK(l < prev_l);
    prev_r = r;
    prev_l = l;
  }
}

TEST_CASE("period windows") {
  const auto r = bif_T(pstar, 1, CollisionSide::Right, 10.0 / 3.0, 0.2);
  const auto l = bif_T(pstar, 1, CollisionSide::Left, 10.0 / 3.0, 0.2);
  CHECK(r.T < l.T);
  CHECK(r.residual < kBifResidualTolerance);
  for (int i = 1; i < 10; ++i) {
    const double T = r.T + (l.T - r.T) * i / 10.0;
    const auto o = attractor(pstar, Forcing(10.0 / 3.0, T, 0.2));
    CHECK(o.period_p == 1);
    CHECK(o.spikes_n == 1);
  }
  const double delta = *lin.hit(10.0 / 3.0, 0.0);
  const double w = bif_T(pstar, 20, CollisionSide::Left, 10.0 / 3.0, 0.2).T -
                   bif_T(pstar, 20, CollisionSide::Right, 10.0 / 3.0, 0.2).T;
  CHECK(std::abs(w - delta / 0.2) / (delta / 0.2) < 0.1);
}

TEST_CASE("rate limits") {
  const auto p = rate_limits(pstar, 10.0 / 3.0, 0.2);
  const double delta = *lin.hit(10.0 / 3.0, 0.0);
  CHECK(p.r_infinity == doctest::Approx(0.2 / delta).epsilon(1e-12));
  CHECK(p.r_zero == doctest::Approx(1.0 / *lin.hit(10.0 / 3.0 * 0.2, 0.0)).epsilon(1e-12));
  CHECK_FALSE(p.T0.has_value());
  CHECK(p.max_certified);
  CHECK(p.r_max == doctest::Approx(1.0 / p.T1R).epsilon(1e-14));
  CHECK(p.r_max >= p.r_infinity);
  CHECK(p.r_max >= p.r_zero);
  CHECK(p.r_min <= 1.0 / p.T1L);

  const auto c = rate_limits(pstar, 1.287, 0.2);
  CHECK(c.region == Region::ConditionalSpiking);
  CHECK(c.r_infinity == doctest::Approx(0.244).epsilon(1e-3 / 0.244));
  CHECK(c.r_zero == 0.0);
  REQUIRE(c.T0.has_value());
  CHECK(*c.T0 > 0.0);
  CHECK(c.r_min == 0.0);
  CHECK(attractor(pstar, Forcing(1.287, 0.9 * *c.T0, 0.2)).rate == 0.0);

  CHECK(rate_limits(pstar, 0.8333, 0.8).r_infinity == doctest::Approx(0.6048).epsilon(1e-3));
  CHECK_THROWS_AS(rate_limits(pstar, 0.25, 0.5), DomainError);
}

TEST_CASE("contraction margin") {
  const double a1 = bif_A(pstar, 1, CollisionSide::Right, 0.5, 2.0).A;
  CHECK(contraction_margin(pstar, Forcing(a1 * (1 + 1e-9), 2.0, 0.5)) >= 0.0);
  CHECK(contraction_margin(pstar, Forcing(0.25, 2.0, 0.5)) > 0.0);

  for (double T : {0.1, 0.25, 0.31, 0.5, 1.0, 3.0}) {
    const Forcing f(10.0 / 3.0, T, 0.2);
    const double closed = contraction_margin(pstar, f);
    const double sampled = contraction_margin_sampled(pstar, f);
    CHECK(std::abs(closed - sampled) < 1e-6);
    CHECK((closed > 0.0) == (sampled > 0.0));
  }
  // Generic path uses sampled derivatives.
  const auto generic = ModelSpec::linear_as_generic(-0.5, 0.2, 1.0);
  const Forcing f(10.0 / 3.0, 1.0, 0.2);
  CHECK(std::abs(contraction_margin(generic, f) - contraction_margin(pstar, f)) < 1e-6);
}
