#include <cmath>
#include <limits>

#include "doctest.h"
#include "generators.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/quadrature.hpp"

using namespace peakon;
using doctest::Approx;

namespace {

// The explicit formulas for T0, p(t), q(t) evaluated literally in long double.
struct Literal {
  long double H0, T0;
};

Literal literal(long double p0, long double q0) {
  const long double H0 = p0 * std::sqrt(1.0L - std::exp(-2.0L * q0));
  return {H0, std::log((p0 + H0) / (p0 - H0)) / H0};
}

long double literal_p(long double p0, long double H0, long double t) {
  const long double e = std::exp(H0 * t);
  return H0 * ((p0 + H0) + (p0 - H0) * e) / ((p0 + H0) - (p0 - H0) * e);
}

long double literal_q(long double p0, long double q0, long double H0, long double t) {
  return q0 + std::log(((p0 + H0) * std::exp(-H0 * t / 2) + (p0 - H0) * std::exp(H0 * t / 2)) / (2 * p0));
}

}  // namespace

TEST_CASE("make_ic validates") {
  CHECK_THROWS_AS((void)make_ic(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)make_ic(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS((void)make_ic(std::numeric_limits<double>::infinity(), 1.0), std::domain_error);
  CHECK_THROWS_AS((void)make_ic(1.0, std::nan("")), std::domain_error);
}

TEST_CASE("frozen explosion data") {
  const auto a = make_ic(1.0, 1.0);
  CHECK(a.H0() == Approx(0.92987349503219378).epsilon(1e-15));
  CHECK(a.T0() == Approx(3.5649031035037587).epsilon(1e-15));
  const auto b = make_ic(2.0, 0.5);
  CHECK(b.H0() == Approx(1.5901201952413002).epsilon(1e-15));
  CHECK(b.T0() == Approx(1.3647251386348609).epsilon(1e-15));
  const auto c = make_ic(0.5, 2.0);
  CHECK(c.H0() == Approx(0.49539992963041129).epsilon(1e-15));
  CHECK(c.T0() == Approx(10.854004356896997).epsilon(1e-15));
  CHECK(a.E0() == Approx(1.0 - std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("frozen trajectory values") {
  const auto ic = make_ic(1.0, 1.0);
  const auto s0 = closed_form_state(ic, 0.0);
  CHECK(s0.p == Approx(1.0).epsilon(1e-15));
  CHECK(s0.q == Approx(1.0).epsilon(1e-15));
  const auto half = closed_form_state(ic, ic.T0() / 2);
  CHECK(half.p == Approx(1.3678794411714423).epsilon(1e-14));
  CHECK(half.q == Approx(0.31005725347913876).epsilon(1e-14));
  const auto near = closed_form_state(ic, ic.T0() * (1.0 - 1e-6));
  CHECK(near.p == Approx(561025.06630155950).epsilon(1e-8));
  CHECK(near.q == Approx(1.3735776337953088e-12).epsilon(1e-8));
  const auto ms = closed_form_state(ic, ic.T0() - 1e-3);
  CHECK(ms.p == Approx(2000.0001441107841).epsilon(1e-11));
  CHECK(ms.q == Approx(1.0808308570143889e-7).epsilon(1e-11));
}

TEST_CASE("closed form agrees with the literal explicit formulas") {
  for (auto [p0, q0] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}, {3.0, 0.1}}) {
    const auto ic = make_ic(p0, q0);
    const auto lit = literal(p0, q0);
    CHECK(ic.H0() == Approx(static_cast<double>(lit.H0)).epsilon(1e-15));
    CHECK(ic.T0() == Approx(static_cast<double>(lit.T0)).epsilon(1e-14));
    for (int k = 0; k <= 20; ++k) {
      const double t = ic.T0() * 0.9 * k / 20.0;
      const auto s = closed_form_state(ic, t);
      CHECK(s.p == Approx(static_cast<double>(literal_p(p0, lit.H0, t))).epsilon(1e-12));
      CHECK(s.q == Approx(static_cast<double>(literal_q(p0, q0, lit.H0, t))).epsilon(1e-11));
    }
  }
}

TEST_CASE("closed form refuses times outside [0, T0)") {
  const auto ic = make_ic(1.0, 1.0);
  CHECK_THROWS_AS((void)closed_form_state(ic, -1e-9), std::out_of_range);
  CHECK_THROWS_AS((void)closed_form_state(ic, ic.T0()), std::out_of_range);
  CHECK_NOTHROW((void)closed_form_state(ic, ic.guard_time()));
}

TEST_CASE("right-hand side of the momentum system") {
  const auto r = rhs_pq({0.0, 1.0, 1.0});
  CHECK(r.dq == Approx(-0.43233235838169365).epsilon(1e-15));
  CHECK(r.dp == Approx(0.067667641618306346).epsilon(1e-15));
}

TEST_CASE("limits at the collision") {
  const auto ic = make_ic(1.0, 1.0);
  double last_p = 0.0, last_q = 2.0;
  for (double gap : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const auto s = closed_form_state(ic, ic.T0() - gap);
    CHECK(s.p > last_p);
    CHECK(s.q < last_q);
    last_p = s.p;
    last_q = s.q;
  }
  const auto s = closed_form_state(ic, ic.T0() * (1.0 - 1e-6));
  CHECK(s.p * s.q < 1e-6);
}

TEST_CASE("property: invariant and monotonicity along random data") {
  gen::for_all(11, 30, [](gen::Rng& rng, int) {
    const auto ic = make_ic(rng.uniform(0.1, 5.0), rng.uniform(0.05, 4.0));
    double prev_p = 0.0, prev_q = 1e300;
    for (int k = 0; k < 50; ++k) {
      const double t = ic.T0() * (1.0 - 1e-6) * k / 49.0;
      const auto s = closed_form_state(ic, t);
      CHECK(invariant_residual(ic, s) <= 1e-10);
      CHECK(s.p > 0.0);
      CHECK(s.q > 0.0);
      CHECK(s.p >= prev_p);
      CHECK(s.q <= prev_q);
      prev_p = s.p;
      prev_q = s.q;
    }
  });
}

TEST_CASE("integrated trajectory matches the closed form") {
  const auto ic = make_ic(1.0, 1.0);
  const auto traj = integrate_pq(ic, ic.T0() - 1e-3, 1e-10);
  REQUIRE(traj.size() > 10);
  CHECK(traj.front().t == 0.0);
  CHECK(traj.back().t == Approx(ic.T0() - 1e-3));
  for (const auto& s : traj) {
    const auto c = closed_form_state(ic, s.t);
    CHECK(s.p == Approx(c.p).epsilon(1e-7));
    CHECK(s.q == Approx(c.q).epsilon(1e-7));
  }
  CHECK_THROWS_AS((void)integrate_pq(ic, ic.T0(), 1e-10), std::domain_error);
  CHECK_THROWS_AS((void)integrate_pq(ic, 1.0, 0.0), std::domain_error);
}

TEST_CASE("closed-form field before and after the collision") {
  const auto ic = make_ic(1.0, 1.0);
  const ClosedFormField field(ic);
  CHECK(field.provenance() == Provenance::closed_form);
  CHECK(field.u(0.0, -1.0) == Approx(0.5 * (1.0 - std::exp(-2.0))));
  CHECK(field.energy(0.0) == Approx(ic.E0()).epsilon(1e-14));
  CHECK(field.energy(0.5 * ic.T0()) == Approx(ic.E0()).epsilon(1e-13));
  CHECK(field.max_abs_u(0.0) == Approx(ic.E0() / 2.0));
  for (double t : {ic.T0(), ic.T0() + 1.0, 10.0 * ic.T0()}) {
    CHECK(field.ensemble_at(t).empty());
    CHECK(field.u(t, 0.3) == 0.0);
    CHECK(field.energy(t) == 0.0);
    CHECK(field.kinks(t).empty());
  }
  const auto k = field.kinks(0.5 * ic.T0());
  REQUIRE(k.size() == 2);
  CHECK(k[0] == Approx(-closed_form_state(ic, 0.5 * ic.T0()).q));
  CHECK(field.collapse()->hi == ic.q0());
  // sup |u| is attained at the peaks
  const double t = 0.7 * ic.T0();
  const double q = closed_form_state(ic, t).q;
  CHECK(std::abs(field.u(t, -q)) == Approx(field.max_abs_u(t)).epsilon(1e-13));
  CHECK(energy_quadrature(field, t).value == Approx(ic.E0()).epsilon(1e-10));
}

TEST_CASE("closed-form field is odd in x") {
  const auto ic = make_ic(1.3, 0.7);
  const ClosedFormField field(ic);
  gen::for_all(7, 50, [&](gen::Rng& rng, int) {
    const double t = rng.uniform(0.0, ic.T0());
    const double x = rng.uniform(-5.0, 5.0);
    CHECK(field.u(t, -x) == Approx(-field.u(t, x)).epsilon(1e-13).scale(1.0));
    CHECK(field.sample(t, -x).P == Approx(field.sample(t, x).P).epsilon(1e-13));
  });
}
