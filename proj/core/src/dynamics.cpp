#include "peakon/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "peakon/ode.hpp"

namespace peakon {

namespace {

constexpr double kGuardFraction = 1e-14;

// log(cosh(z)) for z >= 0 without overflow or cancellation.
double log_cosh(double z) {
  if (z < 1.0) {
    const double s = std::sinh(0.5 * z);
    return std::log1p(2.0 * s * s);
  }
  return z - std::numbers::ln2 + std::log1p(std::exp(-2.0 * z));
}

}  // namespace

AntisymmetricIC make_ic(double p0, double q0) {
  if (!std::isfinite(p0) || !(p0 > 0.0))
    throw std::domain_error("make_ic: p0 must be positive and finite, got " + std::to_string(p0));
  if (!std::isfinite(q0) || !(q0 > 0.0))
    throw std::domain_error("make_ic: q0 must be positive and finite, got " + std::to_string(q0));
  const double s = std::sqrt(-std::expm1(-2.0 * q0));
  const double H0 = p0 * s;
  // (p0 + H0)/(p0 - H0) = (1 + s)^2 exp(2 q0), avoiding p0 - H0.
  const double T0 = 2.0 * (std::log1p(s) + q0) / H0;
  return AntisymmetricIC(p0, q0, H0, T0);
}

double AntisymmetricIC::guard_time() const { return T0_ * (1.0 - kGuardFraction); }

PeakonEnsemble AntisymmetricIC::initial_ensemble() const {
  return PeakonEnsemble::antisymmetric_pair(p0_, q0_);
}

double invariant_residual(const AntisymmetricIC& ic, const MomentumState& s) {
  const double e2 = ic.E0();
  return std::abs(s.p * s.p * (-std::expm1(-2.0 * s.q)) - e2) / e2;
}

MomentumState closed_form_state(const AntisymmetricIC& ic, double t) {
  if (!(t >= 0.0))
    throw std::out_of_range("closed_form_state: t must be >= 0, got " + std::to_string(t));
  if (t > ic.guard_time())
    throw std::out_of_range("closed_form_state: t = " + std::to_string(t) +
                            " is at or past the blowup time T0 = " + std::to_string(ic.T0()));
  // With z = H0 (T0 - t)/2 the explicit solution reads p = H0 coth z and
  // q = log cosh z.
  const double z = 0.5 * ic.H0() * (ic.T0() - t);
  return {t, ic.H0() / std::tanh(z), log_cosh(z)};
}

PqRate rhs_pq(const MomentumState& s) {
  const double decay = std::exp(-2.0 * s.q);
  return {0.5 * s.p * std::expm1(-2.0 * s.q), 0.5 * s.p * s.p * decay};
}

BlowupApproach::BlowupApproach(double last_valid_time)
    : std::runtime_error("integrate_pq: approaching blowup, last valid time t = " +
                         std::to_string(last_valid_time)),
      last_valid_time_(last_valid_time) {}

std::vector<MomentumState> integrate_pq(const AntisymmetricIC& ic, double t_end, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("integrate_pq: tol must be positive");
  if (!(t_end >= 0.0) || !(t_end < ic.T0()))
    throw std::domain_error("integrate_pq: t_end must lie in [0, T0)");

  std::vector<MomentumState> out{{0.0, ic.p0(), ic.q0()}};
  ode::State<2> y{ic.q0(), ic.p0()};
  double t = 0.0;
  ode::Settings settings;
  settings.tol = tol;
  auto rhs = [](double tt, const ode::State<2>& s) {
    const PqRate r = rhs_pq({tt, s[1], s[0]});
    return ode::State<2>{r.dq, r.dp};
  };
  try {
    ode::integrate<2>(rhs, t, y, t_end, settings, [&](double tt, const ode::State<2>& s) {
      out.push_back({tt, s[1], s[0]});
    });
  } catch (const ode::StepSizeUnderflow& e) {
    throw BlowupApproach(e.last_time());
  } catch (const ode::NonFiniteState& e) {
    throw BlowupApproach(e.time());
  }
  return out;
}

PeakonEnsemble ClosedFormField::ensemble_at(double t) const {
  if (t > ic_.guard_time()) return {};
  const MomentumState s = closed_form_state(ic_, t);
  return PeakonEnsemble::antisymmetric_pair(s.p, s.q);
}

FieldSample ClosedFormField::sample(double t, double x) const {
  return peakon::sample(ensemble_at(t), x, t);
}

std::vector<double> ClosedFormField::kinks(double t) const { return ensemble_at(t).positions(); }

double ClosedFormField::energy(double t) const { return peakon::energy(ensemble_at(t)); }

double ClosedFormField::max_abs_u(double t) const {
  if (t > ic_.guard_time()) return 0.0;
  const MomentumState s = closed_form_state(ic_, t);
  return ic_.E0() / (2.0 * s.p);
}

ClosedFormField dissipative_field(const AntisymmetricIC& ic) { return ClosedFormField(ic); }

}  // namespace peakon
