#include "relfix/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relfix {

namespace {

void validate_table(const TablePiecewisePhi& t) {
  if (t.pieces.empty()) throw Error("piecewise control function needs at least one piece");
  if (t.pieces.front().start != 0.0) throw Error("first piece must start at t = 0");
  for (std::size_t i = 0; i + 1 < t.pieces.size(); ++i)
    if (!(t.pieces[i].start < t.pieces[i + 1].start))
      throw Error("piece starts must be strictly increasing");
  // Nonnegativity: affine pieces attain extremes at interval ends.
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const auto& p = t.pieces[i];
    const double at_start = p.slope * p.start + p.intercept;
    if (at_start < 0.0) throw Error("control function value dips below zero");
    if (i + 1 < t.pieces.size()) {
      const double right = t.pieces[i + 1].start;
      if (p.slope * right + p.intercept < 0.0)
        throw Error("control function value dips below zero");
    } else if (p.slope < 0.0) {
      throw Error("last piece must not decrease without bound");
    }
  }
}

}  // namespace

ControlFunction::ControlFunction(Family family) : family_(std::move(family)) {
  if (const auto* lin = std::get_if<LinearPhi>(&family_)) {
    if (!(lin->alpha >= 0.0 && lin->alpha < 1.0))
      throw Error("linear coefficient must lie in [0, 1)");
  } else if (const auto* sc = std::get_if<ScaledRationalPhi>(&family_)) {
    if (!(sc->c > 0.0 && sc->c <= 1.0)) throw Error("scale factor must lie in (0, 1]");
  } else if (const auto* tab = std::get_if<TablePiecewisePhi>(&family_)) {
    validate_table(*tab);
  }
}

double ControlFunction::operator()(double t) const {
  if (t < 0.0) throw Error("control functions are defined for t >= 0 only");
  return std::visit(
      [t](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LinearPhi>) {
          return f.alpha * t;
        } else if constexpr (std::is_same_v<F, RationalShrinkPhi>) {
          return t / (1.0 + t);
        } else if constexpr (std::is_same_v<F, ScaledRationalPhi>) {
          return f.c * t / (1.0 + t);
        } else if constexpr (std::is_same_v<F, OmegaOscillatorPhi>) {
          if (t > 1.0 && t <= 1.5) return 0.5 + 0.25 * std::sin(1.0 / (t - 1.0));
          return 0.5 * t;
        } else {
          const TablePiecewisePhi& tab = f;
          std::size_t i = tab.pieces.size() - 1;
          while (i > 0 && tab.pieces[i].start > t) --i;
          return tab.pieces[i].slope * t + tab.pieces[i].intercept;
        }
      },
      family_);
}

std::string ControlFunction::family_name() const {
  switch (family_.index()) {
    case 0: return "linear";
    case 1: return "rational_shrink";
    case 2: return "scaled_rational";
    case 3: return "omega_oscillator";
    default: return "table_piecewise";
  }
}

bool ControlFunction::analytically_in_phi() const {
  switch (family_.index()) {
    case 0:  // alpha*t: continuous, alpha*t < t for t > 0
    case 1:  // t/(1+t): continuous and below the diagonal
    case 2:  // c*t/(1+t)
      return true;
    default:
      return false;
  }
}

bool ControlFunction::analytically_in_omega() const {
  // The oscillator stays below 3/4 on the oscillating stretch and at t/2
  // elsewhere, so every right limsup is below the diagonal.
  return analytically_in_phi() || std::holds_alternative<OmegaOscillatorPhi>(family_);
}

bool ControlFunction::omega_for_iteration() const {
  if (analytically_in_omega()) return true;
  if (const auto* tab = std::get_if<TablePiecewisePhi>(&family_)) return tab->declared_omega;
  return false;
}

bool ControlFunction::operator==(const ControlFunction& other) const {
  if (family_.index() != other.family_.index()) return false;
  if (const auto* a = std::get_if<LinearPhi>(&family_))
    return a->alpha == std::get<LinearPhi>(other.family_).alpha;
  if (const auto* a = std::get_if<ScaledRationalPhi>(&family_))
    return a->c == std::get<ScaledRationalPhi>(other.family_).c;
  if (const auto* a = std::get_if<TablePiecewisePhi>(&family_)) {
    const auto& b = std::get<TablePiecewisePhi>(other.family_);
    if (a->declared_omega != b.declared_omega || a->pieces.size() != b.pieces.size()) return false;
    for (std::size_t i = 0; i < a->pieces.size(); ++i)
      if (a->pieces[i].start != b.pieces[i].start || a->pieces[i].slope != b.pieces[i].slope ||
          a->pieces[i].intercept != b.pieces[i].intercept)
        return false;
    return true;
  }
  return true;
}

double evaluate(const ControlFunction& phi, double t) { return phi(t); }

const char* tri_state_name(TriState s) {
  switch (s) {
    case TriState::Verified: return "verified";
    case TriState::Refuted: return "refuted";
    case TriState::Unknown: return "unknown";
  }
  return "?";
}

WindowScan scan_right_windows(const ControlFunction& phi, double t, int depth,
                              int samples_per_window) {
  if (!(t > 0.0)) throw Error("window scan needs t > 0");
  if (depth < 1 || samples_per_window < 2) throw Error("degenerate window scan");
  WindowScan scan;
  scan.t = t;
  scan.limsup_estimate = std::numeric_limits<double>::infinity();
  scan.oscillation_amplitude = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= depth; ++j) {
    const double radius = t * std::ldexp(1.0, -j);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= samples_per_window; ++i) {
      const double r = t + radius * static_cast<double>(i) / static_cast<double>(samples_per_window);
      const double v = phi(r);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    scan.window_max.push_back(hi);
    scan.window_min.push_back(lo);
    scan.limsup_estimate = std::min(scan.limsup_estimate, hi);
    scan.oscillation_amplitude = std::min(scan.oscillation_amplitude, hi - lo);
  }
  return scan;
}

MembershipVerdict sample_membership(const ControlFunction& phi, double t_max, int grid_size) {
  if (!(t_max > 0.0)) throw Error("t_max must be positive");
  if (grid_size < 100) throw Error("grid too coarse; need at least 100 points");

  MembershipVerdict v;
  v.grid = "grid " + std::to_string(grid_size) + " on (0," + std::to_string(t_max) +
           "]; 20 right windows per point";

  for (int i = 1; i <= grid_size; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(grid_size);
    if (!(phi(t) < t)) {
      v.in_phi = TriState::Refuted;
      v.in_omega = TriState::Refuted;
      v.phi_witness = t;
      v.omega_witness = t;
      return v;
    }
  }

  // phi(t) < t survived the grid; look for sampled evidence that some right
  // limit fails to exist (persistent window oscillation), which refutes the
  // right-limit class but says nothing against the limsup class.
  constexpr double kAmplitudeFloor = 0.05;
  for (int i = 1; i <= grid_size; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(grid_size);
    const WindowScan scan = scan_right_windows(phi, t);
    if (scan.oscillation_amplitude > kAmplitudeFloor) {
      v.in_phi = TriState::Refuted;
      v.phi_witness = t;
      break;
    }
  }
  return v;
}

MembershipVerdict verify_membership(const ControlFunction& phi, double t_max, int grid_size) {
  MembershipVerdict v = sample_membership(phi, t_max, grid_size);

  if (phi.analytically_in_phi()) {
    if (v.in_phi == TriState::Refuted || v.in_omega == TriState::Refuted)
      throw Error("sampling refuted a family whose membership is provable; evaluation is broken");
    v.in_phi = TriState::Verified;
    v.in_omega = TriState::Verified;
  } else if (std::holds_alternative<OmegaOscillatorPhi>(phi.family())) {
    if (v.in_omega == TriState::Refuted)
      throw Error("sampling refuted the oscillator's limsup bound; evaluation is broken");
    v.in_omega = TriState::Verified;
    v.in_phi = TriState::Refuted;
    if (!v.phi_witness) v.phi_witness = 1.0;
  }
  return v;
}

DecayTrace decay_trace(const ControlFunction& phi, double a0, long steps, double threshold) {
  if (!(a0 > 0.0)) throw Error("decay trace needs a positive starting value");
  if (steps < 0) throw Error("step count must be nonnegative");
  if (!phi.omega_for_iteration())
    throw Error("control function is not verified in the Boyd-Wong class");
  DecayTrace trace;
  trace.threshold = threshold;
  trace.values.reserve(static_cast<std::size_t>(steps) + 1);
  double a = a0;
  trace.values.push_back(a);
  for (long i = 0; i < steps; ++i) {
    a = phi(a);
    trace.values.push_back(a);
  }
  trace.converged = trace.values.back() < threshold;
  return trace;
}

std::optional<long> decay_steps_below(const ControlFunction& phi, double a0, double threshold,
                                      long max_steps) {
  if (!(a0 > 0.0)) throw Error("decay trace needs a positive starting value");
  if (!phi.omega_for_iteration())
    throw Error("control function is not verified in the Boyd-Wong class");
  double a = a0;
  for (long i = 0; i <= max_steps; ++i) {
    if (a < threshold) return i;
    a = phi(a);
  }
  return std::nullopt;
}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::vector<Rational> rational_shrink_trace(Rational a0, int steps) {
  if (!(a0.num > 0)) throw Error("decay trace needs a positive starting value");
  if (steps < 0) throw Error("step count must be nonnegative");
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(a0);
  for (int i = 0; i < steps; ++i) {
    const Rational& a = out.back();
    std::int64_t new_den = 0;
    if (__builtin_add_overflow(a.den, a.num, &new_den))
      throw Error("rational iteration overflows 64-bit integers");
    out.emplace_back(a.num, new_den);
  }
  return out;
}

}  // namespace relfix
