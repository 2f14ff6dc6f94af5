#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relfix/core.hpp"

namespace relfix {

/// phi(t) = alpha * t with alpha in [0, 1).
struct LinearPhi {
  double alpha;
};

/// phi(t) = t / (1 + t).
struct RationalShrinkPhi {};

/// phi(t) = c * t / (1 + t) with c in (0, 1].
struct ScaledRationalPhi {
  double c;
};

/// phi(t) = t/2 outside (1, 1.5]; on (1, 1.5] it oscillates as
/// 1/2 + sin(1/(t-1))/4. The right limit at t = 1 does not exist, but the
/// right limsup is 3/4 < 1, which separates the Boyd-Wong class from the
/// right-limit class.
struct OmegaOscillatorPhi {};

/// Piecewise affine control function. Pieces are half-open [start, next)
/// with the last piece extending to infinity; the first start must be 0.
struct TablePiecewisePhi {
  struct Piece {
    double start;
    double slope;
    double intercept;
  };
  std::vector<Piece> pieces;
  /// Sampling cannot certify class membership for arbitrary tables; setting
  /// this asserts Boyd-Wong membership on the user's authority.
  bool declared_omega = false;
};

class ControlFunction {
 public:
  using Family =
      std::variant<LinearPhi, RationalShrinkPhi, ScaledRationalPhi, OmegaOscillatorPhi, TablePiecewisePhi>;

  explicit ControlFunction(Family family);

  static ControlFunction linear(double alpha) { return ControlFunction(LinearPhi{alpha}); }
  static ControlFunction rational_shrink() { return ControlFunction(RationalShrinkPhi{}); }
  static ControlFunction scaled_rational(double c) { return ControlFunction(ScaledRationalPhi{c}); }
  static ControlFunction omega_oscillator() { return ControlFunction(OmegaOscillatorPhi{}); }
  static ControlFunction table(TablePiecewisePhi t) { return ControlFunction(Family(std::move(t))); }

  /// Evaluation at t >= 0; throws on negative input.
  double operator()(double t) const;

  const Family& family() const { return family_; }
  std::string family_name() const;

  /// Membership provable by inspection of the family.
  bool analytically_in_phi() const;
  bool analytically_in_omega() const;
  /// Whether iteration machinery may rely on Boyd-Wong decay: analytic
  /// membership or an explicit declaration.
  bool omega_for_iteration() const;

  bool operator==(const ControlFunction& other) const;

 private:
  Family family_;
};

double evaluate(const ControlFunction& phi, double t);

enum class TriState { Verified, Refuted, Unknown };
const char* tri_state_name(TriState s);

struct MembershipVerdict {
  TriState in_phi = TriState::Unknown;
  TriState in_omega = TriState::Unknown;
  std::optional<double> phi_witness;
  std::optional<double> omega_witness;
  std::string grid;  // description of the sampling that was run
};

/// Diagnostics of phi just to the right of t: per shrinking window
/// (t, t + t*2^-j], j = 1..depth, the sampled max and min. A right limit that
/// exists forces the amplitudes to die out as j grows; persistent amplitude
/// is sampled evidence that it does not.
struct WindowScan {
  double t = 0.0;
  std::vector<double> window_max;
  std::vector<double> window_min;
  /// min over windows of the sampled max: a monotone envelope estimate of the
  /// right limsup.
  double limsup_estimate = 0.0;
  /// min over windows of (max - min): persistent oscillation amplitude.
  double oscillation_amplitude = 0.0;
};

WindowScan scan_right_windows(const ControlFunction& phi, double t, int depth = 20,
                              int samples_per_window = 257);

/// Pure sampling verdict: a grid check of phi(t) < t over (0, t_max] plus the
/// right-window scan at every grid point. Sampling refutes (with a witness t)
/// but never certifies, so unrefuted memberships come back Unknown.
MembershipVerdict sample_membership(const ControlFunction& phi, double t_max = 2.0,
                                    int grid_size = 512);

/// Sampling overlaid with the analytic verdicts for the built-in families.
MembershipVerdict verify_membership(const ControlFunction& phi, double t_max = 2.0,
                                    int grid_size = 512);

struct DecayTrace {
  std::vector<double> values;  // a_0 .. a_steps
  bool converged = false;      // final value below the threshold
  double threshold = 0.0;
};

/// Iterates a_{n+1} = phi(a_n) from a_0 > 0. Requires phi to be usable as a
/// Boyd-Wong function (analytic membership or declared).
DecayTrace decay_trace(const ControlFunction& phi, double a0, long steps, double threshold = 1e-6);

/// First step at which the decay trace drops below `threshold`, scanning at
/// most max_steps applications.
std::optional<long> decay_steps_below(const ControlFunction& phi, double a0, double threshold,
                                      long max_steps);

/// Exact rational arithmetic for the t/(1+t) family.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// a_0, phi(a_0), ..., phi^steps(a_0) under phi(t) = t/(1+t), computed
/// exactly: p/q maps to p/(q+p).
std::vector<Rational> rational_shrink_trace(Rational a0, int steps);

}  // namespace relfix
