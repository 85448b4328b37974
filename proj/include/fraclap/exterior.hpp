#pragma once

#include <vector>

namespace fraclap {

/// Radially symmetric exterior data g(|y|) sampled on a uniform radial table.
///
/// Between samples g is linear; below r_start it is held at the first sample and
/// beyond the last sample it continues as g_last * (r_last / r)^decay_exponent.
struct RadialProfile {
  double r_start = 0.0;
  double dr = 0.0;
  std::vector<double> samples;
  double decay_exponent = 0.0;

  double r_end() const { return r_start + dr * (samples.size() - 1); }
  double operator()(double r) const;
};

/// Values prescribed outside a truncated grid (the "exterior condition" of a
/// nonlocal problem) or the periodic extension of the field itself.
class ExteriorData {
 public:
  enum class Kind { zero, constant, radial, periodic };

  static ExteriorData zero() { return ExteriorData(Kind::zero, 0.0, {}); }
  static ExteriorData constant(double value) { return ExteriorData(Kind::constant, value, {}); }
  static ExteriorData radial(RadialProfile profile) { return ExteriorData(Kind::radial, 0.0, std::move(profile)); }
  static ExteriorData periodic() { return ExteriorData(Kind::periodic, 0.0, {}); }

  Kind kind() const { return kind_; }
  /// Constant value (zero for Kind::zero).
  double value() const { return value_; }
  const RadialProfile& profile() const { return profile_; }
  /// Exterior value at radius r for zero, constant and radial kinds.
  double at_radius(double r) const;

 private:
  ExteriorData(Kind kind, double value, RadialProfile profile)
      : kind_(kind), value_(value), profile_(std::move(profile)) {}

  Kind kind_;
  double value_;
  RadialProfile profile_;
};

const char* to_string(ExteriorData::Kind kind);

}  // namespace fraclap
