#include "fraclap/exterior.hpp"

#include <cmath>

namespace fraclap {

double RadialProfile::operator()(double r) const {
  if (samples.empty()) return 0.0;
  if (r <= r_start) return samples.front();
  const double last = r_end();
  if (r >= last) {
    if (decay_exponent == 0.0) return samples.back();
    return samples.back() * std::pow(last / r, decay_exponent);
  }
  const double t = (r - r_start) / dr;
  const auto k = static_cast<std::size_t>(t);
  if (k + 1 >= samples.size()) return samples.back();
  const double frac = t - static_cast<double>(k);
  return samples[k] + frac * (samples[k + 1] - samples[k]);
}

double ExteriorData::at_radius(double r) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return value_;
    case Kind::radial:
      return profile_(r);
    case Kind::periodic:
      break;
  }
  return 0.0;
}

const char* to_string(ExteriorData::Kind kind) {
  switch (kind) {
    case ExteriorData::Kind::zero:
      return "zero";
    case ExteriorData::Kind::constant:
      return "constant";
    case ExteriorData::Kind::radial:
      return "radial";
    case ExteriorData::Kind::periodic:
      return "periodic";
  }
  return "?";
}

}  // namespace fraclap
