#pragma once

#include <cmath>

#include "bqt/noise.hpp"
#include "bqt/qmath.hpp"

namespace bqt {

/// Twice the summed magnitude of the negative eigenvalues of the partial
/// transpose. Partial transposition on either qubit has the same spectrum.
inline double negativity(const DensityMatrix4& rho) {
  const auto ev = hermitian_eigenvalues(partial_transpose(rho, Qubit::B));
  double neg = 0.0;
  for (double e : ev)
    if (e < 0.0) neg -= e;
  return 2.0 * neg;
}

/// Closed form for the correlated-dephasing Bell resource.
inline double negativity_dephasing(double p, double u) {
  check_unit_interval(p, "p");
  check_unit_interval(u, "u");
  return 1.0 - 4.0 * (1.0 - u) * (p - p * p);
}

/// Closed form for the correlated-amplitude-damping Bell resource.
inline double negativity_ad(double p, double u) {
  check_unit_interval(p, "p");
  check_unit_interval(u, "u");
  const double n = (1.0 - p) * (1.0 - p) * (1.0 - u) + u * std::sqrt(1.0 - p);
  return n < 0.0 ? 0.0 : n;
}

inline double negativity_closed(ChannelKind kind, double p, double u) {
  return kind == ChannelKind::dephasing ? negativity_dephasing(p, u) : negativity_ad(p, u);
}

}  // namespace bqt
