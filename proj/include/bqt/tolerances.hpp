#pragma once

// Numerical tolerances shared by every module.

namespace bqt::tol {

// DensityMatrix invariants.
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd = 1e-10;

// Inputs to the eigensolver may deviate from Hermitian by at most this much;
// anything below is symmetrized away.
inline constexpr double hermitize = 1e-10;

// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
// (scaled by max(1, ||h||_F)).
inline constexpr double jacobi_offdiag = 1e-13;
inline constexpr int jacobi_max_sweeps = 64;

// Kraus completeness sum_i w_i K_i^dag K_i = I.
inline constexpr double completeness = 1e-10;

// Bloch vectors may exceed the unit ball by this much before being rejected.
inline constexpr double bloch_ball = 1e-10;

// Probabilities within this distance outside [0, 1] are clamped; larger
// excursions are errors.
inline constexpr double probability_clamp = 1e-12;

// QFI pure-state branch window on 1 - |v|^2 and |v . dv|.
inline constexpr double qfi_pure = 1e-9;

// Maximum change allowed when the quadrature order is doubled.
inline constexpr double quadrature_doubling = 1e-8;

}  // namespace bqt::tol
