#pragma once

namespace precs {

/// Numerical tolerances shared by all modules. Every field can be overridden
/// from the run configuration.
struct Tolerances {
  double hermitian = 1e-9;   // A = A^dagger
  double trace = 1e-9;       // |tr rho - 1|
  double positivity = 1e-9;  // min eigenvalue >= -positivity
  double unitary = 1e-10;    // |U^dagger U - 1|
  double truncation = 1e-10; // Fock tail mass beyond n_max
  double coherent = 1e-8;    // |a|alpha> - alpha|alpha>|
  double normalization = 1e-6;  // |sum_j w_j chi2_j - 1|
  double null_region = 1e-12;   // chi2 below this is treated as zero
};

}  // namespace precs
