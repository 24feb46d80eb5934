#pragma once

#include <memory>

#include "precs/bosonic.hpp"
#include "precs/lindblad_field.hpp"
#include "precs/precs.hpp"

/// Serial kernels with plain left-to-right sums. They mirror the OpenMP
/// kernels and exist for cross-checking and benchmarking.
namespace precs::reference {

/// <alpha|xi> from the closed form with pow and lgamma instead of the
/// recurrence.
Complex bra_fock(Complex alpha, int xi);

ParametricField decompose(const JointState& psi,
                          std::shared_ptr<const PhaseSpaceGrid> grid,
                          const Tolerances& tol = {});

/// Unvalidated sum_j w_j chi2_j |phi_j><phi_j|.
QubitMatrix reconstruct(const ParametricField& field);

double identity_resolution_error(const FockSpace& fs, const PhaseSpaceGrid& grid,
                                 int block);

LindbladField assemble_lindblad_field(const ParametricField& field,
                                      std::span<const InteractionTerm> terms,
                                      const AssemblyOptions& options = {});

QubitMatrix gksl_rhs(const LindbladField& field);

}  // namespace precs::reference
