#pragma once

#include "qrec/matrix.hpp"
#include "qrec/states.hpp"

namespace qrec {

/// Projective single-qubit measurement along a Bloch direction.
struct MeasurementBasis {
    double theta = 0.0; // polar angle in [0, pi]
    double phi = 0.0;   // azimuth in [0, 2pi)
    ComplexMatrix proj_plus;
    ComplexMatrix proj_minus;

    static MeasurementBasis from_direction(double theta, double phi);
};

/// Controls the measurement-basis maximization inside discord: a Fibonacci
/// lattice of n_directions over the hemisphere (antipodal directions give
/// the same basis), optionally followed by Nelder-Mead refinement from the
/// best grid point.
struct DiscordConfig {
    int n_directions = 40;
    bool refine = true;
    int refine_iters = 50;
};

/// Von Neumann entropy in bits: -sum lambda log2 lambda, 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of entanglement of a pure bipartite state: S of the reduced
/// state over the leading `split` qubits.  Mixed input (purity below
/// 1 - 1e-8) is a PreconditionError.
double entanglement_entropy(const DensityMatrix& rho, int split);

/// (||PT_A(rho)||_1 - 1)/2; zero on PPT states, at most 1/2 for two qubits.
double negativity(const DensityMatrix& rho, int split);

struct DiscordResult {
    double value = 0.0; // max(raw, 0)
    double raw = 0.0;   // before clamping; < -1e-6 signals a numerical-quality issue
    double theta = 0.0; // maximizing measurement direction
    double phi = 0.0;
};

/// Quantum discord with measurement on qubit 0 (subsystem A is that single
/// qubit, B the rest): D = I(rho) - max over bases of J(rho), where
/// I = S(A) + S(B) - S(AB) and J(basis) = S(B) - sum p_k S(B | outcome k).
/// Outcomes with probability below 1e-12 contribute nothing.
DiscordResult discord_detail(const DensityMatrix& rho, const DiscordConfig& cfg = {});
double discord(const DensityMatrix& rho, const DiscordConfig& cfg = {});

/// Classical correlation J for a fixed measurement direction (exposed for
/// the refinement search and for tests).
double classical_correlation(const DensityMatrix& rho, const MeasurementBasis& basis);

/// |<psi|U|psi>|^2 for a pure input state.
double fidelity_pure(const DensityMatrix& psi, const UnitaryOp& u);

/// Same quantity straight from the state vector.
double fidelity_pure_vec(const ComplexMatrix& psi, const UnitaryOp& u);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity_uhlmann(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace qrec
