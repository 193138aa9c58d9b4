#pragma once

// Difference-of-convex Hamiltonian solvers.
//
// The relaxed objective is
//   H(x) = (β/4) Σ x_i^4 - (α/2) Σ x_i^2 - (1/2) xᵀJx
//        = f(x) - g(x),  f = (β/4) Σ x_i^4,  g = (1/2) xᵀ(J + αI)x.
// Minimizing the convex surrogate obtained by linearizing g gives the
// fixed-point map T(x) = cbrt(β⁻¹ (J + αI) x), applied componentwise.
// DOCH iterates T; ADOCH adds Nesterov extrapolation guarded by a look-back
// window on H.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "isingdc/config.hpp"
#include "isingdc/model.hpp"
#include "isingdc/spectral.hpp"
#include "isingdc/trace.hpp"

namespace isingdc {

struct HamiltonianView {
  CouplingMatrix coupling;
  double alpha = 1.0;
  double beta = 1.0;

  HamiltonianView(CouplingMatrix J, double alpha_, double beta_);
  std::size_t size() const { return coupling.size(); }
};

/// (β/4) Σ x⁴ - (α/2) Σ x².
double attractor(std::span<const double> x, double alpha, double beta);

double hamiltonian(const HamiltonianView& H, std::span<const double> x,
                   const MatvecConfig& cfg = {});
/// H(x) given a precomputed product Jx.
double hamiltonian_from_product(const HamiltonianView& H, std::span<const double> x,
                                std::span<const double> jx);
/// f(x) - g(x); same value as hamiltonian() by a different grouping.
double hamiltonian_split(const HamiltonianView& H, std::span<const double> x,
                         const MatvecConfig& cfg = {});

/// ∇H(x)_i = β x_i³ - (Jx)_i - α x_i.
std::vector<double> hamiltonian_gradient(const HamiltonianView& H,
                                         std::span<const double> x,
                                         const MatvecConfig& cfg = {});

/// Real (odd) cube root.
inline double real_cbrt(double v) { return std::cbrt(v); }

std::vector<double> apply_T(const HamiltonianView& H, std::span<const double> x,
                            const MatvecConfig& cfg = {});

/// Uniform on [-λ, λ] \ {0}, λ = sqrt(α/β).
std::vector<double> initial_state(std::size_t n, double alpha, double beta,
                                  std::uint64_t seed);

/// t(k+1) = (1 + sqrt(1 + 4 t(k)²)) / 2.
double momentum_t_next(double t);

/// Algorithm 1. x0 defaults to initial_state(params.seed). For instances with
/// a field the solver runs on the bordered (n+1)-spin matrix, so x0 then has
/// n+1 entries; returned spins are in the original n-spin model.
SolveResult doch_solve(const ProblemInstance& instance, const SolverParams& params,
                       std::optional<std::vector<double>> x0 = std::nullopt,
                       const SolveOptions& options = {});

/// Algorithm 2 (momentum with a q-deep acceptance window).
SolveResult adoch_solve(const ProblemInstance& instance, const SolverParams& params,
                        std::optional<std::vector<double>> x0 = std::nullopt,
                        const SolveOptions& options = {});

/// ||(1/(3β)) diag(x*)⁻² (J + αI)||₂ by power iteration on MᵀM.
/// Throws std::domain_error if any component of x* is zero.
double jacobian_norm_at(const HamiltonianView& H, std::span<const double> x_star,
                        const MatvecConfig& cfg = {}, double tol = 1e-10,
                        std::int64_t max_iters = 100000);

}  // namespace isingdc
