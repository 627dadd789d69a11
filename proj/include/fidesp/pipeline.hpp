#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fidesp/coeffs.hpp"
#include "fidesp/krylov.hpp"
#include "fidesp/operators.hpp"

namespace fidesp {

/// Uniform value in the open interval (-1, 1) that depends only on
/// (seed, index): SplitMix64 applied to the pair, top 53 bits as mantissa.
double uniform_noise(std::uint64_t seed, std::uint64_t index);

std::vector<double> uniform_noise_vector(std::uint64_t seed, std::size_t count);

/// One inverse-source experiment.
struct ProblemSpec {
  FractionalParams params;
  Grid grid;
  ScalarFunction a;       ///< variable coefficient, nonzero at interior nodes
  ScalarFunction q;       ///< time profile of the source
  ScalarFunction phi0;    ///< initial condition
  ScalarFunction f_true;  ///< manufactured source; may be empty
  std::uint64_t seed = 0;

  /// a(x) = x, q(t) = t^2, phi0 = 0, f(x) = x sin(pi x), T = 1,
  /// lambda = 5e-3, epsilon = 0.01, rho = 1.
  static ProblemSpec benchmark(double xi, double eta, std::size_t m,
                               std::size_t n, std::uint64_t seed = 0);

  SpaceTimeBlocks blocks() const;
  std::vector<double> sample_space(const ScalarFunction& fn) const;
};

struct FinalData {
  std::vector<double> phi;      ///< u^(n) of the forward problem
  std::vector<double> phi_eps;  ///< phi + epsilon * noise
};

/// Solves the forward problem with f_true (zero if absent) by block forward
/// substitution and perturbs the final state with seeded uniform noise.
FinalData manufacture_final_data(const ProblemSpec& spec);

/// Forward-problem right-hand side: b_{j-1} e^{-j rho dt} phi0 + alpha q_j f.
std::vector<double> forward_rhs(const ProblemSpec& spec,
                                std::span<const double> f);

/// All-at-once right-hand side [b_{j-1} e^{-j rho dt} phi0 ; phi_eps].
std::vector<double> assemble_rhs(const ProblemSpec& spec,
                                 std::span<const double> phi_eps);

enum class PrecondChoice { None, Block, Strang };

std::string to_string(PrecondChoice c);
PrecondChoice parse_precond(const std::string& s);

struct InverseResult {
  std::vector<double> f_rec;
  std::vector<double> u;
  GmresReport report;
  std::optional<double> rel_error_f;
};

/// GMRES on the all-at-once system with the chosen preconditioner. Strang
/// with a non-constant coefficient throws ConfigError.
InverseResult solve_inverse(const ProblemSpec& spec,
                            std::span<const double> phi_eps,
                            PrecondChoice precond, const GmresOptions& opts);

/// Same, for an explicit right-hand side of length (n+1)m.
InverseResult solve_all_at_once(const ProblemSpec& spec,
                                std::span<const double> rhs,
                                PrecondChoice precond,
                                const GmresOptions& opts);

/// sqrt(dx * sum v_i^2), a discrete L2(0,1) norm.
double weighted_norm(std::span<const double> v, double dx);

}  // namespace fidesp
