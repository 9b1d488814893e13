#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "fekit/affine_operator.hpp"
#include "fekit/solver.hpp"

namespace fekit {

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// Quadrature evaluation of the L2 and H1-seminorm errors of one field
/// against an analytic solution, at elevated degree (default 2k+2).
ErrorNorms compute_error_norms(FeSpace& space, const FeFunction& u, int field,
                               const std::vector<ScalarFunc>& exact,
                               const std::vector<std::vector<ScalarFunc>>& exact_gradient,
                               int degree = -1);

/// Manufactured Poisson case: exact solution, gradient and matching forcing
/// for -div(kappa grad u) = f.
struct ManufacturedPoisson {
  ScalarFunc u;
  std::vector<ScalarFunc> grad_u;
  ScalarFunc f;
  double kappa = 1.0;

  static ManufacturedPoisson linear(int dims);  // u = x + y (+ z): in every space
  static ManufacturedPoisson sine(int dims);    // u = prod sin(pi x_i)
};

/// Manufactured Stokes case (2D): exact velocity/pressure and the forcing of
/// -mu div(eps(u)) + grad p = f with div u = 0; pressure has zero mean.
struct ManufacturedStokes {
  std::vector<ScalarFunc> u;
  std::vector<std::vector<ScalarFunc>> grad_u;
  ScalarFunc p;
  std::vector<ScalarFunc> f;
  double mu = 1.0;

  static ManufacturedStokes polynomial();  // u = (y, -x), p linear: in the Q2/Q1 space
  static ManufacturedStokes vortex();      // stream-function flow, u = 0 on the boundary
};

class PoissonCgIntegration : public DiscreteIntegration {
 public:
  double kappa = 1.0;
  ScalarFunc forcing;
  const FeFunction* dirichlet = nullptr;
  void integrate(FeSpace& space, Assembler& assembler) override;
};

class PoissonDgIntegration : public DiscreteIntegration {
 public:
  double kappa = 1.0;
  double tau = 1.0;            // 1 = symmetric interior penalty
  double gamma0 = 10.0;        // penalty gamma0 (k+1)^2 / |F|
  ScalarFunc forcing;
  ScalarFunc dirichlet_value;  // weak boundary data
  void integrate(FeSpace& space, Assembler& assembler) override;
};

class StokesIntegration : public DiscreteIntegration {
 public:
  double mu = 1.0;
  std::vector<ScalarFunc> forcing;
  const FeFunction* dirichlet = nullptr;
  void integrate(FeSpace& space, Assembler& assembler) override;
};

struct PoissonReport {
  int free_dofs = 0, fixed_dofs = 0;
  ErrorNorms errors;
  int iterations = 0;
  double residual = 0.0;
};

/// Conforming Lagrangian Poisson solve with strong Dirichlet data from the
/// manufactured trace, CG/Jacobi solver.
class PoissonCgDriver {
 public:
  PoissonCgDriver(Triangulation tri, int order, ManufacturedPoisson mc);
  PoissonReport run();
  FeSpace& space() { return *space_; }
  FeFunction& solution() { return *solution_; }
  AffineOperator& op() { return *operator_; }

 private:
  ManufacturedPoisson mc_;
  Triangulation tri_;
  std::unique_ptr<FeSpace> space_;
  PoissonCgIntegration integration_;
  std::unique_ptr<FeFunction> solution_;
  std::unique_ptr<AffineOperator> operator_;
};

/// Interior-penalty DG Poisson solve, boundary conditions imposed weakly.
class PoissonDgDriver {
 public:
  PoissonDgDriver(Triangulation tri, int order, ManufacturedPoisson mc, double tau = 1.0,
                  double gamma0 = 10.0);
  PoissonReport run();
  FeSpace& space() { return *space_; }
  FeFunction& solution() { return *solution_; }
  AffineOperator& op() { return *operator_; }

 private:
  ManufacturedPoisson mc_;
  Triangulation tri_;
  std::unique_ptr<FeSpace> space_;
  PoissonDgIntegration integration_;
  std::unique_ptr<FeFunction> solution_;
  std::unique_ptr<AffineOperator> operator_;
};

struct StokesReport {
  int free_dofs = 0, fixed_dofs = 0;
  ErrorNorms velocity;
  double pressure_l2 = 0.0;  // mean adjusted
  double residual = 0.0;
};

/// Taylor-Hood (Q_{k+1} velocity / Q_k pressure) Stokes solve with full
/// velocity Dirichlet data; the pressure constant is pinned at one DOF and
/// errors are mean-adjusted.
class StokesDriver {
 public:
  StokesDriver(Triangulation tri, int pressure_order, ManufacturedStokes mc);
  StokesReport run();
  FeSpace& space() { return *space_; }
  FeFunction& solution() { return *solution_; }
  AffineOperator& op() { return *operator_; }

 private:
  ManufacturedStokes mc_;
  Triangulation tri_;
  std::unique_ptr<FeSpace> space_;
  StokesIntegration integration_;
  std::unique_ptr<FeFunction> solution_;
  std::unique_ptr<AffineOperator> operator_;
};

struct ConvergenceRow {
  int cells_per_dim = 0;
  double l2 = 0.0, h1 = 0.0;
  double l2_order = 0.0, h1_order = 0.0;
};

/// Uniform refinement study on the unit square, printing a TSV table; driver
/// is "poisson-cg", "poisson-dg" or "stokes" (velocity errors).
std::vector<ConvergenceRow> convergence_study(const std::string& driver, int order, int levels,
                                              int base_cells, std::ostream& out);

}  // namespace fekit
