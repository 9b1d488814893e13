#include "fekit/drivers.hpp"

#include <cmath>
#include <ostream>

#include "fekit/kernels.hpp"

namespace fekit {

ErrorNorms compute_error_norms(FeSpace& space, const FeFunction& u, int field,
                               const std::vector<ScalarFunc>& exact,
                               const std::vector<std::vector<ScalarFunc>>& exact_gradient,
                               int degree) {
  const Triangulation& tri = space.triangulation();
  const int d = tri.num_dims();

  // Elevated-degree scratch integration objects, one set per reference FE.
  std::map<int, int> cache;
  std::vector<Quadrature> quads;
  std::vector<CellMap> maps;
  std::vector<CellIntegrator> integrators;
  const ReferenceFe geo =
      make_reference_fe(d, tri.topology(), FeType::lagrangian, 1, FieldType::scalar, true);

  double l2 = 0.0, h1 = 0.0;
  std::vector<double> dofs;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const ReferenceFe& fe = space.ref_fe(field, cell);
    if (fe.num_shape_functions() == 0) continue;
    const int id = space.ref_fe_id(field, cell);
    auto it = cache.find(id);
    if (it == cache.end()) {
      const int deg = degree >= 0 ? degree : 2 * fe.order() + 2;
      quads.push_back(make_quadrature(d, tri.topology(), deg));
      maps.emplace_back();
      maps.back().create(quads.back(), geo);
      integrators.emplace_back();
      integrators.back().create(quads.back(), fe);
      it = cache.emplace(id, static_cast<int>(quads.size()) - 1).first;
    }
    const Quadrature& q = quads[static_cast<std::size_t>(it->second)];
    CellMap& map = maps[static_cast<std::size_t>(it->second)];
    CellIntegrator& ci = integrators[static_cast<std::size_t>(it->second)];
    map.update(tri.cell_node_coords(cell));
    ci.update(map);
    space.gather_cell_values(u, cell, field, dofs);

    const ShapeTable& phys = ci.physical();
    const int nc = phys.num_components;
    for (int p = 0; p < q.num_points(); ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      const Vec x = map.physical_point(p);
      for (int c = 0; c < nc; ++c) {
        double uh = 0.0;
        Vec gh;
        for (int a = 0; a < phys.num_functions; ++a) {
          uh += dofs[static_cast<std::size_t>(a)] * phys.value(a, p, c);
          for (int i = 0; i < d; ++i) gh[i] += dofs[static_cast<std::size_t>(a)] * phys.gradient(a, p, c, i);
        }
        const double diff = uh - exact[static_cast<std::size_t>(c)](x);
        l2 += w * diff * diff;
        for (int i = 0; i < d; ++i) {
          const double gd = gh[i] - exact_gradient[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)](x);
          h1 += w * gd * gd;
        }
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

ManufacturedPoisson ManufacturedPoisson::linear(int dims) {
  ManufacturedPoisson mc;
  mc.u = [dims](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < dims; ++i) s += x[i];
    return s;
  };
  for (int i = 0; i < dims; ++i) mc.grad_u.push_back([](const Vec&) { return 1.0; });
  for (int i = dims; i < max_space_dims; ++i) mc.grad_u.push_back([](const Vec&) { return 0.0; });
  mc.f = [](const Vec&) { return 0.0; };
  return mc;
}

ManufacturedPoisson ManufacturedPoisson::sine(int dims) {
  ManufacturedPoisson mc;
  mc.u = [dims](const Vec& x) {
    double s = 1.0;
    for (int i = 0; i < dims; ++i) s *= std::sin(M_PI * x[i]);
    return s;
  };
  for (int i = 0; i < dims; ++i)
    mc.grad_u.push_back([dims, i](const Vec& x) {
      double s = M_PI * std::cos(M_PI * x[i]);
      for (int j = 0; j < dims; ++j)
        if (j != i) s *= std::sin(M_PI * x[j]);
      return s;
    });
  for (int i = dims; i < max_space_dims; ++i) mc.grad_u.push_back([](const Vec&) { return 0.0; });
  mc.f = [dims](const Vec& x) {
    double s = dims * M_PI * M_PI;
    for (int i = 0; i < dims; ++i) s *= std::sin(M_PI * x[i]);
    return s;
  };
  return mc;
}

ManufacturedStokes ManufacturedStokes::polynomial() {
  ManufacturedStokes mc;
  mc.u = {[](const Vec& x) { return x[1]; }, [](const Vec& x) { return -x[0]; }};
  mc.grad_u = {{[](const Vec&) { return 0.0; }, [](const Vec&) { return 1.0; }},
               {[](const Vec&) { return -1.0; }, [](const Vec&) { return 0.0; }}};
  // p = x + 2y - 3/2 has zero mean on the unit square
  mc.p = [](const Vec& x) { return x[0] + 2.0 * x[1] - 1.5; };
  // eps(u) = 0 for this rotation, so f = grad p
  mc.f = {[](const Vec&) { return 1.0; }, [](const Vec&) { return 2.0; }};
  mc.mu = 1.0;
  return mc;
}

namespace {

// a(t) = t^2 (1-t)^2 and its derivatives
double bump(double t) { return t * t * (1 - t) * (1 - t); }
double bump1(double t) { return 2 * t - 6 * t * t + 4 * t * t * t; }
double bump2(double t) { return 2 - 12 * t + 12 * t * t; }
double bump3(double t) { return -12 + 24 * t; }

}  // namespace

ManufacturedStokes ManufacturedStokes::vortex() {
  // stream function psi = a(x) a(y): u = (psi_y, -psi_x), zero on the boundary
  ManufacturedStokes mc;
  mc.mu = 1.0;
  mc.u = {[](const Vec& x) { return bump(x[0]) * bump1(x[1]); },
          [](const Vec& x) { return -bump1(x[0]) * bump(x[1]); }};
  mc.grad_u = {{[](const Vec& x) { return bump1(x[0]) * bump1(x[1]); },
                [](const Vec& x) { return bump(x[0]) * bump2(x[1]); }},
               {[](const Vec& x) { return -bump2(x[0]) * bump(x[1]); },
                [](const Vec& x) { return -bump1(x[0]) * bump1(x[1]); }}};
  mc.p = [](const Vec& x) { return x[0] * x[0] + x[1] * x[1] - 2.0 / 3.0; };
  // f = -(mu/2) lap(u) + grad p for the eps(u):eps(v) form of a div-free u
  const double mu = mc.mu;
  mc.f = {[mu](const Vec& x) {
            const double lap = bump2(x[0]) * bump1(x[1]) + bump(x[0]) * bump3(x[1]);
            return -0.5 * mu * lap + 2.0 * x[0];
          },
          [mu](const Vec& x) {
            const double lap = -bump3(x[0]) * bump(x[1]) - bump1(x[0]) * bump2(x[1]);
            return -0.5 * mu * lap + 2.0 * x[1];
          }};
  return mc;
}

void PoissonCgIntegration::integrate(FeSpace& space, Assembler& assembler) {
  CellDofs dofs;
  std::vector<double> elmat, elvec, weights;
  for (int cell = 0; cell < space.triangulation().num_cells(); ++cell) {
    space.update_cell(cell);
    const CellIntegrator& ci = space.cell_integrator(cell, 0);
    const Quadrature& q = space.cell_quadrature(cell);
    const CellMap& map = space.cell_map(cell);
    const int n = ci.fe().num_shape_functions();
    if (n == 0) continue;
    const int d = space.triangulation().num_dims();
    const int np = q.num_points();

    elmat.assign(static_cast<std::size_t>(n) * n, 0.0);
    elvec.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(np) * d, 0.0);
    for (int p = 0; p < np; ++p) {
      const double w = kappa * q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      for (int i = 0; i < d; ++i) weights[static_cast<std::size_t>(p * d + i)] = w;
    }
    // elmat_ab = sum_gp kappa w |J| grad phi_a . grad phi_b
    kernels::weighted_gram(np * d, n, n, weights.data(), ci.gradients_panel().data(),
                           ci.gradients_panel().data(), elmat.data());
    for (int p = 0; p < np; ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p)) *
                       forcing(map.physical_point(p));
      const double* vals = ci.values_panel().data() + static_cast<std::size_t>(p) * n;
      kernels::axpy(w, vals, elvec.data(), n);
    }
    dofs.collect(space, cell);
    assembler.assemble_cell(elmat, elvec, dofs, dirichlet);
  }
}

void PoissonDgIntegration::integrate(FeSpace& space, Assembler& assembler) {
  CellDofs dofs, dofs_minus;
  std::vector<double> elmat, elvec, weights;

  // cell terms as in the conforming driver
  for (int cell = 0; cell < space.triangulation().num_cells(); ++cell) {
    space.update_cell(cell);
    const CellIntegrator& ci = space.cell_integrator(cell, 0);
    const Quadrature& q = space.cell_quadrature(cell);
    const CellMap& map = space.cell_map(cell);
    const int n = ci.fe().num_shape_functions();
    const int d = space.triangulation().num_dims();
    const int np = q.num_points();
    elmat.assign(static_cast<std::size_t>(n) * n, 0.0);
    elvec.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(np) * d, 0.0);
    for (int p = 0; p < np; ++p) {
      const double w = kappa * q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      for (int i = 0; i < d; ++i) weights[static_cast<std::size_t>(p * d + i)] = w;
    }
    kernels::weighted_gram(np * d, n, n, weights.data(), ci.gradients_panel().data(),
                           ci.gradients_panel().data(), elmat.data());
    for (int p = 0; p < np; ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p)) *
                       forcing(map.physical_point(p));
      kernels::axpy(w, ci.values_panel().data() + static_cast<std::size_t>(p) * n, elvec.data(), n);
    }
    dofs.collect(space, cell);
    assembler.assemble_cell(elmat, elvec, dofs, nullptr);
  }

  // facet terms: consistency, tau-adjoint-consistency and penalty
  std::vector<double> a_pp, a_pm, a_mp, a_mm, v_p, v_m;
  for (int i = 0; i < space.num_facets(); ++i) {
    const auto& info = space.facet(i);
    space.update_facet(i);
    const FacetIntegrator& fi = space.facet_integrator(i, 0);
    FacetMaps& fm = space.facet_maps(i);
    const Quadrature& fq = space.facet_quadrature(i);
    const int n = fi.num_functions();
    const int d = space.triangulation().num_dims();
    const int order = space.ref_fe(0, info.cell_plus).order();
    const double gamma = gamma0 * (order + 1) * (order + 1) / fm.facet_measure();

    if (info.at_boundary) {
      a_pp.assign(static_cast<std::size_t>(n) * n, 0.0);
      v_p.assign(static_cast<std::size_t>(n), 0.0);
      for (int p = 0; p < fq.num_points(); ++p) {
        const double w = fq.weights[static_cast<std::size_t>(p)] * fm.facet_det(p);
        const Vec nrm = fm.normal_plus(p);
        const double ud = dirichlet_value ? dirichlet_value(fm.physical_point(p)) : 0.0;
        for (int a = 0; a < n; ++a) {
          double gna = 0.0;
          for (int g = 0; g < d; ++g) gna += fi.grad_plus(a, p, g) * nrm[g];
          const double va = fi.value_plus(a, p);
          for (int b = 0; b < n; ++b) {
            double gnb = 0.0;
            for (int g = 0; g < d; ++g) gnb += fi.grad_plus(b, p, g) * nrm[g];
            const double vb = fi.value_plus(b, p);
            a_pp[static_cast<std::size_t>(a) * n + b] +=
                w * (-kappa * va * gnb - tau * kappa * vb * gna + gamma * va * vb);
          }
          v_p[static_cast<std::size_t>(a)] += w * ud * (-tau * kappa * gna + gamma * va);
        }
      }
      dofs.collect(space, info.cell_plus);
      assembler.assemble_facet(a_pp, {}, {}, {}, v_p, {}, dofs, CellDofs{}, nullptr);
      continue;
    }

    a_pp.assign(static_cast<std::size_t>(n) * n, 0.0);
    a_pm.assign(static_cast<std::size_t>(n) * n, 0.0);
    a_mp.assign(static_cast<std::size_t>(n) * n, 0.0);
    a_mm.assign(static_cast<std::size_t>(n) * n, 0.0);
    v_p.assign(static_cast<std::size_t>(n), 0.0);
    v_m.assign(static_cast<std::size_t>(n), 0.0);
    for (int p = 0; p < fq.num_points(); ++p) {
      const double w = fq.weights[static_cast<std::size_t>(p)] * fm.facet_det(p);
      const Vec nrm = fm.normal_plus(p);
      for (int a = 0; a < n; ++a) {
        // test function traces and normal derivatives on both sides
        const double va_p = fi.value_plus(a, p), va_m = fi.value_minus(a, p);
        double gna_p = 0.0, gna_m = 0.0;
        for (int g = 0; g < d; ++g) {
          gna_p += fi.grad_plus(a, p, g) * nrm[g];
          gna_m += fi.grad_minus(a, p, g) * nrm[g];
        }
        for (int b = 0; b < n; ++b) {
          const double vb_p = fi.value_plus(b, p), vb_m = fi.value_minus(b, p);
          double gnb_p = 0.0, gnb_m = 0.0;
          for (int g = 0; g < d; ++g) {
            gnb_p += fi.grad_plus(b, p, g) * nrm[g];
            gnb_m += fi.grad_minus(b, p, g) * nrm[g];
          }
          // jump(v) . mean(k grad u): the alpha side of v carries n^alpha
          a_pp[static_cast<std::size_t>(a) * n + b] +=
              w * (-0.5 * kappa * va_p * gnb_p - tau * 0.5 * kappa * vb_p * gna_p + gamma * va_p * vb_p);
          a_pm[static_cast<std::size_t>(a) * n + b] +=
              w * (-0.5 * kappa * va_p * gnb_m + tau * 0.5 * kappa * vb_m * gna_p - gamma * va_p * vb_m);
          a_mp[static_cast<std::size_t>(a) * n + b] +=
              w * (+0.5 * kappa * va_m * gnb_p - tau * 0.5 * kappa * vb_p * gna_m - gamma * va_m * vb_p);
          a_mm[static_cast<std::size_t>(a) * n + b] +=
              w * (+0.5 * kappa * va_m * gnb_m + tau * 0.5 * kappa * vb_m * gna_m + gamma * va_m * vb_m);
        }
      }
    }
    dofs.collect(space, info.cell_plus);
    dofs_minus.collect(space, info.cell_minus);
    assembler.assemble_facet(a_pp, a_pm, a_mp, a_mm, v_p, v_m, dofs, dofs_minus, nullptr);
  }
}

void StokesIntegration::integrate(FeSpace& space, Assembler& assembler) {
  CellDofs dofs;
  std::vector<double> elmat, elvec;
  const int d = space.triangulation().num_dims();
  for (int cell = 0; cell < space.triangulation().num_cells(); ++cell) {
    space.update_cell(cell);
    const CellIntegrator& vi = space.cell_integrator(cell, 0);
    const CellIntegrator& pi = space.cell_integrator(cell, 1);
    const Quadrature& q = space.cell_quadrature(cell);
    const CellMap& map = space.cell_map(cell);
    const ShapeTable& vt = vi.physical();
    const ShapeTable& pt = pi.physical();
    const int nu = vt.num_functions;
    const int np_ = pt.num_functions;
    const int n = nu + np_;

    elmat.assign(static_cast<std::size_t>(n) * n, 0.0);
    elvec.assign(static_cast<std::size_t>(n), 0.0);
    for (int p = 0; p < q.num_points(); ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      const Vec x = map.physical_point(p);
      for (int a = 0; a < nu; ++a) {
        // velocity test: symmetric gradient and divergence
        double div_a = 0.0;
        double eps_a[max_space_dims][max_space_dims] = {};
        for (int ci = 0; ci < d; ++ci) {
          div_a += vt.gradient(a, p, ci, ci);
          for (int g = 0; g < d; ++g)
            eps_a[ci][g] = 0.5 * (vt.gradient(a, p, ci, g) + vt.gradient(a, p, g, ci));
        }
        for (int b = 0; b < nu; ++b) {
          double contract = 0.0;
          for (int ci = 0; ci < d; ++ci)
            for (int g = 0; g < d; ++g)
              contract += eps_a[ci][g] * 0.5 * (vt.gradient(b, p, ci, g) + vt.gradient(b, p, g, ci));
          elmat[static_cast<std::size_t>(a) * n + b] += w * mu * contract;
        }
        for (int b = 0; b < np_; ++b) {
          const double v = -w * div_a * pt.value(b, p, 0);
          elmat[static_cast<std::size_t>(a) * n + (nu + b)] += v;   // -(div v, p)
          elmat[static_cast<std::size_t>(nu + b) * n + a] += v;     // -(q, div u): symmetric form
        }
        double fv = 0.0;
        for (int ci = 0; ci < d; ++ci) fv += forcing[static_cast<std::size_t>(ci)](x) * vt.value(a, p, ci);
        elvec[static_cast<std::size_t>(a)] += w * fv;
      }
    }
    dofs.collect(space, cell);
    assembler.assemble_cell(elmat, elvec, dofs, dirichlet);
  }
}

PoissonCgDriver::PoissonCgDriver(Triangulation tri, int order, ManufacturedPoisson mc)
    : mc_(std::move(mc)), tri_(std::move(tri)) {
  DirichletConditions bc;
  bc.by_set[1] = {{true}, {mc_.u}};
  space_ = std::make_unique<FeSpace>(
      tri_, std::vector<FieldSpec>{FieldSpec::uniform({FeType::lagrangian, order, FieldType::scalar, true})},
      std::map<int, DirichletConditions>{{0, bc}});
  space_->setup_cell_integration();
  solution_ = std::make_unique<FeFunction>(*space_);
  space_->interpolate_dirichlet(*solution_);
  integration_.kappa = mc_.kappa;
  integration_.forcing = mc_.f;
  integration_.dirichlet = solution_.get();
  OperatorOptions opts;
  opts.layout = BlockLayout::monolithic(1);
  opts.symmetric_storage = false;
  opts.symmetric = true;
  opts.sign = MatrixSign::positive_definite;
  operator_ = std::make_unique<AffineOperator>(*space_, integration_, opts);
}

PoissonReport PoissonCgDriver::run() {
  operator_->numerical_setup();
  const auto sol = cg_jacobi(operator_->matrix(), operator_->rhs());
  solution_->free_blocks[0] = sol.x.v;
  PoissonReport rep;
  rep.free_dofs = space_->num_free_dofs();
  rep.fixed_dofs = space_->num_fixed_dofs();
  rep.iterations = sol.iterations;
  rep.residual = sol.residual;
  rep.errors = compute_error_norms(*space_, *solution_, 0, {mc_.u}, {mc_.grad_u});
  return rep;
}

PoissonDgDriver::PoissonDgDriver(Triangulation tri, int order, ManufacturedPoisson mc,
                                 double tau, double gamma0)
    : mc_(std::move(mc)), tri_(std::move(tri)) {
  space_ = std::make_unique<FeSpace>(
      tri_, std::vector<FieldSpec>{FieldSpec::uniform({FeType::lagrangian, order, FieldType::scalar, false})});
  space_->setup_cell_integration();
  space_->setup_facet_integration();
  solution_ = std::make_unique<FeFunction>(*space_);
  integration_.kappa = mc_.kappa;
  integration_.tau = tau;
  integration_.gamma0 = gamma0;
  integration_.forcing = mc_.f;
  integration_.dirichlet_value = mc_.u;
  OperatorOptions opts;
  opts.layout = BlockLayout::monolithic(1);
  opts.symmetric = tau == 1.0;
  opts.sign = tau == 1.0 ? MatrixSign::positive_definite : MatrixSign::indefinite;
  operator_ = std::make_unique<AffineOperator>(*space_, integration_, opts);
}

PoissonReport PoissonDgDriver::run() {
  operator_->numerical_setup();
  SolveResult sol;
  if (operator_->matrix().symmetric())
    sol = cg_jacobi(operator_->matrix(), operator_->rhs());
  else
    sol = dense_lu(operator_->matrix(), operator_->rhs());
  solution_->free_blocks[0] = sol.x.v;
  PoissonReport rep;
  rep.free_dofs = space_->num_free_dofs();
  rep.fixed_dofs = space_->num_fixed_dofs();
  rep.iterations = sol.iterations;
  rep.residual = sol.residual;
  rep.errors = compute_error_norms(*space_, *solution_, 0, {mc_.u}, {mc_.grad_u});
  return rep;
}

StokesDriver::StokesDriver(Triangulation tri, int pressure_order, ManufacturedStokes mc)
    : mc_(std::move(mc)), tri_(std::move(tri)) {
  DirichletConditions bc;
  bc.by_set[1] = {{true, true}, {mc_.u[0], mc_.u[1]}};
  space_ = std::make_unique<FeSpace>(
      tri_,
      std::vector<FieldSpec>{
          FieldSpec::uniform({FeType::lagrangian, pressure_order + 1, FieldType::vector, true}),
          FieldSpec::uniform({FeType::lagrangian, pressure_order, FieldType::scalar, true})},
      std::map<int, DirichletConditions>{{0, bc}});
  space_->setup_cell_integration();
  solution_ = std::make_unique<FeFunction>(*space_);
  space_->interpolate_dirichlet(*solution_);
  integration_.mu = mc_.mu;
  integration_.forcing = mc_.f;
  integration_.dirichlet = solution_.get();
  OperatorOptions opts;
  opts.layout = BlockLayout::monolithic(2);
  opts.layout.field_coupling = {{true, true}, {true, false}};  // empty pressure block
  opts.symmetric = true;
  opts.sign = MatrixSign::indefinite;
  operator_ = std::make_unique<AffineOperator>(*space_, integration_, opts);
}

StokesReport StokesDriver::run() {
  operator_->numerical_setup();
  // full-Dirichlet velocity leaves the pressure constant undetermined: pin
  // the first pressure DOF and report mean-adjusted errors
  const int pin = space_->block_row(1, 0);
  const auto sol = dense_lu(operator_->matrix(), operator_->rhs(), pin);
  solution_->free_blocks[0] = sol.x.v;

  StokesReport rep;
  rep.free_dofs = space_->num_free_dofs();
  rep.fixed_dofs = space_->num_fixed_dofs();
  rep.residual = sol.residual;
  rep.velocity = compute_error_norms(*space_, *solution_, 0, {mc_.u[0], mc_.u[1]},
                                     {mc_.grad_u[0], mc_.grad_u[1]});

  // mean of (p_h - p) over the domain, then the adjusted L2 error
  const Triangulation& tri = space_->triangulation();
  double mean = 0.0, volume = 0.0;
  std::vector<double> dofs;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    space_->update_cell(cell);
    CellFeFunction pf;
    pf.update(*space_, cell, 1, *solution_);
    const Quadrature& q = space_->cell_quadrature(cell);
    const CellMap& map = space_->cell_map(cell);
    for (int p = 0; p < q.num_points(); ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      mean += w * (pf.value(p) - mc_.p(map.physical_point(p)));
      volume += w;
    }
  }
  mean /= volume;
  const ScalarFunc adjusted = [this, mean](const Vec& x) { return mc_.p(x) + mean; };
  const auto perr = compute_error_norms(*space_, *solution_, 1, {adjusted},
                                        {{[](const Vec&) { return 0.0; }, [](const Vec&) { return 0.0; }}});
  rep.pressure_l2 = perr.l2;
  return rep;
}

std::vector<ConvergenceRow> convergence_study(const std::string& driver, int order, int levels,
                                              int base_cells, std::ostream& out) {
  std::vector<ConvergenceRow> rows;
  out << "cells\tl2\tl2_order\th1\th1_order\n";
  for (int level = 0; level < levels; ++level) {
    const int n = base_cells << level;
    Vec lo, hi;
    hi[0] = hi[1] = 1.0;
    const auto tri = Triangulation::structured(2, {n, n}, lo, hi);
    ConvergenceRow row;
    row.cells_per_dim = n;
    if (driver == "poisson-cg") {
      PoissonCgDriver drv(tri, order, ManufacturedPoisson::sine(2));
      const auto rep = drv.run();
      row.l2 = rep.errors.l2;
      row.h1 = rep.errors.h1_semi;
    } else if (driver == "poisson-dg") {
      PoissonDgDriver drv(tri, order, ManufacturedPoisson::sine(2));
      const auto rep = drv.run();
      row.l2 = rep.errors.l2;
      row.h1 = rep.errors.h1_semi;
    } else if (driver == "stokes") {
      StokesDriver drv(tri, order, ManufacturedStokes::vortex());
      const auto rep = drv.run();
      row.l2 = rep.velocity.l2;
      row.h1 = rep.velocity.h1_semi;
    } else {
      throw std::invalid_argument("convergence_study: unknown driver '" + driver + "'");
    }
    if (!rows.empty()) {
      row.l2_order = std::log2(rows.back().l2 / row.l2);
      row.h1_order = std::log2(rows.back().h1 / row.h1);
    }
    rows.push_back(row);
    out << n << "\t" << row.l2 << "\t" << row.l2_order << "\t" << row.h1 << "\t" << row.h1_order
        << "\n";
  }
  return rows;
}

}  // namespace fekit
