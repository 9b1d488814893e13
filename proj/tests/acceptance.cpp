// Acceptance suite: each criterion prints one pass/fail line; the process
// exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "fekit/drivers.hpp"
#include "fekit/vtk.hpp"
#include "oracles.hpp"

using namespace fekit;

namespace {

Vec vec(double x, double y = 0.0, double z = 0.0) {
  Vec v;
  v[0] = x;
  v[1] = y;
  v[2] = z;
  return v;
}

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<void()> run;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

// ---------------------------------------------------------------- 1
void polytope_combinatorics() {
  struct Case {
    int d;
    std::uint32_t t;
    int expect;
    const char* name;
  };
  const Case cases[] = {{2, 0b11, 9, "quad"},      {3, 0b111, 27, "hex"},
                        {3, 0b000, 15, "tet"},     {3, 0b100, 21, "prism"},
                        {3, 0b010, 19, "pyramid"}, {4, 0b1111, 81, "4-cube"},
                        {4, 0b0000, 31, "4-simplex"}};
  for (const auto& c : cases) {
    const Polytope p(c.d, c.t);
    require(p.num_n_faces() == c.expect,
            std::string(c.name) + ": n-face count " + std::to_string(p.num_n_faces()));

    // brute-force membership oracle: closure of the facet recursion
    std::set<std::pair<std::uint32_t, std::uint32_t>> oracle;
    std::vector<NFace> stack{NFace{(1u << c.d) - 1u, 0u}};
    while (!stack.empty()) {
      const NFace f = stack.back();
      stack.pop_back();
      if (!oracle.insert({f.extrusion, f.anchor}).second) continue;
      for (const NFace& g : p.facets_of(f)) stack.push_back(g);
    }
    for (std::uint32_t e = 0; e < (1u << c.d); ++e)
      for (std::uint32_t v = 0; v < (1u << c.d); ++v)
        require(p.contains(NFace{e, v}) == (oracle.count({e, v}) > 0),
                std::string(c.name) + ": membership mismatch");
  }
  // quad pointer array, in its 1-based convention
  const Polytope quad(2, 0b11);
  std::vector<int> one_based;
  for (int v : quad.ptr_n_faces_x_dim()) one_based.push_back(v + 1);
  require(one_based == std::vector<int>{1, 5, 9, 10}, "quad ptr_n_faces_x_dim");
}

// ---------------------------------------------------------------- 2
double monomial_integral_cube(const std::vector<int>& a) {
  double r = 1.0;
  for (int ai : a) r /= ai + 1;
  return r;
}

double monomial_integral_simplex(const std::vector<int>& a) {
  double num = 1.0;
  int total = 0;
  for (int ai : a) {
    total += ai;
    for (int i = 2; i <= ai; ++i) num *= i;
  }
  double den = 1.0;
  for (int i = 2; i <= total + static_cast<int>(a.size()); ++i) den *= i;
  return num / den;
}

double integrate_monomial(const Quadrature& q, const std::vector<int>& a) {
  double s = 0.0;
  for (int p = 0; p < q.num_points(); ++p) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(q.points[p][static_cast<int>(i)], a[i]);
    s += q.weights[static_cast<std::size_t>(p)] * v;
  }
  return s;
}

void quadrature_exactness() {
  for (int d = 1; d <= 3; ++d)
    for (int n = 1; n <= 4; ++n) {
      const auto q = tensor_gauss(d, n);
      std::vector<int> a(static_cast<std::size_t>(d), 0);
      while (true) {
        require(std::abs(integrate_monomial(q, a) - monomial_integral_cube(a)) <= 1e-13,
                "tensor Gauss exactness");
        int i = 0;
        for (; i < d; ++i) {
          if (++a[static_cast<std::size_t>(i)] <= 2 * n - 1) break;
          a[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
      }
    }
  for (int d = 2; d <= 3; ++d)
    for (int p = 0; p <= 3; ++p) {
      const auto q = duffy_quadrature(d, p + (d + 1) / 2);
      std::vector<int> a(static_cast<std::size_t>(d), 0);
      while (true) {
        int total = 0;
        for (int ai : a) total += ai;
        if (total <= 2 * p)
          require(std::abs(integrate_monomial(q, a) - monomial_integral_simplex(a)) <= 1e-13,
                  "Duffy exactness");
        int i = 0;
        for (; i < d; ++i) {
          if (++a[static_cast<std::size_t>(i)] <= 2 * p) break;
          a[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
      }
    }
}

// ---------------------------------------------------------------- 3
void duality(const ReferenceFe& fe, const char* name) {
  const auto m = fe.moment_matrix_of_shape_functions();
  const int n = fe.num_shape_functions();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      require(std::abs(m[static_cast<std::size_t>(a) * n + b] - (a == b ? 1.0 : 0.0)) <= 1e-10,
              std::string(name) + ": duality");
}

void reference_fe_duality() {
  for (const auto& [d, t] : std::vector<std::pair<int, std::uint32_t>>{
           {1, 0b0}, {2, 0b11}, {2, 0b00}, {3, 0b111}, {3, 0b000}})
    for (int k = 1; k <= 3; ++k)
      duality(make_reference_fe(d, t, FeType::lagrangian, k, FieldType::scalar, true), "lagrangian");
  for (int k = 0; k <= 2; ++k) {
    duality(make_reference_fe(2, 0b11, FeType::raviart_thomas, k, FieldType::vector, true), "rt quad");
    duality(make_reference_fe(3, 0b111, FeType::raviart_thomas, k, FieldType::vector, true), "rt hex");
  }
}

// ---------------------------------------------------------------- 4
void conforming_oracle(FeSpace& space, int field, const char* name) {
  const auto& tri = space.triangulation();
  std::map<std::pair<std::vector<long long>, int>, std::set<int>> by_coord;
  std::map<int, std::pair<std::vector<long long>, int>> by_id;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const ReferenceFe& fe = space.ref_fe(field, cell);
    const auto ids = space.fe_dofs(cell, field);
    for (int a = 0; a < fe.num_shape_functions(); ++a) {
      const Vec x = space.map_cell_point(cell, fe.dof_ref_coords(a));
      std::vector<long long> quant;
      for (int i = 0; i < tri.num_dims(); ++i) quant.push_back(std::llround(x[i] * 1e9));
      const auto key = std::make_pair(quant, fe.dof_component(a));
      by_coord[key].insert(ids[static_cast<std::size_t>(a)]);
      const auto it = by_id.find(ids[static_cast<std::size_t>(a)]);
      if (it == by_id.end())
        by_id.emplace(ids[static_cast<std::size_t>(a)], key);
      else
        require(it->second == key, std::string(name) + ": one id, two node positions");
    }
  }
  for (const auto& [key, idset] : by_coord)
    require(idset.size() == 1, std::string(name) + ": one node position, several ids");
}

void dof_numbering() {
  // structured meshes
  for (int order : {1, 2, 3}) {
    const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, order, FieldType::scalar, true})});
    conforming_oracle(space, 0, "structured quad");
  }
  {
    const auto tri = Triangulation::structured(3, {2, 2, 2}, vec(0, 0, 0), vec(1, 1, 1));
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::scalar, true})});
    conforming_oracle(space, 0, "structured hex");
  }
  // hand-imported meshes, via the ASCII reader
  {
    const std::string path = (std::filesystem::temp_directory_path() / "fekit_acc.msh").string();
    std::ofstream out(path);
    out << "# two reversed quads\n";
    out << "dim 2\ntopology 11\nvertices 6\n0 0\n1 0\n0 1\n1 1\n2 0\n2 1\n";
    out << "cells 2\n1 2 3 4\n4 6 2 5\n";  // right cell flipped: reversed shared edge
    out.close();
    const auto tri = Triangulation::import_mesh(path);
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 3, FieldType::scalar, true})});
    conforming_oracle(space, 0, "reversed-edge import");
  }
  {
    // misoriented two-hex mesh
    std::vector<Vec> coords = {vec(0, 0, 0), vec(1, 0, 0), vec(0, 1, 0), vec(1, 1, 0),
                               vec(0, 0, 1), vec(1, 0, 1), vec(0, 1, 1), vec(1, 1, 1),
                               vec(2, 0, 0), vec(2, 1, 0), vec(2, 0, 1), vec(2, 1, 1)};
    const auto tri = Triangulation::from_cell_vertices(
        3, 0b111, coords, {{0, 1, 2, 3, 4, 5, 6, 7}, {1, 8, 5, 10, 3, 9, 7, 11}});
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 3, FieldType::scalar, true})});
    conforming_oracle(space, 0, "twisted hex pair");
  }
  {
    // triangle fan, reoriented on construction
    const std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(0.4, 0.6)};
    const auto tri = Triangulation::from_cell_vertices(
        2, 0b00, coords, {{2, 0, 4}, {0, 1, 4}, {1, 3, 4}, {3, 2, 4}});
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 3, FieldType::scalar, true})});
    conforming_oracle(space, 0, "triangle fan");
  }
  // DG counts
  {
    const auto tri = Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1));
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::scalar, false})});
    int total = 0;
    for (int c = 0; c < tri.num_cells(); ++c) total += space.ref_fe(0, c).num_shape_functions();
    require(space.num_free_dofs(0) == total, "DG total count");
  }
  // 4x4 Q1 full Dirichlet
  {
    const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
    DirichletConditions bc;
    bc.by_set[1] = {{true}, {[](const Vec&) { return 0.0; }}};
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 1, FieldType::scalar, true})},
                  {{0, bc}});
    require(space.num_free_dofs(0) == 9 && space.num_fixed_dofs() == 16, "4x4 Q1 free/fixed counts");
  }
}

// ---------------------------------------------------------------- 5
double max_facet_mismatch(FeSpace& space) {
  double worst = 0.0;
  space.setup_facet_integration();
  for (int i = 0; i < space.num_facets(); ++i) {
    const auto& info = space.facet(i);
    if (info.at_boundary) continue;
    space.update_facet(i);
    auto& fm = space.facet_maps(i);
    const auto& perm = space.facet_integrator(i, 0).qpoints_permutation(info.permutation_index);
    for (int p = 0; p < fm.num_points(); ++p) {
      const Vec f = fm.physical_point(p);
      worst = std::max(worst, norm(fm.cell_map_plus().physical_point(p) - f));
      worst = std::max(worst, norm(fm.cell_map_minus().physical_point(perm[static_cast<std::size_t>(p)]) - f));
    }
  }
  return worst;
}

void facet_permutation() {
  {
    // deliberately misoriented two-hex mesh
    std::vector<Vec> coords = {vec(0, 0, 0), vec(1, 0, 0), vec(0, 1, 0), vec(1, 1, 0),
                               vec(0, 0, 1), vec(1, 0, 1), vec(0, 1, 1), vec(1, 1, 1),
                               vec(2, 0, 0), vec(2, 1, 0), vec(2, 0, 1), vec(2, 1, 1)};
    const auto tri = Triangulation::from_cell_vertices(
        3, 0b111, coords, {{0, 1, 2, 3, 4, 5, 6, 7}, {1, 8, 5, 10, 3, 9, 7, 11}});
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::scalar, false})});
    require(max_facet_mismatch(space) <= 1e-10, "two-hex mismatch");
  }
  {
    // reversed-edge 2D mesh
    std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(2, 0), vec(2, 1)};
    const auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, {{0, 1, 2, 3}, {3, 5, 1, 4}});
    FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::scalar, false})});
    require(max_facet_mismatch(space) <= 1e-10, "reversed-edge mismatch");
  }
  {
    // simplex meshes: identity everywhere after reorientation
    const std::vector<Vec> coords2 = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(0.4, 0.6)};
    const auto tri2 = Triangulation::from_cell_vertices(
        2, 0b00, coords2, {{2, 0, 4}, {0, 1, 4}, {1, 3, 4}, {3, 2, 4}});
    const std::vector<Vec> coords3 = {vec(0, 0, 0), vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1), vec(1, 1, 1)};
    const auto tri3 = Triangulation::from_cell_vertices(3, 0b000, coords3, {{0, 2, 1, 3}, {1, 2, 3, 4}});
    for (const Triangulation* tri : {&tri2, &tri3}) {
      FeSpace space(*tri, {FieldSpec::uniform({FeType::lagrangian, 1, FieldType::scalar, false})});
      space.setup_facet_integration();
      for (int i = 0; i < space.num_facets(); ++i)
        if (!space.facet(i).at_boundary)
          require(space.facet(i).permutation_index == 0, "simplex facet not identity");
      require(max_facet_mismatch(space) <= 1e-10, "simplex mismatch");
    }
  }
}

// ---------------------------------------------------------------- 6
void assembly_oracle() {
  {
    // Poisson CG on 8x8 Q1 (64 cells) and 4x4 Q2
    for (const auto& [n, order] : std::vector<std::pair<int, int>>{{8, 1}, {4, 2}}) {
      PoissonCgDriver driver(Triangulation::structured(2, {n, n}, vec(0, 0), vec(1, 1)), order,
                             ManufacturedPoisson::sine(2));
      driver.op().numerical_setup();
      testing::DenseOracleAssembler oracle(driver.space(), &driver.solution());
      PoissonCgIntegration integ;
      integ.forcing = ManufacturedPoisson::sine(2).f;
      integ.dirichlet = &driver.solution();
      integ.integrate(driver.space(), oracle);
      require(testing::max_system_difference(driver.op().assembler(), oracle) <= 1e-12,
              "poisson cg oracle");
    }
  }
  {
    for (const auto& [n, order] : std::vector<std::pair<int, int>>{{4, 1}, {2, 2}}) {
      PoissonDgDriver driver(Triangulation::structured(2, {n, n}, vec(0, 0), vec(1, 1)), order,
                             ManufacturedPoisson::sine(2));
      driver.op().numerical_setup();
      testing::DenseOracleAssembler oracle(driver.space(), nullptr);
      PoissonDgIntegration integ;
      integ.forcing = ManufacturedPoisson::sine(2).f;
      integ.dirichlet_value = ManufacturedPoisson::sine(2).u;
      integ.integrate(driver.space(), oracle);
      require(testing::max_system_difference(driver.op().assembler(), oracle) <= 1e-12,
              "poisson dg oracle");
    }
  }
  {
    StokesDriver driver(Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1)), 1,
                        ManufacturedStokes::vortex());
    driver.op().numerical_setup();
    testing::DenseOracleAssembler oracle(driver.space(), &driver.solution());
    StokesIntegration integ;
    auto mc = ManufacturedStokes::vortex();
    integ.mu = mc.mu;
    integ.forcing = mc.f;
    integ.dirichlet = &driver.solution();
    integ.integrate(driver.space(), oracle);
    require(testing::max_system_difference(driver.op().assembler(), oracle) <= 1e-12,
            "stokes oracle");
  }
}

// ---------------------------------------------------------------- 7
void convergence() {
  std::ostringstream sink;
  {
    const auto rows = convergence_study("poisson-cg", 1, 4, 8, sink);
    require(std::abs(rows.back().l2_order - 2.0) <= 0.1, "poisson cg Q1 L2 order");
  }
  {
    const auto rows = convergence_study("poisson-cg", 2, 4, 8, sink);
    require(std::abs(rows.back().l2_order - 3.0) <= 0.1, "poisson cg Q2 L2 order");
  }
  {
    const auto rows = convergence_study("poisson-dg", 1, 4, 8, sink);
    require(std::abs(rows.back().l2_order - 2.0) <= 0.15, "sipg k=1 L2 order");
  }
  {
    const auto rows = convergence_study("stokes", 1, 3, 4, sink);
    require(std::abs(rows.back().h1_order - 2.0) <= 0.15, "taylor-hood velocity H1 order");
  }
}

// ---------------------------------------------------------------- 8
void exact_reproduction() {
  {
    PoissonCgDriver driver(Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1)), 1,
                           ManufacturedPoisson::linear(2));
    require(driver.run().errors.l2 <= 1e-9, "poisson cg linear reproduction");
  }
  {
    PoissonDgDriver driver(Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1)), 1,
                           ManufacturedPoisson::linear(2));
    require(driver.run().errors.l2 <= 1e-9, "poisson dg linear reproduction");
  }
  {
    StokesDriver driver(Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1)), 1,
                        ManufacturedStokes::polynomial());
    require(driver.run().velocity.l2 <= 1e-9, "stokes polynomial reproduction");
  }
  {
    // divergence theorem on one affine cell: facet integrals of v.n vs the
    // cell integral of div v for v = (2x + y, x - 3y)
    const ReferenceFe geo = make_reference_fe(2, 0b11, FeType::lagrangian, 1, FieldType::scalar, true);
    const std::vector<Vec> cell = {vec(0.1, 0.2), vec(0.9, 0.3), vec(0.2, 1.0), vec(1.0, 1.1)};
    const auto q = geo.create_quadrature(3);
    CellMap map;
    map.create(q, geo);
    map.update(cell);
    double vol = 0.0;
    for (int p = 0; p < map.num_points(); ++p)
      vol += q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p)) * (-1.0);
    const auto fq = geo.create_facet_quadrature(3);
    FacetMaps fm;
    fm.create(fq, geo);
    double surf = 0.0;
    for (int lid = 0; lid < 4; ++lid) {
      std::vector<Vec> fc;
      for (int c : geo.polytope().corners_of(geo.polytope().first_n_face(1) + lid))
        fc.push_back(cell[static_cast<std::size_t>(c)]);
      fm.update(fc, cell, {}, lid, -1);
      for (int p = 0; p < fm.num_points(); ++p) {
        const Vec x = fm.physical_point(p);
        const Vec v = vec(2 * x[0] + x[1], x[0] - 3 * x[1]);
        surf += fq.weights[static_cast<std::size_t>(p)] * fm.facet_det(p) * dot(v, fm.normal_plus(p));
      }
    }
    require(std::abs(surf - vol) <= 1e-12, "divergence theorem identity");
  }
}

// ---------------------------------------------------------------- 9
void rt_conformity() {
  for (int k : {0, 1}) {
    const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
    FeSpace space(tri, {FieldSpec::uniform({FeType::raviart_thomas, k, FieldType::vector, true})});
    space.setup_cell_integration();
    space.setup_facet_integration();
    FeFunction u(space);
    space.interpolate(0, {[](const Vec& x) { return std::exp(x[0]) + x[1] * x[1]; },
                          [](const Vec& x) { return std::sin(x[0]) - 0.3 * x[1]; }},
                      u, true);
    for (int i = 0; i < space.num_facets(); ++i) {
      const auto& info = space.facet(i);
      if (info.at_boundary) continue;
      space.update_facet(i);
      FacetFeFunction ff;
      ff.update(space, i, 0, u);
      auto& fm = space.facet_maps(i);
      for (int p = 0; p < fm.num_points(); ++p) {
        const Vec n = fm.normal_plus(p);
        const double jump = (ff.value_plus(p, 0) - ff.value_minus(p, 0)) * n[0] +
                            (ff.value_plus(p, 1) - ff.value_minus(p, 1)) * n[1];
        require(std::abs(jump) <= 1e-12, "RT" + std::to_string(k) + " normal-trace jump");
      }
    }
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 polytope combinatorics", 1.0, polytope_combinatorics},
      {"2 quadrature exactness", 1.0, quadrature_exactness},
      {"3 reference-FE duality", 5.0, reference_fe_duality},
      {"4 DOF numbering oracle", 5.0, dof_numbering},
      {"5 facet permutation", 1.0, facet_permutation},
      {"6 assembly oracle", 10.0, assembly_oracle},
      {"7 convergence orders", 120.0, convergence},
      {"8 exact reproduction", 30.0, exact_reproduction},
      {"9 RT conformity", 2.0, rt_conformity},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && elapsed > c.time_limit_s)
      error = "time limit exceeded (" + std::to_string(elapsed) + " s > " +
              std::to_string(c.time_limit_s) + " s)";
    if (error.empty()) {
      std::printf("[PASS] criterion %-28s (%.2f s)\n", c.name.c_str(), elapsed);
    } else {
      std::printf("[FAIL] criterion %-28s (%.2f s): %s\n", c.name.c_str(), elapsed, error.c_str());
      ++failures;
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
