#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
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

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("Poisson CG reproduces u = x + y to solver tolerance") {
  const auto tri = Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1));
  PoissonCgDriver driver(tri, 1, ManufacturedPoisson::linear(2));
  const auto rep = driver.run();
  CHECK(rep.errors.l2 <= 1e-9);
  CHECK(rep.errors.h1_semi <= 1e-8);
}

TEST_CASE("Q1 reference-cell stiffness diagonal is 2/3") {
  const auto tri = Triangulation::structured(2, {1, 1}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 1, FieldType::scalar, true})});
  space.setup_cell_integration();
  Assembler assembler(space, false, true, MatrixSign::positive_definite);
  PoissonCgIntegration integ;
  integ.forcing = [](const Vec&) { return 0.0; };
  integ.integrate(space, assembler);
  assembler.compress();
  const auto d = assembler.matrix().dense();
  for (int i = 0; i < 4; ++i) CHECK(d[static_cast<std::size_t>(i) * 4 + i] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("Poisson CG sine case: L2 error ratio h -> h/2 is about 4") {
  PoissonCgDriver coarse(Triangulation::structured(2, {8, 8}, vec(0, 0), vec(1, 1)), 1,
                         ManufacturedPoisson::sine(2));
  PoissonCgDriver fine(Triangulation::structured(2, {16, 16}, vec(0, 0), vec(1, 1)), 1,
                       ManufacturedPoisson::sine(2));
  const double ratio = coarse.run().errors.l2 / fine.run().errors.l2;
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("SIPG matrix is symmetric positive definite at the default penalty") {
  const auto tri = Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1));
  for (int order : {1, 2}) {
    PoissonDgDriver driver(tri, order, ManufacturedPoisson::sine(2));
    driver.op().numerical_setup();
    const auto d = driver.op().matrix().dense();
    const int n = driver.op().matrix().num_rows();
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c)
        CHECK(d[static_cast<std::size_t>(r) * n + c] ==
              doctest::Approx(d[static_cast<std::size_t>(c) * n + r]).epsilon(1e-12));
    CHECK(testing::cholesky_succeeds(d, n));
  }
}

TEST_CASE("SIPG reproduces u = x + y with k = 1 (consistency for linears)") {
  const auto tri = Triangulation::structured(2, {3, 2}, vec(0, 0), vec(1, 1));
  PoissonDgDriver driver(tri, 1, ManufacturedPoisson::linear(2));
  const auto rep = driver.run();
  CHECK(rep.errors.l2 <= 1e-9);
}

TEST_CASE("one-cell DG mesh has only boundary facet terms and still solves") {
  const auto tri = Triangulation::structured(2, {1, 1}, vec(0, 0), vec(1, 1));
  PoissonDgDriver driver(tri, 1, ManufacturedPoisson::linear(2));
  int interior = 0;
  driver.space().setup_facet_integration();
  for (int i = 0; i < driver.space().num_facets(); ++i)
    if (!driver.space().facet(i).at_boundary) ++interior;
  CHECK(interior == 0);
  const auto rep = driver.run();
  CHECK(rep.errors.l2 <= 1e-9);
}

TEST_CASE("Stokes Taylor-Hood reproduces the polynomial case exactly") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  StokesDriver driver(tri, 1, ManufacturedStokes::polynomial());
  const auto rep = driver.run();
  CHECK(rep.velocity.l2 <= 1e-9);
  CHECK(rep.pressure_l2 <= 1e-8);
  CHECK(rep.residual <= 1e-10);
}

TEST_CASE("Stokes matrix is symmetric indefinite with an empty pressure block") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  StokesDriver driver(tri, 1, ManufacturedStokes::polynomial());
  driver.op().numerical_setup();
  const auto& m = driver.op().matrix();
  const auto d = m.dense();
  const int n = m.num_rows();
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      CHECK(d[static_cast<std::size_t>(r) * n + c] ==
            doctest::Approx(d[static_cast<std::size_t>(c) * n + r]).epsilon(1e-12));
  // pressure-pressure block identically zero
  const int nu = driver.space().num_free_dofs(0);
  for (int r = nu; r < n; ++r)
    for (int c = nu; c < n; ++c) CHECK(d[static_cast<std::size_t>(r) * n + c] == 0.0);
  // indefinite: plain Cholesky must fail
  CHECK(!testing::cholesky_succeeds(d, n));
}

TEST_CASE("discrete divergence residual vanishes for the computed solution") {
  const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
  StokesDriver driver(tri, 1, ManufacturedStokes::vortex());
  driver.run();
  // residual rows of the pressure test functions: B u_free + (lift already in
  // rhs); recompute sum_cells int (div u_h) q_h for every pressure test fn
  auto& space = driver.space();
  const auto& u = driver.solution();
  std::vector<double> resid(static_cast<std::size_t>(space.num_free_dofs(1)), 0.0);
  std::vector<double> udofs;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    space.update_cell(cell);
    const auto& q = space.cell_quadrature(cell);
    const auto& map = space.cell_map(cell);
    const auto& vt = space.cell_integrator(cell, 0).physical();
    const auto& pt = space.cell_integrator(cell, 1).physical();
    space.gather_cell_values(u, cell, 0, udofs);
    const auto pids = space.fe_dofs(cell, 1);
    for (int p = 0; p < q.num_points(); ++p) {
      const double w = q.weights[static_cast<std::size_t>(p)] * std::abs(map.det_jacobian(p));
      double div_u = 0.0;
      for (int a = 0; a < vt.num_functions; ++a)
        for (int c = 0; c < 2; ++c) div_u += udofs[static_cast<std::size_t>(a)] * vt.gradient(a, p, c, c);
      for (int b = 0; b < pt.num_functions; ++b) {
        if (pids[static_cast<std::size_t>(b)] < 0) continue;
        resid[static_cast<std::size_t>(pids[static_cast<std::size_t>(b)])] += w * div_u * pt.value(b, p, 0);
      }
    }
  }
  for (double r : resid) CHECK(std::abs(r) <= 1e-9);
}

TEST_CASE("error norms: exact-in-space and constant-difference cases") {
  const auto tri = Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::scalar, true})});
  space.setup_cell_integration();
  FeFunction u(space);
  const ScalarFunc f = [](const Vec& x) { return x[0] * x[0] + 3.0 * x[1]; };
  space.interpolate(0, {f}, u, true);
  const auto n1 = compute_error_norms(space, u, 0, {f},
                                      {{[](const Vec& x) { return 2.0 * x[0]; },
                                        [](const Vec&) { return 3.0; }}});
  CHECK(n1.l2 <= 1e-10);
  CHECK(n1.h1_semi <= 1e-9);

  // zero FE function against u = 1: L2 error is exactly 1 on the unit square
  FeFunction zero(space);
  const auto n2 = compute_error_norms(space, zero, 0, {[](const Vec&) { return 1.0; }},
                                      {{[](const Vec&) { return 0.0; }, [](const Vec&) { return 0.0; }}});
  CHECK(n2.l2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("error norms match a hand-rolled dense quadrature oracle") {
  // structured mesh: the affine map is diag(h) exactly, so the oracle can
  // avoid the library's map machinery altogether
  const int n = 4;
  const double h = 1.0 / n;
  const auto tri = Triangulation::structured(2, {n, n}, vec(0, 0), vec(1, 1));
  PoissonCgDriver driver(tri, 1, ManufacturedPoisson::sine(2));
  const auto rep = driver.run();

  const auto& fe = driver.space().ref_fe(0, 0);
  const auto q = make_quadrature(2, 0b11, 4);  // default degree 2k+2 for k=1
  const auto table = fe.evaluate(q.points);
  const auto mc = ManufacturedPoisson::sine(2);
  double l2 = 0.0, h1 = 0.0;
  std::vector<double> dofs;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const int ci = cell % n, cj = cell / n;
    driver.space().gather_cell_values(driver.solution(), cell, 0, dofs);
    for (int p = 0; p < q.num_points(); ++p) {
      Vec x;
      x[0] = (ci + q.points[static_cast<std::size_t>(p)][0]) * h;
      x[1] = (cj + q.points[static_cast<std::size_t>(p)][1]) * h;
      double uh = 0.0, gx = 0.0, gy = 0.0;
      for (int a = 0; a < 4; ++a) {
        uh += dofs[static_cast<std::size_t>(a)] * table.value(a, p, 0);
        gx += dofs[static_cast<std::size_t>(a)] * table.gradient(a, p, 0, 0) / h;
        gy += dofs[static_cast<std::size_t>(a)] * table.gradient(a, p, 0, 1) / h;
      }
      const double w = q.weights[static_cast<std::size_t>(p)] * h * h;
      l2 += w * (uh - mc.u(x)) * (uh - mc.u(x));
      h1 += w * ((gx - mc.grad_u[0](x)) * (gx - mc.grad_u[0](x)) +
                 (gy - mc.grad_u[1](x)) * (gy - mc.grad_u[1](x)));
    }
  }
  CHECK(rep.errors.l2 == doctest::Approx(std::sqrt(l2)).epsilon(1e-10));
  CHECK(rep.errors.h1_semi == doctest::Approx(std::sqrt(h1)).epsilon(1e-10));
}

TEST_CASE("VTK output: duplicated points, cells, and DG discontinuities") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  const std::string path = temp_path("fekit_out.vtk");

  FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 1, FieldType::scalar, false})});
  space.setup_cell_integration();
  FeFunction u(space);
  // piecewise-constant per cell: visible jumps at shared corners
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const auto ids = space.fe_dofs(cell, 0);
    for (int id : ids) u.free_blocks[0][static_cast<std::size_t>(id)] = cell;
  }
  write_vtk(space, {{"u", 0, &u}}, path);

  std::ifstream in(path);
  std::string line;
  int points = 0, cells = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "POINTS") ss >> points;
    if (key == "CELLS") ss >> cells;
    if (key == "LOOKUP_TABLE") {
      ss >> key;
      if (key == "default" && values.empty()) {
        for (int i = 0; i < points; ++i) {
          double v;
          in >> v;
          values.push_back(v);
        }
      }
    }
  }
  CHECK(points == 16);  // 4 points per cell
  CHECK(cells == 4);
  REQUIRE(static_cast<int>(values.size()) == 16);
  // each cell's four duplicated corners carry that cell's constant
  for (int c = 0; c < 4; ++c)
    for (int v = 0; v < 4; ++v) CHECK(values[static_cast<std::size_t>(4 * c + v)] == doctest::Approx(c));

  // geometry-only file
  const std::string geo_path = temp_path("fekit_geo.vtk");
  write_vtk(tri, geo_path);
  std::ifstream gin(geo_path);
  std::string content((std::istreambuf_iterator<char>(gin)), std::istreambuf_iterator<char>());
  CHECK(content.find("POINTS 16") != std::string::npos);
  CHECK(content.find("POINT_DATA") == std::string::npos);
}

TEST_CASE("convergence study prints a table with order about 2 for Q1") {
  std::ostringstream out;
  const auto rows = convergence_study("poisson-cg", 1, 3, 4, out);
  REQUIRE(rows.size() == 3);
  CHECK(rows.back().l2_order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(out.str().find("cells\tl2") != std::string::npos);
}

TEST_CASE("misoriented meshes still reproduce in-space solutions exactly") {
  // Non-identity facet permutations flowing through full solves: DOF
  // numbering fetches for CG, quadrature-point translation for DG.
  std::vector<Vec> hex_coords = {vec(0, 0, 0), vec(1, 0, 0), vec(0, 1, 0), vec(1, 1, 0),
                                 vec(0, 0, 1), vec(1, 0, 1), vec(0, 1, 1), vec(1, 1, 1),
                                 vec(2, 0, 0), vec(2, 1, 0), vec(2, 0, 1), vec(2, 1, 1)};
  const std::vector<std::vector<int>> hex_cells = {{0, 1, 2, 3, 4, 5, 6, 7},
                                                   {1, 8, 5, 10, 3, 9, 7, 11}};
  {
    auto tri = Triangulation::from_cell_vertices(3, 0b111, hex_coords, hex_cells);
    PoissonCgDriver driver(std::move(tri), 3, ManufacturedPoisson::linear(3));
    CHECK(driver.run().errors.l2 <= 1e-9);
  }
  {
    auto tri = Triangulation::from_cell_vertices(3, 0b111, hex_coords, hex_cells);
    PoissonDgDriver driver(std::move(tri), 2, ManufacturedPoisson::linear(3));
    CHECK(driver.run().errors.l2 <= 1e-9);
  }
  {
    // reversed shared edge in 2D
    std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(2, 0), vec(2, 1)};
    const std::vector<std::vector<int>> cells = {{0, 1, 2, 3}, {3, 5, 1, 4}};
    auto t1 = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
    PoissonCgDriver cg(std::move(t1), 3, ManufacturedPoisson::linear(2));
    CHECK(cg.run().errors.l2 <= 1e-9);
    auto t2 = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
    PoissonDgDriver dg(std::move(t2), 1, ManufacturedPoisson::linear(2));
    CHECK(dg.run().errors.l2 <= 1e-9);
  }
  {
    // unstructured triangle fan (reoriented on creation)
    const std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(0.4, 0.6)};
    auto tri = Triangulation::from_cell_vertices(2, 0b00, coords,
                                                 {{2, 0, 4}, {0, 1, 4}, {1, 3, 4}, {3, 2, 4}});
    PoissonCgDriver driver(std::move(tri), 2, ManufacturedPoisson::linear(2));
    CHECK(driver.run().errors.l2 <= 1e-9);
  }
}

TEST_CASE("Poisson CG converges on an unstructured triangle mesh") {
  // refine the fan by structured splitting: each level splits every triangle
  // into four by edge midpoints
  auto refine = [](const std::vector<Vec>& coords, const std::vector<std::vector<int>>& cells) {
    std::vector<Vec> nc = coords;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it == midpoint.end()) {
        nc.push_back(0.5 * (nc[static_cast<std::size_t>(a)] + nc[static_cast<std::size_t>(b)]));
        it = midpoint.emplace(key, static_cast<int>(nc.size()) - 1).first;
      }
      return it->second;
    };
    std::vector<std::vector<int>> out;
    for (const auto& c : cells) {
      const int m01 = mid(c[0], c[1]), m12 = mid(c[1], c[2]), m02 = mid(c[0], c[2]);
      out.push_back({c[0], m01, m02});
      out.push_back({m01, c[1], m12});
      out.push_back({m02, m12, c[2]});
      out.push_back({m01, m12, m02});
    }
    return std::make_pair(nc, out);
  };

  std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(0.4, 0.6)};
  std::vector<std::vector<int>> cells = {{2, 0, 4}, {0, 1, 4}, {1, 3, 4}, {3, 2, 4}};
  std::vector<double> errors;
  for (int level = 0; level < 3; ++level) {
    std::tie(coords, cells) = refine(coords, cells);
    auto tri = Triangulation::from_cell_vertices(2, 0b00, coords, cells);
    PoissonCgDriver driver(std::move(tri), 1, ManufacturedPoisson::sine(2));
    errors.push_back(driver.run().errors.l2);
  }
  const double order = std::log2(errors[1] / errors[2]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("dense oracle: Stokes assembly matches entrywise") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  StokesDriver driver(tri, 1, ManufacturedStokes::vortex());
  driver.op().numerical_setup();
  testing::DenseOracleAssembler oracle(driver.space(), &driver.solution());
  StokesIntegration integ;
  auto mc = ManufacturedStokes::vortex();
  integ.mu = mc.mu;
  integ.forcing = mc.f;
  integ.dirichlet = &driver.solution();
  integ.integrate(driver.space(), oracle);
  CHECK(testing::max_system_difference(driver.op().assembler(), oracle) <= 1e-12);
}
