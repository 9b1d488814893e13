#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fekit/fe_space.hpp"

using namespace fekit;

namespace {

Vec vec(double x, double y = 0.0, double z = 0.0) {
  Vec v;
  v[0] = x;
  v[1] = y;
  v[2] = z;
  return v;
}

FieldSpec scalar_lagrangian(int order, bool conforming = true) {
  return FieldSpec::uniform({FeType::lagrangian, order, FieldType::scalar, conforming});
}

DirichletConditions all_boundary_scalar(ScalarFunc f) {
  DirichletConditions c;
  c.by_set[1] = {{true}, {std::move(f)}};
  return c;
}

// Independent numbering oracle for conforming Lagrangian fields: equivalence
// classes of (cell, local dof) built by global matching of physical node
// coordinates and components must coincide with those induced by the ids.
void check_conforming_oracle(FeSpace& space, int field) {
  const auto& tri = space.triangulation();
  std::map<std::pair<std::vector<long long>, int>, std::set<int>> classes_by_coord;
  std::map<int, std::set<std::pair<int, int>>> class_of_id;
  std::map<std::pair<int, int>, std::pair<std::vector<long long>, int>> key_of;

  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    const ReferenceFe& fe = space.ref_fe(field, cell);
    const auto ids = space.fe_dofs(cell, field);
    for (int a = 0; a < fe.num_shape_functions(); ++a) {
      const Vec xr = fe.dof_ref_coords(a);
      const Vec x = space.map_cell_point(cell, xr);
      std::vector<long long> quant;
      for (int i = 0; i < tri.num_dims(); ++i) quant.push_back(std::llround(x[i] * 1e9));
      const auto key = std::make_pair(quant, fe.dof_component(a));
      key_of[{cell, a}] = key;
      classes_by_coord[key].insert(ids[static_cast<std::size_t>(a)]);
      class_of_id[ids[static_cast<std::size_t>(a)]].insert({cell, a});
    }
  }
  // same physical node+component <-> same id
  for (const auto& [key, idset] : classes_by_coord) CHECK(idset.size() == 1);
  for (const auto& [id, members] : class_of_id) {
    const auto& key = key_of.at(*members.begin());
    for (const auto& m : members) CHECK(key_of.at(m) == key);
  }
}

}  // namespace

TEST_CASE("2x2 structured Q1 scalar conforming: 9 free DOFs") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {scalar_lagrangian(1)});
  CHECK(space.num_free_dofs(0) == 9);
  CHECK(space.num_fixed_dofs() == 0);
  check_conforming_oracle(space, 0);
}

TEST_CASE("same mesh, non-conforming: 16 DOFs") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {scalar_lagrangian(1, false)});
  CHECK(space.num_free_dofs(0) == 16);
  // DG count = sum of per-cell shape counts
  int total = 0;
  for (int c = 0; c < tri.num_cells(); ++c) total += space.ref_fe(0, c).num_shape_functions();
  CHECK(space.num_free_dofs(0) == total);
}

TEST_CASE("4x4 Q1 with the whole boundary fixed: 9 free, 16 fixed") {
  const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {scalar_lagrangian(1)},
                {{0, all_boundary_scalar([](const Vec&) { return 0.0; })}});
  CHECK(space.num_free_dofs(0) == 9);
  CHECK(space.num_fixed_dofs() == 16);
}

TEST_CASE("conforming numbering matches the coordinate oracle on several meshes") {
  for (int order : {1, 2, 3}) {
    const auto tri = Triangulation::structured(2, {3, 2}, vec(0, 0), vec(1, 1));
    FeSpace space(tri, {scalar_lagrangian(order)});
    check_conforming_oracle(space, 0);
    const int n = 3 * order + 1, m = 2 * order + 1;
    CHECK(space.num_free_dofs(0) == n * m);
  }
  {
    const auto tri = Triangulation::structured(3, {2, 2, 2}, vec(0, 0, 0), vec(1, 1, 1));
    FeSpace space(tri, {scalar_lagrangian(2)});
    check_conforming_oracle(space, 0);
    CHECK(space.num_free_dofs(0) == 5 * 5 * 5);
  }
  {
    // unstructured triangle mesh (reoriented on creation)
    const std::vector<Vec> coords = {vec(0, 0), vec(1, 0), vec(0, 1), vec(1, 1), vec(0.4, 0.6)};
    const auto tri = Triangulation::from_cell_vertices(
        2, 0b00, coords, {{2, 0, 4}, {0, 1, 4}, {1, 3, 4}, {3, 2, 4}});
    FeSpace space(tri, {scalar_lagrangian(3)});
    check_conforming_oracle(space, 0);
  }
  {
    // hand-glued hexes with a rotated neighbour exercise the permutations
    std::vector<Vec> coords = {vec(0, 0, 0), vec(1, 0, 0), vec(0, 1, 0), vec(1, 1, 0),
                               vec(0, 0, 1), vec(1, 0, 1), vec(0, 1, 1), vec(1, 1, 1),
                               vec(2, 0, 0), vec(2, 1, 0), vec(2, 0, 1), vec(2, 1, 1)};
    const std::vector<int> left = {0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<int> right = {1, 8, 5, 10, 3, 9, 7, 11};  // twisted about x
    const auto tri = Triangulation::from_cell_vertices(3, 0b111, coords, {left, right});
    FeSpace space(tri, {scalar_lagrangian(3)});
    check_conforming_oracle(space, 0);
  }
}

TEST_CASE("Taylor-Hood counts and block layouts") {
  const auto tri = Triangulation::structured(2, {2, 2}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {FieldSpec::uniform({FeType::lagrangian, 2, FieldType::vector, true}),
                      FieldSpec::uniform({FeType::lagrangian, 1, FieldType::scalar, true})});
  CHECK(space.num_free_dofs(0) == 50);  // 2 * 25 velocity nodes
  CHECK(space.num_free_dofs(1) == 9);

  // monolithic: velocity block first, then pressure
  CHECK(space.block_layout().num_blocks == 1);
  CHECK(space.field_offset_in_block(0) == 0);
  CHECK(space.field_offset_in_block(1) == 50);
  CHECK(space.num_block_dofs(0) == 59);

  // two blocks: pressure ids restart at zero
  BlockLayout two;
  two.num_blocks = 2;
  two.field_blocks = {0, 1};
  space.generate_global_dof_numbering(two);
  CHECK(space.field_offset_in_block(1) == 0);
  CHECK(space.num_block_dofs(0) == 50);
  CHECK(space.num_block_dofs(1) == 9);
  // per-field counts are layout independent
  CHECK(space.num_free_dofs(0) == 50);
  CHECK(space.num_free_dofs(1) == 9);
  // regenerating with the unchanged layout is a no-op
  space.generate_global_dof_numbering(two);
  CHECK(space.field_offset_in_block(1) == 0);
  CHECK(space.num_block_dofs(1) == 9);
}

TEST_CASE("void FE on a cell set contributes zero DOFs") {
  const auto tri0 = Triangulation::structured(2, {2, 1}, vec(0, 0), vec(2, 1));
  // mark the right cell as set 2
  std::vector<Vec> coords;
  for (int v = 0; v < tri0.num_vertices(); ++v) coords.push_back(tri0.vertex(v));
  std::vector<std::vector<int>> cells;
  for (int c = 0; c < tri0.num_cells(); ++c) cells.push_back(tri0.cell_vertices(c));
  auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
  tri.set_cell_set_id(1, 2);

  FieldSpec spec = scalar_lagrangian(1);
  spec.by_cell_set[2] = RefFeDesc::void_fe();
  FeSpace space(tri, {spec});
  CHECK(space.num_free_dofs(0) == 4);  // only the left quad's corners
  CHECK(space.fe_dofs(1, 0).empty());
}

TEST_CASE("unmapped cell set is an error") {
  const auto tri0 = Triangulation::structured(2, {1, 1}, vec(0, 0), vec(1, 1));
  std::vector<Vec> coords;
  for (int v = 0; v < tri0.num_vertices(); ++v) coords.push_back(tri0.vertex(v));
  auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, {tri0.cell_vertices(0)});
  tri.set_cell_set_id(0, 7);
  FieldSpec spec;
  spec.by_cell_set[0] = {FeType::lagrangian, 1, FieldType::scalar, true};
  CHECK_THROWS(FeSpace(tri, {spec}));
}

TEST_CASE("variable order in a conforming field is rejected") {
  const auto tri0 = Triangulation::structured(2, {2, 1}, vec(0, 0), vec(2, 1));
  std::vector<Vec> coords;
  for (int v = 0; v < tri0.num_vertices(); ++v) coords.push_back(tri0.vertex(v));
  std::vector<std::vector<int>> cells;
  for (int c = 0; c < tri0.num_cells(); ++c) cells.push_back(tri0.cell_vertices(c));
  auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
  tri.set_cell_set_id(1, 2);

  FieldSpec spec = scalar_lagrangian(1);
  spec.by_cell_set[2] = {FeType::lagrangian, 2, FieldType::scalar, true};
  CHECK_THROWS(FeSpace(tri, {spec}));

  // the same split is fine for a non-conforming field
  FieldSpec dg = scalar_lagrangian(1, false);
  dg.by_cell_set[2] = {FeType::lagrangian, 2, FieldType::scalar, false};
  FeSpace space(tri, {dg});
  CHECK(space.num_free_dofs(0) == 4 + 9);
}

TEST_CASE("Q1 interpolation of x + y is exact; idempotent projection") {
  const auto tri = Triangulation::structured(2, {3, 3}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {scalar_lagrangian(1)});
  space.setup_cell_integration();
  FeFunction u(space);
  const ScalarFunc f = [](const Vec& x) { return x[0] + x[1]; };
  space.interpolate(0, {f}, u, true);

  std::vector<double> local;
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    space.update_cell(cell);
    CellFeFunction cf;
    cf.update(space, cell, 0, u);
    const auto& q = space.cell_quadrature(cell);
    for (int p = 0; p < q.num_points(); ++p) {
      const Vec x = space.cell_map(cell).physical_point(p);
      CHECK(std::abs(cf.value(p) - f(x)) <= 1e-13);
    }
  }

  // nodal idempotency: interpolating the interpolant changes nothing
  FeFunction u2(space);
  // (exact same nodal values since interpolation is nodal and u reproduces f)
  space.interpolate(0, {f}, u2, true);
  for (std::size_t i = 0; i < u.free_blocks[0].size(); ++i)
    CHECK(u2.free_blocks[0][i] == doctest::Approx(u.free_blocks[0][i]).epsilon(1e-15));
}

TEST_CASE("Dirichlet interpolation writes only fixed values") {
  const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {scalar_lagrangian(1)},
                {{0, all_boundary_scalar([](const Vec&) { return 1.0; })}});
  FeFunction u(space);
  space.interpolate_dirichlet(u);
  for (double v : u.fixed) CHECK(v == doctest::Approx(1.0));
  for (double v : u.free_blocks[0]) CHECK(v == 0.0);

  // gathering on a boundary cell reproduces u_D at the fixed positions
  std::vector<double> local;
  space.gather_cell_values(u, 0, 0, local);
  const auto ids = space.fe_dofs(0, 0);
  for (std::size_t a = 0; a < ids.size(); ++a)
    CHECK(local[a] == doctest::Approx(ids[a] < 0 ? 1.0 : 0.0));
}

TEST_CASE("RT0 interpolation of a constant field on unit cells") {
  // 4x4 mesh of unit cells: every x-facet moment is the total flux of (1,0),
  // +1 on facets owned with outward +x, -1 on the x=0 boundary facets.
  const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(4, 4));
  FeSpace space(tri, {FieldSpec::uniform({FeType::raviart_thomas, 0, FieldType::vector, true})});
  space.setup_cell_integration();
  FeFunction u(space);
  space.interpolate(0, {[](const Vec&) { return 1.0; }, [](const Vec&) { return 0.0; }}, u, true);

  for (double v : u.free_blocks[0]) {
    const double a = std::abs(v);
    CHECK((a <= 1e-12 || std::abs(a - 1.0) <= 1e-12));
  }
  // the interpolant reproduces the field at quadrature points
  for (int cell = 0; cell < tri.num_cells(); ++cell) {
    space.update_cell(cell);
    CellFeFunction cf;
    cf.update(space, cell, 0, u);
    const auto& q = space.cell_quadrature(cell);
    for (int p = 0; p < q.num_points(); ++p) {
      CHECK(cf.value(p, 0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(cf.value(p, 1)) <= 1e-12);
    }
  }
}

TEST_CASE("RT0 conformity: normal traces agree at every interior facet point") {
  const auto tri = Triangulation::structured(2, {4, 4}, vec(0, 0), vec(1, 1));
  FeSpace space(tri, {FieldSpec::uniform({FeType::raviart_thomas, 0, FieldType::vector, true})});
  space.setup_cell_integration();
  space.setup_facet_integration();
  FeFunction u(space);
  // smooth non-trivial field
  space.interpolate(0, {[](const Vec& x) { return x[0] * x[0] + x[1]; },
                        [](const Vec& x) { return x[0] - 2.0 * x[1]; }},
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
      CHECK(std::abs(jump) <= 1e-12);
    }
  }
}

TEST_CASE("integration caches: one key for a uniform mesh, two for mixed sets") {
  const auto tri0 = Triangulation::structured(2, {2, 1}, vec(0, 0), vec(2, 1));
  {
    FeSpace space(tri0, {scalar_lagrangian(1)});
    space.setup_cell_integration();
    CHECK(space.num_cached_cell_quadratures() == 1);
    CHECK(space.num_cached_cell_maps() == 1);
    CHECK(space.num_cached_cell_integrators() == 1);
  }
  {
    std::vector<Vec> coords;
    for (int v = 0; v < tri0.num_vertices(); ++v) coords.push_back(tri0.vertex(v));
    std::vector<std::vector<int>> cells;
    for (int c = 0; c < tri0.num_cells(); ++c) cells.push_back(tri0.cell_vertices(c));
    auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
    tri.set_cell_set_id(1, 2);
    FieldSpec dg = scalar_lagrangian(1, false);
    dg.by_cell_set[2] = {FeType::lagrangian, 2, FieldType::scalar, false};
    FeSpace space(tri, {dg});
    space.setup_cell_integration();
    CHECK(space.num_cached_cell_integrators() == 2);
  }
}

TEST_CASE("default quadrature degree for order-k Lagrangian is 2k") {
  const auto tri = Triangulation::structured(2, {1, 1}, vec(0, 0), vec(1, 1));
  for (int k : {1, 2, 3}) {
    FeSpace space(tri, {scalar_lagrangian(k)});
    space.setup_cell_integration();
    // a tensor rule of degree 2k has ceil((2k+1)/2) = k+1 points per direction
    CHECK(space.cell_quadrature(0).num_points() == (k + 1) * (k + 1));
  }
}

TEST_CASE("gathers on a void cell are empty") {
  const auto tri0 = Triangulation::structured(2, {2, 1}, vec(0, 0), vec(2, 1));
  std::vector<Vec> coords;
  for (int v = 0; v < tri0.num_vertices(); ++v) coords.push_back(tri0.vertex(v));
  std::vector<std::vector<int>> cells;
  for (int c = 0; c < tri0.num_cells(); ++c) cells.push_back(tri0.cell_vertices(c));
  auto tri = Triangulation::from_cell_vertices(2, 0b11, coords, cells);
  tri.set_cell_set_id(1, 2);
  FieldSpec spec = scalar_lagrangian(1);
  spec.by_cell_set[2] = RefFeDesc::void_fe();
  FeSpace space(tri, {spec});
  FeFunction u(space);
  std::vector<double> local{1.0};
  space.gather_cell_values(u, 1, 0, local);
  CHECK(local.empty());
}
