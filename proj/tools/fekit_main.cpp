#include <CLI11.hpp>
#include <iostream>

#include "fekit/drivers.hpp"
#include "fekit/vtk.hpp"

namespace {

std::vector<int> parse_cells(const std::string& spec) {
  std::vector<int> cells;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) cells.push_back(std::stoi(tok));
  if (cells.empty() || cells.size() > 3)
    throw CLI::ValidationError("--cells", "expected nx[,ny[,nz]]");
  return cells;
}

fekit::Triangulation make_mesh(const std::string& mesh_file, const std::string& cells_spec,
                               int dim) {
  if (!mesh_file.empty()) return fekit::Triangulation::import_mesh(mesh_file);
  auto cells = parse_cells(cells_spec);
  while (static_cast<int>(cells.size()) < dim) cells.push_back(cells.back());
  cells.resize(static_cast<std::size_t>(dim));
  fekit::Vec lo, hi;
  for (int i = 0; i < dim; ++i) hi[i] = 1.0;
  return fekit::Triangulation::structured(dim, cells, lo, hi);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fekit: finite element kernels and manufactured-solution drivers"};
  app.require_subcommand(1);

  // mesh: structured generation + export
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a structured mesh and export it");
  std::string mesh_cells = "2,2";
  int mesh_dim = 0;
  std::string mesh_out = "out.msh";
  mesh_cmd->add_option("--cells", mesh_cells, "cells per direction, nx[,ny[,nz]]");
  mesh_cmd->add_option("--dim", mesh_dim, "space dimension (default: inferred from --cells)");
  mesh_cmd->add_option("--out", mesh_out, "output mesh path");

  // poisson
  auto* poisson_cmd = app.add_subcommand("poisson", "solve the Poisson problem");
  std::string method = "cg";
  int order = 1;
  std::string cells = "8,8";
  int dim = 0;
  double penalty = 10.0, tau = 1.0;
  std::string mesh_file, vtk_out;
  std::string case_name = "sine";
  poisson_cmd->add_option("--method", method, "cg or dg")->check(CLI::IsMember({"cg", "dg"}));
  poisson_cmd->add_option("--order", order, "polynomial order k")->check(CLI::PositiveNumber);
  poisson_cmd->add_option("--cells", cells, "structured cells per direction");
  poisson_cmd->add_option("--dim", dim, "space dimension");
  poisson_cmd->add_option("--penalty", penalty, "SIPG penalty factor gamma0");
  poisson_cmd->add_option("--tau", tau, "adjoint-consistency factor");
  poisson_cmd->add_option("--mesh", mesh_file, "ASCII mesh file instead of --cells");
  poisson_cmd->add_option("--vtk", vtk_out, "write the solution to a VTK file");
  poisson_cmd->add_option("--case", case_name, "manufactured case: sine or linear")
      ->check(CLI::IsMember({"sine", "linear"}));

  // stokes
  auto* stokes_cmd = app.add_subcommand("stokes", "solve the Stokes problem (Taylor-Hood)");
  int s_order = 1;
  std::string s_cells = "8,8", s_mesh, s_vtk;
  std::string s_case = "vortex";
  stokes_cmd->add_option("--order", s_order, "pressure order k (velocity k+1)")->check(CLI::PositiveNumber);
  stokes_cmd->add_option("--cells", s_cells, "structured cells per direction");
  stokes_cmd->add_option("--mesh", s_mesh, "ASCII mesh file instead of --cells");
  stokes_cmd->add_option("--vtk", s_vtk, "write the solution to a VTK file");
  stokes_cmd->add_option("--case", s_case, "manufactured case: vortex or polynomial")
      ->check(CLI::IsMember({"vortex", "polynomial"}));

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "uniform refinement study on the unit square");
  std::string driver = "poisson-cg";
  int levels = 4, c_order = 1, base = 4;
  conv_cmd->add_option("--driver", driver, "poisson-cg, poisson-dg or stokes")
      ->check(CLI::IsMember({"poisson-cg", "poisson-dg", "stokes"}));
  conv_cmd->add_option("--order", c_order, "polynomial order")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--levels", levels, "refinement levels")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--base", base, "cells per direction at the coarsest level");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh_cmd) {
      auto cv = parse_cells(mesh_cells);
      const int d = mesh_dim > 0 ? mesh_dim : static_cast<int>(cv.size());
      while (static_cast<int>(cv.size()) < d) cv.push_back(cv.back());
      cv.resize(static_cast<std::size_t>(d));
      fekit::Vec lo, hi;
      for (int i = 0; i < d; ++i) hi[i] = 1.0;
      const auto tri = fekit::Triangulation::structured(d, cv, lo, hi);
      tri.export_mesh(mesh_out);
      std::cout << "mesh: " << tri.num_cells() << " cells, " << tri.num_vefs() << " vefs -> "
                << mesh_out << "\n";
      return 0;
    }

    if (*poisson_cmd) {
      const int d = dim > 0 ? dim : static_cast<int>(parse_cells(cells).size());
      const auto tri = make_mesh(mesh_file, cells, d);
      const auto mc = case_name == "sine" ? fekit::ManufacturedPoisson::sine(tri.num_dims())
                                          : fekit::ManufacturedPoisson::linear(tri.num_dims());
      if (method == "cg") {
        fekit::PoissonCgDriver drv(tri, order, mc);
        const auto rep = drv.run();
        std::cout << "poisson cg: dofs free " << rep.free_dofs << " fixed " << rep.fixed_dofs
                  << ", cg iterations " << rep.iterations << "\n";
        std::cout << "errors: L2 " << rep.errors.l2 << " H1-semi " << rep.errors.h1_semi << "\n";
        if (!vtk_out.empty())
          fekit::write_vtk(drv.space(), {{"u", 0, &drv.solution()}}, vtk_out);
      } else {
        fekit::PoissonDgDriver drv(tri, order, mc, tau, penalty);
        const auto rep = drv.run();
        std::cout << "poisson dg: dofs free " << rep.free_dofs << ", solver iterations "
                  << rep.iterations << "\n";
        std::cout << "errors: L2 " << rep.errors.l2 << " H1-semi " << rep.errors.h1_semi << "\n";
        if (!vtk_out.empty())
          fekit::write_vtk(drv.space(), {{"u", 0, &drv.solution()}}, vtk_out);
      }
      return 0;
    }

    if (*stokes_cmd) {
      const auto tri = make_mesh(s_mesh, s_cells, 2);
      if (tri.num_dims() != 2) throw std::runtime_error("stokes: 2D meshes only");
      const auto mc = s_case == "vortex" ? fekit::ManufacturedStokes::vortex()
                                         : fekit::ManufacturedStokes::polynomial();
      fekit::StokesDriver drv(tri, s_order, mc);
      const auto rep = drv.run();
      std::cout << "stokes Q" << s_order + 1 << "/Q" << s_order << ": dofs free " << rep.free_dofs
                << " fixed " << rep.fixed_dofs << ", residual " << rep.residual << "\n";
      std::cout << "errors: velocity L2 " << rep.velocity.l2 << " H1-semi " << rep.velocity.h1_semi
                << " pressure L2 " << rep.pressure_l2 << "\n";
      if (!s_vtk.empty())
        fekit::write_vtk(drv.space(), {{"velocity", 0, &drv.solution()}, {"pressure", 1, &drv.solution()}},
                         s_vtk);
      return 0;
    }

    if (*conv_cmd) {
      fekit::convergence_study(driver, c_order, levels, base, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
