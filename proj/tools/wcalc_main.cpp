// Command-line front end: every subcommand reads measures/curves from files,
// runs the corresponding library operation, and prints one JSON document to
// stdout. Results embed the input digests and every tolerance and grid
// parameter used, so identical inputs and flags give byte-identical output.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wcalc/calculus.hpp"
#include "wcalc/errors.hpp"
#include "wcalc/forms.hpp"
#include "wcalc/green.hpp"
#include "wcalc/io.hpp"
#include "wcalc/library.hpp"
#include "wcalc/measure.hpp"
#include "wcalc/parallel.hpp"
#include "wcalc/symplectic.hpp"
#include "wcalc/transport.hpp"

namespace {

using namespace wcalc;

constexpr double kDualSlack = 1e-9;
constexpr double kMarginalTol = 1e-9;
constexpr double kClosednessTol = 1e-8;

struct InputRef {
  std::string label;
  std::string path;
};

void write_inputs(JsonWriter& w, const std::vector<InputRef>& inputs) {
  w.begin_object("inputs");
  for (const InputRef& in : inputs) {
    w.begin_object(in.label);
    w.field("path", in.path);
    w.field("digest", file_digest(in.path));
    w.end_object();
  }
  w.end_object();
}

MeasureCurve load_curve(const std::string& path) {
  MeasureCurve curve = read_curve_csv(path);
  if (!curve.has_velocities()) return with_velocities_from_trajectories(curve);
  return curve;
}

int run_dist(const std::string& a_path, const std::string& b_path) {
  const DiscreteMeasure a = read_measure_json(a_path);
  const DiscreteMeasure b = read_measure_json(b_path);
  const double w2 = w2_distance(a, b);
  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("dist"));
  write_inputs(w, {{"a", a_path}, {"b", b_path}});
  w.begin_object("params");
  w.field("dual_feasibility_slack", kDualSlack);
  w.field("marginal_tolerance", kMarginalTol);
  w.end_object();
  w.field("w2", w2);
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_plan(const std::string& a_path, const std::string& b_path) {
  const DiscreteMeasure a = read_measure_json(a_path);
  const DiscreteMeasure b = read_measure_json(b_path);
  const TransportPlan plan = optimal_plan(a, b);
  const DualPotentials duals = dual_potentials(a, b);
  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("plan"));
  write_inputs(w, {{"a", a_path}, {"b", b_path}});
  w.begin_object("params");
  w.field("dual_feasibility_slack", kDualSlack);
  w.field("marginal_tolerance", kMarginalTol);
  w.end_object();
  w.begin_array("gamma");
  for (int i = 0; i < plan.gamma().rows(); ++i) {
    w.begin_array();
    for (int j = 0; j < plan.gamma().cols(); ++j) w.element(plan.gamma()(i, j));
    w.end_array();
  }
  w.end_array();
  w.field("cost", plan.cost());
  w.field("dual_value", duals.value);
  w.field("marginal_defect", plan.marginal_defect());
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_velocity(const std::string& curve_path, const std::string& out_path) {
  const MeasureCurve curve = with_velocities_from_trajectories(read_curve_csv(curve_path));
  if (!out_path.empty()) write_curve_csv(out_path, curve);
  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("velocity"));
  write_inputs(w, {{"curve", curve_path}});
  w.begin_object("params");
  w.field("interior_stencil", std::string("central"));
  w.field("endpoint_stencil", std::string("one-sided"));
  w.end_object();
  w.field("samples", curve.samples());
  w.field("atoms", curve.atom_count());
  w.field("max_speed", curve.max_speed());
  if (!out_path.empty()) {
    w.field("out", out_path);
    w.field("out_digest", file_digest(out_path));
  }
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_integrate(const std::string& form_name, const std::string& curve_path) {
  const MeasureCurve curve = load_curve(curve_path);
  const PseudoOneForm form = form_by_name(form_name, curve.dimension());
  const LineIntegral li = line_integral_detailed(form, curve);
  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("integrate"));
  write_inputs(w, {{"curve", curve_path}});
  w.begin_object("params");
  w.field("form", form_name);
  w.field("quadrature", std::string("trapezoid"));
  w.field("time_intervals", curve.intervals());
  w.end_object();
  w.field("integral", li.value);
  if (std::isfinite(li.half_grid_delta))
    w.field("half_grid_delta", li.half_grid_delta);
  else
    w.field("half_grid_delta", std::string("unavailable (odd interval count)"));
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

std::pair<int, int> parse_grid(const std::string& grid) {
  const size_t x = grid.find('x');
  if (x == std::string::npos)
    fail(ErrorCode::InvalidArgument, "grid must look like 128x64");
  try {
    return {std::stoi(grid.substr(0, x)), std::stoi(grid.substr(x + 1))};
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "grid must look like 128x64");
  }
}

int run_green(const std::string& form_name, const std::string& curve_path, double r,
              const std::string& grid) {
  const auto [nt, ns] = parse_grid(grid);
  MeasureCurve curve = load_curve(curve_path);
  if (nt < 4 || curve.intervals() % nt != 0)
    fail(ErrorCode::InvalidArgument,
         "time grid must divide the curve's " + std::to_string(curve.intervals()) +
             " intervals");
  curve = subsampled(curve, curve.intervals() / nt);
  const PseudoOneForm form = form_by_name(form_name, curve.dimension());
  const RefinementTable table = green_refinement(form, curve, r, ns);

  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("green"));
  write_inputs(w, {{"curve", curve_path}});
  w.begin_object("params");
  w.field("form", form_name);
  w.field("r", r);
  w.field("grid", grid);
  w.field("threads", worker_count());
  w.end_object();
  w.field("surface_integral", table.rows.front().surface);
  w.field("boundary_integral", table.rows.front().boundary);
  w.field("residual", table.rows.front().residual);
  w.begin_array("refinement");
  for (const RefinementRow& row : table.rows) {
    w.begin_object();
    w.field("time_intervals", row.time_intervals);
    w.field("radial_intervals", row.radial_intervals);
    w.field("surface", row.surface);
    w.field("boundary", row.boundary);
    w.field("residual", row.residual);
    w.end_object();
  }
  w.end_array();
  if (table.observed_order.has_value())
    w.field("observed_order", *table.observed_order);
  else
    w.field("observed_order", std::string("at-noise"));
  w.field("noise_floor", table.noise_floor);
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_loop(const std::string& form_name, const std::string& curve_path,
             std::vector<double> radii, double w2_tol, bool assume_closed) {
  const MeasureCurve curve = load_curve(curve_path);
  const PseudoOneForm form = form_by_name(form_name, curve.dimension());
  if (radii.empty()) radii = {0.2, 0.1, 0.05};
  const LoopReport report = loop_integral(form, curve, radii, assume_closed, w2_tol);

  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("loop"));
  write_inputs(w, {{"curve", curve_path}});
  w.begin_object("params");
  w.field("form", form_name);
  w.field("w2_tolerance", w2_tol);
  w.field("closedness_tolerance", kClosednessTol);
  w.begin_array("radii");
  for (double r : radii) w.element(r);
  w.end_array();
  w.end_object();
  w.field("integral", report.integral);
  w.field("closedness_defect", report.closedness_defect);
  w.field("max_speed", report.max_speed);
  w.begin_array("edges");
  for (const LoopEdge& e : report.edges) {
    w.begin_object();
    w.field("r", e.radius);
    w.field("l_r", e.value);
    w.field("bound", e.bound);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_potential(const std::string& form_name, const std::string& measure_path,
                  int steps, bool assume_closed) {
  const DiscreteMeasure mu = read_measure_json(measure_path);
  const PseudoOneForm form = form_by_name(form_name, mu.dimension());
  const PotentialReport report =
      reconstruct_potential_detailed(form, mu, steps, assume_closed);

  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("potential"));
  write_inputs(w, {{"measure", measure_path}});
  w.begin_object("params");
  w.field("form", form_name);
  w.field("steps", steps);
  w.field("closedness_tolerance", kClosednessTol);
  w.end_object();
  w.field("potential", report.value);
  w.field("closedness_defect", report.closedness_defect);
  w.begin_array("stages");
  for (const PotentialStage& s : report.stages) {
    w.begin_object();
    w.field("epsilon", s.epsilon);
    w.field("value", s.value);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_flow(const std::string& ham_name, const std::string& measure_path, double t_final,
             double dt, const std::string& scheme_name, const std::string& out_path,
             int stride) {
  const DiscreteMeasure mu0 = read_measure_json(measure_path);
  const HamiltonianSystem system = hamiltonian_by_name(ham_name, mu0.dimension());
  const FlowScheme scheme = flow_scheme_from_name(scheme_name);
  FlowOptions options;
  options.store_stride = stride;
  const MeasureCurve curve = hamiltonian_flow(system, mu0, t_final, dt, scheme, options);
  if (!out_path.empty()) write_curve_csv(out_path, curve);

  const double energy0 = system.hamiltonian.eval(curve.front());
  const double energy1 = system.hamiltonian.eval(curve.back());
  JsonWriter w;
  w.begin_object();
  w.field("command", std::string("flow"));
  write_inputs(w, {{"measure", measure_path}});
  w.begin_object("params");
  w.field("hamiltonian", ham_name);
  w.field("T", t_final);
  w.field("dt", dt);
  w.field("scheme", scheme_name);
  w.field("store_stride", stride);
  w.field("collision_tolerance", options.collision_tol);
  w.end_object();
  w.field("samples", curve.samples());
  w.field("energy_initial", energy0);
  w.field("energy_final", energy1);
  w.field("energy_drift", std::abs(energy1 - energy0));
  w.begin_array("final_atoms");
  for (int i = 0; i < curve.back().size(); ++i) {
    w.begin_array();
    for (int k = 0; k < curve.dimension(); ++k) w.element(curve.back().atom(i)(k));
    w.end_array();
  }
  w.end_array();
  if (!out_path.empty()) {
    w.field("out", out_path);
    w.field("out_digest", file_digest(out_path));
  }
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int report_error(const Error& e) {
  JsonWriter w;
  w.begin_object();
  w.field("error", std::string(error_code_name(e.code())));
  w.field("message", std::string(e.what()));
  if (!std::isnan(e.when())) w.field("at_time", e.when());
  w.end_object();
  std::cerr << w.str() << "\n";
  return is_validation_error(e.code()) ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transport, differential forms, and Hamiltonian flows "
               "over finitely-atomic measures"};
  app.require_subcommand(1);

  std::string a_path, b_path, curve_path, measure_path, out_path;
  std::string form_name, ham_name = "oscillator", scheme_name = "rk4";
  std::string grid = "128x64";
  std::vector<double> radii;
  double r = 0.1, w2_tol = 1e-8, t_final = 1.0, dt = 1e-3;
  int steps = 4096, stride = 1;
  bool assume_closed = false;

  CLI::App* dist = app.add_subcommand("dist", "W_2 distance between two measures");
  dist->add_option("a", a_path, "source measure JSON")->required()->check(CLI::ExistingFile);
  dist->add_option("b", b_path, "target measure JSON")->required()->check(CLI::ExistingFile);

  CLI::App* plan = app.add_subcommand("plan", "optimal transport plan");
  plan->add_option("a", a_path)->required()->check(CLI::ExistingFile);
  plan->add_option("b", b_path)->required()->check(CLI::ExistingFile);

  CLI::App* velocity = app.add_subcommand("velocity", "velocities from trajectories");
  velocity->add_option("--curve", curve_path)->required()->check(CLI::ExistingFile);
  velocity->add_option("--out", out_path, "output CSV path");

  CLI::App* integrate = app.add_subcommand("integrate", "line integral of a form");
  integrate->add_option("--form", form_name)->required();
  integrate->add_option("--curve", curve_path)->required()->check(CLI::ExistingFile);

  CLI::App* green = app.add_subcommand("green", "annulus surface vs boundary integrals");
  green->add_option("--form", form_name)->required();
  green->add_option("--curve", curve_path)->required()->check(CLI::ExistingFile);
  green->add_option("--r", r, "inner radius")->check(CLI::Range(1e-6, 0.999999));
  green->add_option("--grid", grid, "time x radial intervals, e.g. 128x64");

  CLI::App* loop = app.add_subcommand("loop", "loop integral of a closed form");
  loop->add_option("--form", form_name)->required();
  loop->add_option("--curve", curve_path)->required()->check(CLI::ExistingFile);
  loop->add_option("--radii", radii, "inner-edge radii");
  loop->add_option("--w2-tol", w2_tol, "closed-curve tolerance");
  loop->add_flag("--assume-closed", assume_closed, "skip the closedness sampling");

  CLI::App* potential = app.add_subcommand("potential", "potential of a closed form");
  potential->add_option("--form", form_name)->required();
  potential->add_option("--measure", measure_path)->required()->check(CLI::ExistingFile);
  potential->add_option("--steps", steps, "quadrature intervals")->check(CLI::PositiveNumber);
  potential->add_flag("--assume-closed", assume_closed);

  CLI::App* flow = app.add_subcommand("flow", "Hamiltonian flow of a measure");
  flow->add_option("--hamiltonian", ham_name)->required();
  flow->add_option("--measure", measure_path)->required()->check(CLI::ExistingFile);
  flow->add_option("--T", t_final)->required()->check(CLI::PositiveNumber);
  flow->add_option("--dt", dt)->required()->check(CLI::PositiveNumber);
  flow->add_option("--scheme", scheme_name)->check(CLI::IsMember({"rk4", "implicit-midpoint"}));
  flow->add_option("--out", out_path, "trajectory CSV path");
  flow->add_option("--stride", stride, "store every k-th step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dist) return run_dist(a_path, b_path);
    if (*plan) return run_plan(a_path, b_path);
    if (*velocity) return run_velocity(curve_path, out_path);
    if (*integrate) return run_integrate(form_name, curve_path);
    if (*green) return run_green(form_name, curve_path, r, grid);
    if (*loop) return run_loop(form_name, curve_path, radii, w2_tol, assume_closed);
    if (*potential) return run_potential(form_name, measure_path, steps, assume_closed);
    if (*flow) return run_flow(ham_name, measure_path, t_final, dt, scheme_name, out_path, stride);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"Internal\", \"message\": \"" << e.what() << "\"}\n";
    return 3;
  }
  return 2;
}
