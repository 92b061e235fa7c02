#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wcalc/errors.hpp"
#include "wcalc/green.hpp"
#include "wcalc/library.hpp"
#include "wcalc/transport.hpp"

using namespace wcalc;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

// Dirac loop on the unit circle with analytic velocities.
MeasureCurve circle_curve(int intervals, double radius = 1.0) {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (int k = 0; k <= intervals; ++k) {
    const double t = kTwoPi * k / intervals;
    times.push_back(t);
    measures.push_back(dirac(v2(radius * std::cos(t), radius * std::sin(t))));
    TangentField v;
    v.vectors.push_back(v2(-radius * std::sin(t), radius * std::cos(t)));
    velocities.push_back(v);
  }
  return MeasureCurve(times, measures, velocities);
}

// Wobbly two-atom loop; trajectories are closed Fourier paths.
MeasureCurve wobble_loop(int intervals) {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (int k = 0; k <= intervals; ++k) {
    const double t = kTwoPi * k / intervals;
    times.push_back(t);
    const Vec a = v2(std::cos(t) + 0.2 * std::cos(2 * t) + 1.0, std::sin(t));
    const Vec b = v2(0.5 * std::sin(t) - 1.5, 0.3 * std::cos(t) + 0.2 * std::sin(3 * t));
    measures.push_back(make_measure({a, b}, {0.5, 0.5}));
    TangentField v;
    v.vectors.push_back(v2(-std::sin(t) - 0.4 * std::sin(2 * t), std::cos(t)));
    v.vectors.push_back(v2(0.5 * std::cos(t), -0.3 * std::sin(t) + 0.6 * std::cos(3 * t)));
    velocities.push_back(v);
  }
  return MeasureCurve(times, measures, velocities);
}

}  // namespace

TEST_CASE("annulus construction and scaling identities") {
  const MeasureCurve base = wobble_loop(64);
  const AnnulusSurface surface = make_annulus(base, 0.25, 8);
  const DiscreteMeasure origin = dirac(v2(0, 0));

  for (int a = 0; a < surface.radial_samples(); a += 3) {
    const double s = surface.radius(a);
    for (int k = 0; k < surface.time_samples(); k += 13) {
      // W2(S(s,t), delta_0) = s W2(sigma_t, delta_0); the plan to a dirac is
      // forced, so both sides are second moments.
      CHECK(std::sqrt(surface.measure(a, k).second_moment()) ==
            doctest::Approx(s * std::sqrt(base.measure(k).second_moment())).epsilon(1e-12));
      CHECK(w2_distance(surface.measure(a, k), origin) ==
            doctest::Approx(s * w2_distance(base.measure(k), origin)).epsilon(1e-9));
      // ||v^s|| = s ||v||.
      CHECK(field_norm(surface.measure(a, k), surface.tangential(a, k)) ==
            doctest::Approx(s * field_norm(base.measure(k), base.velocity(k))).epsilon(1e-12));
      // Radial vector at the dilated atom is the base atom.
      for (int i = 0; i < base.atom_count(); ++i)
        CHECK((surface.radial(a, k)[i] - base.measure(k).atom(i)).norm() == 0.0);
    }
  }

  // The outer rim is the curve itself.
  for (int k = 0; k < surface.time_samples(); ++k) {
    const int top = surface.radial_samples() - 1;
    CHECK((surface.measure(top, k).atom(0) - base.measure(k).atom(0)).norm() == 0.0);
    CHECK((surface.tangential(top, k)[0] - base.velocity(k)[0]).norm() == 0.0);
  }

  CHECK_THROWS_WITH_AS(make_annulus(base, 0.0, 8), doctest::Contains("BadRadius"), Error);
  CHECK_THROWS_WITH_AS(make_annulus(base, 1.0, 8), doctest::Contains("BadRadius"), Error);
  const MeasureCurve bare({0.0, 1.0}, {dirac(v2(0, 0)), dirac(v2(1, 0))});
  CHECK_THROWS_WITH_AS(make_annulus(bare, 0.5, 4), doctest::Contains("MissingVelocities"), Error);
}

TEST_CASE("mixed partials of the annulus trajectories commute") {
  // d/ds of the stored tangential vectors equals d/dt of the radial ones up
  // to the time-stencil error, which shrinks at second order.
  auto worst_defect = [](int intervals) {
    const MeasureCurve base = wobble_loop(intervals);
    const AnnulusSurface surface = make_annulus(base, 0.25, 16);
    const double ds = surface.radius(1) - surface.radius(0);
    double worst = 0.0;
    for (int a = 1; a + 1 < surface.radial_samples(); a += 5) {
      for (int k = 1; k + 1 < surface.time_samples(); k += 7) {
        const double dt = surface.time(k + 1) - surface.time(k - 1);
        for (int i = 0; i < base.atom_count(); ++i) {
          const Vec ds_v = (surface.tangential(a + 1, k)[i] -
                            surface.tangential(a - 1, k)[i]) / (2.0 * ds);
          const Vec dt_w = (surface.radial(a, k + 1)[i] - surface.radial(a, k - 1)[i]) / dt;
          worst = std::max(worst, (ds_v - dt_w).norm());
        }
      }
    }
    return worst;
  };
  const double coarse = worst_defect(128);
  const double fine = worst_defect(256);
  CHECK(coarse <= 1e-2);
  CHECK(fine <= coarse / 3.2);
}

TEST_CASE("green identity on the dirac circle") {
  const MeasureCurve circle = circle_curve(128);
  const AnnulusSurface surface = make_annulus(circle, 0.1, 64);

  SUBCASE("rotational form reproduces the classical area integral") {
    const PseudoOneForm rotational = form_by_name("rotational", 2);
    // Classical plane oracle: the loop integral of (-y, x) around the circle
    // of radius s is 2 pi s^2, so l(1) - l(r) = 2 pi (1 - r^2), and the
    // radial edges do not contribute.
    const double classical = oracles::trapezoid(
        [](double t) {
          const double c = std::cos(t), s = std::sin(t);
          return (-s) * (-s) + c * c;  // <A(c(t)), c'(t)>
        },
        0.0, kTwoPi, 4096);
    CHECK(classical == doctest::Approx(kTwoPi).epsilon(1e-10));

    const double surf = surface_integral_d(rotational, surface);
    const double bdry = boundary_integral(rotational, surface);
    CHECK(surf == doctest::Approx(-(1.0 - 0.01) * kTwoPi).epsilon(1e-10));
    CHECK(std::abs(surf - bdry) <= 1e-10);
    CHECK(green_residual(rotational, surface) <= 1e-10);
  }
  SUBCASE("gradient forms have vanishing surface term") {
    const PseudoOneForm gradient = form_by_name("gradient:mix", 2);
    CHECK(surface_integral_d(gradient, surface) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(green_residual(gradient, surface) <= 1e-8);
  }
  SUBCASE("resting curve gives zero on both sides") {
    const DiscreteMeasure mu = dirac(v2(0.7, 0.2));
    std::vector<double> times{0.0, 0.5, 1.0};
    const MeasureCurve still(times, {mu, mu, mu},
                             std::vector<TangentField>(3, TangentField::zero(1, 2)));
    const AnnulusSurface still_surface = make_annulus(still, 0.3, 4);
    const PseudoOneForm swirl = form_by_name("swirl", 2);
    CHECK(surface_integral_d(swirl, still_surface) == 0.0);
    CHECK(boundary_integral(swirl, still_surface) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("time reversal negates the boundary integral") {
  const MeasureCurve loop = wobble_loop(96);
  const PseudoOneForm swirl = form_by_name("swirl", 2);
  const double forward = boundary_integral(swirl, make_annulus(loop, 0.2, 12));
  const double backward = boundary_integral(swirl, make_annulus(reversed(loop), 0.2, 12));
  CHECK(backward == doctest::Approx(-forward).epsilon(1e-13));
}

TEST_CASE("refinement order") {
  SUBCASE("nonlinear field on the circle converges at second order") {
    const RefinementTable table =
        green_refinement(form_by_name("swirl", 2), circle_curve(128), 0.1, 64);
    REQUIRE(!table.at_noise());
    CHECK(*table.observed_order >= 1.8);
    CHECK(table.rows.front().residual < table.rows.back().residual);
  }
  SUBCASE("linear rotational field is exact at every grid") {
    const RefinementTable table =
        green_refinement(form_by_name("rotational", 2), circle_curve(128), 0.1, 64);
    CHECK(table.at_noise());
    for (const RefinementRow& row : table.rows) CHECK(row.residual <= table.noise_floor);
  }
}

TEST_CASE("loop integrals of closed forms vanish") {
  const std::vector<double> radii{0.2, 0.1, 0.05};
  SUBCASE("gradient form around the wobble loop") {
    const LoopReport report =
        loop_integral(form_by_name("gradient:mix", 2), wobble_loop(512), radii);
    CHECK(std::abs(report.integral) <= 1e-6);
    for (const LoopEdge& edge : report.edges) {
      CHECK(std::abs(edge.value - report.integral) <= 1e-6);  // l(r) = l(1)
      CHECK(std::abs(edge.value) <= 1.1 * edge.bound + 1e-12);
    }
  }
  SUBCASE("atom swap loop: closed as measures, open as trajectories") {
    // Two atoms trade places along a half rotation about their midpoint.
    const Vec p1 = v2(0.8, 0.1), p2 = v2(-0.4, -0.5);
    const Vec mid = 0.5 * (p1 + p2);
    const int intervals = 512;
    std::vector<double> times;
    std::vector<DiscreteMeasure> measures;
    std::vector<TangentField> velocities;
    for (int k = 0; k <= intervals; ++k) {
      const double t = static_cast<double>(k) / intervals;
      const double th = std::numbers::pi * t;
      Mat rot(2, 2);
      rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      Mat drot(2, 2);
      drot << -std::sin(th), -std::cos(th), std::cos(th), -std::sin(th);
      drot *= std::numbers::pi;
      times.push_back(t);
      measures.push_back(make_measure({mid + rot * (p1 - mid), mid + rot * (p2 - mid)},
                                      {0.5, 0.5}));
      TangentField v;
      v.vectors.push_back(drot * (p1 - mid));
      v.vectors.push_back(drot * (p2 - mid));
      velocities.push_back(v);
    }
    const MeasureCurve swap(times, measures, velocities);
    CHECK((swap.back().atom(0) - p2).norm() <= 1e-12);  // labels land swapped
    CHECK(w2_distance(swap.front(), swap.back()) <= 1e-12);

    const LoopReport report = loop_integral(form_by_name("gradient:quadratic", 2), swap, radii);
    CHECK(std::abs(report.integral) <= 1e-5);
    for (const LoopEdge& edge : report.edges)
      CHECK(std::abs(edge.value) <= 1.1 * edge.bound + 1e-12);
  }
  SUBCASE("open curves are rejected") {
    MeasureCurve arc = circle_curve(64);
    std::vector<double> times;
    std::vector<DiscreteMeasure> measures;
    std::vector<TangentField> velocities;
    for (int k = 0; k <= 32; ++k) {
      times.push_back(arc.time(k));
      measures.push_back(arc.measure(k));
      velocities.push_back(arc.velocity(k));
    }
    const MeasureCurve half(times, measures, velocities);
    CHECK_THROWS_WITH_AS(loop_integral(form_by_name("gradient:mix", 2), half, radii),
                         doctest::Contains("NotClosedCurve"), Error);
  }
  SUBCASE("the rotational form is flagged, and measures 2 pi as a counterexample") {
    const MeasureCurve circle = circle_curve(512);
    CHECK_THROWS_WITH_AS(loop_integral(form_by_name("rotational", 2), circle, radii),
                         doctest::Contains("NotClosedForm"), Error);
    const LoopReport forced =
        loop_integral(form_by_name("rotational", 2), circle, radii, /*assume_closed=*/true);
    CHECK(forced.integral == doctest::Approx(kTwoPi).epsilon(1e-10));
  }
}

TEST_CASE("potential reconstruction") {
  std::mt19937 rng(307);
  SUBCASE("exact forms integrate back to the linear functional") {
    for (const char* name : {"quadratic", "mix", "quartic"}) {
      const ScalarField f = scalar_by_name(name, 2);
      const PseudoOneForm df = exact_form(f);
      const DiscreteMeasure mu = oracles::random_measure(rng, 3, 2);
      const double expected = linear_functional(f, mu) - f(v2(0, 0));
      CHECK(reconstruct_potential(df, mu, 4096) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
  SUBCASE("the potential at a dirac at the origin vanishes") {
    const PseudoOneForm df = exact_form(scalar_by_name("quadratic", 2));
    CHECK(reconstruct_potential(df, dirac(v2(0, 0)), 256) == doctest::Approx(0.0));
  }
  SUBCASE("path independence: radial vs geodesic composite") {
    const ScalarField f = scalar_by_name("mix", 2);
    const PseudoOneForm df = exact_form(f);
    const DiscreteMeasure mu = oracles::random_measure(rng, 3, 2);
    const DiscreteMeasure via = oracles::random_measure(rng, 3, 2);
    const double radial = reconstruct_potential(df, mu, 4096);
    // delta_0 -> via along its radial path, then a geodesic leg via -> mu.
    const double to_via = reconstruct_potential(df, via, 4096);
    std::vector<double> grid;
    for (int k = 0; k <= 2048; ++k) grid.push_back(k / 2048.0);
    const double leg = line_integral(df, geodesic(via, mu, grid));
    CHECK(radial == doctest::Approx(to_via + leg).epsilon(1e-5));
  }
  SUBCASE("gradient of the reconstructed potential recovers the field") {
    const ScalarField f = scalar_by_name("quadratic", 2);
    const PseudoOneForm df = exact_form(f);
    const DiscreteMeasure mu = oracles::random_measure(rng, 2, 2);
    const Functional recon = reconstructed_potential(df, 2048, /*assume_closed=*/true);
    const TangentField grad = wasserstein_gradient(recon, mu, 1e-3);
    const TangentField expected = df.field_at(mu);
    for (int i = 0; i < mu.size(); ++i) CHECK((grad[i] - expected[i]).norm() <= 1e-4);
  }
  SUBCASE("non-closed forms are rejected") {
    const DiscreteMeasure mu = oracles::random_measure(rng, 3, 2);
    CHECK_THROWS_WITH_AS(reconstruct_potential(form_by_name("shear", 2), mu, 256),
                         doctest::Contains("NotClosedForm"), Error);
  }
}
