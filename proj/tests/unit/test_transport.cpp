#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wcalc/calculus.hpp"
#include "wcalc/errors.hpp"
#include "wcalc/library.hpp"
#include "wcalc/transport.hpp"

using namespace wcalc;

namespace {

Vec v1(double a) {
  Vec x(1);
  x << a;
  return x;
}

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_CASE("forced coupling between diracs") {
  const TransportPlan plan = optimal_plan(dirac(v2(0, 0)), dirac(v2(3, 4)));
  CHECK(plan.gamma()(0, 0) == doctest::Approx(1.0));
  CHECK(plan.cost() == doctest::Approx(25.0));
  CHECK(w2_distance(dirac(v2(0, 0)), dirac(v2(3, 4))) == doctest::Approx(5.0));
}

TEST_CASE("monotone plan beats the crossing plan") {
  const DiscreteMeasure mu = make_measure({v1(0), v1(2)}, {0.5, 0.5});
  const DiscreteMeasure nu = make_measure({v1(1), v1(3)}, {0.5, 0.5});
  // Oracle: the 2x2 uniform polytope has exactly two vertices.
  const double keep = 0.5 * 1.0 + 0.5 * 1.0;   // 0->1, 2->3
  const double cross = 0.5 * 9.0 + 0.5 * 1.0;  // 0->3, 2->1
  CHECK(keep == doctest::Approx(1.0));
  CHECK(cross == doctest::Approx(5.0));

  const TransportPlan plan = optimal_plan(mu, nu);
  CHECK(plan.cost() == doctest::Approx(1.0));
  CHECK(plan.gamma()(0, 0) == doctest::Approx(0.5));
  CHECK(plan.gamma()(1, 1) == doctest::Approx(0.5));
  CHECK(plan.gamma()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("uniform pairs match the permutation oracle") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5;
    const int d = 1 + static_cast<int>(rng() % 3);
    const DiscreteMeasure mu = oracles::random_measure(rng, n, d, true);
    const DiscreteMeasure nu = oracles::random_measure(rng, n, d, true);
    const double lp = optimal_plan(mu, nu).cost();
    const double brute = oracles::permutation_transport_cost(mu, nu);
    CHECK(lp == doctest::Approx(brute).epsilon(1e-9));
  }
}

TEST_CASE("plans satisfy marginals and cyclical monotonicity") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    const DiscreteMeasure mu = oracles::random_measure(rng, 4, 2);
    const DiscreteMeasure nu = oracles::random_measure(rng, 6, 2);
    const TransportPlan plan = optimal_plan(mu, nu);
    CHECK(plan.marginal_defect() <= 1e-9);
    CHECK(plan.support_is_cyclically_monotone());
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS_AS(optimal_plan(dirac(v1(0)), dirac(v2(0, 0))), Error);
  CHECK_THROWS_AS(w2_distance(dirac(v1(0)), dirac(v2(0, 0))), Error);
  CHECK_THROWS_AS(dual_potentials(dirac(v1(0)), dirac(v2(0, 0))), Error);
}

TEST_CASE("optimality re-certified independently at larger sizes") {
  // Feasible duals + complementary slackness on the support, recomputed here
  // from scratch, prove optimality of the returned vertex.
  std::mt19937 rng(73);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 30);
    const int m = 10 + static_cast<int>(rng() % 30);
    const DiscreteMeasure mu = oracles::random_measure(rng, n, 3);
    const DiscreteMeasure nu = oracles::random_measure(rng, m, 3);
    const TransportPlan plan = optimal_plan(mu, nu);
    const DualPotentials duals = dual_potentials(mu, nu);
    double cost_scale = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        cost_scale = std::max(cost_scale, (mu.atom(i) - nu.atom(j)).squaredNorm());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const double slack = (mu.atom(i) - nu.atom(j)).squaredNorm() -
                             duals.u[static_cast<size_t>(i)] - duals.v[static_cast<size_t>(j)];
        CHECK(slack >= -1e-9 * cost_scale);
        if (plan.gamma()(i, j) > 1e-12) CHECK(std::abs(slack) <= 1e-9 * cost_scale);
      }
    }
    CHECK(duals.value == doctest::Approx(plan.cost()).epsilon(1e-9));
  }
}

TEST_CASE("identical inputs give bitwise identical plans") {
  std::mt19937 rng(79);
  const DiscreteMeasure mu = oracles::random_measure(rng, 9, 2);
  const DiscreteMeasure nu = oracles::random_measure(rng, 7, 2);
  const TransportPlan a = optimal_plan(mu, nu);
  const TransportPlan b = optimal_plan(mu, nu);
  CHECK((a.gamma() - b.gamma()).norm() == 0.0);
  CHECK(a.cost() == b.cost());
}

TEST_CASE("heavily degenerate lattice instances stay certified") {
  // Uniform weights on integer lattices produce massive cost ties and long
  // runs of degenerate pivots (the Bland fallback path).
  std::vector<Vec> left, right;
  for (int i = 0; i < 8; ++i) {
    left.push_back(v2(i % 4, i / 4));
    right.push_back(v2((i % 4) + 0.5, (i / 4) + 0.5));
  }
  const DiscreteMeasure mu(left, std::vector<double>(8, 0.125));
  const DiscreteMeasure nu(right, std::vector<double>(8, 0.125));
  const TransportPlan plan = optimal_plan(mu, nu);
  CHECK(plan.marginal_defect() <= 1e-9);
  CHECK(plan.support_is_cyclically_monotone());
  // Shifting every atom by (0.5, 0.5) is optimal: cost 8 * 1/8 * 0.5.
  CHECK(plan.cost() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plan.cost() == doctest::Approx(oracles::permutation_transport_cost(mu, nu)));
  const DualPotentials duals = dual_potentials(mu, nu);
  CHECK(duals.value == doctest::Approx(plan.cost()).epsilon(1e-10));
}

TEST_CASE("duplicate atoms inside a marginal are handled") {
  // Transport itself never requires distinct atoms.
  const DiscreteMeasure split = make_measure({v1(0), v1(0), v1(2)}, {0.25, 0.25, 0.5});
  const DiscreteMeasure target = make_measure({v1(1)}, {1.0});
  const TransportPlan plan = optimal_plan(split, target);
  CHECK(plan.cost() == doctest::Approx(0.25 + 0.25 + 0.5));
  CHECK(plan.marginal_defect() <= 1e-12);
}

TEST_CASE("w2 under dilations") {
  std::mt19937 rng(41);
  const DiscreteMeasure mu = oracles::random_measure(rng, 5, 2);
  const DiscreteMeasure origin = dirac(v2(0, 0));
  const double base = w2_distance(mu, origin);
  for (double s : {0.25, 0.5, 1.0}) {
    const DiscreteMeasure scaled = pushforward(AnalyticField::dilation(2, s), mu);
    CHECK(w2_distance(scaled, origin) == doctest::Approx(s * base).epsilon(1e-10));
  }
  // Between two dilations of the same measure: h * W2(mu, delta_0).
  const double h = 0.125;
  const DiscreteMeasure at_s = pushforward(AnalyticField::dilation(2, 0.5), mu);
  const DiscreteMeasure at_sh = pushforward(AnalyticField::dilation(2, 0.5 + h), mu);
  CHECK(w2_distance(at_s, at_sh) == doctest::Approx(h * base).epsilon(1e-9));
}

TEST_CASE("w2 symmetry and zero iff equal multisets") {
  std::mt19937 rng(43);
  const DiscreteMeasure mu = oracles::random_measure(rng, 5, 3);
  const DiscreteMeasure nu = oracles::random_measure(rng, 4, 3);
  CHECK(w2_distance(mu, nu) == doctest::Approx(w2_distance(nu, mu)).epsilon(1e-11));

  // Shuffled copy of the same multiset.
  std::vector<Vec> atoms;
  std::vector<double> weights;
  for (int i : {3, 0, 4, 1, 2}) {
    atoms.push_back(mu.atom(i));
    weights.push_back(mu.weight(i));
  }
  const DiscreteMeasure shuffled(std::move(atoms), std::move(weights));
  CHECK(w2_distance(mu, shuffled) == 0.0);
  CHECK(w2_distance(mu, nu) > 0.0);

  // Same support split differently still has distance zero after merging.
  const DiscreteMeasure split = make_measure({v1(1), v1(1)}, {0.5, 0.5});
  const DiscreteMeasure whole = make_measure({v1(1)}, {1.0});
  CHECK(w2_distance(split, whole) == doctest::Approx(0.0));
  CHECK(w2_distance(merge_atoms(split, 0.0), whole) == 0.0);
}

TEST_CASE("triangle inequality on random triples") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const DiscreteMeasure mu = oracles::random_measure(rng, 3, d);
    const DiscreteMeasure nu = oracles::random_measure(rng, 4, d);
    const DiscreteMeasure rho = oracles::random_measure(rng, 5, d);
    CHECK(w2_distance(mu, rho) <= w2_distance(mu, nu) + w2_distance(nu, rho) + 1e-9);
  }
}

TEST_CASE("dual potentials") {
  SUBCASE("dirac pair has one tight constraint") {
    const DualPotentials duals = dual_potentials(dirac(v2(0, 0)), dirac(v2(3, 4)));
    CHECK(duals.u[0] == doctest::Approx(0.0));
    CHECK(duals.v[0] == doctest::Approx(25.0));
    CHECK(duals.value == doctest::Approx(25.0));
  }
  SUBCASE("identical measures have zero potentials") {
    std::mt19937 rng(53);
    const DiscreteMeasure mu = oracles::random_measure(rng, 4, 2);
    const DualPotentials duals = dual_potentials(mu, mu);
    CHECK(duals.value == doctest::Approx(0.0));
    for (double u : duals.u) CHECK(u == 0.0);
    for (double v : duals.v) CHECK(v == 0.0);
  }
  SUBCASE("strong duality and feasibility on random pairs") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
      const DiscreteMeasure mu = oracles::random_measure(rng, 4, 2);
      const DiscreteMeasure nu = oracles::random_measure(rng, 4, 2);
      const double primal = optimal_plan(mu, nu).cost();
      const DualPotentials duals = dual_potentials(mu, nu);
      CHECK(duals.value == doctest::Approx(primal).epsilon(1e-8));
      for (int i = 0; i < mu.size(); ++i)
        for (int j = 0; j < nu.size(); ++j)
          CHECK(duals.u[static_cast<size_t>(i)] + duals.v[static_cast<size_t>(j)] <=
                (mu.atom(i) - nu.atom(j)).squaredNorm() + 1e-9);
    }
  }
}

TEST_CASE("barycentric projection") {
  const TangentField single = barycentric_projection(optimal_plan(dirac(v2(1, 2)), dirac(v2(4, 6))));
  CHECK(single[0] == v2(3, 4));

  std::mt19937 rng(61);
  const DiscreteMeasure mu = oracles::random_measure(rng, 5, 2);
  const TangentField zero = barycentric_projection(optimal_plan(mu, mu));
  for (int i = 0; i < zero.size(); ++i) CHECK(zero[i].norm() == doctest::Approx(0.0));

  const DiscreteMeasure split = make_measure({v1(-1), v1(1)}, {0.5, 0.5});
  const TangentField balanced = barycentric_projection(optimal_plan(dirac(v1(0)), split));
  CHECK(balanced[0](0) == doctest::Approx(0.0));
}

TEST_CASE("geodesics") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  SUBCASE("dirac geodesic is the straight line") {
    const MeasureCurve line = geodesic(dirac(v2(0, 0)), dirac(v2(2, 2)), grid);
    CHECK(line.measure(2).atom(0) == v2(1, 1));
    CHECK(line.velocity(0)[0] == v2(2, 2));
  }
  SUBCASE("endpoints recover the marginals after merging") {
    std::mt19937 rng(67);
    const DiscreteMeasure mu = oracles::random_measure(rng, 3, 2);
    const DiscreteMeasure nu = oracles::random_measure(rng, 4, 2);
    const MeasureCurve path = geodesic(mu, nu, grid);
    CHECK(w2_distance(merge_atoms(path.front(), 0.0), mu) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w2_distance(merge_atoms(path.back(), 0.0), nu) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("constant speed, checked by independent LP solves") {
    std::mt19937 rng(71);
    const DiscreteMeasure mu = oracles::random_measure(rng, 3, 2, true);
    const DiscreteMeasure nu = oracles::random_measure(rng, 3, 2, true);
    const MeasureCurve path = geodesic(mu, nu, grid);
    const double total = w2_distance(mu, nu);
    for (int a = 0; a < path.samples(); ++a)
      for (int b = a + 1; b < path.samples(); ++b)
        CHECK(w2_distance(path.measure(a), path.measure(b)) ==
              doctest::Approx((grid[static_cast<size_t>(b)] - grid[static_cast<size_t>(a)]) * total)
                  .epsilon(1e-8));
  }
  SUBCASE("grid validation") {
    CHECK_THROWS_AS(geodesic(dirac(v1(0)), dirac(v1(1)), {0.0, 0.5}), Error);
    CHECK_THROWS_AS(geodesic(dirac(v1(0)), dirac(v1(1)), {0.0, 0.6, 0.5, 1.0}), Error);
  }
}

// Where several optimal vertices exist, quantities the expansion of a
// differentiable functional depends on must not depend on the vertex:
// along each vertex's geodesic, F(sigma_t) - F(mu) - t * <grad f, y - x>_gamma
// must vanish to second order.
TEST_CASE("tie-broken optimal vertices both certify the first-order expansion") {
  const DiscreteMeasure mu = make_measure({v2(-1, 0), v2(1, 0)}, {0.5, 0.5});
  const DiscreteMeasure nu = make_measure({v2(0, -1), v2(0, 1)}, {0.5, 0.5});

  const TransportPlan vertex_a = optimal_plan(mu, nu);
  // Alternative vertex from reversed atom order, mapped back.
  const DiscreteMeasure mu_r = make_measure({v2(1, 0), v2(-1, 0)}, {0.5, 0.5});
  const TransportPlan vertex_b_r = optimal_plan(mu_r, nu);
  Mat gamma_b(2, 2);
  gamma_b.row(0) = vertex_b_r.gamma().row(1);
  gamma_b.row(1) = vertex_b_r.gamma().row(0);
  const TransportPlan vertex_b(mu, nu, gamma_b);

  CHECK(vertex_a.cost() == doctest::Approx(vertex_b.cost()).epsilon(1e-12));
  const bool distinct = (vertex_a.gamma() - vertex_b.gamma()).cwiseAbs().maxCoeff() > 0.1;
  CHECK(distinct);

  const ScalarField f = scalar_by_name("mix", 2);
  const Functional lf{[f](const DiscreteMeasure& m) { return linear_functional(f, m); }, {}};
  for (const TransportPlan* plan : {&vertex_a, &vertex_b}) {
    double first_order = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (plan->gamma()(i, j) > 0.0)
          first_order += plan->gamma()(i, j) *
                         f.gradient(mu.atom(i)).dot(nu.atom(j) - mu.atom(i));
    auto remainder = [&](double t) {
      std::vector<Vec> atoms;
      std::vector<double> weights;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (plan->gamma()(i, j) > 0.0) {
            atoms.push_back((1.0 - t) * mu.atom(i) + t * nu.atom(j));
            weights.push_back(plan->gamma()(i, j));
          }
      const DiscreteMeasure sigma_t(std::move(atoms), std::move(weights));
      return std::abs(lf.eval(sigma_t) - lf.eval(mu) - t * first_order);
    };
    const double coarse = remainder(1e-2);
    const double fine = remainder(5e-3);
    CHECK(coarse <= 1e-3);
    if (coarse > 1e-13) CHECK(fine <= 0.3 * coarse);  // O(t^2) decay
  }
}
