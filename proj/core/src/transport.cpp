#include "wcalc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wcalc/errors.hpp"

namespace wcalc {

namespace {

Mat cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Mat c(mu.size(), nu.size());
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      c(i, j) = (mu.atom(i) - nu.atom(j)).squaredNorm();
  return c;
}

struct SimplexSolution {
  Mat gamma;
  std::vector<double> u, v;
};

// Dense transportation simplex over the bipartite graph. The basis is kept
// as a spanning tree of n + m - 1 cells; duals are recomputed from the tree
// each pivot; entering uses the most-negative reduced cost with a switch to
// Bland's rule after a run of degenerate pivots so cycling cannot occur.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, const Mat& cost)
      : a_(std::move(supply)), b_(std::move(demand)), c_(cost),
        n_(static_cast<int>(a_.size())), m_(static_cast<int>(b_.size())) {
    const double sa = std::accumulate(a_.begin(), a_.end(), 0.0);
    const double sb = std::accumulate(b_.begin(), b_.end(), 0.0);
    for (double& x : b_) x *= sa / sb;
    eps_ = 1e-12 * (1.0 + c_.cwiseAbs().maxCoeff());
  }

  SimplexSolution solve() {
    northwest_corner();
    u_.assign(static_cast<size_t>(n_), 0.0);
    v_.assign(static_cast<size_t>(m_), 0.0);

    const long max_pivots = 4000L * (n_ + m_) + 100000L;
    int degenerate_run = 0;
    bool bland = false;
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
      compute_duals();
      int ei = -1, ej = -1;
      if (!find_entering(bland, &ei, &ej)) return extract();
      const double theta = pivot_on(ei, ej);
      if (theta <= 1e-15) {
        if (++degenerate_run > 64) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
    fail(ErrorCode::SolverFailure, "transport simplex exceeded pivot limit");
  }

 private:
  struct Cell {
    int i, j;
    double flow;
  };

  void northwest_corner() {
    cells_.clear();
    cells_.reserve(static_cast<size_t>(n_ + m_ - 1));
    int i = 0, j = 0;
    double ra = a_[0], rb = b_[0];
    while (true) {
      const double f = std::min(ra, rb);
      cells_.push_back({i, j, f});
      if (i == n_ - 1 && j == m_ - 1) break;
      if ((ra <= rb && i < n_ - 1) || j == m_ - 1) {
        rb -= f;
        ++i;
        ra = a_[static_cast<size_t>(i)];
      } else {
        ra -= f;
        ++j;
        rb = b_[static_cast<size_t>(j)];
      }
    }
    rebuild_adjacency();
  }

  void rebuild_adjacency() {
    row_cells_.assign(static_cast<size_t>(n_), {});
    col_cells_.assign(static_cast<size_t>(m_), {});
    basic_.assign(static_cast<size_t>(n_) * static_cast<size_t>(m_), -1);
    for (int k = 0; k < static_cast<int>(cells_.size()); ++k) {
      const Cell& c = cells_[static_cast<size_t>(k)];
      row_cells_[static_cast<size_t>(c.i)].push_back(k);
      col_cells_[static_cast<size_t>(c.j)].push_back(k);
      basic_[flat(c.i, c.j)] = k;
    }
  }

  size_t flat(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(m_) + static_cast<size_t>(j);
  }

  // Tree traversal from row 0: u on rows, v on columns, u[0] = 0.
  void compute_duals() {
    row_done_.assign(static_cast<size_t>(n_), 0);
    col_done_.assign(static_cast<size_t>(m_), 0);
    std::vector<char>& row_done = row_done_;
    std::vector<char>& col_done = col_done_;
    stack_.clear();
    std::vector<int>& stack = stack_;  // rows as i, columns as n_ + j
    stack.push_back(0);
    row_done[0] = 1;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      if (node < n_) {
        for (int k : row_cells_[static_cast<size_t>(node)]) {
          const Cell& c = cells_[static_cast<size_t>(k)];
          if (!col_done[static_cast<size_t>(c.j)]) {
            v_[static_cast<size_t>(c.j)] = c_(c.i, c.j) - u_[static_cast<size_t>(c.i)];
            col_done[static_cast<size_t>(c.j)] = 1;
            stack.push_back(n_ + c.j);
          }
        }
      } else {
        const int j = node - n_;
        for (int k : col_cells_[static_cast<size_t>(j)]) {
          const Cell& c = cells_[static_cast<size_t>(k)];
          if (!row_done[static_cast<size_t>(c.i)]) {
            u_[static_cast<size_t>(c.i)] = c_(c.i, c.j) - v_[static_cast<size_t>(c.j)];
            row_done[static_cast<size_t>(c.i)] = 1;
            stack.push_back(c.i);
          }
        }
      }
    }
    for (char d : row_done)
      if (!d) fail(ErrorCode::SolverFailure, "transport basis lost connectivity");
    for (char d : col_done)
      if (!d) fail(ErrorCode::SolverFailure, "transport basis lost connectivity");
  }

  // Most-negative reduced cost; Bland mode takes the first negative cell in
  // index order instead.
  bool find_entering(bool bland, int* ei, int* ej) const {
    double best = -eps_;
    for (int i = 0; i < n_; ++i) {
      const double ui = u_[static_cast<size_t>(i)];
      for (int j = 0; j < m_; ++j) {
        if (basic_[flat(i, j)] >= 0) continue;
        const double r = c_(i, j) - ui - v_[static_cast<size_t>(j)];
        if (r < best) {
          best = r;
          *ei = i;
          *ej = j;
          if (bland) return true;
        }
      }
    }
    return *ei >= 0;
  }

  // Unique tree path from row ei to column ej; with the entering cell it
  // closes the pivot cycle. Odd path positions carry the minus label.
  std::vector<int> tree_path(int ei, int ej) const {
    const int total = n_ + m_;
    std::vector<int> parent_edge(static_cast<size_t>(total), -2);
    std::vector<int> queue;
    queue.push_back(ei);
    parent_edge[static_cast<size_t>(ei)] = -1;
    for (size_t q = 0; q < queue.size(); ++q) {
      const int node = queue[q];
      const auto& incident = node < n_ ? row_cells_[static_cast<size_t>(node)]
                                       : col_cells_[static_cast<size_t>(node - n_)];
      for (int k : incident) {
        const Cell& c = cells_[static_cast<size_t>(k)];
        const int other = node < n_ ? n_ + c.j : c.i;
        if (parent_edge[static_cast<size_t>(other)] != -2) continue;
        parent_edge[static_cast<size_t>(other)] = k;
        if (other == n_ + ej) {
          std::vector<int> path;
          int cur = other;
          while (cur != ei) {
            const int edge = parent_edge[static_cast<size_t>(cur)];
            path.push_back(edge);
            const Cell& e = cells_[static_cast<size_t>(edge)];
            cur = (cur >= n_) ? e.i : n_ + e.j;
          }
          std::reverse(path.begin(), path.end());
          return path;
        }
        queue.push_back(other);
      }
    }
    fail(ErrorCode::SolverFailure, "transport basis is not a spanning tree");
  }

  double pivot_on(int ei, int ej) {
    const std::vector<int> path = tree_path(ei, ej);
    // Minus edges are path positions 0, 2, 4, ...
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (size_t p = 0; p < path.size(); p += 2) {
      const Cell& c = cells_[static_cast<size_t>(path[p])];
      if (c.flow < theta ||
          (c.flow == theta && leave >= 0 &&
           std::pair(c.i, c.j) < std::pair(cells_[static_cast<size_t>(leave)].i,
                                           cells_[static_cast<size_t>(leave)].j))) {
        theta = c.flow;
        leave = path[p];
      }
    }
    for (size_t p = 0; p < path.size(); ++p) {
      Cell& c = cells_[static_cast<size_t>(path[p])];
      c.flow += (p % 2 == 0) ? -theta : theta;
      if (c.flow < 0.0) c.flow = 0.0;
    }
    Cell& replaced = cells_[static_cast<size_t>(leave)];
    basic_[flat(replaced.i, replaced.j)] = -1;
    auto drop = [leave](std::vector<int>& xs) {
      xs.erase(std::find(xs.begin(), xs.end(), leave));
    };
    drop(row_cells_[static_cast<size_t>(replaced.i)]);
    drop(col_cells_[static_cast<size_t>(replaced.j)]);
    replaced = {ei, ej, theta};
    basic_[flat(ei, ej)] = leave;
    row_cells_[static_cast<size_t>(ei)].push_back(leave);
    col_cells_[static_cast<size_t>(ej)].push_back(leave);
    return theta;
  }

  SimplexSolution extract() {
    SimplexSolution s;
    s.gamma = Mat::Zero(n_, m_);
    for (const Cell& c : cells_)
      if (c.flow > 0.0) s.gamma(c.i, c.j) += c.flow;
    s.u = u_;
    s.v = v_;
    // Optimality certificate: dual feasibility over all cells.
    const double slack = 1e-9 * (1.0 + c_.cwiseAbs().maxCoeff());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < m_; ++j)
        if (c_(i, j) - s.u[static_cast<size_t>(i)] - s.v[static_cast<size_t>(j)] < -slack)
          fail(ErrorCode::SolverFailure, "dual feasibility certificate failed");
    return s;
  }

  std::vector<double> a_, b_;
  Mat c_;
  int n_, m_;
  double eps_ = 0.0;
  std::vector<Cell> cells_;
  std::vector<std::vector<int>> row_cells_, col_cells_;
  std::vector<int> basic_;
  std::vector<double> u_, v_;
  std::vector<char> row_done_, col_done_;
  std::vector<int> stack_;
};

// Identical weighted multisets pair off atom-by-atom; gives the diagonal-like
// vertex directly (and zero duals) for zero-distance inputs.
bool identical_multiset_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             Mat* gamma) {
  if (mu.size() != nu.size()) return false;
  const int n = mu.size();
  auto order = [](const DiscreteMeasure& m) {
    std::vector<int> idx(static_cast<size_t>(m.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&m](int p, int q) {
      for (int k = 0; k < m.dimension(); ++k) {
        if (m.atom(p)(k) != m.atom(q)(k)) return m.atom(p)(k) < m.atom(q)(k);
      }
      return m.weight(p) < m.weight(q);
    });
    return idx;
  };
  const std::vector<int> pi = order(mu);
  const std::vector<int> pj = order(nu);
  for (int k = 0; k < n; ++k) {
    const int i = pi[static_cast<size_t>(k)];
    const int j = pj[static_cast<size_t>(k)];
    if (mu.weight(i) != nu.weight(j)) return false;
    if ((mu.atom(i).array() != nu.atom(j).array()).any()) return false;
  }
  *gamma = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    (*gamma)(pi[static_cast<size_t>(k)], pj[static_cast<size_t>(k)]) =
        mu.weight(pi[static_cast<size_t>(k)]);
  return true;
}

SimplexSolution solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dimension() != nu.dimension())
    fail(ErrorCode::DimensionMismatch, "transport between different dimensions");
  Mat diagonal;
  if (identical_multiset_plan(mu, nu, &diagonal)) {
    SimplexSolution s;
    s.gamma = std::move(diagonal);
    s.u.assign(static_cast<size_t>(mu.size()), 0.0);
    s.v.assign(static_cast<size_t>(nu.size()), 0.0);
    return s;
  }
  TransportSimplex simplex(mu.weights(), nu.weights(), cost_matrix(mu, nu));
  return simplex.solve();
}

}  // namespace

TransportPlan::TransportPlan(DiscreteMeasure source, DiscreteMeasure target, Mat gamma)
    : source_(std::move(source)), target_(std::move(target)), gamma_(std::move(gamma)) {
  if (gamma_.rows() != source_.size() || gamma_.cols() != target_.size())
    fail(ErrorCode::LengthMismatch, "plan matrix shape does not match marginals");
  if ((gamma_.array() < 0.0).any())
    fail(ErrorCode::InvalidArgument, "plan entries must be nonnegative");
  cost_ = 0.0;
  for (int i = 0; i < gamma_.rows(); ++i)
    for (int j = 0; j < gamma_.cols(); ++j)
      if (gamma_(i, j) > 0.0)
        cost_ += gamma_(i, j) * (source_.atom(i) - target_.atom(j)).squaredNorm();
  if (marginal_defect() > 1e-9)
    fail(ErrorCode::InvalidArgument, "plan marginals exceed tolerance");
}

double TransportPlan::marginal_defect() const {
  double worst = 0.0;
  for (int i = 0; i < source_.size(); ++i)
    worst = std::max(worst, std::abs(gamma_.row(i).sum() - source_.weight(i)));
  for (int j = 0; j < target_.size(); ++j)
    worst = std::max(worst, std::abs(gamma_.col(j).sum() - target_.weight(j)));
  return worst;
}

bool TransportPlan::support_is_cyclically_monotone(double tol) const {
  std::vector<std::pair<int, int>> support;
  for (int i = 0; i < gamma_.rows(); ++i)
    for (int j = 0; j < gamma_.cols(); ++j)
      if (gamma_(i, j) > 0.0) support.emplace_back(i, j);
  for (const auto& [i, j] : support) {
    for (const auto& [k, l] : support) {
      const double direct = (source_.atom(i) - target_.atom(j)).squaredNorm() +
                            (source_.atom(k) - target_.atom(l)).squaredNorm();
      const double swapped = (source_.atom(i) - target_.atom(l)).squaredNorm() +
                             (source_.atom(k) - target_.atom(j)).squaredNorm();
      if (swapped < direct - tol) return false;
    }
  }
  return true;
}

TransportPlan optimal_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  SimplexSolution s = solve(mu, nu);
  return TransportPlan(mu, nu, std::move(s.gamma));
}

double w2_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(std::max(optimal_plan(mu, nu).cost(), 0.0));
}

DualPotentials dual_potentials(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  SimplexSolution s = solve(mu, nu);
  DualPotentials d;
  d.u = std::move(s.u);
  d.v = std::move(s.v);
  d.value = 0.0;
  for (int i = 0; i < mu.size(); ++i) d.value += mu.weight(i) * d.u[static_cast<size_t>(i)];
  for (int j = 0; j < nu.size(); ++j) d.value += nu.weight(j) * d.v[static_cast<size_t>(j)];
  return d;
}

TangentField barycentric_projection(const TransportPlan& plan) {
  const DiscreteMeasure& mu = plan.source();
  const DiscreteMeasure& nu = plan.target();
  TangentField v;
  v.vectors.reserve(static_cast<size_t>(mu.size()));
  for (int i = 0; i < mu.size(); ++i) {
    Vec barycenter = Vec::Zero(mu.dimension());
    for (int j = 0; j < nu.size(); ++j)
      if (plan.gamma()(i, j) > 0.0) barycenter += plan.gamma()(i, j) * nu.atom(j);
    v.vectors.push_back(barycenter / mu.weight(i) - mu.atom(i));
  }
  return v;
}

MeasureCurve geodesic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const std::vector<double>& tgrid) {
  if (tgrid.size() < 2 || tgrid.front() != 0.0 || tgrid.back() != 1.0)
    fail(ErrorCode::InvalidArgument, "geodesic grid must run from 0 to 1");
  for (size_t k = 1; k < tgrid.size(); ++k)
    if (!(tgrid[k] > tgrid[k - 1]))
      fail(ErrorCode::NonMonotone, "geodesic grid must be strictly increasing");

  const TransportPlan plan = optimal_plan(mu, nu);
  std::vector<Vec> starts, ends;
  std::vector<double> weights;
  for (int i = 0; i < mu.size(); ++i) {
    for (int j = 0; j < nu.size(); ++j) {
      const double g = plan.gamma()(i, j);
      if (g > 1e-15) {
        starts.push_back(mu.atom(i));
        ends.push_back(nu.atom(j));
        weights.push_back(g);
      }
    }
  }
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  TangentField v;
  for (size_t p = 0; p < starts.size(); ++p) v.vectors.push_back(ends[p] - starts[p]);
  for (double t : tgrid) {
    std::vector<Vec> atoms;
    atoms.reserve(starts.size());
    for (size_t p = 0; p < starts.size(); ++p)
      atoms.push_back((1.0 - t) * starts[p] + t * ends[p]);
    measures.emplace_back(std::move(atoms), weights);
    velocities.push_back(v);
  }
  return MeasureCurve(tgrid, std::move(measures), std::move(velocities));
}

}  // namespace wcalc
