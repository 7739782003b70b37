#include "gcs_star/heuristic.h"

#include <map>
#include <queue>
#include <stdexcept>

namespace gcs_star {

void HeuristicFragment::Scale(double factor) {
  constant *= factor;
  for (L1Term& term : terms) term.w *= factor;
}

HeuristicFragment FragmentAt(const Heuristic& h, const ImplicitGcs& g,
                             const GcsVertex& v) {
  if (v.id == g.target()) return HeuristicFragment{};
  return h.Fragment(g, v);
}

namespace {

class ZeroHeuristic final : public Heuristic {
 public:
  std::string name() const override { return "zero"; }
  HeuristicFragment Fragment(const ImplicitGcs&,
                             const GcsVertex&) const override {
    return HeuristicFragment{};
  }
};

class ShortcutHeuristic final : public Heuristic {
 public:
  explicit ShortcutHeuristic(ShortcutParams params) : params_(params) {}

  std::string name() const override { return "shortcut"; }

  HeuristicFragment Fragment(const ImplicitGcs& g,
                             const GcsVertex& v) const override {
    const std::optional<ShortcutModel> model = g.shortcut_model(v.id);
    if (!model) {
      throw std::invalid_argument(
          "the shortcut heuristic needs a graph with a shortcut model");
    }
    const std::shared_ptr<const GcsVertex> t = g.vertex(g.target());
    const int n = v.dim();
    const int nt = t->dim();
    const int rows = static_cast<int>(model->S.rows());
    if (model->S.cols() != n || model->S_t.cols() != nt ||
        model->S_t.rows() != rows ||
        static_cast<int>(model->robot_rows.size()) != rows) {
      throw std::invalid_argument("shortcut model has inconsistent shapes");
    }

    HeuristicFragment frag;
    frag.constant = model->direct_edge_c0.value_or(params_.mode_switch_constant);
    frag.num_aux = nt;
    const HPolyhedron& Xt = t->set;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Xt.num_rows(), n + nt);
    G.rightCols(nt) = Xt.A();
    Eigen::VectorXd gv = Xt.b();
    if (!params_.target_point_free) {
      const ChebyshevResult c = chebyshev_center(Xt);
      if (!c.found()) throw std::runtime_error("target set has no center");
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * nt, n + nt);
      E.block(0, n, nt, nt) = Eigen::MatrixXd::Identity(nt, nt);
      E.block(nt, n, nt, nt) = -Eigen::MatrixXd::Identity(nt, nt);
      Eigen::VectorXd e(2 * nt);
      e << c.center, -c.center;
      Eigen::MatrixXd G2(G.rows() + E.rows(), n + nt);
      G2 << G, E;
      Eigen::VectorXd g2(gv.size() + e.size());
      g2 << gv, e;
      G = std::move(G2);
      gv = std::move(g2);
    }
    frag.G = std::move(G);
    frag.g = std::move(gv);
    for (int r = 0; r < rows; ++r) {
      L1Term term;
      term.w = model->robot_rows[r] ? params_.robot_weight : 1.0;
      if (term.w == 0.0) continue;
      term.a.resize(n + nt);
      term.a << model->S.row(r), -model->S_t.row(r);
      frag.terms.push_back(std::move(term));
    }
    return frag;
  }

 private:
  ShortcutParams params_;
};

class InflatedHeuristic final : public Heuristic {
 public:
  InflatedHeuristic(std::shared_ptr<const Heuristic> inner, double epsilon)
      : inner_(std::move(inner)), epsilon_(epsilon) {}

  std::string name() const override {
    return inner_->name() + ":" + std::to_string(epsilon_);
  }

  HeuristicFragment Fragment(const ImplicitGcs& g,
                             const GcsVertex& v) const override {
    HeuristicFragment frag = inner_->Fragment(g, v);
    frag.Scale(epsilon_);
    return frag;
  }

 private:
  std::shared_ptr<const Heuristic> inner_;
  double epsilon_;
};

class ConstantLowerBoundHeuristic final : public Heuristic {
 public:
  explicit ConstantLowerBoundHeuristic(const ExplicitGcs& g) {
    // Dijkstra from the target over reversed edges weighted by c0.
    std::map<VertexId, std::vector<std::pair<VertexId, double>>> reverse;
    for (const auto& e : g.edges()) {
      reverse[e->v].emplace_back(e->u, e->cost.c0);
    }
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.emplace(0.0, g.target());
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (distance_.count(v)) continue;
      distance_[v] = d;
      for (const auto& [u, w] : reverse[v]) {
        if (!distance_.count(u)) queue.emplace(d + w, u);
      }
    }
  }

  std::string name() const override { return "c0"; }

  HeuristicFragment Fragment(const ImplicitGcs&,
                             const GcsVertex& v) const override {
    HeuristicFragment frag;
    auto it = distance_.find(v.id);
    frag.constant = it == distance_.end() ? 0.0 : it->second;
    return frag;
  }

 private:
  std::map<VertexId, double> distance_;
};

}  // namespace

std::shared_ptr<const Heuristic> MakeZeroHeuristic() {
  return std::make_shared<ZeroHeuristic>();
}

std::shared_ptr<const Heuristic> MakeShortcutHeuristic(ShortcutParams params) {
  return std::make_shared<ShortcutHeuristic>(params);
}

std::shared_ptr<const Heuristic> MakeInflatedHeuristic(
    std::shared_ptr<const Heuristic> inner, double epsilon) {
  if (!(epsilon >= 1.0)) {
    throw std::invalid_argument("inflation factor must be at least 1");
  }
  return std::make_shared<InflatedHeuristic>(std::move(inner), epsilon);
}

std::shared_ptr<const Heuristic> MakeConstantLowerBoundHeuristic(
    const ExplicitGcs& g) {
  return std::make_shared<ConstantLowerBoundHeuristic>(g);
}

double evaluate_heuristic(const Heuristic& h, const ImplicitGcs& g,
                          const GcsVertex& v, const Eigen::VectorXd& x,
                          const LpSolver& solver) {
  const HeuristicFragment frag = FragmentAt(h, g, v);
  if (frag.is_constant()) return frag.constant;
  const int n = static_cast<int>(x.size());
  const int ny = frag.num_aux;
  const int nt = static_cast<int>(frag.terms.size());
  LinearProgram lp(ny + nt);
  if (frag.G.rows() > 0) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(frag.G.rows(), ny + nt);
    A.leftCols(ny) = frag.G.rightCols(ny);
    lp.AddInequalities(A, frag.g - frag.G.leftCols(n) * x);
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * nt, ny + nt);
  Eigen::VectorXd tb(2 * nt);
  for (int k = 0; k < nt; ++k) {
    const L1Term& term = frag.terms[k];
    const double fixed = term.a.head(n).dot(x) + term.b;
    T.block(2 * k, 0, 1, ny) = term.a.tail(ny);
    T(2 * k, ny + k) = -1.0;
    tb(2 * k) = -fixed;
    T.block(2 * k + 1, 0, 1, ny) = -term.a.tail(ny);
    T(2 * k + 1, ny + k) = -1.0;
    tb(2 * k + 1) = fixed;
    lp.cost(ny + k) = term.w;
  }
  lp.AddInequalities(T, tb);
  const LpSolution sol = solver.Solve(lp);
  if (sol.status == LpStatus::kInfeasible) return kInfinity;
  if (!sol.optimal()) {
    throw std::runtime_error("heuristic evaluation failed: " +
                             std::string(to_string(sol.status)));
  }
  return frag.constant + sol.objective;
}

}  // namespace gcs_star
