#include "gcs_star/pushing.h"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace gcs_star {

namespace {

constexpr double kFeatureTol = 1e-9;

Eigen::Vector2d Tangent(const Eigen::Vector2d& n) { return {-n.y(), n.x()}; }

// Accumulates inequality and equality rows over a fixed number of columns.
class Rows {
 public:
  explicit Rows(int cols) : cols_(cols) {}

  Eigen::RowVectorXd Zero() const { return Eigen::RowVectorXd::Zero(cols_); }
  void Le(const Eigen::RowVectorXd& a, double b) {
    a_.push_back(a);
    b_.push_back(b);
  }
  void Eq(const Eigen::RowVectorXd& c, double d) {
    c_.push_back(c);
    d_.push_back(d);
  }
  HPolyhedron Build() const {
    Eigen::MatrixXd A(a_.size(), cols_), C(c_.size(), cols_);
    Eigen::VectorXd b(b_.size()), d(d_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) {
      A.row(i) = a_[i];
      b(i) = b_[i];
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
      C.row(i) = c_[i];
      d(i) = d_[i];
    }
    return WithEqualities(HPolyhedron(A, b), C, d);
  }

 private:
  int cols_;
  std::vector<Eigen::RowVectorXd> a_, c_;
  std::vector<double> b_, d_;
};

// n·p_body at a knot as (coefficients, constant). Static bodies sit at the
// origin of their world-frame polygon.
struct Affine {
  Eigen::RowVectorXd a;
  double c{0.0};
};

class ModeBuilder {
 public:
  ModeBuilder(const PushingEnvironment& env, const ContactModeKey& mode)
      : env_(env),
        mode_(mode),
        movable_(env.movable_bodies()),
        robots_(env.robots()),
        pairs_(env.pairs()),
        layout_(pushing_layout(env, mode)) {
    if (mode.modes.size() != pairs_.size()) {
      throw std::invalid_argument("mode has " + std::to_string(mode.modes.size()) +
                                  " entries, expected " +
                                  std::to_string(pairs_.size()));
    }
  }

  const PushingVertexLayout& layout() const { return layout_; }

  int movable_index(int body) const {
    auto it = std::find(movable_.begin(), movable_.end(), body);
    return it == movable_.end() ? -1 : static_cast<int>(it - movable_.begin());
  }

  Affine Dot(const Eigen::Vector2d& n, int body, int knot) const {
    Affine out{Eigen::RowVectorXd::Zero(layout_.dim()), 0.0};
    const int m = movable_index(body);
    if (m >= 0) out.a.segment<2>(layout_.position(m, knot)) = n.transpose();
    return out;
  }

  HPolyhedron Build(bool pin_start) const {
    Rows rows(layout_.dim());
    const Eigen::MatrixXd& Hw = env_.workspace.A();
    const Eigen::VectorXd& hw = env_.workspace.b();
    for (int knot = 0; knot < 2; ++knot) {
      for (std::size_t m = 0; m < movable_.size(); ++m) {
        const BodySpec& body = env_.bodies[movable_[m]];
        for (Eigen::Index r = 0; r < Hw.rows(); ++r) {
          double worst = -kInfinity;
          for (const auto& v : body.polygon) worst = std::max(worst, Hw.row(r).dot(v));
          Eigen::RowVectorXd a = rows.Zero();
          a.segment<2>(layout_.position(m, knot)) = Hw.row(r);
          rows.Le(a, hw(r) - worst);
        }
      }
      for (std::size_t r = 0; r < robots_.size(); ++r) {
        for (int c = 0; c < 2; ++c) {
          Eigen::RowVectorXd a = rows.Zero();
          a(layout_.actuation(r, knot) + c) = 1;
          rows.Le(a, env_.actuation_limit);
          rows.Le(-a, env_.actuation_limit);
        }
      }
      for (int k = 0; k < layout_.num_contacts; ++k) {
        Eigen::RowVectorXd a = rows.Zero();
        a(layout_.force(k, knot)) = 1;
        rows.Le(a, env_.max_contact_force);
        rows.Le(-a, 0.0);
      }
    }

    // Net force per movable body and knot, as rows over the variables.
    std::vector<std::array<Eigen::MatrixXd, 2>> force(movable_.size());
    for (auto& f : force) f = {Eigen::MatrixXd::Zero(2, layout_.dim()),
                               Eigen::MatrixXd::Zero(2, layout_.dim())};
    for (std::size_t r = 0; r < robots_.size(); ++r) {
      const int m = movable_index(robots_[r]);
      for (int knot = 0; knot < 2; ++knot) {
        force[m][knot](0, layout_.actuation(r, knot)) += 1;
        force[m][knot](1, layout_.actuation(r, knot) + 1) += 1;
      }
    }

    int contact = 0;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const auto [i, j] = pairs_[p];
      const PairMode& pm = mode_.modes[p];
      const int a = pm.face_body;
      const int b = a == i ? j : i;
      const BodySpec& A = env_.bodies[a];
      const BodySpec& B = env_.bodies[b];
      const Eigen::Vector2d n = A.normal(pm.face);
      const double d = A.support(pm.face);
      for (int knot = 0; knot < 2; ++knot) {
        // gap(v) = n·(p_b + v − p_a) − d for a vertex v of B.
        const Affine pb = Dot(n, b, knot), pa = Dot(n, a, knot);
        const Eigen::RowVectorXd rel = pb.a - pa.a;
        if (pm.kind == PairMode::Kind::kSeparating) {
          double lowest = kInfinity;
          for (const auto& v : B.polygon) lowest = std::min(lowest, n.dot(v));
          rows.Le(-rel, lowest - d);
          continue;
        }
        const Eigen::Vector2d t = Tangent(n);
        const Affine tb = Dot(t, b, knot), ta = Dot(t, a, knot);
        const Eigen::RowVectorXd trel = tb.a - ta.a;
        const Eigen::Vector2d& f0 = A.polygon[pm.face];
        const Eigen::Vector2d& f1 = A.polygon[(pm.face + 1) % A.num_faces()];
        const double lo = std::min(t.dot(f0), t.dot(f1));
        const double hi = std::max(t.dot(f0), t.dot(f1));
        double b_lo, b_hi, b_normal;
        if (pm.kind == PairMode::Kind::kFaceFace) {
          const Eigen::Vector2d& g0 = B.polygon[pm.other];
          const Eigen::Vector2d& g1 = B.polygon[(pm.other + 1) % B.num_faces()];
          b_lo = std::min(t.dot(g0), t.dot(g1));
          b_hi = std::max(t.dot(g0), t.dot(g1));
          b_normal = n.dot(g0);
        } else {
          const Eigen::Vector2d& v = B.polygon[pm.other];
          b_lo = b_hi = t.dot(v);
          b_normal = n.dot(v);
        }
        // Touching: n·(p_b − p_a) + n·v = d.
        rows.Eq(rel, d - b_normal);
        // Tangential overlap of the two features.
        rows.Le(-trel, b_hi - lo);
        rows.Le(trel, hi - b_lo);
        const int ma = movable_index(a), mb = movable_index(b);
        const int col = layout_.force(contact, knot);
        for (int c = 0; c < 2; ++c) {
          if (mb >= 0) force[mb][knot](c, col) += n(c);
          if (ma >= 0) force[ma][knot](c, col) -= n(c);
        }
      }
      if (pm.in_contact()) ++contact;
    }

    // p¹ − p⁰ = μ·½(F⁰ + F¹).
    for (std::size_t m = 0; m < movable_.size(); ++m) {
      for (int c = 0; c < 2; ++c) {
        Eigen::RowVectorXd row =
            -0.5 * env_.mu * (force[m][0].row(c) + force[m][1].row(c));
        row(layout_.position(m, 1) + c) += 1;
        row(layout_.position(m, 0) + c) -= 1;
        rows.Eq(row, 0.0);
      }
    }

    if (pin_start) {
      for (std::size_t m = 0; m < movable_.size(); ++m) {
        for (int knot = 0; knot < 2; ++knot) {
          for (int c = 0; c < 2; ++c) {
            Eigen::RowVectorXd row = rows.Zero();
            row(layout_.position(m, knot) + c) = 1;
            rows.Eq(row, env_.start[m](c));
          }
        }
      }
    }
    return rows.Build();
  }

 private:
  const PushingEnvironment& env_;
  const ContactModeKey& mode_;
  std::vector<int> movable_;
  std::vector<int> robots_;
  std::vector<std::pair<int, int>> pairs_;
  PushingVertexLayout layout_;
};

int ParseInt(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size() || v < 0) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

const std::string kSourcePrefix = "source:";

}  // namespace

Eigen::Vector2d BodySpec::normal(int f) const {
  const Eigen::Vector2d e = polygon[(f + 1) % num_faces()] - polygon[f];
  return Eigen::Vector2d(e.y(), -e.x()).normalized();
}

double BodySpec::support(int f) const { return normal(f).dot(polygon[f]); }

void PushingEnvironment::Validate() const {
  for (const BodySpec& b : bodies) {
    if (b.polygon.size() < 3) {
      throw std::invalid_argument("body '" + b.name + "' has fewer than 3 vertices");
    }
    const int n = b.num_faces();
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector2d e1 = b.polygon[(k + 1) % n] - b.polygon[k];
      const Eigen::Vector2d e2 = b.polygon[(k + 2) % n] - b.polygon[(k + 1) % n];
      if (e1.x() * e2.y() - e1.y() * e2.x() <= 0) {
        throw std::invalid_argument("body '" + b.name +
                                    "' is not convex and counterclockwise");
      }
    }
    if (b.actuated && !b.movable) {
      throw std::invalid_argument("body '" + b.name + "' is actuated but static");
    }
  }
  if (workspace.ambient_dimension() != 2) {
    throw std::invalid_argument("workspace must be 2-D");
  }
  if (start.size() != movable_bodies().size()) {
    throw std::invalid_argument("start needs one position per movable body");
  }
  if (goal.ambient_dimension() != 2 * static_cast<int>(objects().size())) {
    throw std::invalid_argument("goal must have dimension 2 per object");
  }
  if (!weights.empty() && weights.size() != movable_bodies().size()) {
    throw std::invalid_argument("weights need one entry per movable body");
  }
  for (double w : weights) {
    if (!(w >= 0)) throw std::invalid_argument("weights must be nonnegative");
  }
  if (!(mu > 0) || !(actuation_limit >= 0) || !(max_contact_force >= 0)) {
    throw std::invalid_argument("mu, actuation and force limits must be positive");
  }
}

std::vector<int> PushingEnvironment::movable_bodies() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].movable) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> PushingEnvironment::robots() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].actuated) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> PushingEnvironment::objects() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].movable && !bodies[i].actuated) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<std::pair<int, int>> PushingEnvironment::pairs() const {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(bodies.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (bodies[i].movable || bodies[j].movable) out.emplace_back(i, j);
    }
  }
  return out;
}

std::string PairMode::token() const {
  const std::string tail = std::to_string(face_body) + "." + std::to_string(face);
  switch (kind) {
    case Kind::kSeparating:
      return "s" + tail;
    case Kind::kFaceFace:
      return "ff" + tail + "." + std::to_string(other);
    case Kind::kFaceVertex:
      return "fv" + tail + "." + std::to_string(other);
  }
  return "";
}

std::string ContactModeKey::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) out += ",";
    out += modes[i].token();
  }
  return out;
}

ContactModeKey ContactModeKey::Parse(const std::string& text) {
  ContactModeKey key;
  for (const std::string& tok : Split(text, ',')) {
    PairMode pm;
    std::string rest;
    if (tok.rfind("ff", 0) == 0) {
      pm.kind = PairMode::Kind::kFaceFace;
      rest = tok.substr(2);
    } else if (tok.rfind("fv", 0) == 0) {
      pm.kind = PairMode::Kind::kFaceVertex;
      rest = tok.substr(2);
    } else if (tok.rfind("s", 0) == 0) {
      pm.kind = PairMode::Kind::kSeparating;
      rest = tok.substr(1);
    } else {
      throw std::invalid_argument("bad mode token '" + tok + "'");
    }
    const auto parts = Split(rest, '.');
    const std::size_t expected = pm.in_contact() ? 3 : 2;
    if (parts.size() != expected) {
      throw std::invalid_argument("bad mode token '" + tok + "'");
    }
    pm.face_body = ParseInt(parts[0]);
    pm.face = ParseInt(parts[1]);
    if (pm.in_contact()) pm.other = ParseInt(parts[2]);
    key.modes.push_back(pm);
  }
  return key;
}

std::vector<PairMode> pair_options(const PushingEnvironment& env, int i, int j) {
  std::vector<PairMode> out;
  const BodySpec& I = env.bodies[i];
  const BodySpec& J = env.bodies[j];
  for (int body : {i, j}) {
    for (int f = 0; f < env.bodies[body].num_faces(); ++f) {
      out.push_back({PairMode::Kind::kSeparating, body, f, 0});
    }
  }
  for (int fi = 0; fi < I.num_faces(); ++fi) {
    for (int fj = 0; fj < J.num_faces(); ++fj) {
      if ((I.normal(fi) + J.normal(fj)).norm() < 1e-9) {
        out.push_back({PairMode::Kind::kFaceFace, i, fi, fj});
      }
    }
  }
  for (int a : {i, j}) {
    const BodySpec& A = env.bodies[a];
    const BodySpec& B = env.bodies[a == i ? j : i];
    for (int f = 0; f < A.num_faces(); ++f) {
      const Eigen::Vector2d n = A.normal(f);
      int best = -1;
      int ties = 0;
      double lowest = kInfinity;
      for (int k = 0; k < B.num_faces(); ++k) {
        const double v = n.dot(B.polygon[k]);
        if (v < lowest - kFeatureTol) {
          lowest = v;
          best = k;
          ties = 1;
        } else if (v <= lowest + kFeatureTol) {
          ++ties;
        }
      }
      if (ties == 1) out.push_back({PairMode::Kind::kFaceVertex, a, f, best});
    }
  }
  return out;
}

PushingVertexLayout pushing_layout(const PushingEnvironment& env,
                                   const ContactModeKey& mode) {
  PushingVertexLayout out;
  out.num_movable = static_cast<int>(env.movable_bodies().size());
  out.num_robots = static_cast<int>(env.robots().size());
  for (const PairMode& pm : mode.modes) out.num_contacts += pm.in_contact();
  return out;
}

HPolyhedron pushing_vertex_set(const PushingEnvironment& env,
                               const ContactModeKey& mode, bool pin_start) {
  return ModeBuilder(env, mode).Build(pin_start);
}

std::vector<ContactModeKey> pushing_successors(const PushingEnvironment& env,
                                               const ContactModeKey& mode) {
  const auto pairs = env.pairs();
  std::vector<ContactModeKey> out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (const PairMode& option : pair_options(env, pairs[p].first, pairs[p].second)) {
      if (option == mode.modes[p]) continue;
      ContactModeKey next = mode;
      next.modes[p] = option;
      out.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.ToString() < b.ToString();
  });
  return out;
}

ContactModeKey start_mode(const PushingEnvironment& env) {
  const auto pairs = env.pairs();
  const auto movable = env.movable_bodies();
  auto position = [&](int body) -> Eigen::Vector2d {
    auto it = std::find(movable.begin(), movable.end(), body);
    return it == movable.end() ? Eigen::Vector2d::Zero()
                               : env.start[it - movable.begin()];
  };
  ContactModeKey key;
  for (const auto& [i, j] : pairs) {
    bool found = false;
    for (const PairMode& option : pair_options(env, i, j)) {
      if (option.in_contact()) continue;
      const int a = option.face_body;
      const int b = a == i ? j : i;
      const Eigen::Vector2d n = env.bodies[a].normal(option.face);
      double lowest = kInfinity;
      for (const auto& v : env.bodies[b].polygon) {
        lowest = std::min(lowest, n.dot(position(b) + v - position(a)));
      }
      if (lowest >= env.bodies[a].support(option.face) - kFeatureTol) {
        key.modes.push_back(option);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("bodies " + env.bodies[i].name + " and " +
                                  env.bodies[j].name + " overlap at the start");
    }
  }
  return key;
}

PushingGcs::PushingGcs(PushingEnvironment env) : env_(std::move(env)) {
  env_.Validate();
  if (env_.weights.empty()) env_.weights.assign(env_.movable_bodies().size(), 1.0);
  source_ = VertexId(kSourcePrefix + start_mode(env_).ToString());
}

bool PushingGcs::is_source(const VertexId& id) const {
  return id.str().rfind(kSourcePrefix, 0) == 0;
}

ContactModeKey PushingGcs::mode_of(const VertexId& id) const {
  if (id == target()) throw std::out_of_range("the target has no mode");
  const std::string& s = id.str();
  return ContactModeKey::Parse(is_source(id) ? s.substr(kSourcePrefix.size()) : s);
}

int PushingGcs::dim_of(const VertexId& id) const {
  if (id == target()) return 2 * static_cast<int>(env_.movable_bodies().size());
  return pushing_layout(env_, mode_of(id)).dim();
}

std::shared_ptr<const GcsVertex> PushingGcs::vertex(const VertexId& id) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = vertices_.find(id);
    if (it != vertices_.end()) return it->second;
  }
  HPolyhedron set = HPolyhedron::MakeUnitBox(0);
  if (id == target()) {
    const auto movable = env_.movable_bodies();
    const auto objects = env_.objects();
    const int n = 2 * static_cast<int>(movable.size());
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    const Eigen::MatrixXd& Hw = env_.workspace.A();
    for (std::size_t m = 0; m < movable.size(); ++m) {
      for (Eigen::Index r = 0; r < Hw.rows(); ++r) {
        double worst = -kInfinity;
        for (const auto& v : env_.bodies[movable[m]].polygon) {
          worst = std::max(worst, Hw.row(r).dot(v));
        }
        Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(n);
        a.segment<2>(2 * m) = Hw.row(r);
        rows.push_back(a);
        rhs.push_back(env_.workspace.b()(r) - worst);
      }
    }
    for (Eigen::Index r = 0; r < env_.goal.num_rows(); ++r) {
      Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(n);
      for (std::size_t o = 0; o < objects.size(); ++o) {
        const int m = static_cast<int>(
            std::find(movable.begin(), movable.end(), objects[o]) - movable.begin());
        a.segment<2>(2 * m) = env_.goal.A().block<1, 2>(r, 2 * o);
      }
      rows.push_back(a);
      rhs.push_back(env_.goal.b()(r));
    }
    Eigen::MatrixXd A(rows.size(), n);
    Eigen::VectorXd b(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      A.row(r) = rows[r];
      b(r) = rhs[r];
    }
    set = HPolyhedron(A, b);
  } else {
    ContactModeKey mode;
    try {
      mode = mode_of(id);
    } catch (const std::invalid_argument&) {
      throw std::out_of_range("unknown vertex '" + id.str() + "'");
    }
    const auto pairs = env_.pairs();
    if (mode.modes.size() != pairs.size()) {
      throw std::out_of_range("unknown vertex '" + id.str() + "'");
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto options = pair_options(env_, pairs[p].first, pairs[p].second);
      if (std::find(options.begin(), options.end(), mode.modes[p]) == options.end()) {
        throw std::out_of_range("unknown vertex '" + id.str() + "'");
      }
    }
    if (is_source(id) && id != source_) {
      throw std::out_of_range("unknown vertex '" + id.str() + "'");
    }
    set = pushing_vertex_set(env_, mode, is_source(id));
  }
  auto v = std::make_shared<const GcsVertex>(GcsVertex{id, std::move(set)});
  std::lock_guard<std::mutex> lock(mutex_);
  return vertices_.emplace(id, std::move(v)).first->second;
}

std::vector<Successor> PushingGcs::successors(const VertexId& u) const {
  vertex(u);  // validates the id
  if (u == target()) return {};
  const ContactModeKey mode = mode_of(u);
  std::vector<VertexId> ids;
  for (const auto& next : pushing_successors(env_, mode)) ids.emplace_back(next.ToString());
  if (is_source(u)) ids.emplace_back(mode.ToString());
  ids.push_back(target());
  std::sort(ids.begin(), ids.end());
  std::vector<Successor> out;
  for (const VertexId& v : ids) out.push_back({edge(u, v), vertex(v)});
  return out;
}

std::shared_ptr<const EdgeData> PushingGcs::edge(const VertexId& u,
                                                 const VertexId& v) const {
  vertex(u);
  vertex(v);
  if (u == target() || is_source(v)) {
    throw std::out_of_range("no edge " + u.str() + " -> " + v.str());
  }
  const ContactModeKey from = mode_of(u);
  if (v != target()) {
    const ContactModeKey to = mode_of(v);
    const auto succ = pushing_successors(env_, from);
    const bool adjacent = std::find(succ.begin(), succ.end(), to) != succ.end() ||
                          (is_source(u) && to == from);
    if (!adjacent) throw std::out_of_range("no edge " + u.str() + " -> " + v.str());
  }
  const int du = dim_of(u), dv = dim_of(v);
  const int num_movable = static_cast<int>(env_.movable_bodies().size());
  const PushingVertexLayout lu = pushing_layout(env_, from);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * num_movable, du + dv);
  auto edge_data = std::make_shared<EdgeData>();
  edge_data->u = u;
  edge_data->v = v;
  if (v == target()) {
    for (int m = 0; m < num_movable; ++m) {
      for (int c = 0; c < 2; ++c) {
        C(2 * m + c, lu.position(m, 1) + c) = 1;
        C(2 * m + c, du + 2 * m + c) = -1;
      }
    }
  } else {
    const PushingVertexLayout lv = pushing_layout(env_, mode_of(v));
    edge_data->cost.c0 = 1.0;
    for (int m = 0; m < num_movable; ++m) {
      for (int c = 0; c < 2; ++c) {
        C(2 * m + c, lu.position(m, 1) + c) = 1;
        C(2 * m + c, du + lv.position(m, 0) + c) = -1;
        L1Term term;
        term.w = env_.weights[m];
        term.a = Eigen::RowVectorXd::Zero(du + dv);
        term.a(du + lv.position(m, 1) + c) = 1;
        term.a(du + lv.position(m, 0) + c) = -1;
        edge_data->cost.terms.push_back(std::move(term));
      }
    }
  }
  edge_data->constraint = WithEqualities(
      HPolyhedron(Eigen::MatrixXd(0, du + dv), Eigen::VectorXd(0)), C,
      Eigen::VectorXd::Zero(C.rows()));
  return edge_data;
}

std::optional<Eigen::MatrixXd> PushingGcs::domination_selector(
    const VertexId& v) const {
  if (v == target()) return std::nullopt;
  const PushingVertexLayout l = pushing_layout(env_, mode_of(v));
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * l.num_movable, l.dim());
  for (int m = 0; m < l.num_movable; ++m) {
    E.block<2, 2>(2 * m, l.position(m, 1)).setIdentity();
  }
  return E;
}

std::optional<ShortcutModel> PushingGcs::shortcut_model(const VertexId& v) const {
  const int n = 2 * static_cast<int>(env_.movable_bodies().size());
  ShortcutModel model;
  model.S = domination_selector(v).value_or(Eigen::MatrixXd::Identity(n, n));
  model.S_t = Eigen::MatrixXd::Identity(n, n);
  const auto movable = env_.movable_bodies();
  for (int body : movable) {
    model.robot_rows.push_back(env_.bodies[body].actuated);
    model.robot_rows.push_back(env_.bodies[body].actuated);
  }
  // Every mode has a zero-constant edge into the target.
  model.direct_edge_c0 = 0.0;
  return model;
}

std::vector<std::vector<Eigen::Vector2d>> PushingGcs::positions(
    const VertexId& id, const Eigen::VectorXd& x) const {
  const int num_movable = static_cast<int>(env_.movable_bodies().size());
  std::vector<std::vector<Eigen::Vector2d>> out;
  if (id == target()) {
    std::vector<Eigen::Vector2d> knot;
    for (int m = 0; m < num_movable; ++m) knot.push_back(x.segment<2>(2 * m));
    out.push_back(std::move(knot));
    return out;
  }
  const PushingVertexLayout l = pushing_layout(env_, mode_of(id));
  for (int k = 0; k < 2; ++k) {
    std::vector<Eigen::Vector2d> knot;
    for (int m = 0; m < num_movable; ++m) knot.push_back(x.segment<2>(l.position(m, k)));
    out.push_back(std::move(knot));
  }
  return out;
}

std::shared_ptr<PushingGcs> make_pushing_problem(PushingEnvironment env) {
  return std::make_shared<PushingGcs>(std::move(env));
}

PushingEnvironment make_push1_environment() {
  auto square = [](double half) {
    return std::vector<Eigen::Vector2d>{{-half, -half}, {half, -half},
                                        {half, half},   {-half, half}};
  };
  PushingEnvironment env;
  env.bodies = {BodySpec{"robot", square(0.25), true, true},
                BodySpec{"object", square(0.5), true, false}};
  env.workspace = HPolyhedron::MakeBox(Eigen::Vector2d(-3, -3), Eigen::Vector2d(3, 3));
  env.start = {Eigen::Vector2d(-1.5, 0), Eigen::Vector2d(0, 0)};
  env.goal = HPolyhedron::MakeBox(Eigen::Vector2d(0.95, -0.05), Eigen::Vector2d(1.05, 0.05));
  env.weights = {1.0, 1.0};
  return env;
}

}  // namespace gcs_star
