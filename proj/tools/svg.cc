#include <algorithm>
#include <cmath>
#include <sstream>

#include "cli.h"

namespace gcs_star::cli {

namespace {

constexpr double kCanvas = 600.0;
constexpr double kMargin = 20.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Shape {
  std::vector<Eigen::Vector2d> points;
  std::string style;
  bool closed;
};

class Canvas {
 public:
  void Add(Shape shape) { shapes_.push_back(std::move(shape)); }

  std::string Render() const {
    Eigen::Vector2d lo = Eigen::Vector2d::Constant(kInfinity);
    Eigen::Vector2d hi = -lo;
    for (const Shape& s : shapes_) {
      for (const auto& p : s.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
    const double span = std::max((hi - lo).maxCoeff(), 1e-9);
    const double scale = (kCanvas - 2 * kMargin) / span;
    std::ostringstream svg;
    svg.precision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
        << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas
        << "\">\n";
    for (const Shape& s : shapes_) {
      svg << "  <" << (s.closed ? "polygon" : "polyline") << " points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        const double x = kMargin + (s.points[i].x() - lo.x()) * scale;
        const double y = kCanvas - kMargin - (s.points[i].y() - lo.y()) * scale;
        svg << (i ? " " : "") << x << "," << y;
      }
      svg << "\" " << s.style << "/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
  }

 private:
  std::vector<Shape> shapes_;
};

std::vector<Eigen::Vector2d> Translate(const std::vector<Eigen::Vector2d>& polygon,
                                       const Eigen::Vector2d& offset) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& v : polygon) out.push_back(v + offset);
  return out;
}

std::string RenderExplicit(const ExplicitGcs& g, const LoadedSolution& sol) {
  Canvas canvas;
  for (const auto& v : g.vertices()) {
    if (v->dim() != 2) {
      throw InputError("vertex '" + v->id.str() + "' is not 2-D");
    }
    canvas.Add({PolygonVertices(v->set),
                "fill=\"#cfe2f3\" fill-opacity=\"0.6\" stroke=\"#3d6a99\"", true});
  }
  std::vector<Eigen::Vector2d> line;
  for (const auto& x : sol.points) {
    if (x.size() != 2) throw InputError("trajectory point is not 2-D");
    line.push_back(x);
  }
  canvas.Add({line, "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"", false});
  return canvas.Render();
}

std::string RenderPushing(const PushingGcs& g, const LoadedSolution& sol) {
  const PushingEnvironment& env = g.environment();
  Canvas canvas;
  canvas.Add({PolygonVertices(env.workspace), "fill=\"none\" stroke=\"#888888\"", true});
  const std::vector<int> movable = env.movable_bodies();
  for (std::size_t b = 0; b < env.bodies.size(); ++b) {
    const BodySpec& body = env.bodies[b];
    if (!body.movable) {
      canvas.Add({body.polygon, "fill=\"#555555\" stroke=\"#333333\"", true});
    }
  }
  std::vector<std::vector<Eigen::Vector2d>> tracks(movable.size());
  for (std::size_t i = 0; i < sol.path.size(); ++i) {
    for (const auto& knot : g.positions(sol.path[i], sol.points[i])) {
      for (std::size_t m = 0; m < movable.size(); ++m) tracks[m].push_back(knot[m]);
    }
  }
  for (std::size_t m = 0; m < movable.size(); ++m) {
    const BodySpec& body = env.bodies[movable[m]];
    const std::string color = kPalette[m % std::size(kPalette)];
    canvas.Add({Translate(body.polygon, tracks[m].front()),
                "fill=\"" + color + "\" fill-opacity=\"0.25\" stroke=\"" + color + "\"", true});
    canvas.Add({Translate(body.polygon, tracks[m].back()),
                "fill=\"" + color + "\" fill-opacity=\"0.6\" stroke=\"" + color + "\"", true});
  }
  for (std::size_t m = 0; m < movable.size(); ++m) {
    const std::string color = kPalette[m % std::size(kPalette)];
    canvas.Add({tracks[m], "fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"",
                false});
  }
  return canvas.Render();
}

}  // namespace

std::vector<Eigen::Vector2d> PolygonVertices(const HPolyhedron& P) {
  if (P.ambient_dimension() != 2) throw InputError("polygon is not 2-D");
  const Eigen::MatrixXd& A = P.A();
  const Eigen::VectorXd& b = P.b();
  std::vector<Eigen::Vector2d> pts;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d M;
      M << A.row(i), A.row(j);
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Eigen::Vector2d p = M.inverse() * Eigen::Vector2d(b(i), b(j));
      if (((A * p - b).array() > 1e-8).any()) continue;
      const bool seen = std::any_of(pts.begin(), pts.end(), [&](const auto& q) {
        return (q - p).norm() < 1e-9;
      });
      if (!seen) pts.push_back(p);
    }
  }
  if (pts.empty()) throw InputError("polygon is empty or unbounded");
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
    return std::atan2(p.y() - c.y(), p.x() - c.x()) <
           std::atan2(q.y() - c.y(), q.x() - c.x());
  });
  return pts;
}

std::string RenderSvg(const Problem& problem, const LoadedSolution& solution) {
  if (solution.points.empty()) throw InputError("solution has an empty trajectory");
  try {
    Realize(problem.graph(), solution.path);
  } catch (const std::out_of_range& e) {
    throw InputError(std::string("solution does not match the problem: ") + e.what());
  }
  if (problem.pushing) return RenderPushing(*problem.pushing, solution);
  return RenderExplicit(*problem.explicit_graph, solution);
}

}  // namespace gcs_star::cli
