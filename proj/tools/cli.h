#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gcs_star/io.h"
#include "gcs_star/search.h"

namespace gcs_star::cli {

enum ExitCode : int {
  kExitSolved = 0,
  kExitInternal = 1,
  kExitFail = 2,
  kExitLimit = 3,
  kExitInput = 4,
};

/// Maps a finished search to its exit code.
int ExitCodeFor(SearchStatus status);

/// Runs the command line and returns the exit code. Diagnostics go to `err`,
/// summaries to `out`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The SVG for a solution. Throws InputError for an empty trajectory or a
/// problem without 2-D positions.
std::string RenderSvg(const Problem& problem, const LoadedSolution& solution);

/// Vertices of a bounded 2-D polyhedron in counterclockwise order.
std::vector<Eigen::Vector2d> PolygonVertices(const HPolyhedron& P);

}  // namespace gcs_star::cli
