#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tlab/error.hpp"

namespace tlab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Undirected edge carrying a conductance `w` (Dirichlet form) and a
/// boundary weight `sigma` (discrete perimeter).
struct Edge {
  Index i = 0;
  Index j = 0;
  double w = 0.0;
  double sigma = 0.0;
};

enum class LineKind { Circle, Interval };

/// Coordinates of a catalog space that lives on a line or a circle. Only
/// present for spaces built by the catalog; the 1D transport oracle needs it.
struct LineEmbedding {
  LineKind kind = LineKind::Interval;
  double length = 0.0;
  Vector position;  // increasing, in [0, length)
};

/// Finite metric measure space with a weighted graph structure.
///
/// Immutable after construction; the constructor validates every invariant
/// (symmetric zero-diagonal metric satisfying the triangle inequality,
/// strictly positive measure, connected conductance graph, boundary weights
/// supported on conducting edges) and throws `tlab::Error` naming the first
/// violated one.
class MetricMeasureSpace {
 public:
  MetricMeasureSpace(std::string name, Matrix dist, Vector measure, std::vector<Edge> edges,
                     double curvature, std::optional<LineEmbedding> line = std::nullopt,
                     std::vector<std::string> labels = {});

  Index size() const { return measure_.size(); }
  const std::string& name() const { return name_; }
  const Matrix& dist() const { return dist_; }
  const Vector& measure() const { return measure_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double curvature() const { return curvature_; }
  double total_mass() const { return total_mass_; }
  double diameter() const { return dist_.maxCoeff(); }
  const std::optional<LineEmbedding>& line() const { return line_; }

  /// Graph Laplacian D - W of the conductances (not divided by the measure).
  const Eigen::SparseMatrix<double>& conductance_laplacian() const { return laplacian_; }

 private:
  std::string name_;
  Matrix dist_;
  Vector measure_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  double curvature_ = 0.0;
  double total_mass_ = 0.0;
  std::optional<LineEmbedding> line_;
  Eigen::SparseMatrix<double> laplacian_;
};

/// Real function on the points of a space, with its positive/negative parts
/// and norms taken against the space measure.
class SignedDensity {
 public:
  SignedDensity(Vector values, const Vector& measure);

  const Vector& values() const { return values_; }
  const Vector& positive() const { return positive_; }
  const Vector& negative() const { return negative_; }
  /// ||f+||_1 + ||f-||_1, so the split identity holds bit for bit.
  double l1() const { return positive_l1_ + negative_l1_; }
  double positive_l1() const { return positive_l1_; }
  double negative_l1() const { return negative_l1_; }
  double linf() const { return linf_; }
  double mean() const { return mean_; }
  /// Membership mask of {f > 0}.
  std::vector<bool> positive_set() const;

 private:
  Vector values_;
  Vector positive_;
  Vector negative_;
  double positive_l1_ = 0.0;
  double negative_l1_ = 0.0;
  double linf_ = 0.0;
  double mean_ = 0.0;
};

// --- catalog -----------------------------------------------------------------

enum class CatalogKind { Circle, Interval, Torus2d, OuChain, TwoPoint, Path };

/// Identifier of a reference space. `n` is the point count except for the
/// torus, where it is the side resolution (n*n points).
struct CatalogSpec {
  CatalogKind kind = CatalogKind::Circle;
  Index n = 2;
  /// circle/interval/torus side length; two_point distance; ou_chain K.
  std::optional<double> parameter;
  /// path conductances (n-1 of them).
  std::vector<double> weights;
};

MetricMeasureSpace build_catalog_space(const CatalogSpec& spec);

MetricMeasureSpace circle(Index n, double length = 2.0 * std::numbers::pi);
MetricMeasureSpace interval(Index n, double length = 1.0);
MetricMeasureSpace torus2d(Index side, double length = 1.0);
MetricMeasureSpace ou_chain(Index n, double curvature = 1.0);
MetricMeasureSpace two_point(double distance = 1.0);
MetricMeasureSpace path(const std::vector<double>& weights);

std::string to_string(CatalogKind kind);
std::optional<CatalogKind> catalog_kind_from_string(const std::string& name);

// --- files -------------------------------------------------------------------

/// Reads the JSON space format: {"name", "points", "measure", "dist",
/// "edges": [{"i","j","w","sigma"}], "K"}.
MetricMeasureSpace load_space(const std::filesystem::path& path);
MetricMeasureSpace parse_space_json(const std::string& text);
std::string space_to_json(const MetricMeasureSpace& space);

// --- subsets -----------------------------------------------------------------

using PointSet = std::vector<bool>;

PointSet point_set(Index n, const std::vector<Index>& members);
std::vector<Index> members(const PointSet& set);
double set_mass(const MetricMeasureSpace& space, const PointSet& set);

}  // namespace tlab
