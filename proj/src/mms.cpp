#include "tlab/mms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include <json.hpp>

namespace tlab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_metric(const Matrix& dist) {
  const Index n = dist.rows();
  if (dist.cols() != n) throw Error(ErrorCode::InvalidArgument, "distance matrix must be square");
  if (!dist.allFinite()) throw Error(ErrorCode::Positivity, "distance matrix has non-finite entries");
  const double scale = std::max(1.0, dist.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) {
      throw Error(ErrorCode::ZeroDiagonal, "dist(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
    }
    for (Index j = i + 1; j < n; ++j) {
      if (dist(i, j) < 0.0) {
        throw Error(ErrorCode::Positivity, "negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (std::abs(dist(i, j) - dist(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::Symmetry, "dist(" + std::to_string(i) + "," + std::to_string(j) + ") != dist(" +
                                             std::to_string(j) + "," + std::to_string(i) + ")");
      }
    }
  }

  const double slack = 1e-12 * scale;
  auto check_triple = [&](Index a, Index b, Index c) {
    if (dist(a, c) > dist(a, b) + dist(b, c) + slack) {
      throw Error(ErrorCode::TriangleInequality, "d(" + std::to_string(a) + "," + std::to_string(c) + ") > d(" +
                                                     std::to_string(a) + "," + std::to_string(b) + ") + d(" +
                                                     std::to_string(b) + "," + std::to_string(c) + ")");
    }
  };
  if (n <= 64) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (int s = 0; s < 10000; ++s) check_triple(pick(rng), pick(rng), pick(rng));
  }
}

void check_connected(Index n, const std::vector<Edge>& edges) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    if (e.w > 0.0) {
      adj[e.i].push_back(e.j);
      adj[e.j].push_back(e.i);
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Index> todo;
  todo.push(0);
  seen[0] = true;
  Index count = 1;
  while (!todo.empty()) {
    const Index x = todo.front();
    todo.pop();
    for (Index y : adj[x]) {
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        todo.push(y);
      }
    }
  }
  if (count != n) {
    throw Error(ErrorCode::Connectivity,
                "only " + std::to_string(count) + " of " + std::to_string(n) + " points reachable from point 0");
  }
}

std::vector<Edge> normalize_edges(Index n, std::vector<Edge> edges) {
  std::map<std::pair<Index, Index>, bool> seen;
  for (Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (e.i == e.j) throw Error(ErrorCode::InvalidArgument, "self-loop at point " + std::to_string(e.i));
    if (!std::isfinite(e.w) || !std::isfinite(e.sigma) || e.w < 0.0 || e.sigma < 0.0) {
      throw Error(ErrorCode::Positivity, "edge weights must be finite and nonnegative");
    }
    if (e.sigma > 0.0 && e.w <= 0.0) {
      throw Error(ErrorCode::BoundaryWeights,
                  "sigma > 0 on edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") with w = 0");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(std::make_pair(e.i, e.j), true).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return edges;
}

/// Accumulates parallel edges, which appear on tiny periodic grids.
class EdgeAccumulator {
 public:
  void add(Index i, Index j, double w, double sigma) {
    auto& e = edges_[{std::min(i, j), std::max(i, j)}];
    e.first += w;
    e.second += sigma;
  }
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, ws] : edges_) out.push_back({key.first, key.second, ws.first, ws.second});
    return out;
  }

 private:
  std::map<std::pair<Index, Index>, std::pair<double, double>> edges_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

MetricMeasureSpace::MetricMeasureSpace(std::string name, Matrix dist, Vector measure, std::vector<Edge> edges,
                                       double curvature, std::optional<LineEmbedding> line,
                                       std::vector<std::string> labels)
    : name_(std::move(name)),
      dist_(std::move(dist)),
      measure_(std::move(measure)),
      labels_(std::move(labels)),
      curvature_(curvature),
      line_(std::move(line)) {
  const Index n = measure_.size();
  require(n >= 2, "a space needs at least two points");
  require(dist_.rows() == n && dist_.cols() == n, "distance matrix size does not match measure");
  require(std::isfinite(curvature_), "curvature must be finite");
  for (Index i = 0; i < n; ++i) {
    if (!(measure_[i] > 0.0) || !std::isfinite(measure_[i])) {
      throw Error(ErrorCode::Positivity, "measure of point " + std::to_string(i) + " is not strictly positive");
    }
  }
  check_metric(dist_);
  edges_ = normalize_edges(n, std::move(edges));
  check_connected(n, edges_);
  if (labels_.empty()) {
    labels_.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  require(static_cast<Index>(labels_.size()) == n, "label count does not match point count");
  if (line_) {
    require(line_->position.size() == n, "line embedding size does not match point count");
  }
  total_mass_ = measure_.sum();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * edges_.size());
  for (const Edge& e : edges_) {
    if (e.w == 0.0) continue;
    triplets.emplace_back(e.i, e.i, e.w);
    triplets.emplace_back(e.j, e.j, e.w);
    triplets.emplace_back(e.i, e.j, -e.w);
    triplets.emplace_back(e.j, e.i, -e.w);
  }
  laplacian_.resize(n, n);
  laplacian_.setFromTriplets(triplets.begin(), triplets.end());
}

SignedDensity::SignedDensity(Vector values, const Vector& measure) : values_(std::move(values)) {
  if (values_.size() != measure.size()) throw Error(ErrorCode::InvalidArgument, "density size mismatch");
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidArgument, "density has non-finite values");
  positive_ = values_.cwiseMax(0.0);
  negative_ = (-values_).cwiseMax(0.0);
  positive_l1_ = positive_.dot(measure);
  negative_l1_ = negative_.dot(measure);
  linf_ = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  mean_ = values_.dot(measure) / measure.sum();
}

std::vector<bool> SignedDensity::positive_set() const {
  std::vector<bool> set(static_cast<std::size_t>(values_.size()));
  for (Index i = 0; i < values_.size(); ++i) set[i] = values_[i] > 0.0;
  return set;
}

// --- catalog -----------------------------------------------------------------

MetricMeasureSpace circle(Index n, double length) {
  require(n >= 2, "circle needs n >= 2");
  require(length > 0.0 && std::isfinite(length), "circle length must be positive");
  const double h = length / static_cast<double>(n);
  Matrix dist(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Index k = std::abs(i - j);
      dist(i, j) = static_cast<double>(std::min(k, n - k)) * h;
    }
  }
  EdgeAccumulator acc;
  for (Index i = 0; i < n; ++i) acc.add(i, (i + 1) % n, 1.0 / h, 1.0);
  LineEmbedding line{LineKind::Circle, length, Vector(n)};
  for (Index i = 0; i < n; ++i) line.position[i] = static_cast<double>(i) * h;
  return MetricMeasureSpace("circle(n=" + std::to_string(n) + ")", std::move(dist), Vector::Constant(n, h),
                            acc.edges(), 0.0, std::move(line));
}

MetricMeasureSpace interval(Index n, double length) {
  require(n >= 2, "interval needs n >= 2");
  require(length > 0.0 && std::isfinite(length), "interval length must be positive");
  const double h = length / static_cast<double>(n - 1);
  LineEmbedding line{LineKind::Interval, length, Vector(n)};
  for (Index i = 0; i < n; ++i) line.position[i] = static_cast<double>(i) * h;
  line.position[n - 1] = length;
  Matrix dist(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) dist(i, j) = std::abs(line.position[i] - line.position[j]);
  Vector m = Vector::Constant(n, h);
  m[0] = m[n - 1] = 0.5 * h;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0 / h, 1.0});
  return MetricMeasureSpace("interval(n=" + std::to_string(n) + ")", std::move(dist), std::move(m),
                            std::move(edges), 0.0, std::move(line));
}

MetricMeasureSpace torus2d(Index side, double length) {
  require(side >= 2, "torus needs side >= 2");
  require(length > 0.0 && std::isfinite(length), "torus length must be positive");
  const Index n = side * side;
  const double h = length / static_cast<double>(side);
  auto wrap = [&](Index a, Index b) {
    const Index k = std::abs(a - b);
    return static_cast<double>(std::min(k, side - k)) * h;
  };
  Matrix dist(n, n);
  for (Index p = 0; p < n; ++p) {
    for (Index q = 0; q < n; ++q) {
      const double dx = wrap(p % side, q % side);
      const double dy = wrap(p / side, q / side);
      dist(p, q) = std::hypot(dx, dy);
    }
  }
  EdgeAccumulator acc;
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      const Index p = r * side + c;
      acc.add(p, r * side + (c + 1) % side, 1.0, h);
      acc.add(p, ((r + 1) % side) * side + c, 1.0, h);
    }
  }
  return MetricMeasureSpace("torus2d(side=" + std::to_string(side) + ")", std::move(dist),
                            Vector::Constant(n, h * h), acc.edges(), 0.0);
}

MetricMeasureSpace ou_chain(Index n, double curvature) {
  require(n >= 2, "ou_chain needs n >= 2");
  require(curvature > 0.0 && std::isfinite(curvature), "ou_chain needs K > 0");
  const double half_width = 5.0 / std::sqrt(curvature);
  const double h = 2.0 * half_width / static_cast<double>(n - 1);
  auto weight = [&](double x) { return std::exp(-0.5 * curvature * x * x); };
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = -half_width + static_cast<double>(i) * h;
  Vector m(n);
  for (Index i = 0; i < n; ++i) m[i] = weight(x[i]) * h;
  const double z = m.sum();
  m /= z;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) {
    const double rho = weight(0.5 * (x[i] + x[i + 1])) / z;
    edges.push_back({i, i + 1, rho / h, rho});
  }
  LineEmbedding line{LineKind::Interval, 2.0 * half_width, x.array() + half_width};
  Matrix dist(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) dist(i, j) = std::abs(x[i] - x[j]);
  return MetricMeasureSpace("ou_chain(n=" + std::to_string(n) + ")", std::move(dist), std::move(m),
                            std::move(edges), curvature, std::move(line));
}

MetricMeasureSpace two_point(double distance) {
  require(distance > 0.0 && std::isfinite(distance), "two_point distance must be positive");
  Matrix dist(2, 2);
  dist << 0.0, distance, distance, 0.0;
  LineEmbedding line{LineKind::Interval, distance, Vector(2)};
  line.position << 0.0, distance;
  return MetricMeasureSpace("two_point", std::move(dist), Vector::Ones(2), {{0, 1, 1.0, 1.0}}, 0.0,
                            std::move(line), {"a", "b"});
}

MetricMeasureSpace path(const std::vector<double>& weights) {
  require(!weights.empty(), "path needs at least one edge weight");
  const Index n = static_cast<Index>(weights.size()) + 1;
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weights[i], 1.0});
  LineEmbedding line{LineKind::Interval, static_cast<double>(n - 1), Vector(n)};
  Matrix dist(n, n);
  for (Index i = 0; i < n; ++i) {
    line.position[i] = static_cast<double>(i);
    for (Index j = 0; j < n; ++j) dist(i, j) = static_cast<double>(std::abs(i - j));
  }
  return MetricMeasureSpace("path(n=" + std::to_string(n) + ")", std::move(dist), Vector::Ones(n),
                            std::move(edges), 0.0, std::move(line));
}

MetricMeasureSpace build_catalog_space(const CatalogSpec& spec) {
  switch (spec.kind) {
    case CatalogKind::Circle: return circle(spec.n, spec.parameter.value_or(2.0 * kPi));
    case CatalogKind::Interval: return interval(spec.n, spec.parameter.value_or(1.0));
    case CatalogKind::Torus2d: return torus2d(spec.n, spec.parameter.value_or(1.0));
    case CatalogKind::OuChain: return ou_chain(spec.n, spec.parameter.value_or(1.0));
    case CatalogKind::TwoPoint:
      require(spec.n == 2, "two_point has exactly 2 points");
      return two_point(spec.parameter.value_or(1.0));
    case CatalogKind::Path:
      if (spec.weights.empty()) {
        require(spec.n >= 2, "path needs n >= 2");
        return path(std::vector<double>(static_cast<std::size_t>(spec.n - 1), 1.0));
      }
      require(static_cast<Index>(spec.weights.size()) + 1 == spec.n, "path needs n - 1 weights");
      return path(spec.weights);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown catalog kind");
}

std::string to_string(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::Circle: return "circle";
    case CatalogKind::Interval: return "interval";
    case CatalogKind::Torus2d: return "torus2d";
    case CatalogKind::OuChain: return "ou_chain";
    case CatalogKind::TwoPoint: return "two_point";
    case CatalogKind::Path: return "path";
  }
  return "unknown";
}

std::optional<CatalogKind> catalog_kind_from_string(const std::string& name) {
  for (CatalogKind k : {CatalogKind::Circle, CatalogKind::Interval, CatalogKind::Torus2d, CatalogKind::OuChain,
                        CatalogKind::TwoPoint, CatalogKind::Path}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

// --- files -------------------------------------------------------------------

MetricMeasureSpace parse_space_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "space file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "name" && key != "points" && key != "measure" && key != "dist" && key != "edges" && key != "K") {
      throw Error(ErrorCode::Parse, "unknown key '" + key + "'");
    }
  }
  try {
    const auto measure_values = doc.at("measure").get<std::vector<double>>();
    const auto rows = doc.at("dist").get<std::vector<std::vector<double>>>();
    const Index n = static_cast<Index>(measure_values.size());
    if (static_cast<Index>(rows.size()) != n) throw Error(ErrorCode::Parse, "dist must have one row per point");
    Matrix dist(n, n);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[i].size()) != n) throw Error(ErrorCode::Parse, "dist row has wrong length");
      for (Index j = 0; j < n; ++j) dist(i, j) = rows[i][j];
    }
    std::vector<std::string> labels;
    if (doc.contains("points")) {
      for (const auto& p : doc.at("points")) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
      if (static_cast<Index>(labels.size()) != n) throw Error(ErrorCode::Parse, "points/measure length mismatch");
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      for (const auto& [key, value] : e.items()) {
        if (key != "i" && key != "j" && key != "w" && key != "sigma") {
          throw Error(ErrorCode::Parse, "unknown edge key '" + key + "'");
        }
      }
      edges.push_back({e.at("i").get<Index>(), e.at("j").get<Index>(), e.at("w").get<double>(),
                       e.value("sigma", 0.0)});
    }
    Vector m = Eigen::Map<const Vector>(measure_values.data(), n);
    return MetricMeasureSpace(doc.value("name", std::string("custom")), std::move(dist), std::move(m),
                              std::move(edges), doc.value("K", 0.0), std::nullopt, std::move(labels));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

MetricMeasureSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_space_json(buffer.str());
}

std::string space_to_json(const MetricMeasureSpace& space) {
  nlohmann::ordered_json doc;
  doc["name"] = space.name();
  doc["points"] = space.labels();
  doc["measure"] = std::vector<double>(space.measure().data(), space.measure().data() + space.size());
  auto rows = nlohmann::ordered_json::array();
  for (Index i = 0; i < space.size(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(space.size()));
    for (Index j = 0; j < space.size(); ++j) row[j] = space.dist()(i, j);
    rows.push_back(row);
  }
  doc["dist"] = rows;
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : space.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.w}, {"sigma", e.sigma}});
  doc["edges"] = edges;
  doc["K"] = space.curvature();
  return doc.dump(2);
}

// --- subsets -----------------------------------------------------------------

PointSet point_set(Index n, const std::vector<Index>& members) {
  PointSet set(static_cast<std::size_t>(n), false);
  for (Index i : members) {
    if (i < 0 || i >= n) throw Error(ErrorCode::InvalidArgument, "subset index out of range");
    set[i] = true;
  }
  return set;
}

std::vector<Index> members(const PointSet& set) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i]) out.push_back(static_cast<Index>(i));
  return out;
}

double set_mass(const MetricMeasureSpace& space, const PointSet& set) {
  double mass = 0.0;
  for (Index i = 0; i < space.size(); ++i)
    if (set[i]) mass += space.measure()[i];
  return mass;
}

}  // namespace tlab
