#include "lowtail/geometry.hpp"

#include <boost/random/poisson_distribution.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "lowtail/error.hpp"
#include "lowtail/spatial_grid.hpp"

namespace lowtail {

Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

bool lex_less(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// ---------------------------------------------------------------------------
// BoxWindow

BoxWindow::BoxWindow(double side, int dimension)
    : BoxWindow(side, Point::Zero(dimension)) {}

BoxWindow::BoxWindow(double side, Point center) : side_(side), center_(std::move(center)) {
  if (!(side_ > 0) || !std::isfinite(side_)) {
    throw ParameterError("window side must be positive and finite");
  }
  if (center_.size() < 1 || center_.size() > 3) {
    throw ParameterError("dimension must be 1, 2 or 3");
  }
  if (!center_.allFinite()) throw ParameterError("window center must be finite");
}

double BoxWindow::volume() const { return std::pow(side_, dimension()); }

double BoxWindow::diameter() const { return side_ * std::sqrt(static_cast<double>(dimension())); }

bool BoxWindow::contains(const Point& p) const {
  if (p.size() != center_.size()) return false;
  for (int a = 0; a < dimension(); ++a) {
    if (p[a] < lower(a) || p[a] > upper(a)) return false;
  }
  return true;
}

bool BoxWindow::contains(const BoxWindow& inner) const {
  if (inner.dimension() != dimension()) return false;
  for (int a = 0; a < dimension(); ++a) {
    if (inner.lower(a) < lower(a) || inner.upper(a) > upper(a)) return false;
  }
  return true;
}

double BoxWindow::distance_to_boundary(const Point& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dimension(); ++a) {
    d = std::min({d, p[a] - lower(a), upper(a) - p[a]});
  }
  return d;
}

BoxWindow BoxWindow::grown(double margin) const { return BoxWindow(side_ + 2 * margin, center_); }

bool BoxWindow::operator==(const BoxWindow& other) const {
  return side_ == other.side_ && center_.size() == other.center_.size() &&
         center_ == other.center_;
}

// ---------------------------------------------------------------------------
// PointConfig

struct PointConfig::GridCache {
  std::once_flag once;
  std::unique_ptr<SpatialGrid> grid;
};

PointConfig::PointConfig(BoxWindow window)
    : window_(std::move(window)), cache_(std::make_shared<GridCache>()) {}

PointConfig::PointConfig(BoxWindow window, std::vector<Point> points)
    : window_(std::move(window)), points_(std::move(points)),
      cache_(std::make_shared<GridCache>()) {
  for (const Point& p : points_) {
    if (p.size() != window_.dimension()) throw ParameterError("point dimension mismatch");
    if (!p.allFinite()) throw ParameterError("point coordinates must be finite");
    if (!window_.contains(p)) throw ParameterError("point outside window");
  }
  std::vector<std::size_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(points_[a], points_[b]); });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (points_[idx[i]] == points_[idx[i - 1]]) {
      throw ParameterError("coincident points are not allowed");
    }
  }
}

// The grid refers back to its owner, so it never travels with the points.
PointConfig::PointConfig(const PointConfig& other)
    : window_(other.window_), points_(other.points_), cache_(std::make_shared<GridCache>()) {}

PointConfig::PointConfig(PointConfig&& other) noexcept
    : window_(std::move(other.window_)), points_(std::move(other.points_)),
      cache_(std::make_shared<GridCache>()) {
  other.cache_ = std::make_shared<GridCache>();
}

PointConfig& PointConfig::operator=(const PointConfig& other) {
  if (this != &other) {
    window_ = other.window_;
    points_ = other.points_;
    cache_ = std::make_shared<GridCache>();
  }
  return *this;
}

PointConfig& PointConfig::operator=(PointConfig&& other) noexcept {
  if (this != &other) {
    window_ = std::move(other.window_);
    points_ = std::move(other.points_);
    cache_ = std::make_shared<GridCache>();
    other.cache_ = std::make_shared<GridCache>();
  }
  return *this;
}

PointConfig::~PointConfig() = default;

PointConfig PointConfig::trusted(BoxWindow window, std::vector<Point> points) {
  PointConfig c(std::move(window));
  c.points_ = std::move(points);
  return c;
}

std::optional<std::size_t> PointConfig::find(const Point& p) const {
  if (p.size() != dimension()) return std::nullopt;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == p) return i;
  }
  return std::nullopt;
}

PointConfig PointConfig::with_points(std::span<const Point> extra) const {
  for (const Point& p : extra) {
    if (p.size() != dimension()) throw ParameterError("point dimension mismatch");
    if (!p.allFinite()) throw ParameterError("point coordinates must be finite");
  }
  // The window grows to cover added points outside it.
  BoxWindow w = window_;
  double need = 0;
  for (const Point& p : extra) {
    for (int a = 0; a < dimension(); ++a) {
      need = std::max(need, std::abs(p[a] - w.center()[a]) * 2);
    }
  }
  if (need > w.side()) w = BoxWindow(need, w.center());
  std::vector<Point> pts = points_;
  for (const Point& p : extra) {
    if (find(p)) throw ParameterError("added point coincides with an existing point");
    pts.push_back(p);
  }
  for (std::size_t i = points_.size(); i < pts.size(); ++i) {
    for (std::size_t j = points_.size(); j < i; ++j) {
      if (pts[i] == pts[j]) throw ParameterError("added points coincide");
    }
  }
  return trusted(std::move(w), std::move(pts));
}

PointConfig PointConfig::with_point(const Point& extra) const {
  return with_points(std::span<const Point>(&extra, 1));
}

std::vector<std::size_t> PointConfig::indices_in(const BoxWindow& box) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (box.contains(points_[i])) out.push_back(i);
  }
  return out;
}

const SpatialGrid& PointConfig::grid() const {
  std::call_once(cache_->once, [this] { cache_->grid = std::make_unique<SpatialGrid>(*this); });
  return *cache_->grid;
}

// ---------------------------------------------------------------------------
// Sampling

PointConfig sample_poisson(double intensity, const BoxWindow& window, RngStream rng) {
  if (!(intensity > 0) || !std::isfinite(intensity)) {
    throw ParameterError("intensity must be positive");
  }
  const double mean = intensity * window.volume();
  boost::random::poisson_distribution<long, double> count_dist(mean);
  const long count = count_dist(rng);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const int d = window.dimension();
  for (long i = 0; i < count; ++i) {
    Point p(d);
    for (int a = 0; a < d; ++a) p[a] = window.lower(a) + window.side() * rng.uniform();
    pts.push_back(std::move(p));
  }
  return PointConfig::trusted(window, std::move(pts));
}

PointConfig thin(const PointConfig& config, double survival, RngStream rng) {
  if (!(survival >= 0 && survival <= 1)) throw ParameterError("survival must lie in [0, 1]");
  std::vector<Point> kept;
  kept.reserve(config.size());
  for (const Point& p : config.points()) {
    if (rng.uniform() < survival) kept.push_back(p);
  }
  return PointConfig::trusted(config.window(), std::move(kept));
}

PointConfig superpose(const PointConfig& a, const PointConfig& b) {
  if (a.dimension() != b.dimension() || !(a.window() == b.window())) {
    throw ParameterError("superpose requires equal dimensions and windows");
  }
  std::vector<Point> pts(a.points().begin(), a.points().end());
  pts.reserve(a.size() + b.size());
  if (a.empty()) {
    pts.assign(b.points().begin(), b.points().end());
  } else {
    std::vector<Point> sorted_a = pts;
    std::sort(sorted_a.begin(), sorted_a.end(), lex_less);
    for (const Point& p : b.points()) {
      auto it = std::lower_bound(sorted_a.begin(), sorted_a.end(), p, lex_less);
      if (it != sorted_a.end() && *it == p) continue;
      pts.push_back(p);
    }
  }
  return PointConfig::trusted(a.window(), std::move(pts));
}

PointConfig restrict_to(const PointConfig& config, const BoxWindow& window) {
  if (window.dimension() != config.dimension()) throw ParameterError("dimension mismatch");
  std::vector<Point> pts;
  for (const Point& p : config.points()) {
    if (window.contains(p)) pts.push_back(p);
  }
  return PointConfig::trusted(window, std::move(pts));
}

PointConfig restrict_to_ball(const PointConfig& config, const Point& center, double radius) {
  std::vector<Point> pts;
  for (const Point& p : config.points()) {
    if ((p - center).norm() <= radius) pts.push_back(p);
  }
  return PointConfig::trusted(config.window(), std::move(pts));
}

// ---------------------------------------------------------------------------
// Text I/O

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_text(std::ostream& os, const PointConfig& config) {
  const int d = config.dimension();
  os << d << ' ' << config.size() << ' ' << format_double(config.window().side());
  for (int a = 0; a < d; ++a) os << ' ' << format_double(config.window().center()[a]);
  os << '\n';
  for (const Point& p : config.points()) {
    for (int a = 0; a < d; ++a) {
      if (a) os << ' ';
      os << format_double(p[a]);
    }
    os << '\n';
  }
}

PointConfig read_text(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParameterError("missing configuration header");
  std::istringstream hs(header);
  int d = 0;
  std::size_t n = 0;
  double side = 0;
  if (!(hs >> d >> n >> side)) throw ParameterError("malformed configuration header");
  if (d < 1 || d > 3) throw ParameterError("dimension must be 1, 2 or 3");
  Point center = Point::Zero(d);
  double c = 0;
  int read = 0;
  while (read < d && hs >> c) center[read++] = c;
  if (read != 0 && read != d) throw ParameterError("malformed window center");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point p(d);
    for (int a = 0; a < d; ++a) {
      if (!(is >> p[a])) throw ParameterError("truncated configuration body");
    }
    pts.push_back(std::move(p));
  }
  return PointConfig(BoxWindow(side, center), std::move(pts));
}

}  // namespace lowtail
