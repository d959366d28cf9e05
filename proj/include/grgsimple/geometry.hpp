#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "grgsimple/errors.hpp"
#include "grgsimple/random.hpp"

namespace grgsimple {

enum class Boundary { Torus, Square };

inline std::string_view to_string(Boundary b) {
  return b == Boundary::Torus ? "torus" : "square";
}

inline Boundary parse_boundary(std::string_view s) {
  if (s == "torus") return Boundary::Torus;
  if (s == "square") return Boundary::Square;
  throw ParameterError("unknown boundary '" + std::string(s) + "' (expected torus or square)");
}

// Square window [0, side)^2, optionally with opposite edges identified.
class Domain {
 public:
  Domain(double side, Boundary boundary) : side_(side), boundary_(boundary) {
    if (!(side >= 0.0) || !std::isfinite(side)) throw ParameterError("domain side must be finite and non-negative");
  }

  // Window of area n, the standard unit-intensity setting.
  static Domain for_nodes(double n, Boundary boundary) { return Domain(std::sqrt(n), boundary); }

  double side() const noexcept { return side_; }
  Boundary boundary() const noexcept { return boundary_; }
  double area() const noexcept { return side_ * side_; }

  bool contains(double x, double y) const noexcept { return x >= 0.0 && x < side_ && y >= 0.0 && y < side_; }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  double side_;
  Boundary boundary_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct PointSet {
  std::vector<Point> points;
  Domain domain{0.0, Boundary::Torus};
  std::uint64_t rng_seed = 0;

  std::size_t size() const noexcept { return points.size(); }
  friend bool operator==(const PointSet&, const PointSet&) = default;
};

namespace detail {

inline double axis_gap(double a, double b, double side, Boundary boundary) noexcept {
  const double d = std::abs(a - b);
  return boundary == Boundary::Torus ? std::min(d, side - d) : d;
}

}  // namespace detail

// Euclidean distance; on the torus each axis uses min(|d|, side - |d|).
inline double distance(const Domain& domain, const Point& p, const Point& q) {
  if (!domain.contains(p.x, p.y) || !domain.contains(q.x, q.y)) throw ParameterError("point outside domain");
  const double dx = detail::axis_gap(p.x, q.x, domain.side(), domain.boundary());
  const double dy = detail::axis_gap(p.y, q.y, domain.side(), domain.boundary());
  return std::hypot(dx, dy);
}

// Homogeneous Poisson point process: N ~ Poisson(intensity * area), then N uniform points.
inline PointSet sample_ppp(const Domain& domain, double intensity, std::uint64_t rng_seed) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw ParameterError("intensity must be positive");
  PointSet ps{{}, domain, rng_seed};
  const double mean = intensity * domain.area();
  if (mean == 0.0) return ps;

  Rng rng = make_rng(rng_seed);
  std::poisson_distribution<std::uint64_t> count_dist(mean);
  const std::uint64_t count = count_dist(rng);
  ps.points.reserve(count);
  const double side = domain.side();
  for (std::uint64_t i = 0; i < count; ++i) {
    // Guard against rounding up to `side` when u is just below 1.
    double x = uniform01(rng) * side;
    double y = uniform01(rng) * side;
    if (x >= side) x = std::nextafter(side, 0.0);
    if (y >= side) y = std::nextafter(side, 0.0);
    ps.points.push_back({x, y});
  }
  return ps;
}

// Independent Bernoulli(keep_probability) selection of indices, ascending.
inline std::vector<std::size_t> thin(const PointSet& ps, double keep_probability, std::uint64_t rng_seed) {
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0)) throw ParameterError("keep probability must lie in [0, 1]");
  std::vector<std::size_t> kept;
  Rng rng = make_rng(rng_seed);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (uniform01(rng) < keep_probability) kept.push_back(i);
  }
  return kept;
}

// The four torus locations of the optimal 4-circle packing on the square flat
// torus of side L; every pairwise toroidal distance equals L(sqrt6 - sqrt2)/2.
// The fourth point is the lattice sum of the second and third.
inline std::array<Point, 4> optimal_seed_locations(const Domain& domain) {
  if (domain.boundary() != Boundary::Torus)
    throw UnsupportedConfiguration("optimal seed locations are defined on the torus only");
  const double L = domain.side();
  const double s3 = std::numbers::sqrt3;
  const auto wrap = [L](double v) {
    if (L == 0.0) return 0.0;
    double w = std::fmod(v, L);
    if (w < 0.0) w += L;
    if (w >= L) w = 0.0;
    return w;
  };
  return {
      Point{0.0, 0.0},
      Point{wrap(0.5 * L), wrap(0.5 * L * std::sqrt(7.0 - 4.0 * s3))},
      Point{wrap(0.5 * L * (s3 - 2.0)), wrap(0.5 * L)},
      Point{wrap(0.5 * L * (s3 - 1.0)), wrap(0.5 * s3 * L * (s3 - 1.0))},
  };
}

// Plain-text point set: "# side=<L> boundary=<b> seed=<u64>" then "x y" per line.
inline void write_point_set(std::ostream& os, const PointSet& ps) {
  const auto old_precision = os.precision();
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "# side=" << ps.domain.side() << " boundary=" << to_string(ps.domain.boundary()) << " seed=" << ps.rng_seed
     << '\n';
  for (const auto& p : ps.points) os << p.x << ' ' << p.y << '\n';
  os.precision(old_precision);
}

inline PointSet read_point_set(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw ParameterError("point set: missing header line");

  double side = -1.0;
  std::string boundary;
  std::uint64_t seed = 0;
  bool have_seed = false;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParameterError("point set: malformed header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "side") {
        side = std::stod(value);
      } else if (key == "boundary") {
        boundary = value;
      } else if (key == "seed") {
        seed = std::stoull(value);
        have_seed = true;
      }
    } catch (const std::logic_error&) {
      throw ParameterError("point set: bad value for '" + key + "'");
    }
  }
  if (side < 0.0 || boundary.empty() || !have_seed) throw ParameterError("point set: header needs side, boundary, seed");

  PointSet ps{{}, Domain(side, parse_boundary(boundary)), seed};
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Point p;
    if (!(row >> p.x >> p.y)) throw ParameterError("point set: malformed row '" + line + "'");
    if (!ps.domain.contains(p.x, p.y)) throw ParameterError("point set: point outside domain");
    ps.points.push_back(p);
  }
  return ps;
}

}  // namespace grgsimple
