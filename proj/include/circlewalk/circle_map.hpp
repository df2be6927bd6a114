#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circlewalk/rational.hpp"

namespace circlewalk {

class CircleMap;

/// Closed arc traversed counterclockwise from `left` to `right`. left == right
/// is the degenerate point arc; the full circle is not an Arc.
struct Arc {
  CirclePoint left;
  CirclePoint right;

  Rational length() const { return right.offset_from(left); }
  bool is_point() const { return left == right; }
  bool contains(const CirclePoint& x) const { return x.offset_from(left) <= length(); }
  bool interior_contains(const CirclePoint& x) const;
  /// Closed containment of another arc.
  bool contains(const Arc& other) const;
  bool intersects(const Arc& other) const { return contains(other.left) || other.contains(left); }
  /// Image under an orientation-preserving homeomorphism.
  Arc image(const CircleMap& g) const;
  CirclePoint midpoint() const;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Closure of the moved set of a map. `full` is set when it is the whole
/// circle; otherwise `arcs` holds the maximal closed arcs, sorted by left
/// endpoint (empty for the identity).
struct Support {
  bool full = false;
  std::vector<Arc> arcs;

  bool empty() const { return !full && arcs.empty(); }
};

/// Raw input segment: the map is x -> image + slope * (x - start) on
/// [start, next start).
struct RawSegment {
  Rational start;
  Rational slope;
  Rational image;
};

/// Orientation-preserving piecewise-affine homeomorphism of R/Z, stored in
/// canonical form.
///
/// Segment i covers [start_i, start_{i+1}) (indices mod m) with slope a_i and
/// sends start_i to image_i. In canonical form every start is a genuine
/// breakpoint, except for rotations, which are stored as the single segment
/// starting at 0 with slope 1. Equality and hashing compare only the
/// canonical data, so two maps are equal iff they agree as functions.
class CircleMap {
 public:
  /// The identity.
  CircleMap();

  static CircleMap identity() { return CircleMap(); }
  static CircleMap rotation(const Rational& shift);

  /// Validates continuity, positivity, degree one and strictly increasing
  /// starts (any cyclic rotation of a sorted list is accepted), then merges
  /// removable breakpoints. Throws std::invalid_argument on bad input.
  static CircleMap canonicalize(std::vector<RawSegment> segments);

  /// Builds from breakpoint list, slopes and the image of the first
  /// breakpoint; images of the others follow by continuity.
  static CircleMap from_slopes(const std::vector<Rational>& starts, const std::vector<Rational>& slopes,
                               const Rational& anchor);

  static CircleMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  CirclePoint operator()(const CirclePoint& x) const { return evaluate(x); }
  CirclePoint evaluate(const CirclePoint& x) const;
  /// g^{-1}(y) without materializing the inverse.
  CirclePoint evaluate_inverse(const CirclePoint& y) const;

  /// this ∘ h.
  CircleMap compose(const CircleMap& h) const;
  CircleMap inverse() const;

  bool is_identity() const;
  bool is_rotation() const { return starts_.size() == 1; }

  /// Points where the left and right derivatives differ, sorted.
  std::vector<CirclePoint> breakpoints() const;
  std::size_t breakpoint_count() const { return is_rotation() ? 0 : starts_.size(); }

  /// g'(x+) / g'(x-); equal to 1 iff x is not a breakpoint.
  Rational derivative_jump_ratio(const CirclePoint& x) const;
  Rational right_slope(const CirclePoint& x) const;
  Rational left_slope(const CirclePoint& x) const;

  Support support() const;
  /// Smallest closed arc containing the support. Throws std::invalid_argument
  /// for the identity and for maps whose support is the whole circle.
  Arc smallest_interval_containing_support() const;

  /// All breakpoints dyadic, all slopes powers of two, anchor dyadic.
  bool is_in_thompson_t() const;

  std::size_t segment_count() const { return starts_.size(); }
  const std::vector<Rational>& starts() const { return starts_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  const std::vector<Rational>& images() const { return images_; }
  const Rational& anchor() const { return images_.front(); }

  std::size_t hash() const { return hash_; }
  std::string str() const;

  friend bool operator==(const CircleMap& a, const CircleMap& b);

 private:
  CircleMap(std::vector<Rational> starts, std::vector<Rational> slopes, std::vector<Rational> images);

  /// Index of the segment containing x (x in [0,1)).
  std::size_t segment_of(const Rational& x) const;
  /// Index of the segment whose image contains y (y in [0,1)).
  std::size_t segment_of_image(const Rational& y) const;
  Rational apply_segment(std::size_t i, const Rational& x) const;
  void finalize();

  std::vector<Rational> starts_;
  std::vector<Rational> slopes_;
  std::vector<Rational> images_;
  std::size_t first_image_ = 0;  // index of the smallest image
  std::size_t hash_ = 0;
};

inline CircleMap operator*(const CircleMap& g, const CircleMap& h) { return g.compose(h); }

struct CircleMapHash {
  std::size_t operator()(const CircleMap& g) const { return g.hash(); }
};

}  // namespace circlewalk
