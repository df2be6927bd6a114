#include "circlewalk/circle_map.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace circlewalk {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

// ---------------------------------------------------------------------------
// Arc

bool Arc::interior_contains(const CirclePoint& x) const {
  const Rational off = x.offset_from(left);
  return off.sign() > 0 && off < length();
}

bool Arc::contains(const Arc& other) const {
  const Rational off = other.left.offset_from(left);
  return off + other.length() <= length();
}

Arc Arc::image(const CircleMap& g) const { return Arc{g(left), g(right)}; }

CirclePoint Arc::midpoint() const { return left + length() / Rational(2); }

// ---------------------------------------------------------------------------
// CircleMap

CircleMap::CircleMap() : starts_{Rational(0)}, slopes_{Rational(1)}, images_{Rational(0)} { finalize(); }

CircleMap::CircleMap(std::vector<Rational> starts, std::vector<Rational> slopes, std::vector<Rational> images)
    : starts_(std::move(starts)), slopes_(std::move(slopes)), images_(std::move(images)) {
  finalize();
}

void CircleMap::finalize() {
  first_image_ = static_cast<std::size_t>(std::min_element(images_.begin(), images_.end()) - images_.begin());
  std::size_t h = starts_.size();
  for (std::size_t i = 0; i < starts_.size(); ++i) {
    h = mix(h, starts_[i].hash());
    h = mix(h, slopes_[i].hash());
  }
  hash_ = mix(h, images_.front().hash());
}

CircleMap CircleMap::rotation(const Rational& shift) {
  return CircleMap({Rational(0)}, {Rational(1)}, {mod1(shift)});
}

CircleMap CircleMap::canonicalize(std::vector<RawSegment> segments) {
  if (segments.empty()) throw std::invalid_argument("canonicalize: empty segment list");
  for (auto& s : segments) {
    if (s.slope.sign() <= 0) throw std::invalid_argument("canonicalize: non-positive slope " + s.slope.str());
    s.start = mod1(s.start);
    s.image = mod1(s.image);
  }
  const auto lowest = std::min_element(segments.begin(), segments.end(),
                                       [](const RawSegment& a, const RawSegment& b) { return a.start < b.start; });
  std::rotate(segments.begin(), lowest, segments.end());
  const std::size_t m = segments.size();
  for (std::size_t i = 1; i < m; ++i)
    if (!(segments[i - 1].start < segments[i].start))
      throw std::invalid_argument("canonicalize: breakpoints not strictly increasing in cyclic order");

  Rational degree(0);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational len = i + 1 < m ? segments[i + 1].start - segments[i].start
                                   : Rational(1) + segments[0].start - segments[i].start;
    const Rational rise = segments[i].slope * len;
    degree += rise;
    if (mod1(segments[i].image + rise) != segments[(i + 1) % m].image)
      throw std::invalid_argument("canonicalize: discontinuity at segment " + std::to_string(i));
  }
  if (degree != Rational(1)) throw std::invalid_argument("canonicalize: not a degree-one map (total rise " + degree.str() + ")");

  std::vector<Rational> starts, slopes, images;
  for (std::size_t i = 0; i < m; ++i) {
    if (m > 1 && segments[i].slope == segments[(i + m - 1) % m].slope) continue;
    starts.push_back(segments[i].start);
    slopes.push_back(segments[i].slope);
    images.push_back(segments[i].image);
  }
  if (starts.empty() || m == 1) return rotation(segments[0].image - segments[0].start);
  return CircleMap(std::move(starts), std::move(slopes), std::move(images));
}

CircleMap CircleMap::from_slopes(const std::vector<Rational>& starts, const std::vector<Rational>& slopes,
                                 const Rational& anchor) {
  if (starts.empty() || starts.size() != slopes.size())
    throw std::invalid_argument("from_slopes: need equally many (>= 1) breakpoints and slopes");
  std::vector<RawSegment> raw;
  raw.reserve(starts.size());
  Rational image = mod1(anchor);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    raw.push_back({starts[i], slopes[i], image});
    if (i + 1 < starts.size()) {
      Rational len = starts[i + 1] - starts[i];
      if (len.sign() < 0) len += Rational(1);
      image = mod1(image + slopes[i] * len);
    }
  }
  return canonicalize(std::move(raw));
}

CircleMap CircleMap::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("slopes") || !j.contains("anchor"))
    throw std::invalid_argument("map record needs breakpoints, slopes and anchor");
  std::vector<Rational> starts, slopes;
  for (const auto& b : j.at("breakpoints")) starts.push_back(Rational::parse(b.get<std::string>()));
  for (const auto& a : j.at("slopes")) slopes.push_back(Rational::parse(a.get<std::string>()));
  for (const auto& b : starts)
    if (b.sign() < 0 || b >= Rational(1)) throw std::invalid_argument("breakpoint " + b.str() + " outside [0,1)");
  const Rational anchor = Rational::parse(j.at("anchor").get<std::string>());
  if (anchor.sign() < 0 || anchor >= Rational(1)) throw std::invalid_argument("anchor " + anchor.str() + " outside [0,1)");
  for (std::size_t i = 1; i < starts.size(); ++i)
    if (!(starts[i - 1] < starts[i])) throw std::invalid_argument("breakpoints must be strictly increasing");
  return from_slopes(starts, slopes, anchor);
}

nlohmann::json CircleMap::to_json() const {
  nlohmann::json j;
  j["breakpoints"] = nlohmann::json::array();
  j["slopes"] = nlohmann::json::array();
  for (const auto& b : starts_) j["breakpoints"].push_back(b.str());
  for (const auto& a : slopes_) j["slopes"].push_back(a.str());
  j["anchor"] = anchor().str();
  return j;
}

std::size_t CircleMap::segment_of(const Rational& x) const {
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
  if (it == starts_.begin()) return starts_.size() - 1;
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

std::size_t CircleMap::segment_of_image(const Rational& y) const {
  const std::size_t m = images_.size();
  // images_ is increasing when read cyclically from first_image_.
  std::size_t lo = 0, hi = m;  // answer k is the last with image <= y
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (images_[(first_image_ + mid) % m] <= y)
      lo = mid + 1;
    else
      hi = mid;
  }
  const std::size_t k = lo == 0 ? m - 1 : lo - 1;
  return (first_image_ + k) % m;
}

Rational CircleMap::apply_segment(std::size_t i, const Rational& x) const {
  Rational t = x - starts_[i];
  if (t.sign() < 0) t += Rational(1);
  Rational v = images_[i] + slopes_[i] * t;
  if (v >= Rational(1)) v -= Rational(1);
  return v;
}

CirclePoint CircleMap::evaluate(const CirclePoint& x) const { return CirclePoint(apply_segment(segment_of(x.value()), x.value())); }

CirclePoint CircleMap::evaluate_inverse(const CirclePoint& y) const {
  const std::size_t i = segment_of_image(y.value());
  Rational t = y.value() - images_[i];
  if (t.sign() < 0) t += Rational(1);
  return CirclePoint(starts_[i] + t / slopes_[i]);
}

CircleMap CircleMap::compose(const CircleMap& h) const {
  const CircleMap& g = *this;
  struct Candidate {
    Rational p;       // point of the domain
    std::size_t h_seg;
    Rational hp;      // h(p)
    std::size_t g_seg;
  };
  std::vector<Candidate> cands;
  cands.reserve(h.starts_.size() + g.starts_.size());
  for (std::size_t i = 0; i < h.starts_.size(); ++i)
    cands.push_back({h.starts_[i], i, h.images_[i], g.segment_of(h.images_[i])});
  for (std::size_t j = 0; j < g.starts_.size(); ++j) {
    const Rational& y = g.starts_[j];
    const std::size_t i = h.segment_of_image(y);
    Rational t = y - h.images_[i];
    if (t.sign() < 0) t += Rational(1);
    cands.push_back({mod1(h.starts_[i] + t / h.slopes_[i]), i, y, j});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.p < b.p; });
  cands.erase(std::unique(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.p == b.p; }),
              cands.end());

  const std::size_t m = cands.size();
  std::vector<Rational> slopes(m);
  for (std::size_t k = 0; k < m; ++k) slopes[k] = h.slopes_[cands[k].h_seg] * g.slopes_[cands[k].g_seg];

  std::vector<Rational> starts, kept_slopes, images;
  Rational image = g.apply_segment(cands[0].g_seg, cands[0].hp);
  const Rational first_image = image;
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) {
      image += slopes[k - 1] * (cands[k].p - cands[k - 1].p);
      if (image >= Rational(1)) image -= Rational(1);
    }
    if (m > 1 && slopes[k] == slopes[(k + m - 1) % m]) continue;
    starts.push_back(cands[k].p);
    kept_slopes.push_back(slopes[k]);
    images.push_back(image);
  }
  if (starts.empty() || m == 1) return rotation(first_image - cands[0].p);
  return CircleMap(std::move(starts), std::move(kept_slopes), std::move(images));
}

CircleMap CircleMap::inverse() const {
  if (is_rotation()) return rotation(-images_[0]);
  const std::size_t m = starts_.size();
  std::vector<Rational> starts(m), slopes(m), images(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = (first_image_ + k) % m;
    starts[k] = images_[i];
    slopes[k] = slopes_[i].reciprocal();
    images[k] = starts_[i];
  }
  return CircleMap(std::move(starts), std::move(slopes), std::move(images));
}

bool CircleMap::is_identity() const { return is_rotation() && images_[0].is_zero(); }

std::vector<CirclePoint> CircleMap::breakpoints() const {
  std::vector<CirclePoint> out;
  if (is_rotation()) return out;
  out.reserve(starts_.size());
  for (const auto& b : starts_) out.emplace_back(b);
  return out;
}

Rational CircleMap::right_slope(const CirclePoint& x) const { return slopes_[segment_of(x.value())]; }

Rational CircleMap::left_slope(const CirclePoint& x) const {
  const std::size_t m = starts_.size();
  const std::size_t i = segment_of(x.value());
  if (starts_[i] == x.value()) return slopes_[(i + m - 1) % m];
  return slopes_[i];
}

Rational CircleMap::derivative_jump_ratio(const CirclePoint& x) const {
  if (is_rotation()) return Rational(1);
  return right_slope(x) / left_slope(x);
}

Support CircleMap::support() const {
  Support s;
  if (is_rotation()) {
    s.full = !is_identity();
    return s;
  }
  const std::size_t m = starts_.size();
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < m; ++i)
    if (slopes_[i] == Rational(1) && images_[i] == starts_[i]) fixed.push_back(i);
  if (fixed.empty()) {
    s.full = true;
    return s;
  }
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    const std::size_t f = fixed[k];
    const std::size_t next = fixed[(k + 1) % fixed.size()];
    s.arcs.push_back(Arc{CirclePoint(starts_[(f + 1) % m]), CirclePoint(starts_[next])});
  }
  std::sort(s.arcs.begin(), s.arcs.end(), [](const Arc& a, const Arc& b) { return a.left < b.left; });
  return s;
}

Arc CircleMap::smallest_interval_containing_support() const {
  const Support s = support();
  if (s.empty()) throw std::invalid_argument("smallest_interval_containing_support: identity has empty support");
  if (s.full) throw std::invalid_argument("smallest_interval_containing_support: support is the whole circle");
  const std::size_t n = s.arcs.size();
  std::optional<Arc> best;
  for (std::size_t k = 0; k < n; ++k) {
    const Arc cover{s.arcs[k].left, s.arcs[(k + n - 1) % n].right};
    if (!best || cover.length() < best->length()) best = cover;
  }
  return *best;
}

bool CircleMap::is_in_thompson_t() const {
  for (const auto& b : starts_)
    if (!b.is_dyadic()) return false;
  for (const auto& a : slopes_)
    if (!a.is_power_of_two()) return false;
  return anchor().is_dyadic();
}

std::string CircleMap::str() const {
  std::ostringstream os;
  os << "CircleMap{";
  for (std::size_t i = 0; i < starts_.size(); ++i) {
    if (i) os << ", ";
    os << "[" << starts_[i].str() << " -> " << images_[i].str() << ", slope " << slopes_[i].str() << "]";
  }
  os << "}";
  return os.str();
}

bool operator==(const CircleMap& a, const CircleMap& b) {
  return a.hash_ == b.hash_ && a.starts_ == b.starts_ && a.slopes_ == b.slopes_ && a.images_.front() == b.images_.front();
}

}  // namespace circlewalk
