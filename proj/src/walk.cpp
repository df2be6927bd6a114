#include "circlewalk/walk.hpp"

#include <mutex>
#include <stdexcept>

namespace circlewalk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Trajectory::Trajectory(MeasurePtr mu, std::uint64_t seed, std::vector<std::uint32_t> steps, int checkpoint_interval)
    : mu_(std::move(mu)), seed_(seed), steps_(std::move(steps)), checkpoint_interval_(checkpoint_interval) {
  if (!mu_) throw std::invalid_argument("trajectory needs a measure");
  if (checkpoint_interval_ < 1) throw std::invalid_argument("checkpoint interval must be >= 1");
  for (auto s : steps_)
    if (s >= mu_->size()) throw std::invalid_argument("trajectory step outside the measure's support");
  checkpoints_.push_back(CircleMap::identity());
}

CircleMap product(const std::vector<const CircleMap*>& maps, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return CircleMap::identity();
  if (hi - lo == 1) return *maps[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return product(maps, lo, mid).compose(product(maps, mid, hi));
}

CircleMap Trajectory::position(int k) const {
  if (k < 0 || k > horizon()) throw std::out_of_range("position index outside trajectory");
  const auto K = static_cast<std::size_t>(checkpoint_interval_);
  const std::size_t want = static_cast<std::size_t>(k) / K;
  std::vector<const CircleMap*> block;
  while (checkpoints_.size() <= want) {
    const std::size_t j = checkpoints_.size();
    block.clear();
    for (std::size_t s = (j - 1) * K + 1; s <= j * K; ++s) block.push_back(&increment(static_cast<int>(s)));
    checkpoints_.push_back(checkpoints_.back().compose(product(block, 0, block.size())));
  }
  block.clear();
  for (std::size_t s = want * K + 1; s <= static_cast<std::size_t>(k); ++s) block.push_back(&increment(static_cast<int>(s)));
  if (block.empty()) return checkpoints_[want];
  return checkpoints_[want].compose(product(block, 0, block.size()));
}

CirclePoint Trajectory::forward(int k, const CirclePoint& x) const {
  if (k < 0 || k > horizon()) throw std::out_of_range("forward index outside trajectory");
  CirclePoint p = x;
  for (int j = k; j >= 1; --j) p = increment(j)(p);
  return p;
}

std::vector<CirclePoint> Trajectory::forward_orbit(int n, const CirclePoint& x) const {
  std::vector<CirclePoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.push_back(forward(k, x));
  return out;
}

std::vector<CirclePoint> Trajectory::backward_orbit(int n, const CirclePoint& x) const {
  if (n < 0 || n > horizon()) throw std::out_of_range("backward index outside trajectory");
  std::vector<CirclePoint> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(x);
  for (int k = 1; k <= n; ++k) out.push_back(inverse_increment(k)(out.back()));
  return out;
}

Trajectory Trajectory::shifted() const {
  std::vector<std::uint32_t> tail;
  if (!steps_.empty()) tail.assign(steps_.begin() + 1, steps_.end());
  return Trajectory(mu_, seed_, std::move(tail), checkpoint_interval_);
}

Trajectory sample_trajectory(const MeasurePtr& mu, int horizon, std::uint64_t seed, int checkpoint_interval) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  Rng rng(seed);
  std::vector<std::uint32_t> steps;
  steps.reserve(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) steps.push_back(static_cast<std::uint32_t>(mu->sample_index(rng)));
  return Trajectory(mu, seed, std::move(steps), checkpoint_interval);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace circlewalk
