#include <algorithm>
#include <unordered_map>
#include <vector>

#include "apdisc/error.hpp"
#include "apdisc/rng.hpp"
#include "apdisc/solver.hpp"

namespace apdisc {

namespace {

// Maintains the range (max prefix - min prefix) of every maximal run in the
// directions whose longest run reaches a threshold. Runs in other directions
// are shorter than the threshold and so cannot attain it.
class RunTracker {
 public:
  explicit RunTracker(PartialColoring& chi) : chi_(chi), shape_(chi.shape()) {
    const std::size_t d = shape_.dim();
    for (auto& b : enumerate_directions(shape_, 2)) {
      Coord lmax = shape_.max_extent();
      for (std::size_t i = 0; i < d; ++i)
        if (b[i] != 0) lmax = std::min(lmax, (shape_.extent(i) - 1) / std::abs(b[i]) + 1);
      dirs_.push_back({std::move(b), 0, lmax, {}});
    }
    std::stable_sort(dirs_.begin(), dirs_.end(),
                     [](const Dir& a, const Dir& b) { return a.lmax > b.lmax; });
    for (auto& dir : dirs_) dir.off = shape_.offset_of(dir.b);
    hist_.assign(static_cast<std::size_t>(shape_.max_extent()) + 3, 0);
    p_.resize(d);
  }

  // Tracks every direction whose longest run has at least thr cells.
  void extend(Coord thr) {
    while (tracked_ < dirs_.size() && dirs_[tracked_].lmax >= thr) {
      auto& dir = dirs_[tracked_];
      dir.range.assign(static_cast<std::size_t>(shape_.size()), 0);
      for_each_line(shape_, dir.b, [&](std::int64_t first, std::int64_t, Coord len) {
        const auto r = range(first, dir.off, len);
        dir.range[first] = r;
        ++hist_[r];
      });
      ++tracked_;
    }
  }

  // Highest tracked range at most cap.
  std::int64_t top(std::int64_t cap) const {
    for (auto r = std::min<std::int64_t>(cap, static_cast<std::int64_t>(hist_.size()) - 1); r > 1;
         --r)
      if (hist_[r] > 0) return r;
    return 1;
  }
  std::int64_t count(std::int64_t r) const { return hist_[r]; }

  void flip(std::int64_t c) {
    auto& v = chi_.mutable_values();
    v[c] = static_cast<std::int8_t>(-v[c]);
    changed_.clear();
    std::int64_t rest = c;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      p_[i] = rest / shape_.stride(i) + 1;
      rest %= shape_.stride(i);
    }
    for (std::size_t j = 0; j < tracked_; ++j) {
      auto& dir = dirs_[j];
      Coord back = shape_.max_extent(), fwd = back;
      for (std::size_t i = 0; i < p_.size(); ++i) {
        const Coord b = dir.b[i];
        if (b > 0) {
          back = std::min(back, (p_[i] - 1) / b);
          fwd = std::min(fwd, (shape_.extent(i) - p_[i]) / b);
        } else if (b < 0) {
          back = std::min(back, (shape_.extent(i) - p_[i]) / -b);
          fwd = std::min(fwd, (p_[i] - 1) / -b);
        }
      }
      const Coord len = back + fwd + 1;
      if (len < 2) continue;
      const std::int64_t first = c - back * dir.off;
      const auto old = dir.range[first];
      const auto now = range(first, dir.off, len);
      if (now == old) continue;
      dir.range[first] = now;
      --hist_[old];
      ++hist_[now];
      reindex(j, first, old, now);
      changed_.push_back({j, first, old, now});
    }
  }

  void undo(std::int64_t c) {
    auto& v = chi_.mutable_values();
    v[c] = static_cast<std::int8_t>(-v[c]);
    for (const auto& ch : changed_) {
      dirs_[ch.dir].range[ch.first] = ch.old;
      --hist_[ch.now];
      ++hist_[ch.old];
      reindex(ch.dir, ch.first, ch.now, ch.old);
    }
  }

  // Indexes every tracked run whose range is at least lv.
  void set_level(std::int64_t lv) {
    level_ = lv;
    hot_.clear();
    slot_.clear();
    for (std::size_t j = 0; j < tracked_; ++j)
      for_each_line(shape_, dirs_[j].b, [&](std::int64_t first, std::int64_t, Coord) {
        if (dirs_[j].range[first] >= lv) insert(key(j, first));
      });
  }

  bool has_hot() const { return !hot_.empty(); }

  // A cell whose flip shrinks the extremal segment of a random indexed run.
  std::int64_t target(Stream& rng) const {
    const auto k = hot_[rng.below(hot_.size())];
    const auto& dir = dirs_[k / static_cast<std::uint64_t>(shape_.size())];
    const auto first = static_cast<std::int64_t>(k % static_cast<std::uint64_t>(shape_.size()));
    const auto& v = chi_.values();
    Point p = shape_.point_of(first);
    std::int32_t sum = 0, hi = 0, lo = 0;
    std::int64_t at_hi = 0, at_lo = 0, len = 0;
    for (; shape_.contains(p); ++len) {
      sum += v[first + len * dir.off];
      if (sum > hi) hi = sum, at_hi = len + 1;
      if (sum < lo) lo = sum, at_lo = len + 1;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += dir.b[i];
    }
    // Cells (min(at_lo, at_hi), max(at_lo, at_hi)] carry sum +-(hi - lo).
    const int sign = at_hi > at_lo ? 1 : -1;
    const auto a = std::min(at_lo, at_hi), b = std::max(at_lo, at_hi);
    const auto pick = a + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(b - a)));
    for (std::int64_t t = 0; t < b - a; ++t) {
      const auto cell = first + (a + (pick - a + t) % (b - a)) * dir.off;
      if (v[cell] == sign) return cell;
    }
    return first + a * dir.off;
  }

 private:
  struct Dir {
    Direction b;
    std::int64_t off;
    Coord lmax;
    std::vector<std::int32_t> range;  // indexed by the first cell of each run
  };
  struct Change {
    std::size_t dir;
    std::int64_t first;
    std::int32_t old, now;
  };

  std::int32_t range(std::int64_t first, std::int64_t off, Coord len) const {
    const auto& v = chi_.values();
    std::int32_t s = 0, hi = 0, lo = 0;
    for (Coord k = 0; k < len; ++k) {
      s += v[first + k * off];
      hi = std::max(hi, s);
      lo = std::min(lo, s);
    }
    return hi - lo;
  }

  std::uint64_t key(std::size_t j, std::int64_t first) const {
    return static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(shape_.size()) +
           static_cast<std::uint64_t>(first);
  }
  void insert(std::uint64_t k) {
    slot_.emplace(k, hot_.size());
    hot_.push_back(k);
  }
  void erase(std::uint64_t k) {
    const auto it = slot_.find(k);
    const auto i = it->second;
    slot_.erase(it);
    if (i + 1 != hot_.size()) {
      hot_[i] = hot_.back();
      slot_[hot_[i]] = i;
    }
    hot_.pop_back();
  }
  void reindex(std::size_t j, std::int64_t first, std::int64_t old, std::int64_t now) {
    if (level_ == 0 || (old >= level_) == (now >= level_)) return;
    if (now >= level_)
      insert(key(j, first));
    else
      erase(key(j, first));
  }

  PartialColoring& chi_;
  const GridShape& shape_;
  std::vector<Dir> dirs_;
  std::size_t tracked_ = 0;
  std::vector<std::int64_t> hist_;
  std::vector<Coord> p_;
  std::vector<Change> changed_;
  std::int64_t level_ = 0;  // 0: no index
  std::vector<std::uint64_t> hot_;
  std::unordered_map<std::uint64_t, std::size_t> slot_;
};

}  // namespace

PolishStats polish(PartialColoring& chi, std::int64_t flips, std::uint64_t seed,
                   unsigned threads) {
  if (!chi.is_full()) throw InputError("polish needs a full coloring");
  if (flips < 0) throw InputError("flip count must be nonnegative");
  PolishStats st;
  std::int64_t best = disc_eval(chi, threads).value;
  st.before = st.after = best;
  if (best <= 1 || chi.shape().size() < 2) return st;

  RunTracker runs(chi);
  runs.extend(best);
  runs.set_level(best);
  std::int64_t ties = runs.count(best);
  Stream rng(seed, 0, "polish");
  const auto P = static_cast<std::uint64_t>(chi.shape().size());
  for (; st.tried < flips && best > 1; ++st.tried) {
    // Most proposals aim at a run attaining the maximum.
    const auto c = runs.has_hot() && rng.below(8) != 0 ? runs.target(rng)
                                                       : static_cast<std::int64_t>(rng.below(P));
    runs.flip(c);
    // One flip moves every range by at most 2.
    const auto m = runs.top(best + 2);
    if (m > best || (m == best && runs.count(m) > ties)) {
      runs.undo(c);
      continue;
    }
    ++st.accepted;
    if (m < best) {
      // Runs in newly tracked directions are shorter than the old maximum.
      runs.extend(m);
      best = runs.top(best - 1);
      runs.set_level(best);
    }
    ties = runs.count(best);
  }
  st.after = best;
  return st;
}

}  // namespace apdisc
