#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace esg {

// Thrown on violated construction invariants and malformed inputs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Sorted int vectors double as sets throughout the library.
using IntSet = std::vector<int>;

inline bool set_contains(const IntSet& xs, int v) {
  return std::binary_search(xs.begin(), xs.end(), v);
}

inline IntSet set_insert(IntSet xs, int v) {
  auto it = std::lower_bound(xs.begin(), xs.end(), v);
  if (it == xs.end() || *it != v) xs.insert(it, v);
  return xs;
}

inline IntSet set_union(const IntSet& a, const IntSet& b) {
  IntSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IntSet set_intersect(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IntSet set_minus(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool set_subset(const IntSet& a, const IntSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::string& sep) {
  std::ostringstream os;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) os << sep;
    os << xs[i];
  }
  return os.str();
}

std::vector<std::string> split_ws(const std::string& line);
std::string trim(const std::string& s);

// Deterministic xorshift generator for seeded corpus sampling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }
  // Uniform in [0, n).
  size_t below(size_t n) { return n == 0 ? 0 : static_cast<size_t>(next() % n); }

 private:
  uint64_t state_;
};

}  // namespace esg
