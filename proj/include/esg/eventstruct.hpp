#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esg/util.hpp"

namespace esg {

// Bit-matrix over event indices; rows are 64-bit packed.
class BitMat {
 public:
  BitMat() = default;
  BitMat(size_t n) : n_(n), words_((n + 63) / 64), rows_(n * ((n + 63) / 64), 0) {}
  bool get(size_t i, size_t j) const {
    return (rows_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(size_t i, size_t j) { rows_[i * words_ + j / 64] |= 1ull << (j % 64); }
  void or_row(size_t into, size_t from) {
    for (size_t w = 0; w < words_; ++w) rows_[into * words_ + w] |= rows_[from * words_ + w];
  }
  const uint64_t* row(size_t i) const { return rows_.data() + i * words_; }
  size_t words() const { return words_; }
  size_t size() const { return n_; }

 private:
  size_t n_ = 0, words_ = 0;
  std::vector<uint64_t> rows_;
};

// Packed event subset used during enumeration.
struct BitSet {
  std::vector<uint64_t> w;
  explicit BitSet(size_t n = 0) : w((n + 63) / 64, 0) {}
  bool get(size_t i) const { return (w[i / 64] >> (i % 64)) & 1u; }
  void set(size_t i) { w[i / 64] |= 1ull << (i % 64); }
  void clear(size_t i) { w[i / 64] &= ~(1ull << (i % 64)); }
};

// Finite event structure: causal partial order plus conflict closed under
// inheritance. Immutable after construction; events are addressed by index,
// ids are canonical (sorted at build).
class EventStructure {
 public:
  class Builder {
   public:
    Builder& event(const std::string& id);
    Builder& dep(const std::string& a, const std::string& b);       // a <= b
    Builder& conflict(const std::string& a, const std::string& b);  // a # b seed
    EventStructure build() const;

   private:
    std::vector<std::string> ids_;
    std::vector<std::pair<std::string, std::string>> deps_;
    std::vector<std::pair<std::string, std::string>> confs_;
  };

  EventStructure() = default;

  size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(int e) const { return ids_[e]; }
  int index(const std::string& id) const;
  bool has(const std::string& id) const;

  bool leq(int a, int b) const { return leq_.get(a, b); }
  bool lt(int a, int b) const { return a != b && leq_.get(a, b); }
  bool conflict(int a, int b) const { return conf_.get(a, b); }
  bool concurrent(int a, int b) const {
    return a != b && !leq(a, b) && !leq(b, a) && !conflict(a, b);
  }
  const std::vector<std::vector<int>>& covers() const { return covers_; }     // immediate deps
  const std::vector<int>& preds(int e) const { return preds_[e]; }            // [e] minus e
  IntSet down_closure(const IntSet& xs) const;
  std::vector<std::pair<int, int>> immediate_conflicts() const;

  bool is_configuration(const IntSet& x) const;
  bool enabled(int e, const BitSet& x) const;
  IntSet enabled_events(const IntSet& x) const;

  const BitMat& leq_mat() const { return leq_; }
  const BitMat& conf_mat() const { return conf_; }
  const std::vector<int>& topo_order() const { return topo_; }  // linear extension

 private:
  friend class Builder;
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  BitMat leq_, conf_;
  std::vector<std::vector<int>> covers_;
  std::vector<std::vector<int>> preds_;
  std::vector<int> topo_;
};

using EsPtr = std::shared_ptr<const EventStructure>;

// All finite configurations in deterministic order (size, then lexicographic
// on sorted ids). Fails loudly past the event-count cap.
std::vector<IntSet> finite_configurations(const EventStructure& es, size_t cap_events = 20);

// Enumerate configurations, invoking fn on each; no cap (caller controls).
void for_each_configuration(const EventStructure& es, const std::function<void(const IntSet&)>& fn);

// Partial map of event structures; -1 encodes undefined.
struct ESMap {
  EsPtr src, dst;
  std::vector<int> map;

  bool total() const;
  int operator()(int e) const { return map[e]; }
  IntSet image(const IntSet& x) const;
};

ESMap compose(const ESMap& g, const ESMap& f);  // g after f
ESMap identity_map(const EsPtr& e);

struct MapClass {
  bool is_map = false, total = false, rigid = false, open = false;
  std::string witness;  // first violation found, empty if clean
};

// Event-wise validity via the standard characterisation of maps.
bool is_es_map(const ESMap& f, std::string* witness = nullptr);

// Configuration-quantified oracle forms (exponential; test/corpus use).
bool is_es_map_config_oracle(const ESMap& f, size_t cap = 20);
bool rigid_config_oracle(const ESMap& f, size_t cap = 20, bool* unique_z = nullptr);
bool open_config_oracle(const ESMap& f, size_t cap = 20);

MapClass classify_map(const ESMap& f, size_t cap = 20);

// Projection E|V (hiding) and its companions.
EventStructure project(const EventStructure& es, const IntSet& visible);
ESMap projection_map(const EsPtr& es, const IntSet& visible);  // partial, E -> E|V
// Partial-total factorisation f = f1 . f0.
std::pair<ESMap, ESMap> factorize(const ESMap& f);

// Pullback of total maps via secured bijections. Event ids are canonical
// serializations of their secured bijection (sorted pair list).
struct Pullback {
  EsPtr apex;
  ESMap p1, p2;
  // Pair list per apex event: (src1 event, src2 event), sorted.
  std::vector<std::vector<std::pair<int, int>>> pairs;
  // The full rigid family of secured bijections (includes the empty one).
  std::vector<std::vector<std::pair<int, int>>> family;
};

// Optional filter restricting which (left,right) event pairs may synchronise
// beyond image equality (used for valuation agreement in Red composition).
using SyncFilter = std::function<bool(int, int)>;

Pullback pullback(const ESMap& f, const ESMap& g, size_t state_cap = 2000000,
                  const SyncFilter& sync_ok = nullptr);

// All mediating maps h with p1 h = f, p2 h = g (exhaustive; tiny cones only).
std::vector<ESMap> mediating_maps(const Pullback& pb, const ESMap& f, const ESMap& g);

std::string to_dot(const EventStructure& es,
                   const std::function<std::string(int)>& label = nullptr);

}  // namespace esg
