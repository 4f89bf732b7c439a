#include "esg/eventstruct.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace esg {

EventStructure::Builder& EventStructure::Builder::event(const std::string& id) {
  ids_.push_back(id);
  return *this;
}

EventStructure::Builder& EventStructure::Builder::dep(const std::string& a,
                                                      const std::string& b) {
  deps_.emplace_back(a, b);
  return *this;
}

EventStructure::Builder& EventStructure::Builder::conflict(const std::string& a,
                                                           const std::string& b) {
  confs_.emplace_back(a, b);
  return *this;
}

EventStructure EventStructure::Builder::build() const {
  EventStructure es;
  es.ids_ = ids_;
  std::sort(es.ids_.begin(), es.ids_.end());
  if (std::adjacent_find(es.ids_.begin(), es.ids_.end()) != es.ids_.end())
    throw Error("duplicate event id");
  size_t n = es.ids_.size();
  for (size_t i = 0; i < n; ++i) es.index_[es.ids_[i]] = static_cast<int>(i);

  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : deps_) {
    int ia = es.index(a), ib = es.index(b);
    if (ia != ib) adj[ia].push_back(ib);
  }

  // Dependencies must form a DAG before closure makes sense.
  {
    std::vector<int> indeg(n, 0);
    for (size_t v = 0; v < n; ++v)
      for (int w : adj[v]) indeg[w]++;
    std::vector<size_t> q;
    for (size_t v = 0; v < n; ++v)
      if (indeg[v] == 0) q.push_back(v);
    size_t done = 0;
    while (!q.empty()) {
      size_t v = q.back();
      q.pop_back();
      ++done;
      for (int w : adj[v])
        if (--indeg[w] == 0) q.push_back(static_cast<size_t>(w));
    }
    if (done != n) {
      for (size_t v = 0; v < n; ++v)
        if (indeg[v] > 0)
          throw Error("causal dependency has a cycle through " + es.ids_[v]);
    }
  }

  // Reflexive-transitive closure by reverse-finish-order DFS.
  es.leq_ = BitMat(n);
  {
    std::vector<int> state(n, 0), order;
    order.reserve(n);
    std::vector<int> stack;
    for (size_t s = 0; s < n; ++s) {
      if (state[s]) continue;
      stack.push_back(static_cast<int>(s));
      while (!stack.empty()) {
        int v = stack.back();
        if (state[v] == 0) {
          state[v] = 1;
          for (int w : adj[v])
            if (state[w] == 0) stack.push_back(w);
        } else {
          stack.pop_back();
          if (state[v] == 1) {
            state[v] = 2;
            order.push_back(v);
          }
        }
      }
    }
    for (int v : order) {
      es.leq_.set(v, v);
      for (int w : adj[v]) es.leq_.or_row(v, w);
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (es.leq_.get(i, j) && es.leq_.get(j, i))
          throw Error("causal dependency has a cycle through " + es.ids_[i] + " and " +
                      es.ids_[j]);
  }

  // Conflict: upward closure of seeds in both arguments.
  es.conf_ = BitMat(n);
  for (const auto& [a, b] : confs_) {
    int ia = es.index(a), ib = es.index(b);
    for (size_t x = 0; x < n; ++x) {
      if (!es.leq_.get(ia, x)) continue;
      for (size_t y = 0; y < n; ++y) {
        if (!es.leq_.get(ib, y)) continue;
        es.conf_.set(x, y);
        es.conf_.set(y, x);
      }
    }
  }
  for (size_t i = 0; i < n; ++i)
    if (es.conf_.get(i, i))
      throw Error("event " + es.ids_[i] + " is in conflict with itself");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (es.conf_.get(i, j) && es.leq_.get(i, j))
        throw Error("events " + es.ids_[i] + " and " + es.ids_[j] +
                    " both ordered and in conflict");

  // Covers (immediate dependency) and predecessor lists.
  es.covers_.assign(n, {});
  es.preds_.assign(n, {});
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b || !es.leq_.get(a, b)) continue;
      es.preds_[b].push_back(static_cast<int>(a));
      bool immediate = true;
      for (size_t c = 0; c < n && immediate; ++c)
        if (c != a && c != b && es.leq_.get(a, c) && es.leq_.get(c, b)) immediate = false;
      if (immediate) es.covers_[a].push_back(static_cast<int>(b));
    }

  // Topological order: least index first among available events (Kahn over
  // cover edges).
  {
    std::vector<int> remaining(n, 0);
    for (size_t a = 0; a < n; ++a)
      for (int b : es.covers_[a]) remaining[b]++;
    std::set<int> avail;
    for (size_t i = 0; i < n; ++i)
      if (remaining[i] == 0) avail.insert(static_cast<int>(i));
    while (!avail.empty()) {
      int v = *avail.begin();
      avail.erase(avail.begin());
      es.topo_.push_back(v);
      for (int w : es.covers_[v])
        if (--remaining[w] == 0) avail.insert(w);
    }
    if (es.topo_.size() != n) throw Error("internal: topological sort incomplete");
  }
  return es;
}

int EventStructure::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown event id " + id);
  return it->second;
}

bool EventStructure::has(const std::string& id) const { return index_.count(id) > 0; }

IntSet EventStructure::down_closure(const IntSet& xs) const {
  BitSet seen(size());
  IntSet out;
  for (int e : xs) {
    if (!seen.get(e)) {
      seen.set(e);
      out.push_back(e);
    }
    for (int p : preds_[e])
      if (!seen.get(p)) {
        seen.set(p);
        out.push_back(p);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> EventStructure::immediate_conflicts() const {
  std::vector<std::pair<int, int>> out;
  size_t n = size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      if (!conf_.get(a, b)) continue;
      bool immediate = true;
      for (int a1 : preds_[a])
        if (conf_.get(a1, b)) immediate = false;
      for (int b1 : preds_[b])
        if (conf_.get(a, b1)) immediate = false;
      if (immediate) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  return out;
}

bool EventStructure::is_configuration(const IntSet& x) const {
  for (int e : x)
    for (int p : preds_[e])
      if (!set_contains(x, p)) return false;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j)
      if (conflict(x[i], x[j])) return false;
  return true;
}

bool EventStructure::enabled(int e, const BitSet& x) const {
  if (x.get(e)) return false;
  for (int p : preds_[e])
    if (!x.get(p)) return false;
  const uint64_t* cr = conf_.row(e);
  for (size_t w = 0; w < conf_.words(); ++w)
    if (cr[w] & x.w[w]) return false;
  return true;
}

IntSet EventStructure::enabled_events(const IntSet& x) const {
  BitSet bx(size());
  for (int e : x) bx.set(e);
  IntSet out;
  for (size_t e = 0; e < size(); ++e)
    if (enabled(static_cast<int>(e), bx)) out.push_back(static_cast<int>(e));
  return out;
}

void for_each_configuration(const EventStructure& es,
                            const std::function<void(const IntSet&)>& fn) {
  size_t n = es.size();
  // Rank of each event in a fixed linear extension; configurations are built
  // by extending with events of strictly larger rank, which enumerates each
  // configuration exactly once.
  std::vector<int> rank(n, 0);
  const auto& topo = es.topo_order();
  for (size_t i = 0; i < topo.size(); ++i) rank[topo[i]] = static_cast<int>(i);

  IntSet x;
  BitSet bx(n);
  std::function<void(int)> rec = [&](int min_rank) {
    fn(x);
    for (size_t i = min_rank; i < topo.size(); ++i) {
      int e = topo[i];
      if (!es.enabled(e, bx)) continue;
      x.push_back(e);
      std::sort(x.begin(), x.end());
      bx.set(e);
      rec(static_cast<int>(i) + 1);
      bx.clear(e);
      x.erase(std::find(x.begin(), x.end(), e));
    }
  };
  rec(0);
}

std::vector<IntSet> finite_configurations(const EventStructure& es, size_t cap_events) {
  if (es.size() > cap_events)
    throw Error("configuration enumeration cap exceeded: " + std::to_string(es.size()) +
                " events, cap " + std::to_string(cap_events));
  std::vector<IntSet> out;
  for_each_configuration(es, [&](const IntSet& x) { out.push_back(x); });
  std::sort(out.begin(), out.end(), [&](const IntSet& a, const IntSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    std::vector<std::string> ia, ib;
    for (int e : a) ia.push_back(es.id(e));
    for (int e : b) ib.push_back(es.id(e));
    return ia < ib;
  });
  return out;
}

bool ESMap::total() const {
  for (int v : map)
    if (v < 0) return false;
  return true;
}

IntSet ESMap::image(const IntSet& x) const {
  IntSet out;
  for (int e : x)
    if (map[e] >= 0) out.push_back(map[e]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ESMap compose(const ESMap& g, const ESMap& f) {
  ESMap h;
  h.src = f.src;
  h.dst = g.dst;
  h.map.assign(f.src->size(), -1);
  for (size_t e = 0; e < f.src->size(); ++e)
    if (f.map[e] >= 0) h.map[e] = g.map[f.map[e]];
  return h;
}

ESMap identity_map(const EsPtr& e) {
  ESMap f;
  f.src = f.dst = e;
  f.map.resize(e->size());
  for (size_t i = 0; i < e->size(); ++i) f.map[i] = static_cast<int>(i);
  return f;
}

bool is_es_map(const ESMap& f, std::string* witness) {
  const EventStructure& s = *f.src;
  const EventStructure& d = *f.dst;
  for (size_t a = 0; a < s.size(); ++a) {
    int b = f.map[a];
    if (b < 0) continue;
    for (int b1 : d.preds(b)) {
      bool found = false;
      for (int a1 : s.preds(static_cast<int>(a)))
        if (f.map[a1] == b1) {
          found = true;
          break;
        }
      if (!found) {
        if (witness)
          *witness = "image " + d.id(b1) + " <= " + d.id(b) + " has no preimage below " +
                     s.id(static_cast<int>(a));
        return false;
      }
    }
  }
  for (size_t a = 0; a < s.size(); ++a)
    for (size_t a2 = a + 1; a2 < s.size(); ++a2) {
      int b = f.map[a], b2 = f.map[a2];
      if (b < 0 || b2 < 0) continue;
      if ((b == b2 || d.conflict(b, b2)) && !s.conflict(static_cast<int>(a), static_cast<int>(a2))) {
        if (witness)
          *witness = "events " + s.id(static_cast<int>(a)) + ", " + s.id(static_cast<int>(a2)) +
                     " consistent but images clash";
        return false;
      }
    }
  return true;
}

bool is_es_map_config_oracle(const ESMap& f, size_t cap) {
  const EventStructure& s = *f.src;
  const EventStructure& d = *f.dst;
  for (const auto& x : finite_configurations(s, cap)) {
    IntSet fx = f.image(x);
    if (!d.is_configuration(fx)) return false;
    // local injectivity
    std::map<int, int> seen;
    for (int e : x) {
      if (f.map[e] < 0) continue;
      auto [it, fresh] = seen.emplace(f.map[e], e);
      if (!fresh) return false;
    }
  }
  return true;
}

bool rigid_config_oracle(const ESMap& f, size_t cap, bool* unique_z) {
  const EventStructure& s = *f.src;
  const EventStructure& d = *f.dst;
  auto xs = finite_configurations(s, cap);
  auto ys = finite_configurations(d, cap);
  if (unique_z) *unique_z = true;
  for (const auto& x : xs) {
    IntSet fx = f.image(x);
    for (const auto& y : ys) {
      if (!set_subset(y, fx)) continue;
      int count = 0;
      for (const auto& z : xs) {
        if (!set_subset(z, x)) continue;
        if (f.image(z) == y) ++count;
      }
      if (count == 0) return false;
      if (count > 1 && unique_z) *unique_z = false;
    }
  }
  return true;
}

bool open_config_oracle(const ESMap& f, size_t cap) {
  const EventStructure& s = *f.src;
  const EventStructure& d = *f.dst;
  auto xs = finite_configurations(s, cap);
  auto ys = finite_configurations(d, cap);
  for (const auto& x : xs) {
    IntSet fx = f.image(x);
    for (const auto& y : ys) {
      if (!set_subset(fx, y)) continue;
      bool found = false;
      for (const auto& z : xs)
        if (set_subset(x, z) && f.image(z) == y) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

MapClass classify_map(const ESMap& f, size_t cap) {
  MapClass c;
  std::string w;
  c.is_map = is_es_map(f, &w);
  if (!c.is_map) {
    c.witness = w;
    return c;
  }
  c.total = f.total();
  const EventStructure& s = *f.src;
  const EventStructure& d = *f.dst;
  c.rigid = true;
  for (size_t a = 0; a < s.size() && c.rigid; ++a)
    for (size_t b = 0; b < s.size(); ++b) {
      if (f.map[a] < 0 || f.map[b] < 0) continue;
      if (s.leq(static_cast<int>(a), static_cast<int>(b)) && !d.leq(f.map[a], f.map[b])) {
        c.rigid = false;
        c.witness = "order " + s.id(static_cast<int>(a)) + " <= " + s.id(static_cast<int>(b)) +
                    " not preserved";
        break;
      }
    }
  c.open = false;
  if (c.rigid && c.total) {
    c.open = true;
    // One-step lifting at every configuration; iterating the lifts covers
    // the full Prop-2 condition along covering chains.
    if (s.size() > cap)
      throw Error("openness classification cap exceeded: " + std::to_string(s.size()) +
                  " events, cap " + std::to_string(cap));
    for_each_configuration(s, [&](const IntSet& x) {
      if (!c.open) return;
      IntSet fx = f.image(x);
      BitSet bfx(d.size());
      for (int e : fx) bfx.set(e);
      BitSet bx(s.size());
      for (int e : x) bx.set(e);
      for (size_t e1 = 0; e1 < d.size(); ++e1) {
        if (!d.enabled(static_cast<int>(e1), bfx)) continue;
        bool lift = false;
        for (size_t e0 = 0; e0 < s.size(); ++e0)
          if (f.map[e0] == static_cast<int>(e1) && s.enabled(static_cast<int>(e0), bx)) {
            lift = true;
            break;
          }
        if (!lift) {
          c.open = false;
          c.witness = "no lift of " + d.id(static_cast<int>(e1)) + " at a configuration";
          return;
        }
      }
    });
  }
  return c;
}

EventStructure project(const EventStructure& es, const IntSet& visible) {
  EventStructure::Builder b;
  for (int e : visible) b.event(es.id(e));
  for (size_t i = 0; i < visible.size(); ++i)
    for (size_t j = 0; j < visible.size(); ++j) {
      if (i == j) continue;
      if (es.lt(visible[i], visible[j])) b.dep(es.id(visible[i]), es.id(visible[j]));
      if (i < j && es.conflict(visible[i], visible[j]))
        b.conflict(es.id(visible[i]), es.id(visible[j]));
    }
  return b.build();
}

ESMap projection_map(const EsPtr& es, const IntSet& visible) {
  ESMap f;
  f.src = es;
  f.dst = std::make_shared<EventStructure>(project(*es, visible));
  f.map.assign(es->size(), -1);
  for (int e : visible) f.map[e] = f.dst->index(es->id(e));
  return f;
}

std::pair<ESMap, ESMap> factorize(const ESMap& f) {
  IntSet defined;
  for (size_t e = 0; e < f.src->size(); ++e)
    if (f.map[e] >= 0) defined.push_back(static_cast<int>(e));
  ESMap f0 = projection_map(f.src, defined);
  ESMap f1;
  f1.src = f0.dst;
  f1.dst = f.dst;
  f1.map.assign(f0.dst->size(), -1);
  for (int e : defined) f1.map[f0.map[e]] = f.map[e];
  return {f0, f1};
}

namespace {

using PairList = std::vector<std::pair<int, int>>;

// Direct generated-order edge within a secured bijection.
inline bool pair_edge(const EventStructure& s, const EventStructure& t,
                      const std::pair<int, int>& from, const std::pair<int, int>& to) {
  return s.leq(from.first, to.first) || t.leq(from.second, to.second);
}

bool pairs_secured(const EventStructure& s, const EventStructure& t, const PairList& ps) {
  // Kahn toposort on direct edges; reject on cycle.
  size_t n = ps.size();
  std::vector<int> indeg(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j && pair_edge(s, t, ps[i], ps[j])) indeg[j]++;
  std::vector<size_t> q;
  for (size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push_back(i);
  size_t done = 0;
  while (!q.empty()) {
    size_t v = q.back();
    q.pop_back();
    ++done;
    for (size_t j = 0; j < n; ++j)
      if (j != v && pair_edge(s, t, ps[v], ps[j]) && --indeg[j] == 0) q.push_back(j);
  }
  return done == n;
}

// Union of two down-closed secured bijections is a valid member of the rigid
// family iff it is a bijection on both sides, conflict-free, and acyclic.
bool pairs_compatible(const EventStructure& s, const EventStructure& t, const PairList& a,
                      const PairList& b) {
  PairList u = a;
  for (const auto& p : b)
    if (std::find(u.begin(), u.end(), p) == u.end()) u.push_back(p);
  std::sort(u.begin(), u.end());
  std::map<int, int> left, right;
  for (const auto& [x, y] : u) {
    auto [il, fl] = left.emplace(x, y);
    if (!fl && il->second != y) return false;
    auto [ir, fr] = right.emplace(y, x);
    if (!fr && ir->second != x) return false;
  }
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = i + 1; j < u.size(); ++j) {
      if (s.conflict(u[i].first, u[j].first)) return false;
      if (t.conflict(u[i].second, u[j].second)) return false;
    }
  return pairs_secured(s, t, u);
}

std::string pair_list_id(const EventStructure& s, const EventStructure& t,
                         const PairList& ps) {
  std::vector<std::string> parts;
  for (const auto& [a, b] : ps) parts.push_back("(" + s.id(a) + "," + t.id(b) + ")");
  std::sort(parts.begin(), parts.end());
  return "{" + join(parts, "") + "}";
}

}  // namespace

Pullback pullback(const ESMap& f, const ESMap& g, size_t state_cap,
                  const SyncFilter& sync_ok) {
  if (!f.total() || !g.total()) throw Error("pullback requires total maps");
  if (f.dst != g.dst && !(f.dst->ids() == g.dst->ids()))
    throw Error("pullback requires a common target");
  const EventStructure& s = *f.src;
  const EventStructure& t = *g.src;

  // Reachable secured bijections, grown one synchronised pair at a time.
  std::set<PairList> family;
  PairList empty;
  family.insert(empty);
  std::vector<PairList> frontier{empty};
  auto side_sets = [&](const PairList& ps) {
    BitSet bs(s.size()), bt(t.size());
    for (const auto& [a, b] : ps) {
      bs.set(a);
      bt.set(b);
    }
    return std::make_pair(bs, bt);
  };
  while (!frontier.empty()) {
    PairList cur = frontier.back();
    frontier.pop_back();
    auto [bs, bt] = side_sets(cur);
    for (size_t a = 0; a < s.size(); ++a) {
      if (!s.enabled(static_cast<int>(a), bs)) continue;
      for (size_t b = 0; b < t.size(); ++b) {
        if (f.map[a] != g.map[b]) continue;
        if (sync_ok && !sync_ok(static_cast<int>(a), static_cast<int>(b))) continue;
        if (!t.enabled(static_cast<int>(b), bt)) continue;
        PairList nxt = cur;
        nxt.emplace_back(static_cast<int>(a), static_cast<int>(b));
        std::sort(nxt.begin(), nxt.end());
        if (family.count(nxt)) continue;
        if (family.size() >= state_cap)
          throw Error("pullback state cap exceeded (" + std::to_string(state_cap) + ")");
        family.insert(nxt);
        frontier.push_back(nxt);
      }
    }
  }

  // Events: members of the family with a unique top.
  std::vector<PairList> primes;
  std::map<PairList, int> prime_index;
  for (const auto& ps : family) {
    if (ps.empty()) continue;
    // A unique maximum w.r.t. the generated order: compute reachability.
    size_t n = ps.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i) reach[i][i] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          if (i == j || reach[i][j]) continue;
          if (pair_edge(s, t, ps[i], ps[j])) {
            reach[i][j] = 1;
            changed = true;
            continue;
          }
          for (size_t k = 0; k < n; ++k)
            if (reach[i][k] && reach[k][j]) {
              reach[i][j] = 1;
              changed = true;
              break;
            }
        }
    }
    int top = -1, topcount = 0;
    for (size_t i = 0; i < n; ++i) {
      bool is_max = true;
      for (size_t j = 0; j < n; ++j)
        if (!reach[j][i]) is_max = false;
      if (is_max) {
        top = static_cast<int>(i);
        ++topcount;
      }
    }
    if (topcount == 1 && !prime_index.count(ps)) {
      prime_index[ps] = static_cast<int>(primes.size());
      primes.push_back(ps);
    }
    (void)top;
  }

  // Build apex event structure over primes.
  EventStructure::Builder builder;
  std::vector<std::string> prime_ids(primes.size());
  for (size_t i = 0; i < primes.size(); ++i) {
    prime_ids[i] = pair_list_id(s, t, primes[i]);
    builder.event(prime_ids[i]);
  }
  auto down_closed_in = [&](const PairList& p, const PairList& q) {
    // every q-pair with a direct edge into a p-pair must lie in p
    for (const auto& r : q) {
      if (std::find(p.begin(), p.end(), r) != p.end()) continue;
      for (const auto& r2 : p)
        if (pair_edge(s, t, r, r2)) return false;
    }
    return true;
  };
  for (size_t i = 0; i < primes.size(); ++i)
    for (size_t j = 0; j < primes.size(); ++j) {
      if (i == j) continue;
      const PairList &p = primes[i], &q = primes[j];
      if (p.size() <= q.size() && std::includes(q.begin(), q.end(), p.begin(), p.end()) &&
          down_closed_in(p, q))
        builder.dep(prime_ids[i], prime_ids[j]);
    }
  for (size_t i = 0; i < primes.size(); ++i)
    for (size_t j = i + 1; j < primes.size(); ++j)
      if (!pairs_compatible(s, t, primes[i], primes[j]))
        builder.conflict(prime_ids[i], prime_ids[j]);

  Pullback pb;
  pb.family.assign(family.begin(), family.end());
  pb.apex = std::make_shared<EventStructure>(builder.build());
  pb.p1.src = pb.apex;
  pb.p1.dst = f.src;
  pb.p1.map.assign(pb.apex->size(), -1);
  pb.p2.src = pb.apex;
  pb.p2.dst = g.src;
  pb.p2.map.assign(pb.apex->size(), -1);
  pb.pairs.resize(pb.apex->size());
  for (size_t i = 0; i < primes.size(); ++i) {
    int idx = pb.apex->index(prime_ids[i]);
    pb.pairs[idx] = primes[i];
    // top of the prime: the pair reachable from all others
    const PairList& ps = primes[i];
    size_t n = ps.size();
    for (size_t a = 0; a < n; ++a) {
      bool is_max = true;
      for (size_t b = 0; b < n && is_max; ++b) {
        if (a == b) continue;
        // b must reach a
        std::vector<char> seen(n, 0);
        std::vector<size_t> stack{b};
        seen[b] = 1;
        bool reach = false;
        while (!stack.empty()) {
          size_t v = stack.back();
          stack.pop_back();
          if (v == a) {
            reach = true;
            break;
          }
          for (size_t w = 0; w < n; ++w)
            if (!seen[w] && pair_edge(s, t, ps[v], ps[w])) {
              seen[w] = 1;
              stack.push_back(w);
            }
        }
        if (!reach) is_max = false;
      }
      if (is_max) {
        pb.p1.map[idx] = ps[a].first;
        pb.p2.map[idx] = ps[a].second;
        break;
      }
    }
  }
  return pb;
}

std::vector<ESMap> mediating_maps(const Pullback& pb, const ESMap& f, const ESMap& g) {
  if (f.src != g.src && !(f.src->ids() == g.src->ids()))
    throw Error("cone legs must share a source");
  const EventStructure& z = *f.src;
  std::vector<std::vector<int>> cands(z.size());
  for (size_t e = 0; e < z.size(); ++e) {
    for (size_t p = 0; p < pb.apex->size(); ++p)
      if (pb.p1.map[p] == f.map[e] && pb.p2.map[p] == g.map[e])
        cands[e].push_back(static_cast<int>(p));
  }
  std::vector<ESMap> out;
  ESMap h;
  h.src = f.src;
  h.dst = pb.apex;
  h.map.assign(z.size(), -1);
  std::function<void(size_t)> rec = [&](size_t e) {
    if (e == z.size()) {
      if (is_es_map(h)) out.push_back(h);
      return;
    }
    for (int c : cands[e]) {
      h.map[e] = c;
      rec(e + 1);
    }
    if (cands[e].empty()) return;  // no total candidate: dead branch
  };
  if (z.size() == 0) {
    out.push_back(h);
    return out;
  }
  rec(0);
  return out;
}

std::string to_dot(const EventStructure& es, const std::function<std::string(int)>& label) {
  std::ostringstream os;
  os << "digraph es {\n  rankdir=BT;\n  node [shape=box];\n";
  for (size_t e = 0; e < es.size(); ++e) {
    std::string lab = label ? label(static_cast<int>(e)) : es.id(static_cast<int>(e));
    os << "  e" << e << " [label=\"" << lab << "\"];\n";
  }
  for (size_t a = 0; a < es.size(); ++a)
    for (int b : es.covers()[a]) os << "  e" << a << " -> e" << b << ";\n";
  for (const auto& [a, b] : es.immediate_conflicts())
    os << "  e" << a << " -> e" << b
       << " [dir=none, style=dashed, constraint=false, color=red];\n";
  os << "}\n";
  return os.str();
}

}  // namespace esg
