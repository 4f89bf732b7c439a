#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esg/util.hpp"

namespace esg {

// Many-sorted relational signature. Equality per sort is implicit and
// never stored in `relations`.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> sorts,
            std::map<std::string, std::vector<std::string>> relations);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::map<std::string, std::vector<std::string>>& relations() const {
    return relations_;
  }
  bool has_sort(const std::string& s) const;
  const std::vector<std::string>& arity(const std::string& rel) const;
  bool operator==(const Signature& o) const {
    return sorts_ == o.sorts_ && relations_ == o.relations_;
  }
  bool operator!=(const Signature& o) const { return !(*this == o); }

 private:
  std::vector<std::string> sorts_;  // sorted
  std::map<std::string, std::vector<std::string>> relations_;
};

// An element handle: sort plus the id unique within that sort.
struct Elem {
  std::string sort;
  std::string id;
  bool operator==(const Elem& o) const { return sort == o.sort && id == o.id; }
  bool operator<(const Elem& o) const {
    return sort != o.sort ? sort < o.sort : id < o.id;
  }
};

using Tuple = std::vector<std::string>;  // element ids, one per arity slot

// Finite many-sorted structure; immutable after construction, carriers
// nonempty, tuple sets canonicalized (sorted).
class Structure {
 public:
  Structure() = default;
  Structure(Signature sig, std::map<std::string, std::vector<std::string>> carrier,
            std::map<std::string, std::vector<Tuple>> interp);
  // Variant with explicit (non-diagonal) equality interpretations per sort,
  // as arise in derived structures on game moves.
  Structure(Signature sig, std::map<std::string, std::vector<std::string>> carrier,
            std::map<std::string, std::vector<Tuple>> interp,
            std::map<std::string, std::vector<Tuple>> explicit_eq);

  const Signature& sig() const { return sig_; }
  const std::vector<std::string>& carrier(const std::string& sort) const;
  const std::map<std::string, std::vector<std::string>>& carriers() const {
    return carrier_;
  }
  const std::vector<Tuple>& tuples(const std::string& rel) const;
  bool holds(const std::string& rel, const Tuple& t) const;
  // Equality at a sort: the diagonal unless explicitly interpreted.
  bool eq_holds(const std::string& sort, const std::string& a, const std::string& b) const;
  bool has_explicit_eq() const { return !explicit_eq_.empty(); }
  const std::map<std::string, std::vector<Tuple>>& explicit_eq() const {
    return explicit_eq_;
  }

  // Global element indexing (iteration / function tables).
  const std::vector<Elem>& elems() const { return elems_; }
  int elem_index(const std::string& sort, const std::string& id) const;
  size_t size() const { return elems_.size(); }

  bool operator==(const Structure& o) const {
    return sig_ == o.sig_ && carrier_ == o.carrier_ && interp_ == o.interp_ &&
           explicit_eq_ == o.explicit_eq_;
  }

 private:
  void finish();
  Signature sig_;
  std::map<std::string, std::vector<std::string>> carrier_;  // sort -> sorted ids
  std::map<std::string, std::vector<Tuple>> interp_;         // rel -> sorted tuples
  std::map<std::string, std::vector<Tuple>> explicit_eq_;    // sort -> pairs
  std::vector<Elem> elems_;
  std::map<std::pair<std::string, std::string>, int> elem_index_;
};

// Total sort-respecting function between structures, as a table over the
// source's global element index.
struct SortedFn {
  const Structure* src = nullptr;
  const Structure* dst = nullptr;
  std::vector<int> map;  // src elem index -> dst elem index

  const Elem& apply(int src_idx) const { return dst->elems()[map[src_idx]]; }
  std::string apply_id(const std::string& sort, const std::string& id) const;
};

Structure sum(const Structure& a, const Structure& b);
Structure product(const Structure& a, const Structure& b);

// Projections of a product and injections into a sum, as SortedFns where
// meaningful (projections are total; sum injections land in the tagged copy).
SortedFn product_projection(const Structure& prod, const Structure& a,
                            const Structure& b, int which);

bool check_homomorphism(const SortedFn& h, std::string* witness = nullptr);
std::vector<SortedFn> enumerate_homomorphisms(const Structure& a, const Structure& b);
std::vector<SortedFn> enumerate_sort_respecting(const Structure& a, const Structure& b);

// Structure text format; parse accepts the canonical form print emits.
std::string print_structure(const Structure& s);
Structure parse_structure(const std::string& text);

}  // namespace esg
