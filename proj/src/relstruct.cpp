#include "esg/relstruct.hpp"

#include <algorithm>
#include <sstream>

namespace esg {

namespace {

void check_name(const std::string& s, const char* what) {
  if (s.empty()) throw Error(std::string(what) + " must be nonempty");
  for (char c : s) {
    if (c == '(' || c == ')' || c == ',' || c == ':' || c == ' ' || c == '\t' ||
        c == '\n' || c == '\r')
      throw Error(std::string(what) + " '" + s + "' contains a reserved character");
  }
}

std::vector<Tuple> parse_tuple_list(const std::string& rest) {
  std::vector<Tuple> ts;
  size_t p = 0;
  while (true) {
    auto lp = rest.find('(', p);
    if (lp == std::string::npos) break;
    auto rp = rest.find(')', lp);
    if (rp == std::string::npos) throw Error("unbalanced tuple parens");
    std::string body = rest.substr(lp + 1, rp - lp - 1);
    Tuple t;
    std::istringstream bs(body);
    std::string tok;
    while (std::getline(bs, tok, ',')) t.push_back(trim(tok));
    if (t.size() == 1 && t[0].empty()) t.clear();
    ts.push_back(t);
    p = rp + 1;
  }
  return ts;
}

}  // namespace

Signature::Signature(std::vector<std::string> sorts,
                     std::map<std::string, std::vector<std::string>> relations)
    : sorts_(std::move(sorts)), relations_(std::move(relations)) {
  std::sort(sorts_.begin(), sorts_.end());
  sorts_.erase(std::unique(sorts_.begin(), sorts_.end()), sorts_.end());
  for (const auto& s : sorts_) check_name(s, "sort");
  for (const auto& [name, ar] : relations_) {
    check_name(name, "relation");
    if (name.rfind("=", 0) == 0)
      throw Error("relation '" + name + "' shadows built-in equality");
    for (const auto& s : ar)
      if (!has_sort(s))
        throw Error("relation " + name + " uses unknown sort " + s);
  }
}

bool Signature::has_sort(const std::string& s) const {
  return std::binary_search(sorts_.begin(), sorts_.end(), s);
}

const std::vector<std::string>& Signature::arity(const std::string& rel) const {
  auto it = relations_.find(rel);
  if (it == relations_.end()) throw Error("unknown relation " + rel);
  return it->second;
}

Structure::Structure(Signature sig,
                     std::map<std::string, std::vector<std::string>> carrier,
                     std::map<std::string, std::vector<Tuple>> interp)
    : sig_(std::move(sig)), carrier_(std::move(carrier)), interp_(std::move(interp)) {
  finish();
}

Structure::Structure(Signature sig,
                     std::map<std::string, std::vector<std::string>> carrier,
                     std::map<std::string, std::vector<Tuple>> interp,
                     std::map<std::string, std::vector<Tuple>> explicit_eq)
    : sig_(std::move(sig)),
      carrier_(std::move(carrier)),
      interp_(std::move(interp)),
      explicit_eq_(std::move(explicit_eq)) {
  finish();
  for (auto& [s, pairs] : explicit_eq_) {
    if (!sig_.has_sort(s)) throw Error("explicit equality for unknown sort " + s);
    for (auto& t : pairs) {
      if (t.size() != 2) throw Error("equality tuples must be pairs");
      const auto& ids = carrier_.at(s);
      for (const auto& id : t)
        if (!std::binary_search(ids.begin(), ids.end(), id))
          throw Error("equality tuple mentions unknown element " + id);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }
}

void Structure::finish() {
  for (const auto& s : sig_.sorts()) {
    auto it = carrier_.find(s);
    if (it == carrier_.end() || it->second.empty())
      throw Error("carrier of sort " + s + " is empty");
    auto& ids = it->second;
    std::sort(ids.begin(), ids.end());
    if (std::unique(ids.begin(), ids.end()) != ids.end())
      throw Error("duplicate element id in sort " + s);
    for (const auto& id : ids) check_name(id, "element id");
  }
  for (const auto& [s, ids] : carrier_)
    if (!sig_.has_sort(s)) throw Error("carrier for unknown sort " + s);

  for (auto& [rel, tuples] : interp_) {
    const auto& ar = sig_.arity(rel);
    for (const auto& t : tuples) {
      if (t.size() != ar.size())
        throw Error("tuple arity mismatch in relation " + rel);
      for (size_t i = 0; i < t.size(); ++i) {
        const auto& ids = carrier_.at(ar[i]);
        if (!std::binary_search(ids.begin(), ids.end(), t[i]))
          throw Error("tuple in " + rel + " mentions unknown element " + t[i] +
                      " of sort " + ar[i]);
      }
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  }
  for (const auto& [rel, ar] : sig_.relations())
    if (!interp_.count(rel)) interp_[rel] = {};

  for (const auto& s : sig_.sorts())
    for (const auto& id : carrier_.at(s)) {
      elem_index_[{s, id}] = static_cast<int>(elems_.size());
      elems_.push_back({s, id});
    }
}

const std::vector<std::string>& Structure::carrier(const std::string& sort) const {
  auto it = carrier_.find(sort);
  if (it == carrier_.end()) throw Error("unknown sort " + sort);
  return it->second;
}

const std::vector<Tuple>& Structure::tuples(const std::string& rel) const {
  auto it = interp_.find(rel);
  if (it == interp_.end()) throw Error("unknown relation " + rel);
  return it->second;
}

bool Structure::holds(const std::string& rel, const Tuple& t) const {
  const auto& ts = tuples(rel);
  return std::binary_search(ts.begin(), ts.end(), t);
}

bool Structure::eq_holds(const std::string& sort, const std::string& a,
                         const std::string& b) const {
  auto it = explicit_eq_.find(sort);
  if (it == explicit_eq_.end()) return a == b;
  const auto& ts = it->second;
  return std::binary_search(ts.begin(), ts.end(), Tuple{a, b});
}

int Structure::elem_index(const std::string& sort, const std::string& id) const {
  auto it = elem_index_.find({sort, id});
  if (it == elem_index_.end())
    throw Error("no element " + id + " of sort " + sort);
  return it->second;
}

std::string SortedFn::apply_id(const std::string& sort, const std::string& id) const {
  return dst->elems()[map[src->elem_index(sort, id)]].id;
}

Structure sum(const Structure& a, const Structure& b) {
  auto tag = [](const std::string& pre, const std::string& s) { return pre + s; };
  std::vector<std::string> sorts;
  std::map<std::string, std::vector<std::string>> rels;
  std::map<std::string, std::vector<std::string>> carrier;
  std::map<std::string, std::vector<Tuple>> interp;
  auto lift = [&](const Structure& x, const std::string& pre) {
    for (const auto& s : x.sig().sorts()) {
      sorts.push_back(tag(pre, s));
      carrier[tag(pre, s)] = x.carrier(s);
    }
    for (const auto& [r, ar] : x.sig().relations()) {
      std::vector<std::string> tagged;
      for (const auto& s : ar) tagged.push_back(tag(pre, s));
      rels[tag(pre, r)] = tagged;
      interp[tag(pre, r)] = x.tuples(r);
    }
  };
  lift(a, "l.");
  lift(b, "r.");
  return Structure(Signature(sorts, rels), carrier, interp);
}

Structure product(const Structure& a, const Structure& b) {
  if (a.sig() != b.sig()) throw Error("product requires identical signatures");
  auto pair_id = [](const std::string& x, const std::string& y) {
    return "<" + x + "." + y + ">";
  };
  std::map<std::string, std::vector<std::string>> carrier;
  for (const auto& s : a.sig().sorts()) {
    std::vector<std::string> ids;
    for (const auto& x : a.carrier(s))
      for (const auto& y : b.carrier(s)) ids.push_back(pair_id(x, y));
    carrier[s] = ids;
  }
  std::map<std::string, std::vector<Tuple>> interp;
  for (const auto& [r, ar] : a.sig().relations()) {
    std::vector<Tuple> ts;
    for (const auto& ta : a.tuples(r))
      for (const auto& tb : b.tuples(r)) {
        Tuple t;
        for (size_t i = 0; i < ta.size(); ++i) t.push_back(pair_id(ta[i], tb[i]));
        ts.push_back(t);
      }
    interp[r] = ts;
  }
  return Structure(a.sig(), carrier, interp);
}

SortedFn product_projection(const Structure& prod, const Structure& a,
                            const Structure& b, int which) {
  const Structure& tgt = which == 0 ? a : b;
  SortedFn f;
  f.src = &prod;
  f.dst = &tgt;
  f.map.resize(prod.size());
  for (size_t i = 0; i < prod.size(); ++i) {
    const Elem& e = prod.elems()[i];
    // ids have the shape <x.y>; split at the dot that separates the halves.
    const std::string& id = e.id;
    if (id.size() < 3 || id.front() != '<' || id.back() != '>')
      throw Error("not a product element id: " + id);
    std::string body = id.substr(1, id.size() - 2);
    // The left id is a carrier id of a: try each split point.
    bool found = false;
    for (size_t k = 1; k + 1 < body.size() + 1; ++k) {
      if (body[k] != '.') continue;
      std::string x = body.substr(0, k), y = body.substr(k + 1);
      const auto& ca = a.carrier(e.sort);
      const auto& cb = b.carrier(e.sort);
      if (std::binary_search(ca.begin(), ca.end(), x) &&
          std::binary_search(cb.begin(), cb.end(), y)) {
        f.map[i] = tgt.elem_index(e.sort, which == 0 ? x : y);
        found = true;
        break;
      }
    }
    if (!found) throw Error("cannot split product id " + id);
  }
  return f;
}

bool check_homomorphism(const SortedFn& h, std::string* witness) {
  const Structure& a = *h.src;
  const Structure& b = *h.dst;
  if (a.sig() != b.sig()) throw Error("homomorphism requires identical signatures");
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.elems()[i].sort != b.elems()[h.map[i]].sort) {
      if (witness) *witness = "sort not respected at " + a.elems()[i].id;
      return false;
    }
  }
  for (const auto& [r, ar] : a.sig().relations()) {
    for (const auto& t : a.tuples(r)) {
      Tuple ht;
      for (size_t i = 0; i < t.size(); ++i)
        ht.push_back(h.apply(a.elem_index(ar[i], t[i])).id);
      if (!b.holds(r, ht)) {
        if (witness) *witness = r + "(" + join(t, ",") + ") not preserved";
        return false;
      }
    }
  }
  // Equality per sort (diagonal sources are preserved by functionality; only
  // explicit interpretations can add constraints).
  for (const auto& [s, pairs] : a.explicit_eq()) {
    for (const auto& t : pairs) {
      std::string x = h.apply(a.elem_index(s, t[0])).id;
      std::string y = h.apply(a.elem_index(s, t[1])).id;
      if (!b.eq_holds(s, x, y)) {
        if (witness) *witness = "=(" + t[0] + "," + t[1] + ") not preserved";
        return false;
      }
    }
  }
  return true;
}

std::vector<SortedFn> enumerate_sort_respecting(const Structure& a,
                                                const Structure& b) {
  std::vector<std::vector<int>> choices(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const auto& s = a.elems()[i].sort;
    for (const auto& id : b.carrier(s)) choices[i].push_back(b.elem_index(s, id));
  }
  std::vector<SortedFn> out;
  SortedFn f;
  f.src = &a;
  f.dst = &b;
  f.map.assign(a.size(), -1);
  std::vector<size_t> pos(a.size(), 0);
  // Odometer over all choice vectors, lexicographic.
  size_t k = 0;
  if (a.size() == 0) {
    out.push_back(f);
    return out;
  }
  while (true) {
    if (k == a.size()) {
      out.push_back(f);
      --k;
      ++pos[k];
    } else if (pos[k] == choices[k].size()) {
      pos[k] = 0;
      if (k == 0) break;
      --k;
      ++pos[k];
    } else {
      f.map[k] = choices[k][pos[k]];
      ++k;
    }
  }
  return out;
}

std::vector<SortedFn> enumerate_homomorphisms(const Structure& a, const Structure& b) {
  std::vector<SortedFn> out;
  for (auto& f : enumerate_sort_respecting(a, b))
    if (check_homomorphism(f)) out.push_back(std::move(f));
  return out;
}

std::string print_structure(const Structure& s) {
  std::ostringstream os;
  os << "sorts: " << join(s.sig().sorts(), " ") << "\n";
  for (const auto& sort : s.sig().sorts())
    os << "carrier " << sort << ": " << join(s.carrier(sort), " ") << "\n";
  for (const auto& [r, ar] : s.sig().relations()) {
    os << "rel " << r << "(" << join(ar, ",") << "):";
    for (const auto& t : s.tuples(r)) os << " (" << join(t, ",") << ")";
    os << "\n";
  }
  for (const auto& [sort, pairs] : s.explicit_eq()) {
    os << "eq " << sort << ":";
    for (const auto& t : pairs) os << " (" << join(t, ",") << ")";
    os << "\n";
  }
  return os.str();
}

Structure parse_structure(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> sorts;
  std::map<std::string, std::vector<std::string>> rels, carrier;
  std::map<std::string, std::vector<Tuple>> interp, expl_eq;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& msg) {
      throw Error("structure parse error at line " + std::to_string(lineno) + ": " + msg);
    };
    if (line.rfind("sorts:", 0) == 0) {
      for (const auto& t : split_ws(line.substr(6))) sorts.push_back(t);
    } else if (line.rfind("carrier ", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) fail("missing ':'");
      std::string sort = trim(line.substr(8, colon - 8));
      carrier[sort] = split_ws(line.substr(colon + 1));
    } else if (line.rfind("rel ", 0) == 0) {
      auto open = line.find('(');
      auto close = line.find(')');
      if (open == std::string::npos || close == std::string::npos || close < open)
        fail("malformed relation header");
      std::string name = trim(line.substr(4, open - 4));
      std::vector<std::string> ar;
      {
        std::string body = line.substr(open + 1, close - open - 1);
        std::istringstream bs(body);
        std::string tok;
        while (std::getline(bs, tok, ',')) ar.push_back(trim(tok));
        if (ar.size() == 1 && ar[0].empty()) ar.clear();
      }
      auto colon = line.find(':', close);
      if (colon == std::string::npos) fail("missing ':'");
      rels[name] = ar;
      interp[name] = parse_tuple_list(line.substr(colon + 1));
    } else if (line.rfind("eq ", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) fail("missing ':'");
      std::string sort = trim(line.substr(3, colon - 3));
      expl_eq[sort] = parse_tuple_list(line.substr(colon + 1));
    } else {
      fail("unrecognized directive: " + line);
    }
  }
  if (expl_eq.empty()) return Structure(Signature(sorts, rels), carrier, interp);
  return Structure(Signature(sorts, rels), carrier, interp, expl_eq);
}

}  // namespace esg
