#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ontic/algebra.hpp"
#include "ontic/config.hpp"
#include "ontic/domain.hpp"
#include "ontic/errors.hpp"
#include "ontic/expr.hpp"

namespace ontic {

/// Ordered product of one basis state per system.
struct JointBasisState {
  BasisState first, second;

  friend auto operator<=>(const JointBasisState&, const JointBasisState&) = default;
};

inline std::string to_string(const JointBasisState& p) {
  return to_string(p.first) + to_string(p.second);
}

/// Canonical value of a two-system expression: null, a signed product,
/// or a signed correlated state. For canonical values the correlated
/// body is the class representative; rebasing may produce other
/// spellings of the same class.
struct JointCanonical {
  int sign = +1;
  std::variant<std::monostate, JointBasisState, CorrSpelling> body;

  static JointCanonical null() { return {}; }
  static JointCanonical product(int sign, JointBasisState p) { return {sign, p}; }
  static JointCanonical correlated(int sign, CorrSpelling s) { return {sign, s}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(body); }
  bool is_product() const { return std::holds_alternative<JointBasisState>(body); }
  bool is_correlated() const { return std::holds_alternative<CorrSpelling>(body); }
  const JointBasisState& as_product() const { return std::get<JointBasisState>(body); }
  const CorrSpelling& as_correlated() const { return std::get<CorrSpelling>(body); }

  bool ontic_equal(const JointCanonical& o) const { return body == o.body; }

  friend bool operator==(const JointCanonical&, const JointCanonical&) = default;
};

inline std::string to_string(const JointCanonical& v) {
  if (v.is_null()) return "null";
  std::string body = v.is_product() ? to_string(v.as_product()) : to_string(v.as_correlated());
  return (v.sign < 0 ? "-" : "") + body;
}

/// Set of signed products over one ordered domain pair. At most one
/// sign per product: merging is idempotent, and a product cancels
/// against its additive inverse.
struct ProductSet {
  Domain first, second;
  std::array<int, 4> sign{};  // slot 2*i+j holds -1, 0 or +1

  int at(int i, int j) const { return sign[2 * i + j]; }
  void put(int i, int j, int s) { sign[2 * i + j] = s; }

  void merge(int i, int j, int s) {
    int& slot = sign[2 * i + j];
    if (slot == 0)
      slot = s;
    else if (slot != s)
      slot = 0;  // a state and its inverse cancel to null
  }

  int support() const {
    int n = 0;
    for (int s : sign) n += s != 0;
    return n;
  }

  ProductSet scaled(int f) const {
    ProductSet out = *this;
    if (f < 0)
      for (int& s : out.sign) s = -s;
    return out;
  }
};

/// Defining product set of a correlated spelling: C pairs {00,11},
/// A pairs {01,10}; the second product carries the operation sign.
inline ProductSet expand_spelling(const CorrSpelling& s) {
  ProductSet set{s.first, s.second, {}};
  if (s.parity == Parity::C) {
    set.put(0, 0, +1);
    set.put(1, 1, s.op_sign);
  } else {
    set.put(0, 1, +1);
    set.put(1, 0, s.op_sign);
  }
  return set;
}

/// Reads a two-product set back as a signed spelling of the given kind.
inline std::pair<int, CorrSpelling> read_spelling(const ProductSet& set, int kind) {
  if (set.at(0, 0) != 0 && set.at(1, 1) != 0 && set.at(0, 1) == 0 && set.at(1, 0) == 0) {
    const int sign = set.at(0, 0);
    return {sign, CorrSpelling{Parity::C, sign * set.at(1, 1), kind, set.first, set.second}};
  }
  if (set.at(0, 1) != 0 && set.at(1, 0) != 0 && set.at(0, 0) == 0 && set.at(1, 1) == 0) {
    const int sign = set.at(0, 1);
    return {sign, CorrSpelling{Parity::A, sign * set.at(1, 0), kind, set.first, set.second}};
  }
  throw Error("product set is not a correlated pattern");
}

/// Regroups a full-support set as a kind-k superposition of two
/// products keyed by the first system; the bracketed second-system
/// superpositions rewrite to single states first. Returns null, a
/// product, or a (possibly non-representative) correlated spelling.
inline JointCanonical regroup_by_first(const ProductSet& set, int kind, const ModelConfig& config) {
  std::array<SignedState, 2> u;
  for (int i = 0; i < 2; ++i)
    u[i] = superpose_single(kind, +1, SignedState::of(set.at(i, 0), {set.second, 0}),
                            SignedState::of(set.at(i, 1), {set.second, 1}), config);
  if (u[0].is_null() || u[1].is_null())
    throw Error("regroup of a full-support set lost a bracket");
  if (u[0].body == u[1].body) {
    const SignedState f =
        superpose_single(kind, +1, SignedState::of(u[0].sign, {set.first, 0}),
                         SignedState::of(u[1].sign, {set.first, 1}), config);
    if (f.is_null()) return JointCanonical::null();
    return JointCanonical::product(f.sign, {*f.body, *u[0].body});
  }
  const Parity parity = u[0].body->index == 0 ? Parity::C : Parity::A;
  return JointCanonical::correlated(
      u[0].sign,
      CorrSpelling{parity, u[0].sign * u[1].sign, kind, set.first, u[0].body->domain});
}

/// Mirror image of regroup_by_first, keyed by the second system. Both
/// groupings must agree; the consistency checker exercises that.
inline JointCanonical regroup_by_second(const ProductSet& set, int kind, const ModelConfig& config) {
  std::array<SignedState, 2> u;
  for (int j = 0; j < 2; ++j)
    u[j] = superpose_single(kind, +1, SignedState::of(set.at(0, j), {set.first, 0}),
                            SignedState::of(set.at(1, j), {set.first, 1}), config);
  if (u[0].is_null() || u[1].is_null())
    throw Error("regroup of a full-support set lost a bracket");
  if (u[0].body == u[1].body) {
    const SignedState f =
        superpose_single(kind, +1, SignedState::of(u[0].sign, {set.second, 0}),
                         SignedState::of(u[1].sign, {set.second, 1}), config);
    if (f.is_null()) return JointCanonical::null();
    return JointCanonical::product(f.sign, {*u[0].body, *f.body});
  }
  // Canonical spellings lead with first-system index 0. Grouping by
  // the second system pairs u[0] with |0>; for A parity that bracket
  // is the (1,0) product, so the (0,1) bracket u[1] carries the sign.
  const Parity parity = u[0].body->index == 0 ? Parity::C : Parity::A;
  const int lead = parity == Parity::C ? u[0].sign : u[1].sign;
  return JointCanonical::correlated(
      lead, CorrSpelling{parity, u[0].sign * u[1].sign, kind, u[0].body->domain, set.second});
}

enum class RebaseSides { Both, FirstOnly, SecondOnly };

/// Rewrites a correlated spelling over another domain pair by
/// expanding one or both sides along the edges of its own kind and
/// merging the resulting signed products. Distributivity in this raw
/// form holds for kind 1 everywhere and for kind 2 across distinct
/// local domains; same-pair kind-2 identities are fixed by the
/// bridge rules instead.
inline std::optional<std::pair<int, CorrSpelling>> rebase_raw(const CorrSpelling& s,
                                                              RebaseSides sides,
                                                              const ModelConfig& config) {
  const int k = s.kind;
  if (k != 1 && !(k == 2 && s.first != s.second)) return std::nullopt;

  const bool do_first = sides != RebaseSides::SecondOnly;
  const bool do_second = sides != RebaseSides::FirstOnly;
  const MapEdge* into_first = do_first ? config.edge_into(k, s.first) : nullptr;
  const MapEdge* into_second = do_second ? config.edge_into(k, s.second) : nullptr;
  if (do_first && !into_first) return std::nullopt;
  if (do_second && !into_second) return std::nullopt;

  ProductSet out{do_first ? into_first->source : s.first,
                 do_second ? into_second->source : s.second,
                 {}};
  const ProductSet in = expand_spelling(s);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int sg = in.at(i, j);
      if (sg == 0) continue;
      // |i> = |0> op |1> along the edge into its domain.
      const int oi = do_first ? (i == into_first->image_plus ? +1 : -1) : 0;
      const int oj = do_second ? (j == into_second->image_plus ? +1 : -1) : 0;
      for (int p = 0; p < 2; ++p) {
        if (!do_first && p != i) continue;
        for (int q = 0; q < 2; ++q) {
          if (!do_second && q != j) continue;
          const int fp = do_first ? (p == 0 ? +1 : oi) : +1;
          const int fq = do_second ? (q == 0 ? +1 : oj) : +1;
          out.merge(p, q, sg * fp * fq);
        }
      }
    }
  }

  if (out.support() == 2) return read_spelling(out, k);
  if (out.support() == 4) {
    const JointCanonical r = do_first ? regroup_by_first(out, k, config)
                                      : regroup_by_second(out, k, config);
    if (!r.is_correlated()) throw Error("rebase of a correlated state left the class");
    return std::make_pair(r.sign, r.as_correlated());
  }
  throw Error("rebase produced a degenerate product set");
}

/// Bridge identities between same-pair spellings across map kinds.
/// For inner kinds 1 and 2 the parity/sign pattern conjugates
/// (C- <-> A+, C+ and A- fixed); for inner kind 3 it is unchanged.
/// The outer kind stays under inner kind 1 and toggles 1<->2 under
/// inner kinds 2 and 3.
struct BridgeRule {
  int inner_kind;   // kind of the edge joining the two local domains
  int outer_kind;   // kind of the spelling the rule rewrites
};

inline constexpr BridgeRule kBridgeRules[] = {
    {2, 1}, {1, 2}, {2, 2}, {3, 1}, {3, 2},
};

inline std::pair<Parity, int> bridge_pattern(int inner_kind, Parity p, int op_sign) {
  if (inner_kind == 3) return {p, op_sign};
  if (p == Parity::C && op_sign < 0) return {Parity::A, +1};
  if (p == Parity::A && op_sign > 0) return {Parity::C, -1};
  return {p, op_sign};
}

inline int bridge_result_kind(int inner_kind, int outer_kind) {
  return inner_kind == 1 ? outer_kind : (outer_kind == 1 ? 2 : 1);
}

/// All one-step rewrites of a spelling into other spellings of the
/// same correlated state, each with the sign it carries relative to
/// the input. Deterministic order.
inline std::vector<std::pair<int, CorrSpelling>> spelling_moves(const CorrSpelling& s,
                                                                const ModelConfig& config) {
  std::vector<std::pair<int, CorrSpelling>> out;
  for (RebaseSides sides : {RebaseSides::Both, RebaseSides::FirstOnly, RebaseSides::SecondOnly})
    if (auto r = rebase_raw(s, sides, config)) out.push_back(*r);

  if (s.first == s.second) {
    for (const BridgeRule& rule : kBridgeRules) {
      // forward: s matches the rule's outer kind over (j,j), j = image of i
      if (s.kind == rule.outer_kind) {
        if (const MapEdge* e = config.edge_into(rule.inner_kind, s.first)) {
          auto [p, op] = bridge_pattern(rule.inner_kind, s.parity, s.op_sign);
          out.push_back({+1, CorrSpelling{p, op, bridge_result_kind(rule.inner_kind, rule.outer_kind),
                                          e->source, e->source}});
        }
      }
      // backward: s matches the rule's result over (i,i)
      if (s.kind == bridge_result_kind(rule.inner_kind, rule.outer_kind)) {
        if (const MapEdge* e = config.edge(rule.inner_kind, s.first)) {
          auto [p, op] = bridge_pattern(rule.inner_kind, s.parity, s.op_sign);
          out.push_back({+1, CorrSpelling{p, op, rule.outer_kind, e->target, e->target}});
        }
      }
    }
  }
  return out;
}

/// Derived structure of the joint sector for one config: the partition
/// of correlated spellings into classes (one class = one correlated
/// state), signs of every spelling relative to its class
/// representative, and the grouping of classes into correlated domains
/// of disjointness. Built once per config and cached.
class JointContext {
 public:
  struct ClassInfo {
    CorrSpelling rep;
    std::vector<std::pair<CorrSpelling, int>> members;  // spelling = sign * rep
  };

  struct CorrelatedDomainInfo {
    std::vector<std::tuple<Domain, Domain, int>> slots;  // (first, second, kind)
    std::array<int, 4> classes;  // outcome order: C+, C-, A+, A- at slots[0]
  };

  static const JointContext& get(const ModelConfig& config) {
    static std::mutex mu;
    static std::unordered_map<std::uint64_t, std::unique_ptr<JointContext>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(config.fingerprint());
    if (it == cache.end())
      it = cache.emplace(config.fingerprint(), std::unique_ptr<JointContext>(new JointContext(config)))
               .first;
    return *it->second;
  }

  const ModelConfig& config() const { return config_; }

  bool is_legal(const CorrSpelling& s) const { return index_.count(s) != 0; }

  int class_of(const CorrSpelling& s) const {
    auto it = index_.find(s);
    if (it == index_.end())
      throw IllFormedError("not a correlated spelling of this config: " + to_string(s));
    return it->second.first;
  }

  /// Sign carried by a spelling relative to its class representative.
  int rel_sign(const CorrSpelling& s) const {
    auto it = index_.find(s);
    if (it == index_.end())
      throw IllFormedError("not a correlated spelling of this config: " + to_string(s));
    return it->second.second;
  }

  const ClassInfo& cls(int id) const { return classes_[id]; }
  int class_count() const { return static_cast<int>(classes_.size()); }

  /// Canonical value of sign * spelling.
  JointCanonical canonical_of_spelling(int sign, const CorrSpelling& s) const {
    auto it = index_.find(s);
    if (it == index_.end())
      throw IllFormedError("not a correlated spelling of this config: " + to_string(s));
    return JointCanonical::correlated(sign * it->second.second, classes_[it->second.first].rep);
  }

  /// Spelling of a class over one domain pair, with its relative sign.
  std::optional<std::pair<CorrSpelling, int>> spelling_on(int class_id, Domain first,
                                                          Domain second) const {
    for (const auto& [s, sg] : classes_[class_id].members)
      if (s.first == first && s.second == second) return std::make_pair(s, sg);
    return std::nullopt;
  }

  const std::vector<CorrelatedDomainInfo>& correlated_domains() const {
    return correlated_domains_;
  }

  int correlated_domain_of(int class_id) const { return domain_of_class_[class_id]; }

  /// Correlated domain owning the kind-k spellings over (a,b); smallest
  /// kind first when k is not given.
  std::optional<int> find_correlated_domain(Domain a, Domain b,
                                            std::optional<int> kind = std::nullopt) const {
    for (int k : config_.joint_kinds()) {
      if (kind && *kind != k) continue;
      for (std::size_t i = 0; i < correlated_domains_.size(); ++i)
        for (const auto& [sa, sb, sk] : correlated_domains_[i].slots)
          if (sa == a && sb == b && sk == k) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  /// Spelling-level sign conflicts met while indexing (closed rewrite
  /// loops of sign -1). The ontic class structure is unaffected; the
  /// representative's derivation path fixes each spelling's sign.
  const std::vector<std::string>& sign_anomalies() const { return sign_anomalies_; }

  /// Slot checks that failed while grouping classes into correlated
  /// domains (a slot whose four patterns do not hit four distinct
  /// classes would make the outcome table inconsistent).
  const std::vector<std::string>& structure_anomalies() const { return structure_anomalies_; }

 private:
  explicit JointContext(const ModelConfig& config) : config_(config) { build(); }

  static std::tuple<Domain, Domain, int, Parity, int> rep_key(const CorrSpelling& s) {
    return {s.first, s.second, s.kind, s.parity, s.op_sign == +1 ? 0 : 1};
  }

  void build() {
    // Enumerate legal spellings in deterministic order.
    std::vector<CorrSpelling> all;
    for (Domain a : config_.domains())
      for (Domain b : config_.domains())
        for (int k : config_.joint_kinds())
          for (Parity p : {Parity::C, Parity::A})
            for (int op : {+1, -1}) all.push_back({p, op, k, a, b});
    std::sort(all.begin(), all.end());

    // Partition into classes by flood fill over the spelling moves.
    std::map<CorrSpelling, int> cls_of;
    std::vector<std::vector<CorrSpelling>> groups;
    for (const CorrSpelling& seed : all) {
      if (cls_of.count(seed)) continue;
      const int id = static_cast<int>(groups.size());
      groups.emplace_back();
      std::deque<CorrSpelling> queue{seed};
      cls_of[seed] = id;
      while (!queue.empty()) {
        CorrSpelling s = queue.front();
        queue.pop_front();
        groups[id].push_back(s);
        for (const auto& [sg, next] : spelling_moves(s, config_)) {
          (void)sg;
          if (!cls_of.count(next)) {
            cls_of[next] = id;
            queue.push_back(next);
          }
        }
      }
      std::sort(groups[id].begin(), groups[id].end());
    }

    // Representative: spelling over the lexicographically smallest
    // legal local-domain pair. Signs are assigned along breadth-first
    // derivation paths from the representative, fixed move order.
    for (auto& members : groups) {
      const CorrSpelling rep =
          *std::min_element(members.begin(), members.end(),
                            [](const CorrSpelling& a, const CorrSpelling& b) {
                              return rep_key(a) < rep_key(b);
                            });
      ClassInfo info;
      info.rep = rep;
      std::map<CorrSpelling, int> sign{{rep, +1}};
      std::deque<CorrSpelling> queue{rep};
      while (!queue.empty()) {
        CorrSpelling s = queue.front();
        queue.pop_front();
        for (const auto& [sg, next] : spelling_moves(s, config_)) {
          const int via = sign[s] * sg;
          auto it = sign.find(next);
          if (it == sign.end()) {
            sign[next] = via;
            queue.push_back(next);
          } else if (it->second != via) {
            sign_anomalies_.push_back("sign loop of -1 through " + to_string(s) + " -> " +
                                      to_string(next) + " (kept " + to_string(info.rep) +
                                      " derivation sign)");
          }
        }
      }
      for (const CorrSpelling& s : members) info.members.push_back({s, sign.at(s)});
      const int id = static_cast<int>(classes_.size());
      for (const CorrSpelling& s : members) index_[s] = {id, sign.at(s)};
      classes_.push_back(std::move(info));
    }

    group_into_domains();
  }

  void group_into_domains() {
    // A slot is one (pair, kind); its four patterns C+,C-,A+,A- must
    // hit four distinct classes, and slots sharing a class set form
    // one correlated domain of disjointness.
    std::map<std::array<int, 4>, std::vector<std::tuple<Domain, Domain, int>>> by_set;
    std::map<std::array<int, 4>, std::array<int, 4>> outcome_order;
    for (Domain a : config_.domains()) {
      for (Domain b : config_.domains()) {
        for (int k : config_.joint_kinds()) {
          std::array<int, 4> ids{};
          bool ok = true;
          const std::array<std::pair<Parity, int>, 4> patterns = {
              {{Parity::C, +1}, {Parity::C, -1}, {Parity::A, +1}, {Parity::A, -1}}};
          for (int i = 0; i < 4; ++i) {
            CorrSpelling s{patterns[i].first, patterns[i].second, k, a, b};
            auto it = index_.find(s);
            if (it == index_.end()) {
              ok = false;
              break;
            }
            ids[i] = it->second.first;
          }
          if (!ok) continue;
          std::array<int, 4> sorted = ids;
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            structure_anomalies_.push_back(
                "slot (" + std::string(1, domain_char(a)) + std::string(1, domain_char(b)) +
                ", kind " + std::to_string(k) + ") does not split into four classes");
            continue;
          }
          auto& slots = by_set[sorted];
          if (slots.empty()) outcome_order[sorted] = ids;
          slots.push_back({a, b, k});
        }
      }
    }
    for (auto& [set, slots] : by_set) {
      std::sort(slots.begin(), slots.end());
      correlated_domains_.push_back({slots, outcome_order[set]});
    }
    std::sort(correlated_domains_.begin(), correlated_domains_.end(),
              [](const CorrelatedDomainInfo& a, const CorrelatedDomainInfo& b) {
                return a.slots < b.slots;
              });
    domain_of_class_.assign(classes_.size(), -1);
    for (std::size_t i = 0; i < correlated_domains_.size(); ++i)
      for (int c : correlated_domains_[i].classes)
        domain_of_class_[c] = static_cast<int>(i);
  }

  ModelConfig config_;
  std::map<CorrSpelling, std::pair<int, int>> index_;  // spelling -> (class, rel sign)
  std::vector<ClassInfo> classes_;
  std::vector<CorrelatedDomainInfo> correlated_domains_;
  std::vector<int> domain_of_class_;
  std::vector<std::string> sign_anomalies_;
  std::vector<std::string> structure_anomalies_;
};

/// Superposes two canonical joint values. Null and equal-body rules
/// mirror the single-system ones; two products either share a factor
/// (the other side superposes locally) or pair off into a correlated
/// state; two correlated states of one correlated domain merge their
/// product sets over a shared spelling pair.
inline JointCanonical superpose_joint(int kind, int op_sign, const JointCanonical& lhs,
                                      const JointCanonical& rhs, const ModelConfig& config) {
  const auto joint_kinds = config.joint_kinds();
  if (std::find(joint_kinds.begin(), joint_kinds.end(), kind) == joint_kinds.end()) {
    if (kind == 3)
      throw IllFormedError("kind-3 superposition is defined for single systems only");
    throw UnknownEdgeError("no kind-" + std::to_string(kind) + " edges in the active config");
  }

  if (lhs.is_null() && rhs.is_null()) return JointCanonical::null();
  if (rhs.is_null()) return lhs;
  if (lhs.is_null()) {
    JointCanonical r = rhs;
    r.sign *= op_sign;
    return r;
  }

  const int eff = op_sign * lhs.sign * rhs.sign;
  if (lhs.body == rhs.body) {
    if (eff > 0) return JointCanonical{lhs.sign, lhs.body};
    return JointCanonical::null();
  }

  const JointContext& ctx = JointContext::get(config);

  if (lhs.is_product() && rhs.is_product()) {
    const JointBasisState& a = lhs.as_product();
    const JointBasisState& b = rhs.as_product();
    if (a.first == b.first) {
      const SignedState s = superpose_single(kind, eff, SignedState::of(+1, a.second),
                                             SignedState::of(+1, b.second), config);
      if (s.is_null()) return JointCanonical::null();
      return JointCanonical::product(lhs.sign * s.sign, {a.first, *s.body});
    }
    if (a.second == b.second) {
      const SignedState s = superpose_single(kind, eff, SignedState::of(+1, a.first),
                                             SignedState::of(+1, b.first), config);
      if (s.is_null()) return JointCanonical::null();
      return JointCanonical::product(lhs.sign * s.sign, {*s.body, a.second});
    }
    if (a.first.domain != b.first.domain || a.second.domain != b.second.domain)
      throw MixedParityError("products over different domain pairs do not superpose");
    // Distinct on both sides: a correlated pattern. Order so the
    // first-system indices read 0 then 1.
    int overall = lhs.sign;
    int op = eff;
    JointBasisState lo = a, hi = b;
    if (a.first.index == 1) {
      std::swap(lo, hi);
      if (op < 0) overall = -overall;  // kinds 1 and 2: c_- anticommutes
    }
    const Parity parity = lo.second.index == 0 ? Parity::C : Parity::A;
    return ctx.canonical_of_spelling(
        overall, CorrSpelling{parity, op, kind, lo.first.domain, lo.second.domain});
  }

  if (lhs.is_correlated() && rhs.is_correlated()) {
    const int ca = ctx.class_of(lhs.as_correlated());
    const int cb = ctx.class_of(rhs.as_correlated());
    if (ctx.correlated_domain_of(ca) != ctx.correlated_domain_of(cb))
      throw MixedParityError("correlated states of different correlated domains do not superpose");
    const auto& dom = ctx.correlated_domains()[ctx.correlated_domain_of(ca)];
    for (const auto& [a, b, k] : dom.slots) {
      if (k != kind) continue;
      const auto sa = ctx.spelling_on(ca, a, b);
      const auto sb = ctx.spelling_on(cb, a, b);
      if (!sa || !sb) continue;
      // value = sign * rel * spelling; expand both over the shared pair.
      const ProductSet set_a = expand_spelling(sa->first).scaled(lhs.sign * sa->second);
      const ProductSet set_b = expand_spelling(sb->first).scaled(op_sign * rhs.sign * sb->second);
      ProductSet merged = set_a;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (set_b.at(i, j) != 0) merged.merge(i, j, set_b.at(i, j));
      switch (merged.support()) {
        case 0:
          return JointCanonical::null();
        case 2: {
          const auto [sg, sp] = read_spelling(merged, kind);
          return ctx.canonical_of_spelling(sg, sp);
        }
        case 4: {
          const JointCanonical r = regroup_by_first(merged, kind, config);
          if (r.is_correlated()) return ctx.canonical_of_spelling(r.sign, r.as_correlated());
          return r;
        }
        default: {
          // Support 1: one product with its inverse copy cancelled.
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              if (merged.at(i, j) != 0)
                return JointCanonical::product(
                    merged.at(i, j), {BasisState{merged.first, static_cast<std::uint8_t>(i)},
                                      BasisState{merged.second, static_cast<std::uint8_t>(j)}});
          throw Error("unreachable product set support");
        }
      }
    }
    throw NoRepresentationError("operands have no shared kind-" + std::to_string(kind) +
                                " spelling pair");
  }

  throw MixedParityError("a product and a correlated state do not superpose");
}

namespace detail {

/// Evaluation result that keeps null polymorphic between scopes.
struct EvalValue {
  std::optional<SignedState> single;
  std::optional<JointCanonical> joint;

  bool is_null_literal() const {
    return single && single->is_null() && joint && joint->is_null();
  }
};

inline EvalValue eval_expr(const Expr& e, const ModelConfig& config) {
  switch (e.node) {
    case Expr::Node::Ket: {
      if (!config.has_domain(e.ket.domain))
        throw UnknownDomainError(std::string("domain '") + domain_char(e.ket.domain) +
                                 "' is not part of the active config");
      EvalValue v;
      v.single = SignedState::of(e.sign, e.ket);
      return v;
    }
    case Expr::Node::Null: {
      EvalValue v;
      v.single = SignedState::null();
      v.joint = JointCanonical::null();
      return v;
    }
    case Expr::Node::Corr: {
      const JointContext& ctx = JointContext::get(config);
      if (e.corr.kind == 3)
        throw IllFormedError("kind-3 superposition is defined for single systems only");
      if (!config.has_domain(e.corr.first) || !config.has_domain(e.corr.second))
        throw UnknownDomainError("correlated atom uses a domain outside the active config");
      if (!ctx.is_legal(e.corr))
        throw IllFormedError("not a correlated spelling of this config: " + to_string(e.corr));
      EvalValue v;
      v.joint = ctx.canonical_of_spelling(e.sign, e.corr);
      return v;
    }
    case Expr::Node::Product: {
      const EvalValue l = eval_expr(*e.lhs, config);
      const EvalValue r = eval_expr(*e.rhs, config);
      if (!l.single || !r.single)
        throw IllFormedError("products take one basis factor per system");
      EvalValue v;
      if (l.single->is_null() || r.single->is_null()) {
        v.joint = JointCanonical::null();
      } else {
        v.joint = JointCanonical::product(l.single->sign * r.single->sign,
                                          {*l.single->body, *r.single->body});
      }
      return v;
    }
    case Expr::Node::Superpose: {
      const EvalValue l = eval_expr(*e.lhs, config);
      const EvalValue r = eval_expr(*e.rhs, config);
      const bool joint = (l.joint && !l.single) || (r.joint && !r.single) ||
                         (l.joint && r.joint);
      EvalValue v;
      if (joint) {
        if (!l.joint || !r.joint)
          throw ScopeMismatchError("superposition mixes single-system and joint operands");
        v.joint = superpose_joint(e.op_kind, e.op_sign, *l.joint, *r.joint, config);
      } else {
        v.single = superpose_single(e.op_kind, e.op_sign, *l.single, *r.single, config);
      }
      return v;
    }
  }
  throw Error("unreachable expression node");
}

}  // namespace detail

/// Canonicalizes a two-system expression to null, a signed product or
/// a signed correlated class representative.
inline JointCanonical canonicalize_joint(const Expr& e, const ModelConfig& config) {
  const detail::EvalValue v = detail::eval_expr(e, config);
  if (!v.joint) throw ScopeMismatchError("single-system expression in joint canonicalization");
  return *v.joint;
}

inline JointCanonical canonicalize_joint(const ExprPtr& e, const ModelConfig& config) {
  return canonicalize_joint(*e, config);
}

/// Rewrites a correlated value as its spelling over the given pair.
/// The result is sign * spelling, not the class representative.
inline JointCanonical rebase_correlated(const JointCanonical& state, Domain first, Domain second,
                                        const ModelConfig& config) {
  if (!state.is_correlated())
    throw ScopeMismatchError("rebase applies to correlated states");
  const JointContext& ctx = JointContext::get(config);
  const CorrSpelling& rep = state.as_correlated();
  const auto found = ctx.spelling_on(ctx.class_of(rep), first, second);
  if (!found)
    throw NoRepresentationError("no spelling over (" + std::string(1, domain_char(first)) +
                                "," + std::string(1, domain_char(second)) + ") for " +
                                to_string(rep));
  // state = sign * rep_of_state; spelling = rel * rep.
  const int rel_state = ctx.rel_sign(rep);  // +1 when rep is canonical
  return JointCanonical::correlated(state.sign * rel_state * found->second, found->first);
}

}  // namespace ontic
