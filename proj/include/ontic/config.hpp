#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontic/domain.hpp"
#include "ontic/errors.hpp"

namespace ontic {

enum class Variant : std::uint8_t { TwoDomain, ThreeDomainFrustrated, FourDomain };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::TwoDomain: return "2d";
    case Variant::ThreeDomainFrustrated: return "3d-frustrated";
    case Variant::FourDomain: return "4d";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "2d") return Variant::TwoDomain;
  if (s == "3d" || s == "3d-frustrated") return Variant::ThreeDomainFrustrated;
  if (s == "4d") return Variant::FourDomain;
  throw Error("unknown variant: " + s);
}

/// One directed edge of the coherent-map graph. A superposition of the
/// two source-domain basis states of this kind rewrites to a single
/// target-domain basis state: the plus image for c_{+k}, the minus
/// image for c_{-k}; both images together exhaust the target domain.
struct MapEdge {
  int kind;        // superposition kind, 1..3
  Domain source;
  Domain target;
  std::uint8_t image_plus;   // target index of [|0> +k |1>]
  std::uint8_t image_minus;  // target index of [|0> -k |1>]

  friend bool operator==(const MapEdge&, const MapEdge&) = default;
};

/// Immutable description of a model: its domains and its coherent-map
/// graph. The engine memoizes derived structure against configs, so a
/// config is never modified after construction.
class ModelConfig {
 public:
  static constexpr int kStatesPerDomain = 2;

  /// Two domains x,y joined by kind-1 edges in both directions.
  static ModelConfig two_domain() {
    return ModelConfig(Variant::TwoDomain, {Domain::X, Domain::Y},
                       {
                           {1, Domain::X, Domain::Y, 0, 1},
                           {1, Domain::Y, Domain::X, 0, 1},
                       });
  }

  /// Four domains x,y,z,t with kind-1, kind-2 and kind-3 edges. Every
  /// domain has exactly one outgoing edge per kind.
  static ModelConfig four_domain() {
    return ModelConfig(Variant::FourDomain, {Domain::X, Domain::Y, Domain::Z, Domain::T},
                       {
                           {1, Domain::X, Domain::Y, 0, 1},
                           {1, Domain::Y, Domain::X, 0, 1},
                           {1, Domain::Z, Domain::T, 0, 1},
                           {1, Domain::T, Domain::Z, 0, 1},
                           {2, Domain::X, Domain::T, 0, 1},
                           {2, Domain::Y, Domain::Z, 0, 1},
                           {2, Domain::Z, Domain::Y, 0, 1},
                           {2, Domain::T, Domain::X, 0, 1},
                           {3, Domain::X, Domain::Z, 0, 1},
                           {3, Domain::Y, Domain::T, 0, 1},
                           {3, Domain::Z, Domain::X, 0, 1},
                           {3, Domain::T, Domain::Y, 0, 1},
                       });
  }

  /// Three domains where z carries two competing kind-2 edges. The
  /// graph is deliberately inconsistent; the consistency checker must
  /// find the ambiguity. Rewriting uses the first declared edge.
  static ModelConfig frustrated_three_domain() {
    return ModelConfig(Variant::ThreeDomainFrustrated, {Domain::X, Domain::Y, Domain::Z},
                       {
                           {1, Domain::X, Domain::Y, 0, 1},
                           {1, Domain::Y, Domain::X, 0, 1},
                           {2, Domain::X, Domain::Z, 0, 1},
                           {2, Domain::Z, Domain::X, 0, 1},
                           {2, Domain::Y, Domain::Z, 0, 1},
                           {2, Domain::Z, Domain::Y, 0, 1},
                       });
  }

  static ModelConfig standard(Variant v) {
    switch (v) {
      case Variant::TwoDomain: return two_domain();
      case Variant::ThreeDomainFrustrated: return frustrated_three_domain();
      case Variant::FourDomain: return four_domain();
    }
    throw Error("unknown variant");
  }

  Variant variant() const { return variant_; }
  const std::vector<Domain>& domains() const { return domains_; }
  const std::vector<MapEdge>& edges() const { return edges_; }

  bool has_domain(Domain d) const {
    return std::find(domains_.begin(), domains_.end(), d) != domains_.end();
  }

  /// First declared edge of the given kind leaving `source`, or null.
  const MapEdge* edge(int kind, Domain source) const {
    for (const MapEdge& e : edges_)
      if (e.kind == kind && e.source == source) return &e;
    return nullptr;
  }

  /// All edges of the given kind leaving `source`, in declaration
  /// order. More than one is a frustrated graph.
  std::vector<const MapEdge*> all_edges(int kind, Domain source) const {
    std::vector<const MapEdge*> out;
    for (const MapEdge& e : edges_)
      if (e.kind == kind && e.source == source) out.push_back(&e);
    return out;
  }

  /// Unique edge of the given kind whose target is `target`, or null.
  /// Used to decompose a basis state into a source-domain superposition.
  const MapEdge* edge_into(int kind, Domain target) const {
    const MapEdge* found = nullptr;
    for (const MapEdge& e : edges_) {
      if (e.kind == kind && e.target == target) {
        if (found) return nullptr;  // ambiguous
        found = &e;
      }
    }
    return found;
  }

  /// Superposition kinds present in the map graph, ascending.
  std::vector<int> kinds() const {
    std::vector<int> out;
    for (const MapEdge& e : edges_)
      if (std::find(out.begin(), out.end(), e.kind) == out.end()) out.push_back(e.kind);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Kinds usable for joint (two-system) superpositions. Kind 3 is
  /// excluded: its argument-order law has no joint extension.
  std::vector<int> joint_kinds() const {
    std::vector<int> out;
    for (int k : kinds())
      if (k != 3) out.push_back(k);
    return out;
  }

  /// Stable identity for memoization of derived structure.
  std::uint64_t fingerprint() const { return fingerprint_; }

  nlohmann::json to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const MapEdge& e : edges_) {
      edges.push_back({{"kind", e.kind},
                       {"source", std::string(1, domain_char(e.source))},
                       {"target", std::string(1, domain_char(e.target))},
                       {"imagePlus", e.image_plus},
                       {"imageMinus", e.image_minus}});
    }
    nlohmann::json doms = nlohmann::json::array();
    for (Domain d : domains_) doms.push_back(std::string(1, domain_char(d)));
    return {{"schema", 1},
            {"variant", to_string(variant_)},
            {"domains", doms},
            {"statesPerDomain", kStatesPerDomain},
            {"edges", edges}};
  }

  /// Raw escape hatch for the consistency checker: build a config from
  /// an explicit edge list.
  static ModelConfig from_json(const nlohmann::json& j) {
    if (!j.contains("variant") || !j.contains("domains") || !j.contains("edges"))
      throw Error("config json requires variant, domains and edges");
    Variant v = variant_from_string(j.at("variant").get<std::string>());
    std::vector<Domain> domains;
    for (const auto& dj : j.at("domains")) {
      const std::string s = dj.get<std::string>();
      auto d = s.size() == 1 ? domain_from_char(s[0]) : std::nullopt;
      if (!d) throw Error("bad domain label: " + s);
      domains.push_back(*d);
    }
    std::vector<MapEdge> edges;
    for (const auto& ej : j.at("edges")) {
      const std::string src = ej.at("source").get<std::string>();
      const std::string tgt = ej.at("target").get<std::string>();
      auto s = src.size() == 1 ? domain_from_char(src[0]) : std::nullopt;
      auto t = tgt.size() == 1 ? domain_from_char(tgt[0]) : std::nullopt;
      if (!s || !t) throw Error("bad edge domain label");
      edges.push_back({ej.at("kind").get<int>(), *s, *t,
                       ej.at("imagePlus").get<std::uint8_t>(),
                       ej.at("imageMinus").get<std::uint8_t>()});
    }
    return ModelConfig(v, std::move(domains), std::move(edges));
  }

 private:
  ModelConfig(Variant v, std::vector<Domain> domains, std::vector<MapEdge> edges)
      : variant_(v), domains_(std::move(domains)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < domains_.size(); ++i)
      for (std::size_t k = i + 1; k < domains_.size(); ++k)
        if (domains_[i] == domains_[k]) throw Error("duplicate domain label");
    for (const MapEdge& e : edges_) {
      if (e.kind < 1 || e.kind > 3) throw Error("edge kind out of range");
      if (!has_domain(e.source) || !has_domain(e.target))
        throw Error("edge touches a domain outside the config");
      if (e.image_plus > 1 || e.image_minus > 1 || e.image_plus == e.image_minus)
        throw Error("edge images must be 0 and 1 in some order");
    }
    fingerprint_ = static_cast<std::uint64_t>(variant_) + 0x9e3779b97f4a7c15ULL;
    for (const MapEdge& e : edges_) {
      std::uint64_t h = static_cast<std::uint64_t>(e.kind) << 12 |
                        static_cast<std::uint64_t>(e.source) << 8 |
                        static_cast<std::uint64_t>(e.target) << 4 |
                        static_cast<std::uint64_t>(e.image_plus) << 1 |
                        static_cast<std::uint64_t>(e.image_minus);
      fingerprint_ = (fingerprint_ ^ h) * 0x100000001b3ULL;
    }
  }

  Variant variant_;
  std::vector<Domain> domains_;
  std::vector<MapEdge> edges_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace ontic
