#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abcat/addfun.hpp"
#include "abcat/bitmatrix.hpp"
#include "abcat/matcat.hpp"
#include "abcat/regsite.hpp"
#include "abcat/report.hpp"

namespace abcat {

using NodeId = std::size_t;
using TripleId = std::size_t;

/// An element (j, f, epsilon) of E_J: a node, a map out of its value, and a
/// cover of that map's codomain.
struct Triple {
  NodeId node;
  GMor f;       // G(node) -> W
  Cover cover;  // W' ->> W
};

enum class NodeKind { Base, Refined, UpperBound };

std::string to_string(NodeKind k);

/// One materialized object of the refinement tower.
///
/// A node at stage d >= 1 is a pair (parent, T): the parent lives at stage d-1
/// and maps to the node of every triple in T. Its value is the limit over
/// G(parent) of the pullbacks G(parent) x_W W' of the triples, realized as a
/// subspace of G(parent) ⊕ W'_1 ⊕ ... ⊕ W'_t (triples in id order).
/// (parent', T') -> (parent, T) exists iff T ⊆ T' and parent' -> parent; a node
/// at a later stage maps to an earlier one through its parent.
struct IndexNode {
  NodeId id = 0;
  std::uint64_t fingerprint = 0;
  std::size_t depth = 0;
  NodeKind kind = NodeKind::Base;
  std::optional<NodeId> parent;
  std::vector<TripleId> triples;  // sorted
  GObj obj;
  /// Columns: basis of G(node) inside the ambient sum; parent block first,
  /// then one block per triple.
  BitMatrix basis;
  std::vector<std::size_t> block_offsets;  // row offset of each triple's W' block
  /// Every arrow out of this node, including the identity: target -> G(arrow).
  std::map<NodeId, BitMatrix> arrows;
};

/// A lazily materialized fragment of the directed index diagram of a point,
/// rooted at the one-object diagram with value U.
///
/// Single writer: refine_for and upper_bound mutate the store. Const queries
/// never create nodes.
class PointHandle {
 public:
  explicit PointHandle(GObj u);

  GObj base_obj() const { return base_obj_; }
  NodeId base() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<IndexNode>& nodes() const { return nodes_; }
  const IndexNode& node(NodeId id) const;

  const Triple& triple(TripleId id) const { return triples_.at(id); }
  std::size_t triple_count() const { return triples_.size(); }
  std::optional<TripleId> find_triple(const Triple& e) const;
  /// The node created by refine_for for this triple, if any.
  std::optional<NodeId> resolved_node(TripleId id) const;
  const std::map<TripleId, NodeId>& resolved_triples() const { return resolved_; }

  bool has_arrow(NodeId from, NodeId to) const;
  /// G(from -> to); throws std::out_of_range when there is no such arrow.
  const BitMatrix& arrow(NodeId from, NodeId to) const;
  GMor arrow_mor(NodeId from, NodeId to) const;

  /// Materializes (e.node, {e}): value pullback(e.f, epsilon), first projection
  /// as the arrow to e.node. Idempotent. Throws std::invalid_argument when the
  /// node is unknown or f does not start at its value.
  NodeId refine_for(const Triple& e);

  /// Least upper bound (a node mapping to both), materialized if needed.
  NodeId upper_bound(NodeId a, NodeId b);
  /// Least upper bound of a nonempty set of nodes.
  NodeId upper_bound(const std::vector<NodeId>& ids);

  /// The map G(node) -> W' carried by the node's block for `triple`.
  GMor block_projection(NodeId node, TripleId triple) const;

 private:
  NodeId intern(NodeId parent, std::vector<TripleId> triples);
  TripleId intern_triple(const Triple& e);
  std::optional<BitMatrix> compute_arrow(NodeId from, NodeId to) const;
  std::string triple_key(const Triple& e) const;

  GObj base_obj_;
  std::vector<IndexNode> nodes_;
  std::vector<Triple> triples_;
  std::map<std::string, TripleId> triple_index_;
  std::map<std::pair<NodeId, std::vector<TripleId>>, NodeId> node_index_;
  std::map<TripleId, NodeId> resolved_;
};

/// The point induced by the one-object diagram with value u.
PointHandle base_point(GObj u);

// ---------------------------------------------------------------------------
// u(V) = colim Hom(G(j), V)

/// A class of u(V): deterministic representative (smallest node id, then the
/// lexicographically smallest matrix) and the number of pairs it collects.
struct UClass {
  NodeId node;
  GMor map;  // G(node) -> V
  std::size_t members = 1;
};

/// Classes of pairs (node, f: G(node) -> v) over nodes with depth <= `depth`,
/// under the equivalence generated by the materialized arrows. Sorted by
/// representative.
std::vector<UClass> u_eval(const PointHandle& p, GObj v, std::size_t depth);

enum class WitnessPolicy {
  Resolved,  // the witness must come from the refinement made for this triple
  Any,       // any materialized node with a lift will do
};

/// (node, h) with epsilon ∘ h == f ∘ G(node -> e.node).
struct GoodnessWitness {
  NodeId node;
  GMor lift;  // G(node) -> W'
};

/// Searches nodes of depth <= max_depth for a witness that the class of
/// (e.node, e.f) lies in the image of u(epsilon).
std::optional<GoodnessWitness> goodness_witness(const PointHandle& p, const Triple& e, WitnessPolicy policy,
                                                std::size_t max_depth = static_cast<std::size_t>(-1));
bool is_good(const PointHandle& p, const Triple& e, WitnessPolicy policy,
             std::size_t max_depth = static_cast<std::size_t>(-1));

// ---------------------------------------------------------------------------
// Stalks F_p = colim F(G(j))

struct StalkElement {
  NodeId node;
  BitVector section;  // element of F(G(node))
};

/// The germ of s ∈ F(U) at the base node. Throws std::invalid_argument on a
/// dimension mismatch.
StalkElement stalk_elem(const PointHandle& p, const SheafAb& F, const BitVector& s);

/// F(G(to -> x.node)) applied to x.section. Requires the arrow.
BitVector transport(const PointHandle& p, const SheafAb& F, const StalkElement& x, NodeId to);

struct StalkComparison {
  enum class Verdict { Equal, DistinctAtDepth };
  Verdict verdict = Verdict::DistinctAtDepth;
  std::size_t depth = 0;
  /// DistinctAtDepth is final only when both germs sit at the base node.
  bool conclusive = false;
  std::optional<NodeId> witness;  // node where the two germs agree
  BitMatrix witness_x, witness_y;  // G(witness -> x.node), G(witness -> y.node)

  bool equal() const { return verdict == Verdict::Equal; }
};

/// Compares two germs. Base-node pairs take the fast path (equal iff the
/// sections are equal); otherwise materialized nodes of depth <= `depth` are
/// searched for a common refinement where the sections agree.
StalkComparison stalk_eq(const PointHandle& p, const SheafAb& F, const StalkElement& x, const StalkElement& y,
                         std::size_t depth);
/// The same comparison with the fast path disabled.
StalkComparison stalk_eq_search(const PointHandle& p, const SheafAb& F, const StalkElement& x,
                                const StalkElement& y, std::size_t depth);

// ---------------------------------------------------------------------------
// Verification

struct PointAxiomOptions {
  /// Resolve the triple induced by each (class, cover) pair before checking it.
  bool resolve_on_demand = true;
  /// Deepest stage whose nodes generate the classes compared in the pullback
  /// and finite-limit sections. u(X) grows roughly like 2^(dim X * dim G(j))
  /// per node, so stage 2 is already out of reach for exhaustive comparison.
  std::size_t frame_depth = 1;
};

/// Checks the point axioms for u over the materialized fragment:
///  - cover-surjectivity: every class of u(W) lies in the image of u(epsilon)
///    for every cover into W. With on-demand resolution, classes first seen at
///    stage s < depth are refined and must be lifted by their own refinement
///    at stage s + 1; classes at stage `depth` need a lift inside the fragment.
///    Without it, every class needs a refinement already in the store;
///  - pullback-bijection: u(U' x_U V) -> u(U') x_u(U) u(V) is a bijection;
///  - finite-limits: u preserves the terminal object, binary products and
///    equalizers.
/// Objects range over dimensions <= bound, the fragment over depth <= depth.
/// Classes in the last two sections are generated by the base and refined
/// nodes of stage <= min(depth, frame_depth) and compared at their least upper
/// bound, materialized on demand.
Report check_point_axioms(PointHandle& p, std::size_t bound, std::size_t depth, const PointAxiomOptions& options = {});

/// Stalkwise test of whether phi: F -> G is an isomorphism, using the points
/// base_point(U) for U in `us` (all objects <= bound when empty). Germs are
/// counted on the fragment refined along every cover into U when depth >= 1.
/// The verdict is cross-checked against the components phi_W for W <= bound.
/// Throws std::invalid_argument when F or G fails check_sheaf at bound.
Report conservativity_check(const NatTrans& phi, const std::vector<GObj>& us, std::size_t bound, std::size_t depth);

}  // namespace abcat
