#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shagraph/decograph.hpp"
#include "shagraph/glattice.hpp"

namespace shagraph::reduction {

using abelian::GroupHom;
using abelian::InvariantFactors;
using abelian::PresentedGroup;
using glattice::FiniteGroup;
using glattice::Subgroup;

enum class ComponentKind { rational, custom };

/// Bipartite graph of points and components of the reduced closed fiber of a
/// normal crossings model, with residue/constant fields encoded as subgroups
/// of a fixed finite Galois group (larger field = smaller subgroup).
///
/// Validated invariants: ids unique across both parts, every branch joins a
/// point to a component with H_P ⊆ H_U, the graph is connected, and every
/// point lies on at most two branches (normal crossings permit at most two
/// local branches through a closed point).
class ReductionGraph {
public:
    struct Point {
        std::string id;
        Subgroup label;
    };
    struct Component {
        std::string id;
        Subgroup label;
        ComponentKind kind = ComponentKind::rational;
    };
    struct Branch {
        std::string point;
        std::string component;
    };

    ReductionGraph(FiniteGroup context, std::vector<Point> points,
                   std::vector<Component> components, std::vector<Branch> branches);

    const FiniteGroup& context() const { return context_; }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<Component>& components() const { return components_; }
    const std::vector<Branch>& branches() const { return branches_; }

    const Point& point(const std::string& id) const;
    const Component& component(const std::string& id) const;
    bool is_point(const std::string& id) const;

    /// Underlying decorated-graph skeleton.  Branch k between P and U gets
    /// edge id "P~U~k"; side 0 is the component, side 1 the point.
    const decograph::Graph& graph() const { return graph_; }
    const std::vector<std::string>& branch_ids() const { return branch_ids_; }

private:
    FiniteGroup context_;
    std::vector<Point> points_;
    std::vector<Component> components_;
    std::vector<Branch> branches_;
    decograph::Graph graph_;
    std::vector<std::string> branch_ids_; // parallel to branches_
};

/// Subgroup identified by its sorted element indices.
using LabelKey = std::vector<unsigned>;
LabelKey key_of(const Subgroup& h);
std::string label_str(const LabelKey& k);

/// User-supplied values of H^1(·, S) per field label, with restriction maps
/// for the label inclusions the graph uses.  Equal labels always restrict
/// along the identity; stored maps must compose consistently on any chain
/// whose three restrictions are all present.
class CohomologyTable {
public:
    CohomologyTable() = default;
    CohomologyTable(std::map<LabelKey, PresentedGroup> groups,
                    std::map<std::pair<LabelKey, LabelKey>, GroupHom> restrictions);

    const std::map<LabelKey, PresentedGroup>& groups() const { return groups_; }
    const std::map<std::pair<LabelKey, LabelKey>, GroupHom>& restrictions() const {
        return restrictions_;
    }

    const PresentedGroup& group_for(const Subgroup& label) const;
    /// Restriction A_{from} -> A_{to}; requires to ⊆ from.
    GroupHom restriction_for(const Subgroup& from, const Subgroup& to) const;

    void validate() const; // shape + composition compatibility of stored maps

private:
    std::map<LabelKey, PresentedGroup> groups_;
    std::map<std::pair<LabelKey, LabelKey>, GroupHom> restrictions_;
};

/// Data for a component that is not a rational curve: the group standing for
/// H^1(k(U), S), one specialization map per incident branch, and optionally
/// the restriction from the constant-field group (needed for phi).
struct CustomComponentData {
    PresentedGroup group;
    std::map<std::string, GroupHom> specializations; // keyed by branch id
    std::optional<GroupHom> generic_restriction;     // A_{H_U} -> group
};

using CustomData = std::map<std::string, CustomComponentData>; // keyed by component id

struct BuiltSystem {
    decograph::Graph graph;
    decograph::CoefficientSystem system;
};

/// The coefficient system with H^1(k(U), S) on components: table groups with
/// restriction half-edge maps on rational components, supplied data on
/// custom ones; points carry their table group with identity maps.
BuiltSystem build_hk_system(const ReductionGraph& rg, const CohomologyTable& table,
                            const CustomData& custom = {});

/// The coefficient system with H^1(κ(ξ), S) everywhere (table only).
BuiltSystem build_hkappa_system(const ReductionGraph& rg, const CohomologyTable& table);

/// The local-global obstruction: h1 of the hk system.
InvariantFactors sha(const ReductionGraph& rg, const CohomologyTable& table,
                     const CustomData& custom = {});

struct PhiReport {
    bool available = false;
    std::string unavailable_reason;
    InvariantFactors h1_kappa, h1_k;
    bool image_contained = false; // im(d_kappa) ⊆ im(d_k) on one-cochains
    bool surjective = false;      // induced map on h1 is onto
    bool all_rational = false;
    bool equal = false;           // h1 values agree (guaranteed when all rational)
};

/// Builds both systems, the comparison morphism, and checks that the induced
/// map h1(kappa) -> h1(k) is onto.  Custom components need their
/// generic_restriction for the morphism to exist.
PhiReport phi_surjection(const ReductionGraph& rg, const CohomologyTable& table,
                         const CustomData& custom = {});

struct ShaP1Report {
    InvariantFactors left;   // Hom(H_1, A_G) = A_G^m
    InvariantFactors middle; // sha
    InvariantFactors right;  // h1 of the quotient system
    std::vector<std::pair<std::string, InvariantFactors>> point_quotients;
    std::size_t cycle_rank = 0;
    bool left_matches_constant = false; // A_G^m equals h1 of the constant system
    bool exact_at_middle = false;
    bool exact_at_right = false;
};

/// The right-exact sequence A_G^m -> sha -> prod_P A_{H_P}/im(A_G) -> 0 for
/// graphs whose components are all rational with full-group label.
ShaP1Report sha_all_p1_report(const ReductionGraph& rg, const CohomologyTable& table);

struct MonotonicResult {
    bool monotonic = false;
    bool tree = false;
    std::string root;
    /// For trees that fail: (parent, child) violating the label condition for
    /// the best candidate root.
    std::optional<std::pair<std::string, std::string>> witness;
};

/// Tree with some root such that labels grow away from it
/// (H_child ⊆ H_parent); all vertices are tried as roots.
MonotonicResult is_monotonic(const ReductionGraph& rg);

struct PsiResult {
    bool exists = false;
    std::map<std::string, std::string> psi; // nodal point -> component
    std::optional<std::string> unmatched_point;
    bool monotonic = false; // cross-check; always equals `exists` on valid input
};

/// Injection from nodal points to incident components with equal labels
/// (bipartite matching).  Input must be a tree.
PsiResult psi_injection(const ReductionGraph& rg);

/// Model of base change along the Galois subextension fixed by a normal
/// subgroup n: vertices split into double cosets N\G/H, branches follow the
/// coset maps, and labels become N ∩ gHg^-1 in the new context group n.
ReductionGraph base_change(const ReductionGraph& rg, const Subgroup& n);

struct MonotonicTrivialReport {
    MonotonicResult monotonic;
    decograph::ContractionTrace trace; // contraction of the hkappa system
    InvariantFactors hkappa_h1;
    InvariantFactors sha_value;
    bool verified = false; // contracted, both groups trivial
};

/// For a monotonic graph: contracts the hkappa system to the root and checks
/// that both h1(hkappa) and sha vanish.
MonotonicTrivialReport monotonic_implies_trivial(const ReductionGraph& rg,
                                                 const CohomologyTable& table,
                                                 const CustomData& custom = {});

} // namespace shagraph::reduction
