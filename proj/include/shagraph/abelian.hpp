#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shagraph/intmat.hpp"

namespace shagraph::abelian {

/// Canonical form of a finitely generated abelian group: Z^free_rank plus
/// cyclic factors Z/d1 x ... x Z/ds with d1 | d2 | ... and each di >= 2.
struct InvariantFactors {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    bool operator==(const InvariantFactors&) const = default;

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_finite() const { return free_rank == 0; }
    Int order() const; // throws on infinite groups

    /// "Z^r x Z/d1 x ... x Z/ds"; the trivial group prints as "0".
    std::string str() const;
};

/// Finitely generated abelian group presented as the cokernel of an integer
/// matrix: the quotient of Z^generators by the row span of the relations.
class PresentedGroup {
public:
    PresentedGroup() : PresentedGroup(0, IntMat(0, 0)) {}
    PresentedGroup(std::size_t generators, IntMat relations);

    static PresentedGroup free_group(std::size_t rank);
    static PresentedGroup cyclic(const Int& n); // n = 0 gives Z
    static PresentedGroup from_invariants(const InvariantFactors& f);

    std::size_t generators() const { return generators_; }
    const IntMat& relations() const { return relations_; }
    /// Canonical basis (columns) of the relation lattice in Z^generators.
    const IntMat& relation_lattice() const { return relation_basis_; }

    const InvariantFactors& invariants() const { return invariants_; }
    bool is_trivial() const { return invariants_.is_trivial(); }

    /// Every column of vecs lies in the relation lattice (i.e. is zero in the group).
    bool vanishes(const IntMat& vecs) const;

    /// Same generator count and same relation lattice.
    bool operator==(const PresentedGroup& o) const {
        return generators_ == o.generators_ && relation_basis_ == o.relation_basis_;
    }

private:
    std::size_t generators_ = 0;
    IntMat relations_;      // rows are relations
    IntMat relation_basis_; // canonical column basis of the relation lattice
    InvariantFactors invariants_;
};

/// Homomorphism between presented groups.  The matrix has shape
/// codomain-generators x domain-generators; well-definedness (relations of
/// the domain land in the codomain's relation lattice) is checked on
/// construction.
class GroupHom {
public:
    GroupHom(PresentedGroup domain, PresentedGroup codomain, IntMat matrix);

    static GroupHom zero(PresentedGroup domain, PresentedGroup codomain);
    static GroupHom identity(const PresentedGroup& g);

    const PresentedGroup& domain() const { return domain_; }
    const PresentedGroup& codomain() const { return codomain_; }
    const IntMat& matrix() const { return matrix_; }

    GroupHom negated() const;

private:
    PresentedGroup domain_, codomain_;
    IntMat matrix_;
};

/// Equality as homomorphisms (difference vanishes modulo codomain relations).
bool equal(const GroupHom& a, const GroupHom& b);

bool is_zero_hom(const GroupHom& h);

/// g after f.
GroupHom compose(const GroupHom& g, const GroupHom& f);

struct DirectSum {
    PresentedGroup group;
    std::vector<std::size_t> offsets; // generator offset of each summand
};
DirectSum direct_sum(std::span<const PresentedGroup> parts);

struct Subobject {
    PresentedGroup group;
    GroupHom inclusion; // into the ambient group
};

struct ImageParts {
    PresentedGroup group;
    GroupHom inclusion;  // image -> codomain
    GroupHom projection; // domain -> image
};

struct Quotient {
    PresentedGroup group;
    GroupHom projection; // ambient -> quotient
};

Subobject kernel(const GroupHom& h);
ImageParts image(const GroupHom& h);
Quotient cokernel(const GroupHom& h);

bool is_injective(const GroupHom& h);
bool is_surjective(const GroupHom& h);
bool is_isomorphism(const GroupHom& h);
bool is_zero_group(const PresentedGroup& g);

/// Representatives x with h(x) = y in the codomain, one column per column of
/// y (coordinates in codomain generators); nullopt if some column is not hit.
std::optional<IntMat> preimage(const GroupHom& h, const IntMat& y);

/// Two-sided inverse of an isomorphism; nullopt if h is not an isomorphism.
std::optional<GroupHom> inverse(const GroupHom& h);

/// Exactness at the middle of  dom(f) -> cod(f) = dom(g) -> cod(g):
/// g∘f = 0 and ker(g) ⊆ im(f).
bool is_exact_pair(const GroupHom& f, const GroupHom& g);

/// Presentation of the quotient (subgroup generated by gens + relations) / relations
/// inside `ambient`, with the natural map from column index to ambient class.
/// gens columns are coordinates in ambient generators.
Subobject spanned_subgroup(const PresentedGroup& ambient, const IntMat& gens);

} // namespace shagraph::abelian
