#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "shagraph/abelian.hpp"

namespace shagraph::glattice {

using abelian::Int;
using abelian::IntMat;

/// Image vector of a permutation of {0, ..., degree-1}.
using Permutation = std::vector<unsigned>;

inline constexpr unsigned kDefaultMaxOrder = 64;

/// Finite permutation group with enumerated elements and multiplication
/// table.  Elements are sorted lexicographically, so the identity is always
/// element 0 and enumeration is deterministic.  Immutable; copies share data.
class FiniteGroup {
public:
    FiniteGroup(unsigned degree, std::vector<Permutation> generators,
                unsigned max_order = kDefaultMaxOrder);

    static FiniteGroup trivial();
    static FiniteGroup cyclic(unsigned n);
    static FiniteGroup klein_four();
    static FiniteGroup symmetric(unsigned n, unsigned max_order = kDefaultMaxOrder);
    static FiniteGroup dihedral(unsigned n, unsigned max_order = kDefaultMaxOrder);

    unsigned degree() const;
    std::size_t order() const;
    const Permutation& element(unsigned i) const;
    const std::vector<Permutation>& generators() const;
    unsigned multiply(unsigned i, unsigned j) const; // element(i) ∘ element(j)
    unsigned inverse(unsigned i) const;
    unsigned identity() const { return 0; }
    std::optional<unsigned> index_of(const Permutation& p) const;

    bool same_group(const FiniteGroup& o) const;

private:
    struct Data;
    std::shared_ptr<const Data> d_;
};

/// Subgroup given by a closed set of element indices of a parent group.
class Subgroup {
public:
    Subgroup(FiniteGroup parent, std::vector<unsigned> elements); // validates closure
    static Subgroup generated(const FiniteGroup& parent, const std::vector<unsigned>& gens);
    static Subgroup generated_by_perms(const FiniteGroup& parent,
                                       const std::vector<Permutation>& gens);
    static Subgroup trivial(const FiniteGroup& parent);
    static Subgroup full(const FiniteGroup& parent);

    const FiniteGroup& parent() const { return parent_; }
    const std::vector<unsigned>& elements() const { return elements_; } // sorted
    std::size_t order() const { return elements_.size(); }
    bool contains(unsigned element) const;
    bool contains_subgroup(const Subgroup& o) const;
    bool is_normal() const;
    Subgroup conjugate(unsigned g) const; // g H g^-1
    bool same_elements(const Subgroup& o) const { return elements_ == o.elements_; }

private:
    FiniteGroup parent_;
    std::vector<unsigned> elements_;
};

/// All subgroups, each exactly once, in a deterministic order
/// (by order, then by sorted element list).
std::vector<Subgroup> subgroups(const FiniteGroup& g);

/// Partition of subgroup indices into conjugacy classes; classes and members
/// in deterministic order.
std::vector<std::vector<std::size_t>> conjugacy_classes(const std::vector<Subgroup>& subs);

/// One representative per conjugacy class of subgroups.
std::vector<Subgroup> conjugacy_class_representatives(const FiniteGroup& g);

/// Integer lattice with an action of a finite group: one invertible integer
/// matrix per group element, satisfying the multiplication table.
class GLattice {
public:
    GLattice(FiniteGroup group, std::size_t rank, std::vector<IntMat> action_per_element);
    static GLattice from_generator_actions(const FiniteGroup& group, std::size_t rank,
                                           const std::vector<IntMat>& per_generator);
    static GLattice trivial(const FiniteGroup& group, std::size_t rank);

    const FiniteGroup& group() const { return group_; }
    std::size_t rank() const { return rank_; }
    const IntMat& action(unsigned element) const { return action_[element]; }

private:
    FiniteGroup group_;
    std::size_t rank_;
    std::vector<IntMat> action_;
};

/// Hom(M, Z) with the contragredient action (inverse transpose).
GLattice dual(const GLattice& m);

/// Z[G/H] with G permuting the coset basis.  Cosets ordered by least element.
GLattice permutation_lattice(const FiniteGroup& g, const Subgroup& h);

GLattice direct_sum(std::span<const GLattice> parts);

/// Z[G]/(N), N the sum of the group basis: the character lattice of the
/// norm-one torus of the extension with group G.  Rank |G| - 1.
GLattice norm_one_lattice(const FiniteGroup& g);

/// Quotient of m by a saturated, action-stable sublattice (columns of sub).
/// If projection is non-null it receives the quotient map matrix.
GLattice quotient_lattice(const GLattice& m, const IntMat& sub, IntMat* projection = nullptr);

/// Canonical basis (columns) of the sublattice fixed by every element of h.
IntMat fixed_sublattice(const Subgroup& h, const GLattice& m);

/// Tate cohomology in degree -1: ker(norm) / augmentation sublattice.
abelian::InvariantFactors tate_h_minus1(const Subgroup& h, const GLattice& m);

/// Tate cohomology in degree 0: fixed sublattice / image of the norm.
abelian::InvariantFactors tate_h0(const Subgroup& h, const GLattice& m);

/// First group cohomology from the truncated bar complex.
abelian::InvariantFactors h1(const Subgroup& h, const GLattice& m);

/// H^1(H, dual(m)) vanishes for (a representative of) every conjugacy class
/// of subgroups.  The per-class checks are independent; parallelism > 1
/// evaluates them on that many threads.
bool is_flasque(const GLattice& m, unsigned parallelism = 1);

/// H^1(H, m) vanishes likewise.
bool is_coflasque(const GLattice& m, unsigned parallelism = 1);

/// Exact sequence 0 -> sub -> mid -> quot -> 0 of lattices over one group.
/// inject: rank(sub) columns into rank(mid); surject: onto rank(quot).
struct LatticeSequence {
    GLattice sub, mid, quot;
    IntMat inject, surject;
};

/// Throws verification_error when any of: injectivity, surjectivity,
/// surject∘inject = 0, image = kernel, equivariance, rank additivity fails.
void validate_sequence(const LatticeSequence& seq);

struct ResolutionSummand {
    Subgroup stabilizer;
    std::size_t copies;
};

struct FlasqueResolution {
    LatticeSequence seq;                    // 0 -> T^ -> Q^ -> S^ -> 0
    std::vector<ResolutionSummand> summands; // permutation decomposition of Q^
};

/// Builds 0 -> t_hat -> Q^ -> S^ -> 0 with Q^ a sum of permutation lattices
/// and S^ flasque, then verifies the result; verification failure throws.
FlasqueResolution flasque_resolution(const GLattice& t_hat);

} // namespace shagraph::glattice
