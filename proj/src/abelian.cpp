#include "shagraph/abelian.hpp"

#include <sstream>
#include <utility>

namespace shagraph::abelian {

Int InvariantFactors::order() const {
    if (free_rank != 0) throw mismatch_error("order of an infinite group");
    Int n = 1;
    for (const Int& d : torsion) n *= d;
    return n;
}

std::string InvariantFactors::str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (const Int& d : torsion) {
        if (!first) os << " x ";
        os << "Z/" << d.get_str();
        first = false;
    }
    return os.str();
}

PresentedGroup::PresentedGroup(std::size_t generators, IntMat relations)
    : generators_(generators), relations_(std::move(relations)) {
    if (relations_.cols() != generators_)
        throw mismatch_error("presentation: relation width differs from generator count");
    relation_basis_ = column_lattice_basis(relations_.transposed());
    SmithForm s = diagonal_only_smith(relations_);
    invariants_.free_rank = generators_ - s.rank;
    for (std::size_t i = 0; i < s.rank; ++i)
        if (s.d(i, i) >= 2) invariants_.torsion.push_back(s.d(i, i));
}

PresentedGroup PresentedGroup::free_group(std::size_t rank) {
    return PresentedGroup(rank, IntMat(0, rank));
}

PresentedGroup PresentedGroup::cyclic(const Int& n) {
    IntMat rel(1, 1);
    rel(0, 0) = n;
    return PresentedGroup(1, rel);
}

PresentedGroup PresentedGroup::from_invariants(const InvariantFactors& f) {
    const std::size_t s = f.torsion.size();
    const std::size_t n = s + f.free_rank;
    IntMat rel(s, n);
    for (std::size_t i = 0; i < s; ++i) rel(i, i) = f.torsion[i];
    return PresentedGroup(n, rel);
}

bool PresentedGroup::vanishes(const IntMat& vecs) const {
    if (vecs.rows() != generators_) throw mismatch_error("vanishes: coordinate length mismatch");
    return lattice_contains(relation_basis_, vecs);
}

GroupHom::GroupHom(PresentedGroup domain, PresentedGroup codomain, IntMat matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != codomain_.generators() || matrix_.cols() != domain_.generators())
        throw mismatch_error("hom: matrix shape differs from generator counts");
    if (!codomain_.vanishes(matrix_ * domain_.relation_lattice()))
        throw mismatch_error("hom: relations of the domain are not respected");
}

GroupHom GroupHom::zero(PresentedGroup domain, PresentedGroup codomain) {
    IntMat m(codomain.generators(), domain.generators());
    return GroupHom(std::move(domain), std::move(codomain), std::move(m));
}

GroupHom GroupHom::identity(const PresentedGroup& g) {
    return GroupHom(g, g, IntMat::identity(g.generators()));
}

GroupHom GroupHom::negated() const { return GroupHom(domain_, codomain_, -matrix_); }

bool equal(const GroupHom& a, const GroupHom& b) {
    if (!(a.domain() == b.domain()) || !(a.codomain() == b.codomain())) return false;
    return a.codomain().vanishes(a.matrix() - b.matrix());
}

bool is_zero_hom(const GroupHom& h) {
    return h.codomain().vanishes(h.matrix());
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (!(f.codomain() == g.domain()))
        throw mismatch_error("compose: codomain of the first map differs from domain of the second");
    return GroupHom(f.domain(), g.codomain(), g.matrix() * f.matrix());
}

DirectSum direct_sum(std::span<const PresentedGroup> parts) {
    std::size_t gens = 0, rels = 0;
    for (const auto& p : parts) {
        gens += p.generators();
        rels += p.relations().rows();
    }
    IntMat rel(rels, gens);
    std::vector<std::size_t> offsets;
    offsets.reserve(parts.size());
    std::size_t go = 0, ro = 0;
    for (const auto& p : parts) {
        offsets.push_back(go);
        rel.paste(ro, go, p.relations());
        go += p.generators();
        ro += p.relations().rows();
    }
    return DirectSum{PresentedGroup(gens, std::move(rel)), std::move(offsets)};
}

namespace {

// Canonical basis of { x : h(x) = 0 in the codomain }, i.e. the preimage of
// the codomain's relation lattice.
IntMat hom_kernel_lattice(const GroupHom& h) {
    const std::size_t n = h.domain().generators();
    IntMat stacked = hstack(h.matrix(), h.codomain().relation_lattice());
    IntMat full = kernel_basis(stacked);
    return column_lattice_basis(full.slice(0, 0, n, full.cols()));
}

} // namespace

Subobject kernel(const GroupHom& h) {
    IntMat basis = hom_kernel_lattice(h);
    const std::size_t k = basis.cols();
    auto coords = solve(basis, h.domain().relation_lattice());
    if (!coords) throw verification_error("kernel: domain relations escaped the kernel lattice");
    PresentedGroup grp(k, coords->transposed());
    GroupHom incl(grp, h.domain(), basis);
    return Subobject{std::move(grp), std::move(incl)};
}

ImageParts image(const GroupHom& h) {
    IntMat basis = hom_kernel_lattice(h);
    PresentedGroup grp(h.domain().generators(), basis.transposed());
    GroupHom incl(grp, h.codomain(), h.matrix());
    GroupHom proj(h.domain(), grp, IntMat::identity(h.domain().generators()));
    return ImageParts{std::move(grp), std::move(incl), std::move(proj)};
}

Quotient cokernel(const GroupHom& h) {
    IntMat rel = vstack(h.codomain().relations(), h.matrix().transposed());
    PresentedGroup grp(h.codomain().generators(), std::move(rel));
    GroupHom proj(h.codomain(), grp, IntMat::identity(h.codomain().generators()));
    return Quotient{std::move(grp), std::move(proj)};
}

bool is_injective(const GroupHom& h) { return kernel(h).group.is_trivial(); }

bool is_surjective(const GroupHom& h) { return cokernel(h).group.is_trivial(); }

bool is_isomorphism(const GroupHom& h) { return is_injective(h) && is_surjective(h); }

bool is_zero_group(const PresentedGroup& g) { return g.is_trivial(); }

std::optional<IntMat> preimage(const GroupHom& h, const IntMat& y) {
    if (y.rows() != h.codomain().generators())
        throw mismatch_error("preimage: coordinate length mismatch");
    const std::size_t n = h.domain().generators();
    auto sol = solve(hstack(h.matrix(), h.codomain().relation_lattice()), y);
    if (!sol) return std::nullopt;
    return sol->slice(0, 0, n, y.cols());
}

std::optional<GroupHom> inverse(const GroupHom& h) {
    auto back = preimage(h, IntMat::identity(h.codomain().generators()));
    if (!back) return std::nullopt;
    try {
        GroupHom inv(h.codomain(), h.domain(), *back);
        if (!equal(compose(inv, h), GroupHom::identity(h.domain()))) return std::nullopt;
        if (!equal(compose(h, inv), GroupHom::identity(h.codomain()))) return std::nullopt;
        return inv;
    } catch (const mismatch_error&) {
        return std::nullopt;
    }
}

bool is_exact_pair(const GroupHom& f, const GroupHom& g) {
    if (!(f.codomain() == g.domain()))
        throw mismatch_error("is_exact_pair: maps are not composable");
    if (!is_zero_hom(compose(g, f))) return false;
    IntMat ker = hom_kernel_lattice(g);
    IntMat im_gens = hstack(f.matrix(), g.domain().relation_lattice());
    return lattice_contains(im_gens, ker);
}

Subobject spanned_subgroup(const PresentedGroup& ambient, const IntMat& gens) {
    if (gens.rows() != ambient.generators())
        throw mismatch_error("spanned_subgroup: coordinate length mismatch");
    IntMat stacked = hstack(gens, ambient.relation_lattice());
    IntMat full = kernel_basis(stacked);
    IntMat rel = column_lattice_basis(full.slice(0, 0, gens.cols(), full.cols()));
    PresentedGroup grp(gens.cols(), rel.transposed());
    GroupHom incl(grp, ambient, gens);
    return Subobject{std::move(grp), std::move(incl)};
}

} // namespace shagraph::abelian
