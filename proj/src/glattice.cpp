#include "shagraph/glattice.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace shagraph::glattice {

using abelian::InvariantFactors;
using abelian::PresentedGroup;

struct FiniteGroup::Data {
    unsigned degree = 0;
    std::vector<Permutation> elements; // lexicographically sorted, identity first
    std::vector<Permutation> generators;
    std::vector<std::vector<unsigned>> mul;
    std::vector<unsigned> inv;
};

namespace {

Permutation compose_perm(const Permutation& a, const Permutation& b) {
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
}

Permutation identity_perm(unsigned degree) {
    Permutation p(degree);
    std::iota(p.begin(), p.end(), 0u);
    return p;
}

void check_permutation(const Permutation& p, unsigned degree) {
    if (p.size() != degree) throw schema_error("permutation length differs from degree");
    std::vector<bool> seen(degree, false);
    for (unsigned x : p) {
        if (x >= degree || seen[x]) throw schema_error("not a permutation");
        seen[x] = true;
    }
}

} // namespace

FiniteGroup::FiniteGroup(unsigned degree, std::vector<Permutation> generators,
                         unsigned max_order) {
    for (const auto& p : generators) check_permutation(p, degree);

    std::set<Permutation> closure;
    std::vector<Permutation> frontier{identity_perm(degree)};
    closure.insert(frontier.front());
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& e : frontier)
            for (const auto& g : generators) {
                Permutation p = compose_perm(g, e);
                if (closure.insert(p).second) {
                    if (closure.size() > max_order)
                        throw limit_error("group order exceeds the configured bound of " +
                                          std::to_string(max_order));
                    next.push_back(std::move(p));
                }
            }
        frontier = std::move(next);
    }

    auto data = std::make_shared<Data>();
    data->degree = degree;
    data->elements.assign(closure.begin(), closure.end()); // set order = lex order
    data->generators = std::move(generators);

    const std::size_t n = data->elements.size();
    auto index_of_perm = [&](const Permutation& p) {
        auto it = std::lower_bound(data->elements.begin(), data->elements.end(), p);
        return static_cast<unsigned>(it - data->elements.begin());
    };
    data->mul.assign(n, std::vector<unsigned>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            data->mul[i][j] = index_of_perm(compose_perm(data->elements[i], data->elements[j]));
    data->inv.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (data->mul[i][j] == 0) data->inv[i] = static_cast<unsigned>(j);

    d_ = std::move(data);
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup(1, {}); }

FiniteGroup FiniteGroup::cyclic(unsigned n) {
    if (n == 0) throw schema_error("cyclic group needs n >= 1");
    if (n == 1) return trivial();
    Permutation rot(n);
    for (unsigned i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    return FiniteGroup(n, {rot});
}

FiniteGroup FiniteGroup::klein_four() {
    return FiniteGroup(4, {{1, 0, 3, 2}, {2, 3, 0, 1}});
}

FiniteGroup FiniteGroup::symmetric(unsigned n, unsigned max_order) {
    if (n == 0) throw schema_error("symmetric group needs n >= 1");
    if (n == 1) return trivial();
    Permutation swap01 = identity_perm(n);
    std::swap(swap01[0], swap01[1]);
    Permutation rot(n);
    for (unsigned i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    return FiniteGroup(n, {swap01, rot}, max_order);
}

FiniteGroup FiniteGroup::dihedral(unsigned n, unsigned max_order) {
    if (n < 3) throw schema_error("dihedral group needs n >= 3");
    Permutation rot(n), refl(n);
    for (unsigned i = 0; i < n; ++i) {
        rot[i] = (i + 1) % n;
        refl[i] = (n - i) % n;
    }
    return FiniteGroup(n, {rot, refl}, max_order);
}

unsigned FiniteGroup::degree() const { return d_->degree; }
std::size_t FiniteGroup::order() const { return d_->elements.size(); }
const Permutation& FiniteGroup::element(unsigned i) const { return d_->elements[i]; }
const std::vector<Permutation>& FiniteGroup::generators() const { return d_->generators; }
unsigned FiniteGroup::multiply(unsigned i, unsigned j) const { return d_->mul[i][j]; }
unsigned FiniteGroup::inverse(unsigned i) const { return d_->inv[i]; }

std::optional<unsigned> FiniteGroup::index_of(const Permutation& p) const {
    auto it = std::lower_bound(d_->elements.begin(), d_->elements.end(), p);
    if (it == d_->elements.end() || *it != p) return std::nullopt;
    return static_cast<unsigned>(it - d_->elements.begin());
}

bool FiniteGroup::same_group(const FiniteGroup& o) const {
    return d_ == o.d_ || (d_->degree == o.d_->degree && d_->elements == o.d_->elements);
}

Subgroup::Subgroup(FiniteGroup parent, std::vector<unsigned> elements)
    : parent_(std::move(parent)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    if (elements_.empty() || elements_.front() != parent_.identity())
        throw schema_error("subgroup must contain the identity");
    for (unsigned a : elements_) {
        if (a >= parent_.order()) throw schema_error("subgroup element out of range");
        if (!std::binary_search(elements_.begin(), elements_.end(), parent_.inverse(a)))
            throw schema_error("subgroup not closed under inverse");
        for (unsigned b : elements_)
            if (!std::binary_search(elements_.begin(), elements_.end(), parent_.multiply(a, b)))
                throw schema_error("subgroup not closed under multiplication");
    }
}

Subgroup Subgroup::generated(const FiniteGroup& parent, const std::vector<unsigned>& gens) {
    std::set<unsigned> closure{parent.identity()};
    std::vector<unsigned> frontier{parent.identity()};
    while (!frontier.empty()) {
        std::vector<unsigned> next;
        for (unsigned e : frontier)
            for (unsigned g : gens) {
                unsigned p = parent.multiply(g, e);
                if (closure.insert(p).second) next.push_back(p);
            }
        frontier = std::move(next);
    }
    return Subgroup(parent, std::vector<unsigned>(closure.begin(), closure.end()));
}

Subgroup Subgroup::generated_by_perms(const FiniteGroup& parent,
                                      const std::vector<Permutation>& gens) {
    std::vector<unsigned> idx;
    for (const auto& p : gens) {
        auto i = parent.index_of(p);
        if (!i) throw schema_error("subgroup generator is not an element of the group");
        idx.push_back(*i);
    }
    return generated(parent, idx);
}

Subgroup Subgroup::trivial(const FiniteGroup& parent) {
    return Subgroup(parent, {parent.identity()});
}

Subgroup Subgroup::full(const FiniteGroup& parent) {
    std::vector<unsigned> all(parent.order());
    std::iota(all.begin(), all.end(), 0u);
    return Subgroup(parent, std::move(all));
}

bool Subgroup::contains(unsigned element) const {
    return std::binary_search(elements_.begin(), elements_.end(), element);
}

bool Subgroup::contains_subgroup(const Subgroup& o) const {
    if (!parent_.same_group(o.parent_)) throw mismatch_error("subgroups of different groups");
    return std::includes(elements_.begin(), elements_.end(), o.elements_.begin(),
                         o.elements_.end());
}

bool Subgroup::is_normal() const {
    for (unsigned g = 0; g < parent_.order(); ++g)
        for (unsigned h : elements_)
            if (!contains(parent_.multiply(parent_.multiply(g, h), parent_.inverse(g))))
                return false;
    return true;
}

Subgroup Subgroup::conjugate(unsigned g) const {
    std::vector<unsigned> conj;
    conj.reserve(elements_.size());
    for (unsigned h : elements_)
        conj.push_back(parent_.multiply(parent_.multiply(g, h), parent_.inverse(g)));
    return Subgroup(parent_, std::move(conj));
}

std::vector<Subgroup> subgroups(const FiniteGroup& g) {
    std::set<std::vector<unsigned>> seen;
    std::vector<std::vector<unsigned>> frontier;
    std::vector<unsigned> triv{g.identity()};
    seen.insert(triv);
    frontier.push_back(triv);
    while (!frontier.empty()) {
        std::vector<std::vector<unsigned>> next;
        for (const auto& h : frontier)
            for (unsigned x = 0; x < g.order(); ++x) {
                if (std::binary_search(h.begin(), h.end(), x)) continue;
                std::vector<unsigned> gens = h;
                gens.push_back(x);
                auto grown = Subgroup::generated(g, gens).elements();
                if (seen.insert(grown).second) next.push_back(std::move(grown));
            }
        frontier = std::move(next);
    }
    std::vector<std::vector<unsigned>> sorted(seen.begin(), seen.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::vector<Subgroup> out;
    out.reserve(sorted.size());
    for (auto& e : sorted) out.emplace_back(g, std::move(e));
    return out;
}

std::vector<std::vector<std::size_t>> conjugacy_classes(const std::vector<Subgroup>& subs) {
    std::map<std::vector<unsigned>, std::size_t> index;
    for (std::size_t i = 0; i < subs.size(); ++i) index[subs[i].elements()] = i;
    std::vector<bool> used(subs.size(), false);
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (used[i]) continue;
        const FiniteGroup& g = subs[i].parent();
        std::set<std::size_t> members;
        for (unsigned x = 0; x < g.order(); ++x) {
            auto it = index.find(subs[i].conjugate(x).elements());
            if (it == index.end())
                throw verification_error("conjugate of an enumerated subgroup is missing");
            members.insert(it->second);
        }
        for (std::size_t m : members) used[m] = true;
        classes.emplace_back(members.begin(), members.end());
    }
    return classes;
}

std::vector<Subgroup> conjugacy_class_representatives(const FiniteGroup& g) {
    auto subs = subgroups(g);
    std::vector<Subgroup> reps;
    for (const auto& cls : conjugacy_classes(subs)) reps.push_back(subs[cls.front()]);
    return reps;
}

GLattice::GLattice(FiniteGroup group, std::size_t rank, std::vector<IntMat> action_per_element)
    : group_(std::move(group)), rank_(rank), action_(std::move(action_per_element)) {
    if (action_.size() != group_.order())
        throw schema_error("lattice action: one matrix per group element required");
    for (const auto& a : action_)
        if (a.rows() != rank_ || a.cols() != rank_)
            throw schema_error("lattice action: matrix shape differs from rank");
    if (!action_[group_.identity()].is_identity())
        throw schema_error("lattice action: identity element must act as the identity");
    for (unsigned i = 0; i < group_.order(); ++i)
        for (unsigned j = 0; j < group_.order(); ++j)
            if (!(action_[i] * action_[j] == action_[group_.multiply(i, j)]))
                throw schema_error("lattice action: functional equation fails");
}

GLattice GLattice::from_generator_actions(const FiniteGroup& group, std::size_t rank,
                                          const std::vector<IntMat>& per_generator) {
    if (per_generator.size() != group.generators().size())
        throw schema_error("lattice action: one matrix per generator required");
    std::vector<unsigned> gen_idx;
    for (const auto& p : group.generators()) gen_idx.push_back(*group.index_of(p));

    std::vector<std::optional<IntMat>> act(group.order());
    act[group.identity()] = IntMat::identity(rank);
    std::vector<unsigned> frontier{group.identity()};
    while (!frontier.empty()) {
        std::vector<unsigned> next;
        for (unsigned e : frontier)
            for (std::size_t k = 0; k < gen_idx.size(); ++k) {
                unsigned f = group.multiply(gen_idx[k], e);
                if (!act[f]) {
                    act[f] = per_generator[k] * *act[e];
                    next.push_back(f);
                }
            }
        frontier = std::move(next);
    }
    std::vector<IntMat> full;
    full.reserve(group.order());
    for (auto& a : act) {
        if (!a) throw verification_error("generator word evaluation did not reach every element");
        full.push_back(std::move(*a));
    }
    return GLattice(group, rank, std::move(full));
}

GLattice GLattice::trivial(const FiniteGroup& group, std::size_t rank) {
    return GLattice(group, rank, std::vector<IntMat>(group.order(), IntMat::identity(rank)));
}

GLattice dual(const GLattice& m) {
    std::vector<IntMat> act;
    act.reserve(m.group().order());
    for (unsigned i = 0; i < m.group().order(); ++i)
        act.push_back(m.action(m.group().inverse(i)).transposed());
    return GLattice(m.group(), m.rank(), std::move(act));
}

GLattice permutation_lattice(const FiniteGroup& g, const Subgroup& h) {
    if (!g.same_group(h.parent()))
        throw mismatch_error("permutation lattice: subgroup of a different group");
    // Left cosets, ordered and identified by least element.
    std::vector<unsigned> coset_of(g.order(), g.order());
    std::vector<unsigned> reps;
    for (unsigned e = 0; e < g.order(); ++e) {
        if (coset_of[e] != g.order()) continue;
        unsigned idx = static_cast<unsigned>(reps.size());
        reps.push_back(e);
        for (unsigned x : h.elements()) coset_of[g.multiply(e, x)] = idx;
    }
    const std::size_t rank = reps.size();
    std::vector<IntMat> act;
    act.reserve(g.order());
    for (unsigned a = 0; a < g.order(); ++a) {
        IntMat p(rank, rank);
        for (std::size_t c = 0; c < rank; ++c) p(coset_of[g.multiply(a, reps[c])], c) = 1;
        act.push_back(std::move(p));
    }
    return GLattice(g, rank, std::move(act));
}

GLattice direct_sum(std::span<const GLattice> parts) {
    if (parts.empty()) throw schema_error("direct sum of no lattices");
    const FiniteGroup& g = parts.front().group();
    std::size_t rank = 0;
    for (const auto& p : parts) {
        if (!g.same_group(p.group())) throw mismatch_error("direct sum over different groups");
        rank += p.rank();
    }
    std::vector<IntMat> act;
    act.reserve(g.order());
    for (unsigned e = 0; e < g.order(); ++e) {
        IntMat a(rank, rank);
        std::size_t off = 0;
        for (const auto& p : parts) {
            a.paste(off, off, p.action(e));
            off += p.rank();
        }
        act.push_back(std::move(a));
    }
    return GLattice(g, rank, std::move(act));
}

GLattice quotient_lattice(const GLattice& m, const IntMat& sub, IntMat* projection) {
    const std::size_t n = m.rank(), s = sub.cols();
    if (sub.rows() != n) throw mismatch_error("quotient: sublattice lives in a different rank");
    abelian::SmithForm f = abelian::smith_normal_form(sub);
    if (f.rank != s) throw schema_error("quotient: sublattice columns are dependent");
    for (std::size_t i = 0; i < s; ++i)
        if (f.d(i, i) != 1) throw schema_error("quotient: sublattice is not saturated");

    IntMat pi = f.u.slice(s, 0, n - s, n);
    IntMat sigma = f.u_inv.slice(0, s, n, n - s);
    std::vector<IntMat> act;
    act.reserve(m.group().order());
    for (unsigned e = 0; e < m.group().order(); ++e) {
        if (!(pi * (m.action(e) * sub)).is_zero())
            throw schema_error("quotient: sublattice is not stable under the action");
        act.push_back(pi * m.action(e) * sigma);
    }
    if (projection) *projection = pi;
    return GLattice(m.group(), n - s, std::move(act));
}

GLattice norm_one_lattice(const FiniteGroup& g) {
    GLattice reg = permutation_lattice(g, Subgroup::trivial(g));
    IntMat norm(reg.rank(), 1);
    for (std::size_t i = 0; i < reg.rank(); ++i) norm(i, 0) = 1;
    return quotient_lattice(reg, norm);
}

IntMat fixed_sublattice(const Subgroup& h, const GLattice& m) {
    const std::size_t r = m.rank();
    std::size_t nontrivial = h.order() - 1;
    if (nontrivial == 0) return IntMat::identity(r);
    IntMat stacked(nontrivial * r, r);
    std::size_t row = 0;
    for (unsigned e : h.elements()) {
        if (e == h.parent().identity()) continue;
        stacked.paste(row, 0, m.action(e) - IntMat::identity(r));
        row += r;
    }
    return abelian::column_lattice_basis(abelian::kernel_basis(stacked));
}

namespace {

InvariantFactors lattice_quotient_invariants(const IntMat& basis, const IntMat& members) {
    auto coords = abelian::solve(basis, members);
    if (!coords)
        throw verification_error("cohomology: sublattice escaped its enclosing kernel lattice");
    return PresentedGroup(basis.cols(), coords->transposed()).invariants();
}

void require_same_group(const Subgroup& h, const GLattice& m, const char* what) {
    if (!h.parent().same_group(m.group()))
        throw mismatch_error(std::string(what) + ": subgroup of a different group");
}

} // namespace

InvariantFactors tate_h_minus1(const Subgroup& h, const GLattice& m) {
    require_same_group(h, m, "tate_h_minus1");
    const std::size_t r = m.rank();
    IntMat norm(r, r);
    for (unsigned e : h.elements()) norm = norm + m.action(e);
    IntMat ker = abelian::column_lattice_basis(abelian::kernel_basis(norm));

    IntMat aug(r, h.order() * r);
    std::size_t col = 0;
    for (unsigned e : h.elements()) {
        aug.paste(0, col, m.action(e) - IntMat::identity(r));
        col += r;
    }
    return lattice_quotient_invariants(ker, aug);
}

InvariantFactors tate_h0(const Subgroup& h, const GLattice& m) {
    require_same_group(h, m, "tate_h0");
    const std::size_t r = m.rank();
    IntMat fixed = fixed_sublattice(h, m);
    IntMat norm(r, r);
    for (unsigned e : h.elements()) norm = norm + m.action(e);
    return lattice_quotient_invariants(fixed, norm);
}

InvariantFactors h1(const Subgroup& h, const GLattice& m) {
    require_same_group(h, m, "h1");
    const std::size_t r = m.rank();
    const std::vector<unsigned>& hs = h.elements();
    const std::size_t n = hs.size();
    auto slot = [&](unsigned element) {
        return static_cast<std::size_t>(
            std::lower_bound(hs.begin(), hs.end(), element) - hs.begin());
    };

    // Cocycle condition c(gh) = c(g) + g c(h) over all pairs.
    IntMat d1(n * n * r, n * r);
    IntMat id = IntMat::identity(r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = (i * n + j) * r;
            d1.accumulate(row, j * r, m.action(hs[i]));
            d1.accumulate(row, i * r, id);
            const std::size_t k = slot(h.parent().multiply(hs[i], hs[j]));
            d1.accumulate(row, k * r, -id);
        }
    IntMat cocycles = abelian::column_lattice_basis(abelian::kernel_basis(d1));

    IntMat d0(n * r, r);
    for (std::size_t k = 0; k < n; ++k) d0.paste(k * r, 0, m.action(hs[k]) - id);
    return lattice_quotient_invariants(cocycles, d0);
}

namespace {

std::optional<Subgroup> h1_failure(const GLattice& m, unsigned parallelism = 1) {
    auto reps = conjugacy_class_representatives(m.group());
    if (parallelism <= 1 || reps.size() <= 1) {
        for (const auto& rep : reps)
            if (!h1(rep, m).is_trivial()) return rep;
        return std::nullopt;
    }
    std::vector<char> nontrivial(reps.size(), 0);
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    unsigned lanes = std::min<unsigned>(parallelism, static_cast<unsigned>(reps.size()));
    for (unsigned lane = 0; lane < lanes; ++lane)
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < reps.size(); i = next++)
                nontrivial[i] = h1(reps[i], m).is_trivial() ? 0 : 1;
        }));
    for (auto& w : workers) w.get();
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (nontrivial[i]) return reps[i];
    return std::nullopt;
}

std::string subgroup_str(const Subgroup& h) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < h.elements().size(); ++i) os << (i ? "," : "") << h.elements()[i];
    os << "}";
    return os.str();
}

} // namespace

bool is_flasque(const GLattice& m, unsigned parallelism) {
    return !h1_failure(dual(m), parallelism).has_value();
}

bool is_coflasque(const GLattice& m, unsigned parallelism) {
    return !h1_failure(m, parallelism).has_value();
}

void validate_sequence(const LatticeSequence& seq) {
    const FiniteGroup& g = seq.mid.group();
    if (!g.same_group(seq.sub.group()) || !g.same_group(seq.quot.group()))
        throw verification_error("sequence: lattices live over different groups");
    if (seq.sub.rank() + seq.quot.rank() != seq.mid.rank())
        throw verification_error("sequence: rank additivity fails");
    if (seq.inject.rows() != seq.mid.rank() || seq.inject.cols() != seq.sub.rank() ||
        seq.surject.rows() != seq.quot.rank() || seq.surject.cols() != seq.mid.rank())
        throw verification_error("sequence: map shapes are inconsistent");
    if (abelian::kernel_basis(seq.inject).cols() != 0)
        throw verification_error("sequence: injection has a kernel");
    abelian::SmithForm s = abelian::diagonal_only_smith(seq.surject);
    if (s.rank != seq.quot.rank())
        throw verification_error("sequence: surjection is not onto a full-rank image");
    for (std::size_t i = 0; i < s.rank; ++i)
        if (s.d(i, i) != 1) throw verification_error("sequence: surjection is not onto");
    if (!(seq.surject * seq.inject).is_zero())
        throw verification_error("sequence: composite of the two maps is nonzero");
    if (!abelian::same_column_lattice(seq.inject, abelian::kernel_basis(seq.surject)))
        throw verification_error("sequence: image of the injection differs from the kernel");
    for (unsigned e = 0; e < g.order(); ++e) {
        if (!(seq.mid.action(e) * seq.inject == seq.inject * seq.sub.action(e)))
            throw verification_error("sequence: injection is not equivariant");
        if (!(seq.quot.action(e) * seq.surject == seq.surject * seq.mid.action(e)))
            throw verification_error("sequence: surjection is not equivariant");
    }
}

FlasqueResolution flasque_resolution(const GLattice& t_hat) {
    const FiniteGroup& g = t_hat.group();
    GLattice m = dual(t_hat);
    const std::size_t r = m.rank();

    std::vector<GLattice> parts;
    std::vector<IntMat> blocks;
    std::vector<ResolutionSummand> summands;
    for (const auto& rep : conjugacy_class_representatives(g)) {
        IntMat fixed = fixed_sublattice(rep, m);
        if (fixed.cols() == 0) continue;
        GLattice coset_lattice = permutation_lattice(g, rep);
        // Coset basis element gH maps to g * v for each fixed generator v.
        std::vector<unsigned> reps_of_cosets;
        {
            std::vector<bool> seen(g.order(), false);
            for (unsigned e = 0; e < g.order(); ++e) {
                if (seen[e]) continue;
                reps_of_cosets.push_back(e);
                for (unsigned x : rep.elements()) seen[g.multiply(e, x)] = true;
            }
        }
        for (std::size_t c = 0; c < fixed.cols(); ++c) {
            IntMat v = fixed.column(c);
            IntMat block(r, coset_lattice.rank());
            for (std::size_t j = 0; j < reps_of_cosets.size(); ++j)
                block.paste(0, j, m.action(reps_of_cosets[j]) * v);
            parts.push_back(coset_lattice);
            blocks.push_back(std::move(block));
        }
        summands.push_back(ResolutionSummand{rep, fixed.cols()});
    }

    GLattice p = direct_sum(parts);
    IntMat pi(r, p.rank());
    std::size_t off = 0;
    for (const auto& b : blocks) {
        pi.paste(0, off, b);
        off += b.cols();
    }

    IntMat n_basis = abelian::column_lattice_basis(abelian::kernel_basis(pi));
    std::vector<IntMat> n_act;
    n_act.reserve(g.order());
    for (unsigned e = 0; e < g.order(); ++e) {
        auto x = abelian::solve(n_basis, p.action(e) * n_basis);
        if (!x) throw verification_error("resolution: kernel lattice is not action-stable");
        n_act.push_back(std::move(*x));
    }
    GLattice n(g, n_basis.cols(), std::move(n_act));

    FlasqueResolution res{
        LatticeSequence{t_hat, dual(p), dual(n), pi.transposed(), n_basis.transposed()},
        std::move(summands)};
    validate_sequence(res.seq);
    if (auto bad = h1_failure(n))
        throw verification_error("resolution: quotient lattice is not flasque at subgroup " +
                                 subgroup_str(*bad));
    return res;
}

} // namespace shagraph::glattice
