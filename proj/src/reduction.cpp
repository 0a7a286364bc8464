#include "shagraph/reduction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace shagraph::reduction {

using decograph::CoefficientSystem;
using decograph::Graph;
using decograph::HalfEdge;
using decograph::SystemMorphism;

ReductionGraph::ReductionGraph(FiniteGroup context, std::vector<Point> points,
                               std::vector<Component> components, std::vector<Branch> branches)
    : context_(std::move(context)), points_(std::move(points)),
      components_(std::move(components)), branches_(std::move(branches)) {
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(points_.begin(), points_.end(), by_id);
    std::sort(components_.begin(), components_.end(), by_id);
    std::sort(branches_.begin(), branches_.end(), [](const Branch& a, const Branch& b) {
        return a.point != b.point ? a.point < b.point : a.component < b.component;
    });

    std::set<std::string> ids;
    for (const auto& p : points_) {
        if (!context_.same_group(p.label.parent()))
            throw schema_error("reduction graph: point label from a different group");
        if (!ids.insert(p.id).second) throw schema_error("reduction graph: duplicate id " + p.id);
    }
    for (const auto& c : components_) {
        if (!context_.same_group(c.label.parent()))
            throw schema_error("reduction graph: component label from a different group");
        if (!ids.insert(c.id).second) throw schema_error("reduction graph: duplicate id " + c.id);
    }

    std::vector<std::string> vertices(ids.begin(), ids.end());
    std::vector<Graph::Edge> edges;
    std::map<std::string, std::size_t> point_degree;
    std::map<std::pair<std::string, std::string>, std::size_t> multiplicity;
    for (const auto& b : branches_) {
        const Point& p = point(b.point);
        const Component& u = component(b.component);
        if (!u.label.contains_subgroup(p.label))
            throw schema_error("reduction graph: branch (" + b.point + ", " + b.component +
                               ") violates the label containment");
        std::size_t k = multiplicity[{b.point, b.component}]++;
        std::string id = b.point + "~" + b.component + "~" + std::to_string(k);
        edges.push_back(Graph::Edge{id, {b.component, b.point}});
        branch_ids_.push_back(std::move(id));
        if (++point_degree[b.point] > 2)
            throw schema_error("reduction graph: point " + b.point +
                               " lies on more than two branches");
    }
    graph_ = Graph(std::move(vertices), std::move(edges));
    if (!graph_.is_connected()) throw schema_error("reduction graph: not connected");
}

const ReductionGraph::Point& ReductionGraph::point(const std::string& id) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), id,
                               [](const Point& p, const std::string& s) { return p.id < s; });
    if (it == points_.end() || it->id != id)
        throw schema_error("reduction graph: unknown point " + id);
    return *it;
}

const ReductionGraph::Component& ReductionGraph::component(const std::string& id) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), id,
                               [](const Component& c, const std::string& s) { return c.id < s; });
    if (it == components_.end() || it->id != id)
        throw schema_error("reduction graph: unknown component " + id);
    return *it;
}

bool ReductionGraph::is_point(const std::string& id) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), id,
                               [](const Point& p, const std::string& s) { return p.id < s; });
    return it != points_.end() && it->id == id;
}

LabelKey key_of(const Subgroup& h) { return h.elements(); }

std::string label_str(const LabelKey& k) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << "}";
    return os.str();
}

CohomologyTable::CohomologyTable(std::map<LabelKey, PresentedGroup> groups,
                                 std::map<std::pair<LabelKey, LabelKey>, GroupHom> restrictions)
    : groups_(std::move(groups)), restrictions_(std::move(restrictions)) {
    validate();
}

const PresentedGroup& CohomologyTable::group_for(const Subgroup& label) const {
    auto it = groups_.find(key_of(label));
    if (it == groups_.end())
        throw schema_error("table: no group for label " + label_str(key_of(label)));
    return it->second;
}

GroupHom CohomologyTable::restriction_for(const Subgroup& from, const Subgroup& to) const {
    if (!from.contains_subgroup(to))
        throw schema_error("table: restriction requested along a non-inclusion");
    LabelKey kf = key_of(from), kt = key_of(to);
    if (kf == kt) return GroupHom::identity(group_for(from));
    auto it = restrictions_.find({kf, kt});
    if (it == restrictions_.end())
        throw schema_error("table: no restriction " + label_str(kf) + " -> " + label_str(kt));
    return it->second;
}

void CohomologyTable::validate() const {
    for (const auto& [key, hom] : restrictions_) {
        auto from = groups_.find(key.first), to = groups_.find(key.second);
        if (from == groups_.end() || to == groups_.end())
            throw schema_error("table: restriction between labels without groups");
        if (!(hom.domain() == from->second) || !(hom.codomain() == to->second))
            throw schema_error("table: restriction ends do not match the label groups");
        if (key.first == key.second && !abelian::equal(hom, GroupHom::identity(from->second)))
            throw schema_error("table: restriction on equal labels must be the identity");
    }
    // Composition compatibility wherever a full triple is stored.
    for (const auto& [ab, hom_ab] : restrictions_)
        for (const auto& [bc, hom_bc] : restrictions_) {
            if (ab.second != bc.first) continue;
            auto ac = restrictions_.find({ab.first, bc.second});
            if (ac == restrictions_.end()) continue;
            if (!abelian::equal(ac->second, compose(hom_bc, hom_ab)))
                throw schema_error("table: restrictions do not compose along " +
                                   label_str(ab.first) + " -> " + label_str(bc.second));
        }
}

namespace {

const CustomComponentData& custom_for(const CustomData& custom, const std::string& id) {
    auto it = custom.find(id);
    if (it == custom.end())
        throw schema_error("custom component " + id + " has no supplied data");
    return it->second;
}

} // namespace

BuiltSystem build_hk_system(const ReductionGraph& rg, const CohomologyTable& table,
                            const CustomData& custom) {
    std::map<std::string, PresentedGroup> vg, eg;
    std::map<HalfEdge, GroupHom> hm;
    for (const auto& p : rg.points()) vg.emplace(p.id, table.group_for(p.label));
    for (const auto& u : rg.components()) {
        if (u.kind == ComponentKind::rational)
            vg.emplace(u.id, table.group_for(u.label));
        else
            vg.emplace(u.id, custom_for(custom, u.id).group);
    }
    for (std::size_t i = 0; i < rg.branches().size(); ++i) {
        const auto& b = rg.branches()[i];
        const std::string& id = rg.branch_ids()[i];
        const auto& p = rg.point(b.point);
        const auto& u = rg.component(b.component);
        const PresentedGroup& edge_grp = table.group_for(p.label);
        eg.emplace(id, edge_grp);
        hm.emplace(HalfEdge{id, 1}, GroupHom::identity(edge_grp));
        if (u.kind == ComponentKind::rational) {
            hm.emplace(HalfEdge{id, 0}, table.restriction_for(u.label, p.label));
        } else {
            const auto& data = custom_for(custom, u.id);
            auto sp = data.specializations.find(id);
            if (sp == data.specializations.end())
                throw schema_error("custom component " + u.id +
                                   " is missing the specialization for branch " + id);
            if (!(sp->second.domain() == data.group) || !(sp->second.codomain() == edge_grp))
                throw schema_error("custom component " + u.id +
                                   ": specialization ends mismatch at branch " + id);
            hm.emplace(HalfEdge{id, 0}, sp->second);
        }
    }
    CoefficientSystem system(std::move(vg), std::move(eg), std::move(hm));
    system.validate_against(rg.graph());
    return BuiltSystem{rg.graph(), std::move(system)};
}

BuiltSystem build_hkappa_system(const ReductionGraph& rg, const CohomologyTable& table) {
    std::map<std::string, PresentedGroup> vg, eg;
    std::map<HalfEdge, GroupHom> hm;
    for (const auto& p : rg.points()) vg.emplace(p.id, table.group_for(p.label));
    for (const auto& u : rg.components()) vg.emplace(u.id, table.group_for(u.label));
    for (std::size_t i = 0; i < rg.branches().size(); ++i) {
        const auto& b = rg.branches()[i];
        const std::string& id = rg.branch_ids()[i];
        const auto& p = rg.point(b.point);
        const auto& u = rg.component(b.component);
        const PresentedGroup& edge_grp = table.group_for(p.label);
        eg.emplace(id, edge_grp);
        hm.emplace(HalfEdge{id, 1}, GroupHom::identity(edge_grp));
        hm.emplace(HalfEdge{id, 0}, table.restriction_for(u.label, p.label));
    }
    CoefficientSystem system(std::move(vg), std::move(eg), std::move(hm));
    system.validate_against(rg.graph());
    return BuiltSystem{rg.graph(), std::move(system)};
}

InvariantFactors sha(const ReductionGraph& rg, const CohomologyTable& table,
                     const CustomData& custom) {
    BuiltSystem built = build_hk_system(rg, table, custom);
    return decograph::h1(built.graph, built.system);
}

PhiReport phi_surjection(const ReductionGraph& rg, const CohomologyTable& table,
                         const CustomData& custom) {
    PhiReport out;
    out.all_rational = std::all_of(rg.components().begin(), rg.components().end(),
                                   [](const auto& u) { return u.kind == ComponentKind::rational; });
    for (const auto& u : rg.components()) {
        if (u.kind == ComponentKind::rational) continue;
        const auto& data = custom_for(custom, u.id);
        if (!data.generic_restriction) {
            out.unavailable_reason =
                "component " + u.id + " has no generic restriction; phi is unavailable";
            return out;
        }
    }
    out.available = true;

    BuiltSystem kappa = build_hkappa_system(rg, table);
    BuiltSystem hk = build_hk_system(rg, table, custom);

    SystemMorphism phi;
    for (const auto& p : rg.points())
        phi.vertex_maps.emplace(p.id, GroupHom::identity(table.group_for(p.label)));
    for (const auto& u : rg.components()) {
        if (u.kind == ComponentKind::rational)
            phi.vertex_maps.emplace(u.id, GroupHom::identity(table.group_for(u.label)));
        else
            phi.vertex_maps.emplace(u.id, *custom_for(custom, u.id).generic_restriction);
    }
    for (std::size_t i = 0; i < rg.branches().size(); ++i) {
        const auto& p = rg.point(rg.branches()[i].point);
        phi.edge_maps.emplace(rg.branch_ids()[i],
                              GroupHom::identity(table.group_for(p.label)));
    }
    decograph::validate_morphism(rg.graph(), kappa.system, hk.system, phi);

    auto d_kappa = decograph::cochain_complex(kappa.graph, kappa.system);
    auto d_k = decograph::cochain_complex(hk.graph, hk.system);
    out.h1_kappa = abelian::cokernel(d_kappa.d).group.invariants();
    out.h1_k = abelian::cokernel(d_k.d).group.invariants();
    out.image_contained = abelian::lattice_contains(
        abelian::hstack(d_k.d.matrix(), d_k.c1.relation_lattice()), d_kappa.d.matrix());
    out.surjective =
        abelian::is_surjective(decograph::h1_map(rg.graph(), kappa.system, hk.system, phi));
    out.equal = out.h1_kappa == out.h1_k;
    return out;
}

ShaP1Report sha_all_p1_report(const ReductionGraph& rg, const CohomologyTable& table) {
    const FiniteGroup& g = rg.context();
    Subgroup full = Subgroup::full(g);
    for (const auto& u : rg.components()) {
        if (u.kind != ComponentKind::rational)
            throw schema_error("shaP1: component " + u.id + " is not rational");
        if (!(key_of(u.label) == key_of(full)))
            throw schema_error("shaP1: component " + u.id + " is not labeled by the full group");
    }

    ShaP1Report out;
    out.cycle_rank = rg.graph().cycle_rank();
    const PresentedGroup& a_g = table.group_for(full);

    BuiltSystem hk = build_hk_system(rg, table);
    out.middle = decograph::h1(hk.graph, hk.system);

    CoefficientSystem constant = decograph::constant_system(rg.graph(), a_g);
    out.left = decograph::h1(rg.graph(), constant);
    out.left_matches_constant =
        out.left == decograph::topological_h1(rg.graph(), a_g).value;

    // Comparison morphism from the constant system, and its quotient system.
    SystemMorphism into;
    std::map<std::string, abelian::Quotient> point_quot;
    for (const auto& p : rg.points())
        point_quot.emplace(p.id, abelian::cokernel(table.restriction_for(full, p.label)));
    for (const auto& p : rg.points()) {
        out.point_quotients.emplace_back(p.id, point_quot.at(p.id).group.invariants());
        into.vertex_maps.emplace(p.id, table.restriction_for(full, p.label));
    }
    for (const auto& u : rg.components()) into.vertex_maps.emplace(u.id, GroupHom::identity(a_g));

    PresentedGroup zero;
    std::map<std::string, PresentedGroup> qvg, qeg;
    std::map<HalfEdge, GroupHom> qhm;
    SystemMorphism project;
    for (const auto& p : rg.points()) {
        qvg.emplace(p.id, point_quot.at(p.id).group);
        project.vertex_maps.emplace(p.id, point_quot.at(p.id).projection);
    }
    for (const auto& u : rg.components()) {
        qvg.emplace(u.id, zero);
        project.vertex_maps.emplace(u.id, GroupHom::zero(a_g, zero));
    }
    for (std::size_t i = 0; i < rg.branches().size(); ++i) {
        const auto& b = rg.branches()[i];
        const std::string& id = rg.branch_ids()[i];
        const auto& q = point_quot.at(b.point);
        qeg.emplace(id, q.group);
        qhm.emplace(HalfEdge{id, 1}, GroupHom::identity(q.group));
        qhm.emplace(HalfEdge{id, 0}, GroupHom::zero(zero, q.group));
        into.edge_maps.emplace(id, table.restriction_for(full, rg.point(b.point).label));
        project.edge_maps.emplace(id, q.projection);
    }
    CoefficientSystem quotient(std::move(qvg), std::move(qeg), std::move(qhm));

    out.right = decograph::h1(rg.graph(), quotient);
    GroupHom u_map = decograph::h1_map(rg.graph(), constant, hk.system, into);
    GroupHom v_map = decograph::h1_map(rg.graph(), hk.system, quotient, project);
    out.exact_at_right = abelian::is_surjective(v_map);
    out.exact_at_middle = abelian::is_exact_pair(u_map, v_map);
    return out;
}

namespace {

struct Adjacency {
    // vertex id -> list of (neighbor id, branch index)
    std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> adj;
};

Adjacency adjacency(const ReductionGraph& rg) {
    Adjacency a;
    for (const auto& v : rg.graph().vertices()) a.adj[v];
    for (std::size_t i = 0; i < rg.branches().size(); ++i) {
        const auto& b = rg.branches()[i];
        a.adj[b.point].emplace_back(b.component, i);
        a.adj[b.component].emplace_back(b.point, i);
    }
    return a;
}

const Subgroup& label_of(const ReductionGraph& rg, const std::string& id) {
    return rg.is_point(id) ? rg.point(id).label : rg.component(id).label;
}

} // namespace

MonotonicResult is_monotonic(const ReductionGraph& rg) {
    MonotonicResult out;
    out.tree = rg.graph().is_tree();
    if (!out.tree) return out;

    Adjacency a = adjacency(rg);
    std::optional<std::pair<std::string, std::string>> best_witness;
    std::size_t best_violations = 0;
    for (const auto& root : rg.graph().vertices()) {
        std::size_t violations = 0;
        std::optional<std::pair<std::string, std::string>> first;
        std::set<std::string> seen{root};
        std::vector<std::string> frontier{root};
        while (!frontier.empty()) {
            std::vector<std::string> next;
            for (const auto& v : frontier)
                for (const auto& [w, bi] : a.adj.at(v)) {
                    if (!seen.insert(w).second) continue;
                    if (!label_of(rg, v).contains_subgroup(label_of(rg, w))) {
                        ++violations;
                        if (!first) first = std::make_pair(v, w);
                    }
                    next.push_back(w);
                }
            frontier = std::move(next);
        }
        if (violations == 0) {
            out.monotonic = true;
            out.root = root;
            return out;
        }
        if (!best_witness || violations < best_violations) {
            best_witness = first;
            best_violations = violations;
        }
    }
    out.witness = best_witness;
    return out;
}

PsiResult psi_injection(const ReductionGraph& rg) {
    if (!rg.graph().is_tree()) throw schema_error("psi: reduction graph is not a tree");

    Adjacency a = adjacency(rg);
    std::vector<std::string> nodal;
    for (const auto& p : rg.points())
        if (a.adj.at(p.id).size() >= 2) nodal.push_back(p.id);

    // Admissible pairs: incident component with the same label.
    std::map<std::string, std::vector<std::string>> candidates;
    for (const auto& pid : nodal) {
        const Subgroup& lp = rg.point(pid).label;
        for (const auto& [uid, bi] : a.adj.at(pid))
            if (key_of(rg.component(uid).label) == key_of(lp)) candidates[pid].push_back(uid);
    }

    std::map<std::string, std::string> matched_to; // component -> point
    std::function<bool(const std::string&, std::set<std::string>&)> augment =
        [&](const std::string& pid, std::set<std::string>& visited) {
            for (const auto& uid : candidates[pid]) {
                if (visited.count(uid)) continue;
                visited.insert(uid);
                auto it = matched_to.find(uid);
                if (it == matched_to.end() || augment(it->second, visited)) {
                    matched_to[uid] = pid;
                    return true;
                }
            }
            return false;
        };

    PsiResult out;
    out.exists = true;
    for (const auto& pid : nodal) {
        std::set<std::string> visited;
        if (!augment(pid, visited)) {
            out.exists = false;
            out.unmatched_point = pid;
            break;
        }
    }
    if (out.exists)
        for (const auto& [uid, pid] : matched_to) out.psi[pid] = uid;

    out.monotonic = is_monotonic(rg).monotonic;
    if (out.monotonic != out.exists)
        throw verification_error("psi: matching disagrees with the monotonicity criterion");
    return out;
}

ReductionGraph base_change(const ReductionGraph& rg, const Subgroup& n) {
    const FiniteGroup& g = rg.context();
    if (!g.same_group(n.parent())) throw mismatch_error("base_change: subgroup of another group");
    if (!n.is_normal()) throw schema_error("base_change: subgroup is not normal");

    std::vector<glattice::Permutation> n_perms;
    for (unsigned e : n.elements()) n_perms.push_back(g.element(e));
    FiniteGroup new_context(g.degree(), n_perms, static_cast<unsigned>(g.order()));

    auto to_new_index = [&](unsigned old_index) {
        auto idx = new_context.index_of(g.element(old_index));
        if (!idx) throw verification_error("base_change: element escaped the subgroup");
        return *idx;
    };

    struct Fiber {
        std::vector<unsigned> coset_of; // old element -> double coset ordinal
        std::vector<unsigned> reps;     // least representative per double coset
    };
    auto double_cosets = [&](const Subgroup& h) {
        Fiber f;
        f.coset_of.assign(g.order(), static_cast<unsigned>(g.order()));
        for (unsigned e = 0; e < g.order(); ++e) {
            if (f.coset_of[e] != g.order()) continue;
            unsigned ordinal = static_cast<unsigned>(f.reps.size());
            f.reps.push_back(e);
            for (unsigned nn : n.elements())
                for (unsigned hh : h.elements())
                    f.coset_of[g.multiply(g.multiply(nn, e), hh)] = ordinal;
        }
        return f;
    };
    auto label_from_rep = [&](const Subgroup& h, unsigned rep) {
        std::vector<unsigned> members;
        for (unsigned hh : h.elements()) {
            unsigned conj = g.multiply(g.multiply(rep, hh), g.inverse(rep));
            if (n.contains(conj)) members.push_back(to_new_index(conj));
        }
        return Subgroup(new_context, std::move(members));
    };

    std::map<std::string, Fiber> fibers;
    for (const auto& p : rg.points()) fibers.emplace(p.id, double_cosets(p.label));
    for (const auto& u : rg.components()) fibers.emplace(u.id, double_cosets(u.label));

    auto vertex_id = [](const std::string& base, unsigned ordinal) {
        return base + "@" + std::to_string(ordinal);
    };

    std::vector<ReductionGraph::Branch> branches;
    for (const auto& b : rg.branches()) {
        const Fiber& fp = fibers.at(b.point);
        const Fiber& fu = fibers.at(b.component);
        for (unsigned k = 0; k < fp.reps.size(); ++k)
            branches.push_back(ReductionGraph::Branch{vertex_id(b.point, k),
                                                      vertex_id(b.component,
                                                                fu.coset_of[fp.reps[k]])});
    }

    std::vector<ReductionGraph::Component> components;
    for (const auto& u : rg.components()) {
        const Fiber& f = fibers.at(u.id);
        for (unsigned k = 0; k < f.reps.size(); ++k)
            components.push_back(ReductionGraph::Component{
                vertex_id(u.id, k), label_from_rep(u.label, f.reps[k]), u.kind});
    }

    // A point rep must conjugate its label inside every adjacent component
    // label; the least double-coset representative can fail this when the
    // intersection is not normal in n, so search the coset for one that works.
    std::vector<ReductionGraph::Point> points;
    for (const auto& p : rg.points()) {
        const Fiber& f = fibers.at(p.id);
        std::vector<std::vector<const ReductionGraph::Component*>> neighbors(f.reps.size());
        for (const auto& b : rg.branches()) {
            if (b.point != p.id) continue;
            const Fiber& fu = fibers.at(b.component);
            for (unsigned k = 0; k < f.reps.size(); ++k) {
                std::string cid = vertex_id(b.component, fu.coset_of[f.reps[k]]);
                for (const auto& c : components)
                    if (c.id == cid) neighbors[k].push_back(&c);
            }
        }
        for (unsigned k = 0; k < f.reps.size(); ++k) {
            std::optional<Subgroup> chosen;
            for (unsigned e = 0; e < g.order() && !chosen; ++e) {
                if (f.coset_of[e] != k) continue;
                Subgroup candidate = label_from_rep(p.label, e);
                bool ok = std::all_of(
                    neighbors[k].begin(), neighbors[k].end(),
                    [&](const auto* c) { return c->label.contains_subgroup(candidate); });
                if (ok) chosen = std::move(candidate);
            }
            if (!chosen)
                throw verification_error("base_change: no representative of point " + p.id +
                                         " keeps the label containment");
            points.push_back(ReductionGraph::Point{vertex_id(p.id, k), std::move(*chosen)});
        }
    }

    try {
        return ReductionGraph(new_context, std::move(points), std::move(components),
                              std::move(branches));
    } catch (const schema_error& e) {
        // The input was valid; a bad constructed graph is our failure.
        throw verification_error(std::string("base_change produced an invalid graph: ") +
                                 e.what());
    }
}

MonotonicTrivialReport monotonic_implies_trivial(const ReductionGraph& rg,
                                                 const CohomologyTable& table,
                                                 const CustomData& custom) {
    MonotonicTrivialReport out;
    out.monotonic = is_monotonic(rg);
    if (!out.monotonic.monotonic)
        throw schema_error("monotonic_implies_trivial: graph is not monotonic");

    BuiltSystem kappa = build_hkappa_system(rg, table);
    out.trace = decograph::contract_to_point(kappa.graph, kappa.system, out.monotonic.root);
    out.hkappa_h1 = decograph::h1(kappa.graph, kappa.system);
    out.sha_value = sha(rg, table, custom);
    out.verified =
        out.trace.contracted && out.hkappa_h1.is_trivial() && out.sha_value.is_trivial();
    return out;
}

} // namespace shagraph::reduction
