#pragma once

// Deterministic random instances for property tests: presented groups in
// diagonal form, valid homomorphisms between them, decorated graphs, and
// labeled reduction trees.

#include <random>

#include "shagraph/reduction.hpp"

namespace testgen {

using namespace shagraph;
using abelian::GroupHom;
using abelian::Int;
using abelian::IntMat;
using abelian::PresentedGroup;
using glattice::FiniteGroup;
using glattice::Subgroup;

using Rng = std::mt19937_64;

inline long pick(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline PresentedGroup random_diag_group(Rng& rng, bool allow_free = true, int max_torsion = 2) {
    abelian::InvariantFactors f;
    int torsion = static_cast<int>(pick(rng, 0, max_torsion));
    Int d = 1;
    static const long primes[] = {2, 2, 3, 4, 6};
    for (int i = 0; i < torsion; ++i) {
        d *= primes[pick(rng, 0, 4)];
        f.torsion.push_back(d); // keeps the divisibility chain
    }
    if (allow_free && pick(rng, 0, 3) == 0) f.free_rank = 1;
    return PresentedGroup::from_invariants(f);
}

// Orders of the diagonal generators: torsion factors first, then 0 for free.
inline std::vector<Int> generator_orders(const PresentedGroup& g) {
    std::vector<Int> orders(g.invariants().torsion);
    orders.resize(g.generators(), Int(0));
    return orders;
}

/// Random well-defined hom between diagonally presented groups.
inline GroupHom random_hom(Rng& rng, const PresentedGroup& dom, const PresentedGroup& cod) {
    std::vector<Int> dord = generator_orders(dom), cord = generator_orders(cod);
    IntMat m(cod.generators(), dom.generators());
    for (std::size_t j = 0; j < cod.generators(); ++j)
        for (std::size_t i = 0; i < dom.generators(); ++i) {
            if (dord[i] == 0) {
                m(j, i) = pick(rng, -2, 2);
            } else if (cord[j] == 0) {
                m(j, i) = 0; // torsion cannot map to a free generator
            } else {
                Int step = cord[j] / gcd(cord[j], dord[i]);
                m(j, i) = step * pick(rng, -2, 2);
            }
        }
    return GroupHom(dom, cod, std::move(m));
}

/// Random automorphism: signs plus one compatible unipotent shear.
inline GroupHom random_iso(Rng& rng, const PresentedGroup& g) {
    std::vector<Int> orders = generator_orders(g);
    const std::size_t n = g.generators();
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = pick(rng, 0, 1) ? 1 : -1;
    if (n >= 2) {
        std::size_t i = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 1));
        std::size_t j = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 1));
        if (i != j) {
            // shear: generator i also maps onto c * generator j
            Int c = pick(rng, -2, 2);
            if (orders[i] != 0) {
                if (orders[j] == 0)
                    c = 0;
                else
                    c *= orders[j] / gcd(orders[j], orders[i]);
            }
            m(j, i) += c;
        }
    }
    GroupHom h(g, g, std::move(m));
    if (!abelian::is_isomorphism(h)) return GroupHom::identity(g);
    return h;
}

struct RandomDecorated {
    decograph::Graph graph;
    decograph::CoefficientSystem system;
    decograph::HalfEdge redundant; // guaranteed redundant half-edge
};

/// Connected random decorated graph (loops and multi-edges allowed) with at
/// least one redundant half-edge.
inline RandomDecorated random_decorated_graph(Rng& rng, std::size_t max_vertices) {
    const std::size_t n = static_cast<std::size_t>(pick(rng, 2, static_cast<long>(max_vertices)));
    std::vector<std::string> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));

    std::vector<decograph::Graph::Edge> edges;
    std::size_t edge_counter = 0;
    auto add_edge = [&](std::size_t a, std::size_t b) {
        edges.push_back(decograph::Graph::Edge{"e" + std::to_string(edge_counter++),
                                               {vertices[a], vertices[b]}});
    };
    for (std::size_t i = 1; i < n; ++i) add_edge(static_cast<std::size_t>(pick(rng, 0, i - 1)), i);
    std::size_t extras = static_cast<std::size_t>(pick(rng, 0, 2));
    for (std::size_t k = 0; k < extras; ++k) {
        std::size_t a = static_cast<std::size_t>(pick(rng, 0, n - 1));
        std::size_t b = static_cast<std::size_t>(pick(rng, 0, n - 1));
        add_edge(a, b); // may be a loop or multi-edge
    }

    std::map<std::string, PresentedGroup> vg;
    for (const auto& v : vertices) vg.emplace(v, random_diag_group(rng));
    std::map<std::string, PresentedGroup> eg;
    std::map<decograph::HalfEdge, GroupHom> hm;

    // One designated tree edge (never a loop) gets an isomorphism on one side.
    std::size_t special = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 2));
    int special_side = static_cast<int>(pick(rng, 0, 1));

    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& e = edges[ei];
        PresentedGroup group =
            (ei == special) ? vg.at(e.ends[special_side]) : random_diag_group(rng);
        eg.emplace(e.id, group);
        for (int side = 0; side < 2; ++side) {
            if (ei == special && side == special_side)
                hm.emplace(decograph::HalfEdge{e.id, side}, random_iso(rng, group));
            else
                hm.emplace(decograph::HalfEdge{e.id, side},
                           random_hom(rng, vg.at(e.ends[side]), eg.at(e.id)));
        }
    }
    decograph::Graph graph(vertices, edges);
    decograph::CoefficientSystem system(std::move(vg), std::move(eg), std::move(hm));
    system.validate_against(graph);
    return RandomDecorated{std::move(graph), std::move(system),
                           decograph::HalfEdge{edges[special].id, special_side}};
}

inline std::vector<std::pair<std::string, FiniteGroup>> group_catalog_order_le(unsigned max) {
    std::vector<std::pair<std::string, FiniteGroup>> all = {
        {"1", FiniteGroup::trivial()},
        {"C2", FiniteGroup::cyclic(2)},
        {"C3", FiniteGroup::cyclic(3)},
        {"C4", FiniteGroup::cyclic(4)},
        {"V4", FiniteGroup::klein_four()},
        {"C5", FiniteGroup::cyclic(5)},
        {"C6", FiniteGroup::cyclic(6)},
        {"S3", FiniteGroup::symmetric(3)},
        {"C7", FiniteGroup::cyclic(7)},
        {"C8", FiniteGroup::cyclic(8)},
        {"D4", FiniteGroup::dihedral(4)},
        {"C2xC4", FiniteGroup(6, {{1, 0, 2, 3, 4, 5}, {0, 1, 3, 4, 5, 2}})},
        {"C2xC2xC2", FiniteGroup(6, {{1, 0, 2, 3, 4, 5}, {0, 1, 3, 2, 4, 5}, {0, 1, 2, 3, 5, 4}})},
    };
    std::erase_if(all, [max](const auto& e) { return e.second.order() > max; });
    return all;
}

inline Subgroup random_subgroup_of(Rng& rng, const std::vector<Subgroup>& subs,
                                   const Subgroup& upper) {
    std::vector<const Subgroup*> ok;
    for (const auto& s : subs)
        if (upper.contains_subgroup(s)) ok.push_back(&s);
    return *ok[static_cast<std::size_t>(pick(rng, 0, static_cast<long>(ok.size()) - 1))];
}

inline Subgroup random_subgroup_containing(Rng& rng, const std::vector<Subgroup>& subs,
                                           const Subgroup& lower) {
    std::vector<const Subgroup*> ok;
    for (const auto& s : subs)
        if (s.contains_subgroup(lower)) ok.push_back(&s);
    return *ok[static_cast<std::size_t>(pick(rng, 0, static_cast<long>(ok.size()) - 1))];
}

/// Random monotonic labeled tree.  The root is a component; with
/// root_label_full the root carries the whole group (the shadow of a closed
/// fiber with a rational component), which keeps base changes connected.
inline reduction::ReductionGraph random_monotonic_tree(Rng& rng, const FiniteGroup& g,
                                                       std::size_t max_components,
                                                       bool root_label_full = true) {
    auto subs = glattice::subgroups(g);
    std::size_t n_components = static_cast<std::size_t>(pick(rng, 1, static_cast<long>(max_components)));

    std::vector<reduction::ReductionGraph::Component> components;
    std::vector<reduction::ReductionGraph::Point> points;
    std::vector<reduction::ReductionGraph::Branch> branches;

    Subgroup root_label = root_label_full ? Subgroup::full(g)
                                          : random_subgroup_of(rng, subs, Subgroup::full(g));
    components.push_back({"U0", root_label, reduction::ComponentKind::rational});
    // Attach each later component through a fresh point; labels shrink away
    // from the root, and a point's child component must repeat its label.
    for (std::size_t i = 1; i < n_components; ++i) {
        std::size_t parent = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(i) - 1));
        Subgroup point_label = random_subgroup_of(rng, subs, components[parent].label);
        std::string pid = "P" + std::to_string(points.size());
        std::string uid = "U" + std::to_string(i);
        points.push_back({pid, point_label});
        components.push_back({uid, point_label, reduction::ComponentKind::rational});
        branches.push_back({pid, components[parent].id});
        branches.push_back({pid, uid});
    }
    // A few marked points of degree one.
    std::size_t marked = static_cast<std::size_t>(pick(rng, 0, 2));
    for (std::size_t k = 0; k < marked; ++k) {
        std::size_t on = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n_components) - 1));
        Subgroup lab = random_subgroup_of(rng, subs, components[on].label);
        std::string pid = "P" + std::to_string(points.size());
        points.push_back({pid, lab});
        branches.push_back({pid, components[on].id});
    }
    return reduction::ReductionGraph(g, std::move(points), std::move(components),
                                     std::move(branches));
}

/// Random labeled tree constrained only by the branch containment.
inline reduction::ReductionGraph random_labeled_tree(Rng& rng, const FiniteGroup& g,
                                                     std::size_t max_components) {
    auto subs = glattice::subgroups(g);
    std::size_t n_components = static_cast<std::size_t>(pick(rng, 1, static_cast<long>(max_components)));

    std::vector<reduction::ReductionGraph::Component> components;
    std::vector<reduction::ReductionGraph::Point> points;
    std::vector<reduction::ReductionGraph::Branch> branches;

    components.push_back(
        {"U0", random_subgroup_of(rng, subs, Subgroup::full(g)), reduction::ComponentKind::rational});
    for (std::size_t i = 1; i < n_components; ++i) {
        std::size_t parent = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(i) - 1));
        Subgroup point_label = random_subgroup_of(rng, subs, components[parent].label);
        Subgroup next_label = random_subgroup_containing(rng, subs, point_label);
        std::string pid = "P" + std::to_string(points.size());
        std::string uid = "U" + std::to_string(i);
        points.push_back({pid, point_label});
        components.push_back({uid, next_label, reduction::ComponentKind::rational});
        branches.push_back({pid, components[parent].id});
        branches.push_back({pid, uid});
    }
    std::size_t marked = static_cast<std::size_t>(pick(rng, 0, 2));
    for (std::size_t k = 0; k < marked; ++k) {
        std::size_t on = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n_components) - 1));
        std::string pid = "P" + std::to_string(points.size());
        points.push_back({pid, random_subgroup_of(rng, subs, components[on].label)});
        branches.push_back({pid, components[on].id});
    }
    return reduction::ReductionGraph(g, std::move(points), std::move(components),
                                     std::move(branches));
}

/// Connected graph whose vertices are all labeled by the full group; extra
/// degree-two points between distinct components create cycles.
inline reduction::ReductionGraph random_all_full_label_graph(Rng& rng, const FiniteGroup& g,
                                                             std::size_t max_components,
                                                             std::size_t max_extra_cycles) {
    Subgroup full = Subgroup::full(g);
    std::size_t n = static_cast<std::size_t>(pick(rng, 1, static_cast<long>(max_components)));
    std::vector<reduction::ReductionGraph::Component> components;
    std::vector<reduction::ReductionGraph::Point> points;
    std::vector<reduction::ReductionGraph::Branch> branches;
    for (std::size_t i = 0; i < n; ++i)
        components.push_back({"U" + std::to_string(i), full, reduction::ComponentKind::rational});
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t parent = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(i) - 1));
        std::string pid = "P" + std::to_string(points.size());
        points.push_back({pid, full});
        branches.push_back({pid, components[parent].id});
        branches.push_back({pid, components[i].id});
    }
    if (n >= 2) {
        std::size_t cycles = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(max_extra_cycles)));
        for (std::size_t k = 0; k < cycles; ++k) {
            std::size_t a = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 1));
            std::size_t b = static_cast<std::size_t>(pick(rng, 0, static_cast<long>(n) - 1));
            if (a == b) b = (b + 1) % n;
            std::string pid = "P" + std::to_string(points.size());
            points.push_back({pid, full});
            branches.push_back({pid, components[a].id});
            branches.push_back({pid, components[b].id});
        }
    }
    return reduction::ReductionGraph(g, std::move(points), std::move(components),
                                     std::move(branches));
}

/// Random table covering the labels of the graph.  Restriction maps are
/// random homs; when a stored chain fails to compose, all restrictions drop
/// to zero maps (always consistent).
inline reduction::CohomologyTable random_table_for(Rng& rng,
                                                   const reduction::ReductionGraph& rg) {
    std::map<reduction::LabelKey, PresentedGroup> groups;
    auto add_label = [&](const Subgroup& s) {
        auto key = reduction::key_of(s);
        if (!groups.count(key)) groups.emplace(key, random_diag_group(rng, false, 2));
    };
    for (const auto& p : rg.points()) add_label(p.label);
    for (const auto& u : rg.components()) add_label(u.label);

    std::map<std::pair<reduction::LabelKey, reduction::LabelKey>, GroupHom> restrictions;
    for (const auto& b : rg.branches()) {
        auto from = reduction::key_of(rg.component(b.component).label);
        auto to = reduction::key_of(rg.point(b.point).label);
        if (from == to || restrictions.count({from, to})) continue;
        restrictions.emplace(std::make_pair(from, to),
                             random_hom(rng, groups.at(from), groups.at(to)));
    }
    try {
        return reduction::CohomologyTable(groups, restrictions);
    } catch (const schema_error&) {
        for (auto& [key, hom] : restrictions)
            hom = GroupHom::zero(groups.at(key.first), groups.at(key.second));
        return reduction::CohomologyTable(groups, restrictions);
    }
}

} // namespace testgen
