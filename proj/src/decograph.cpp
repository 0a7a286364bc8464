#include "shagraph/decograph.hpp"

#include <algorithm>
#include <set>

namespace shagraph::decograph {

using abelian::DirectSum;

Graph::Graph(std::vector<std::string> vertices, std::vector<Graph::Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw schema_error("graph: duplicate vertex id");
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        if (edges_[i].id == edges_[i + 1].id) throw schema_error("graph: duplicate edge id");
    for (const Edge& e : edges_)
        for (const std::string& v : e.ends)
            if (!has_vertex(v))
                throw schema_error("graph: edge '" + e.id + "' attached to unknown vertex '" +
                                   v + "'");
}

std::size_t Graph::vertex_index(const std::string& id) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
    if (it == vertices_.end() || *it != id) throw schema_error("graph: unknown vertex '" + id + "'");
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t Graph::edge_index(const std::string& id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Edge& e, const std::string& s) { return e.id < s; });
    if (it == edges_.end() || it->id != id) throw schema_error("graph: unknown edge '" + id + "'");
    return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::has_vertex(const std::string& id) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), id);
}

std::size_t Graph::degree(const std::string& vertex) const {
    std::size_t d = 0;
    for (const Edge& e : edges_)
        for (const std::string& v : e.ends)
            if (v == vertex) ++d;
    return d;
}

std::size_t Graph::component_count() const {
    if (vertices_.empty()) return 0;
    std::vector<std::size_t> parent(vertices_.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : edges_) {
        std::size_t a = find(vertex_index(e.ends[0])), b = find(vertex_index(e.ends[1]));
        parent[a] = b;
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(i));
    return roots.size();
}

bool Graph::is_tree() const {
    return is_connected() && edges_.size() + 1 == vertices_.size();
}

std::size_t Graph::cycle_rank() const {
    return edges_.size() + component_count() - vertices_.size();
}

CoefficientSystem::CoefficientSystem(std::map<std::string, PresentedGroup> vertex_groups,
                                     std::map<std::string, PresentedGroup> edge_groups,
                                     std::map<HalfEdge, GroupHom> half_edge_maps)
    : vertex_groups_(std::move(vertex_groups)), edge_groups_(std::move(edge_groups)),
      half_edge_maps_(std::move(half_edge_maps)) {}

const PresentedGroup& CoefficientSystem::vertex_group(const std::string& id) const {
    auto it = vertex_groups_.find(id);
    if (it == vertex_groups_.end()) throw schema_error("system: no group for vertex '" + id + "'");
    return it->second;
}

const PresentedGroup& CoefficientSystem::edge_group(const std::string& id) const {
    auto it = edge_groups_.find(id);
    if (it == edge_groups_.end()) throw schema_error("system: no group for edge '" + id + "'");
    return it->second;
}

const GroupHom& CoefficientSystem::half_edge_map(const HalfEdge& he) const {
    auto it = half_edge_maps_.find(he);
    if (it == half_edge_maps_.end())
        throw schema_error("system: no map for half-edge (" + he.edge + ", " +
                           std::to_string(he.side) + ")");
    return it->second;
}

void CoefficientSystem::validate_against(const Graph& g) const {
    for (const std::string& v : g.vertices()) vertex_group(v);
    for (const auto& e : g.edges()) {
        const PresentedGroup& ge = edge_group(e.id);
        for (int side = 0; side < 2; ++side) {
            const GroupHom& m = half_edge_map({e.id, side});
            if (!(m.domain() == vertex_group(e.ends[side])) || !(m.codomain() == ge))
                throw mismatch_error("system: half-edge map of ('" + e.id +
                                     "') does not match the incidence");
        }
    }
    if (vertex_groups_.size() != g.vertices().size() || edge_groups_.size() != g.edges().size())
        throw mismatch_error("system: decorations do not match the graph");
}

CochainComplex cochain_complex(const Graph& g, const CoefficientSystem& a) {
    a.validate_against(g);
    std::vector<PresentedGroup> vparts, eparts;
    for (const std::string& v : g.vertices()) vparts.push_back(a.vertex_group(v));
    for (const auto& e : g.edges()) eparts.push_back(a.edge_group(e.id));
    DirectSum c0 = abelian::direct_sum(vparts);
    DirectSum c1 = abelian::direct_sum(eparts);

    IntMat d(c1.group.generators(), c0.group.generators());
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
        const auto& e = g.edges()[ei];
        for (int side = 0; side < 2; ++side) {
            const GroupHom& m = a.half_edge_map({e.id, side});
            d.accumulate(c1.offsets[ei], c0.offsets[g.vertex_index(e.ends[side])], m.matrix());
        }
    }
    return CochainComplex{c0.group, c1.group, GroupHom(c0.group, c1.group, std::move(d)),
                          std::move(c0.offsets), std::move(c1.offsets)};
}

InvariantFactors h0(const Graph& g, const CoefficientSystem& a) {
    return abelian::kernel(cochain_complex(g, a).d).group.invariants();
}

InvariantFactors h1(const Graph& g, const CoefficientSystem& a) {
    return abelian::cokernel(cochain_complex(g, a).d).group.invariants();
}

TopologicalH1 topological_h1(const Graph& g, const PresentedGroup& a0) {
    TopologicalH1 out;
    out.connected = g.is_connected();
    out.cycle_rank = g.cycle_rank();
    std::vector<PresentedGroup> copies(out.cycle_rank, a0);
    out.value = abelian::direct_sum(copies).group.invariants();
    return out;
}

CoefficientSystem constant_system(const Graph& g, const PresentedGroup& a0) {
    std::map<std::string, PresentedGroup> vg, eg;
    std::map<HalfEdge, GroupHom> hm;
    GroupHom id = GroupHom::identity(a0);
    for (const std::string& v : g.vertices()) vg.emplace(v, a0);
    for (const auto& e : g.edges()) {
        eg.emplace(e.id, a0);
        hm.emplace(HalfEdge{e.id, 0}, id);
        hm.emplace(HalfEdge{e.id, 1}, id);
    }
    return CoefficientSystem(std::move(vg), std::move(eg), std::move(hm));
}

CoefficientSystem simplicial_system(const Graph& g, const PresentedGroup& a0,
                                    const std::map<std::string, int>& head_side) {
    std::map<std::string, PresentedGroup> vg, eg;
    std::map<HalfEdge, GroupHom> hm;
    GroupHom id = GroupHom::identity(a0);
    GroupHom neg = id.negated();
    for (const std::string& v : g.vertices()) vg.emplace(v, a0);
    for (const auto& e : g.edges()) {
        auto it = head_side.find(e.id);
        if (it == head_side.end() || (it->second != 0 && it->second != 1))
            throw schema_error("simplicial system: missing or bad head choice for edge '" +
                               e.id + "'");
        eg.emplace(e.id, a0);
        hm.emplace(HalfEdge{e.id, it->second}, id);
        hm.emplace(HalfEdge{e.id, 1 - it->second}, neg);
    }
    return CoefficientSystem(std::move(vg), std::move(eg), std::move(hm));
}

void validate_morphism(const Graph& g, const CoefficientSystem& from,
                       const CoefficientSystem& to, const SystemMorphism& mor) {
    from.validate_against(g);
    to.validate_against(g);
    auto vertex_map = [&](const std::string& v) -> const GroupHom& {
        auto it = mor.vertex_maps.find(v);
        if (it == mor.vertex_maps.end())
            throw schema_error("morphism: no map for vertex '" + v + "'");
        return it->second;
    };
    for (const std::string& v : g.vertices()) {
        const GroupHom& m = vertex_map(v);
        if (!(m.domain() == from.vertex_group(v)) || !(m.codomain() == to.vertex_group(v)))
            throw mismatch_error("morphism: vertex map of '" + v + "' has wrong ends");
    }
    for (const auto& e : g.edges()) {
        auto it = mor.edge_maps.find(e.id);
        if (it == mor.edge_maps.end())
            throw schema_error("morphism: no map for edge '" + e.id + "'");
        const GroupHom& me = it->second;
        if (!(me.domain() == from.edge_group(e.id)) || !(me.codomain() == to.edge_group(e.id)))
            throw mismatch_error("morphism: edge map of '" + e.id + "' has wrong ends");
        for (int side = 0; side < 2; ++side) {
            HalfEdge he{e.id, side};
            if (!abelian::equal(compose(to.half_edge_map(he), vertex_map(e.ends[side])),
                                compose(me, from.half_edge_map(he))))
                throw mismatch_error("morphism: square at half-edge ('" + e.id + "', " +
                                     std::to_string(side) + ") does not commute");
        }
    }
}

namespace {

// Block-diagonal matrix of a morphism on C^0 or C^1.
IntMat block_matrix(const std::map<std::string, GroupHom>& maps,
                    const std::vector<std::string>& order,
                    const std::vector<std::size_t>& from_offsets,
                    const std::vector<std::size_t>& to_offsets, std::size_t rows,
                    std::size_t cols) {
    IntMat m(rows, cols);
    for (std::size_t i = 0; i < order.size(); ++i)
        m.paste(to_offsets[i], from_offsets[i], maps.at(order[i]).matrix());
    return m;
}

std::vector<std::string> edge_ids(const Graph& g) {
    std::vector<std::string> ids;
    ids.reserve(g.edges().size());
    for (const auto& e : g.edges()) ids.push_back(e.id);
    return ids;
}

} // namespace

GroupHom h0_map(const Graph& g, const CoefficientSystem& from, const CoefficientSystem& to,
                const SystemMorphism& mor) {
    validate_morphism(g, from, to, mor);
    CochainComplex cf = cochain_complex(g, from), ct = cochain_complex(g, to);
    IntMat f0 = block_matrix(mor.vertex_maps, g.vertices(), cf.vertex_offset, ct.vertex_offset,
                             ct.c0.generators(), cf.c0.generators());
    abelian::Subobject kf = abelian::kernel(cf.d), kt = abelian::kernel(ct.d);
    auto x = abelian::solve(kt.inclusion.matrix(), f0 * kf.inclusion.matrix());
    if (!x) throw verification_error("h0_map: image left the kernel lattice");
    return GroupHom(kf.group, kt.group, std::move(*x));
}

GroupHom h1_map(const Graph& g, const CoefficientSystem& from, const CoefficientSystem& to,
                const SystemMorphism& mor) {
    validate_morphism(g, from, to, mor);
    CochainComplex cf = cochain_complex(g, from), ct = cochain_complex(g, to);
    IntMat f1 = block_matrix(mor.edge_maps, edge_ids(g), cf.edge_offset, ct.edge_offset,
                             ct.c1.generators(), cf.c1.generators());
    abelian::Quotient qf = abelian::cokernel(cf.d), qt = abelian::cokernel(ct.d);
    return GroupHom(qf.group, qt.group, std::move(f1));
}

bool SixTerm::all_exact() const {
    return std::all_of(exact_at.begin(), exact_at.end(), [](bool b) { return b; });
}

SixTerm six_term(const Graph& g, const CoefficientSystem& a, const CoefficientSystem& b,
                 const CoefficientSystem& c, const SystemMorphism& f, const SystemMorphism& gm) {
    validate_morphism(g, a, b, f);
    validate_morphism(g, b, c, gm);

    // Componentwise short exactness.
    auto check_component = [&](const GroupHom& fm, const GroupHom& gmap, const std::string& at) {
        if (!abelian::is_injective(fm))
            throw schema_error("six_term: first map not injective at " + at);
        if (!abelian::is_surjective(gmap))
            throw schema_error("six_term: second map not surjective at " + at);
        if (!abelian::is_exact_pair(fm, gmap))
            throw schema_error("six_term: sequence not exact at " + at);
    };
    for (const std::string& v : g.vertices())
        check_component(f.vertex_maps.at(v), gm.vertex_maps.at(v), "vertex '" + v + "'");
    for (const auto& e : g.edges())
        check_component(f.edge_maps.at(e.id), gm.edge_maps.at(e.id), "edge '" + e.id + "'");

    CochainComplex ca = cochain_complex(g, a), cb = cochain_complex(g, b),
                   cc = cochain_complex(g, c);
    abelian::Subobject k_a = abelian::kernel(ca.d), k_b = abelian::kernel(cb.d),
                       k_c = abelian::kernel(cc.d);
    abelian::Quotient q_a = abelian::cokernel(ca.d), q_b = abelian::cokernel(cb.d),
                      q_c = abelian::cokernel(cc.d);

    SixTerm out{k_a.group, k_b.group,          k_c.group,
                q_a.group, q_b.group,          q_c.group,
                h0_map(g, a, b, f), h0_map(g, b, c, gm),
                GroupHom::zero(k_c.group, q_a.group), // replaced below
                h1_map(g, a, b, f), h1_map(g, b, c, gm)};

    // Connecting map: lift a 0-cocycle of C along g, push through d_B, pull
    // back along f into C^1(A).
    IntMat f0 = block_matrix(f.vertex_maps, g.vertices(), ca.vertex_offset, cb.vertex_offset,
                             cb.c0.generators(), ca.c0.generators());
    IntMat f1 = block_matrix(f.edge_maps, edge_ids(g), ca.edge_offset, cb.edge_offset,
                             cb.c1.generators(), ca.c1.generators());
    IntMat g0 = block_matrix(gm.vertex_maps, g.vertices(), cb.vertex_offset, cc.vertex_offset,
                             cc.c0.generators(), cb.c0.generators());
    GroupHom g0_hom(cb.c0, cc.c0, g0);
    GroupHom f1_hom(ca.c1, cb.c1, f1);

    auto lift = abelian::preimage(g0_hom, k_c.inclusion.matrix());
    if (!lift) throw verification_error("six_term: surjection failed to lift a 0-cochain");
    IntMat pushed = cb.d.matrix() * *lift;
    auto pulled = abelian::preimage(f1_hom, pushed);
    if (!pulled) throw verification_error("six_term: connecting image escaped the subsystem");
    out.delta = GroupHom(k_c.group, q_a.group, std::move(*pulled));

    out.exact_at[0] = abelian::is_injective(out.f0);
    out.exact_at[1] = abelian::is_exact_pair(out.f0, out.g0);
    out.exact_at[2] = abelian::is_exact_pair(out.g0, out.delta);
    out.exact_at[3] = abelian::is_exact_pair(out.delta, out.f1);
    out.exact_at[4] = abelian::is_exact_pair(out.f1, out.g1);
    out.exact_at[5] = abelian::is_surjective(out.g1);
    return out;
}

bool is_redundant(const Graph& g, const CoefficientSystem& a, const HalfEdge& he) {
    if (he.side != 0 && he.side != 1) throw schema_error("half-edge side must be 0 or 1");
    const Graph::Edge& e = g.edge(he.edge);
    if (e.ends[0] == e.ends[1]) return false; // loop
    return abelian::is_isomorphism(a.half_edge_map(he));
}

Contracted contract(const Graph& g, const CoefficientSystem& a, const HalfEdge& alpha) {
    a.validate_against(g);
    if (!is_redundant(g, a, alpha))
        throw schema_error("contract: half-edge (" + alpha.edge + ", " +
                           std::to_string(alpha.side) + ") is not redundant");
    const Graph::Edge& e = g.edge(alpha.edge);
    const std::string near = e.ends[alpha.side];     // vanishing vertex
    const std::string far = e.ends[1 - alpha.side];  // surviving vertex, keeps its group

    const GroupHom& a_alpha = a.half_edge_map(alpha);
    const GroupHom& a_beta = a.half_edge_map({alpha.edge, 1 - alpha.side});
    GroupHom reattach = compose(inverse(a_alpha)->negated(), a_beta); // A_far -> A_near

    std::vector<std::string> vertices;
    for (const std::string& v : g.vertices())
        if (v != near) vertices.push_back(v);
    std::vector<Graph::Edge> edges;
    for (const auto& f : g.edges()) {
        if (f.id == alpha.edge) continue;
        Graph::Edge ne = f;
        for (auto& end : ne.ends)
            if (end == near) end = far;
        edges.push_back(std::move(ne));
    }
    Graph graph(std::move(vertices), std::move(edges));

    std::map<std::string, PresentedGroup> vg = a.vertex_groups();
    vg.erase(near);
    std::map<std::string, PresentedGroup> eg = a.edge_groups();
    eg.erase(alpha.edge);
    std::map<HalfEdge, GroupHom> hm;
    for (const auto& [he, hom] : a.half_edge_maps()) {
        if (he.edge == alpha.edge) continue;
        if (g.edge(he.edge).ends[he.side] == near)
            hm.emplace(he, compose(hom, reattach));
        else
            hm.emplace(he, hom);
    }
    CoefficientSystem system(std::move(vg), std::move(eg), std::move(hm));
    system.validate_against(graph);
    return Contracted{std::move(graph), std::move(system), far};
}

ContractionTrace contract_to_point(const Graph& g, const CoefficientSystem& a,
                                   const std::string& root) {
    a.validate_against(g);
    g.vertex_index(root);
    ContractionTrace out;
    out.final_graph = g;
    out.final_system = a;
    if (!g.is_tree()) return out;

    // Depths are fixed by the original tree; contraction only removes leaves.
    std::map<std::string, std::size_t> depth;
    depth[root] = 0;
    {
        std::vector<std::string> frontier{root};
        while (!frontier.empty()) {
            std::vector<std::string> next;
            for (const auto& v : frontier)
                for (const auto& e : g.edges())
                    for (int s = 0; s < 2; ++s)
                        if (e.ends[s] == v && !depth.count(e.ends[1 - s])) {
                            depth[e.ends[1 - s]] = depth[v] + 1;
                            next.push_back(e.ends[1 - s]);
                        }
            frontier = std::move(next);
        }
    }

    Graph cur = g;
    CoefficientSystem sys = a;
    while (!cur.edges().empty()) {
        std::string leaf;
        for (const auto& v : cur.vertices()) {
            if (v == root || cur.degree(v) != 1) continue;
            if (leaf.empty() || depth[v] > depth[leaf] || (depth[v] == depth[leaf] && v < leaf))
                leaf = v;
        }
        HalfEdge alpha;
        for (const auto& e : cur.edges())
            for (int s = 0; s < 2; ++s)
                if (e.ends[s] == leaf) alpha = HalfEdge{e.id, s};
        if (!is_redundant(cur, sys, alpha)) {
            out.obstruction = alpha;
            out.final_graph = std::move(cur);
            out.final_system = std::move(sys);
            return out;
        }
        Contracted c = contract(cur, sys, alpha);
        out.steps.push_back(alpha);
        cur = std::move(c.graph);
        sys = std::move(c.system);
    }
    out.contracted = true;
    out.final_graph = std::move(cur);
    out.final_system = std::move(sys);
    return out;
}

} // namespace shagraph::decograph
