#include "shagraph/json_io.hpp"

#include <limits>

namespace shagraph::io {

using abelian::GroupHom;
using abelian::Int;
using decograph::CoefficientSystem;
using decograph::Graph;
using decograph::HalfEdge;
using reduction::CohomologyTable;
using reduction::ComponentKind;
using reduction::CustomComponentData;
using reduction::CustomData;
using reduction::LabelKey;
using reduction::ReductionGraph;

namespace {

[[noreturn]] void bad(const std::string& what) { throw schema_error("descriptor: " + what); }

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
    return j.at(name);
}

Int parse_int(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            bad("bad integer literal '" + j.get<std::string>() + "'");
        }
    }
    bad("expected an integer");
}

json int_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

unsigned parse_unsigned(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) bad(std::string(what) + " must be a nonnegative integer");
    return static_cast<unsigned>(j.get<std::int64_t>());
}

} // namespace

IntMat parse_matrix(const json& j) {
    if (!j.is_array()) bad("matrix must be an array of rows");
    std::vector<std::vector<Int>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) bad("matrix row must be an array");
        std::vector<Int> r;
        for (const auto& e : row) r.push_back(parse_int(e));
        rows.push_back(std::move(r));
    }
    return IntMat::from_rows(rows);
}

json matrix_json(const IntMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

PresentedGroup parse_group(const json& j) {
    if (!j.is_object()) bad("group must be an object");
    if (j.contains("free_rank") || j.contains("torsion")) {
        InvariantFactors f;
        if (j.contains("free_rank")) f.free_rank = parse_unsigned(j.at("free_rank"), "free_rank");
        if (j.contains("torsion"))
            for (const auto& d : j.at("torsion")) {
                Int v = parse_int(d);
                if (v < 2) bad("torsion entries must be >= 2");
                f.torsion.push_back(std::move(v));
            }
        return PresentedGroup::from_invariants(f);
    }
    if (j.contains("generators")) {
        std::size_t gens = parse_unsigned(field(j, "generators"), "generators");
        IntMat rel(0, gens);
        if (j.contains("relations")) {
            rel = parse_matrix(j.at("relations"));
            if (rel.rows() == 0) rel = IntMat(0, gens);
        }
        return PresentedGroup(gens, rel);
    }
    bad("group needs either invariants or a presentation");
}

json group_json(const PresentedGroup& g) {
    json j;
    j["generators"] = g.generators();
    j["relations"] = matrix_json(g.relations());
    return j;
}

json invariants_json(const InvariantFactors& f) {
    json j;
    j["free_rank"] = f.free_rank;
    json tor = json::array();
    for (const Int& d : f.torsion) tor.push_back(int_json(d));
    j["torsion"] = std::move(tor);
    j["str"] = f.str();
    return j;
}

FiniteGroup parse_finite_group(const json& j, unsigned max_order) {
    unsigned degree = parse_unsigned(field(j, "degree"), "degree");
    std::vector<glattice::Permutation> gens;
    for (const auto& p : field(j, "generators")) {
        glattice::Permutation perm;
        for (const auto& x : p) perm.push_back(parse_unsigned(x, "permutation entry"));
        gens.push_back(std::move(perm));
    }
    return FiniteGroup(degree, std::move(gens), max_order);
}

json finite_group_json(const FiniteGroup& g) {
    json j;
    j["degree"] = g.degree();
    json gens = json::array();
    for (const auto& p : g.generators()) gens.push_back(p);
    j["generators"] = std::move(gens);
    return j;
}

Subgroup parse_subgroup(const json& j, const FiniteGroup& parent) {
    if (!j.is_array()) bad("subgroup must be a list of generating permutations");
    std::vector<glattice::Permutation> gens;
    for (const auto& p : j) {
        glattice::Permutation perm;
        for (const auto& x : p) perm.push_back(parse_unsigned(x, "permutation entry"));
        gens.push_back(std::move(perm));
    }
    return Subgroup::generated_by_perms(parent, gens);
}

json subgroup_json(const Subgroup& h) {
    json j = json::array();
    for (unsigned e : h.elements()) {
        if (e == h.parent().identity()) continue;
        j.push_back(h.parent().element(e));
    }
    return j;
}

GLattice parse_lattice(const json& j, unsigned max_order) {
    FiniteGroup g = parse_finite_group(field(j, "group"), max_order);
    std::size_t rank = parse_unsigned(field(j, "rank"), "rank");
    std::vector<IntMat> per_gen;
    for (const auto& m : field(j, "action")) per_gen.push_back(parse_matrix(m));
    return GLattice::from_generator_actions(g, rank, per_gen);
}

json lattice_json(const GLattice& m) {
    json j;
    j["group"] = finite_group_json(m.group());
    j["rank"] = m.rank();
    json act = json::array();
    for (const auto& p : m.group().generators()) act.push_back(matrix_json(m.action(*m.group().index_of(p))));
    j["action"] = std::move(act);
    return j;
}

std::pair<Graph, CoefficientSystem> parse_decorated_graph(const json& j) {
    std::vector<std::string> vertices;
    std::map<std::string, PresentedGroup> vg, eg;
    std::map<HalfEdge, GroupHom> hm;
    for (const auto& v : field(j, "vertices")) {
        std::string id = field(v, "id").get<std::string>();
        vertices.push_back(id);
        vg.emplace(id, parse_group(field(v, "group")));
    }
    std::vector<Graph::Edge> edges;
    struct PendingMap {
        HalfEdge he;
        std::string vertex;
        IntMat m;
    };
    std::vector<PendingMap> pending;
    for (const auto& e : field(j, "edges")) {
        std::string id = field(e, "id").get<std::string>();
        const json& ends = field(e, "ends");
        if (!ends.is_array() || ends.size() != 2) bad("edge '" + id + "' needs exactly two ends");
        Graph::Edge edge{id, {field(ends[0], "vertex").get<std::string>(),
                              field(ends[1], "vertex").get<std::string>()}};
        eg.emplace(id, parse_group(field(e, "group")));
        for (int side = 0; side < 2; ++side)
            pending.push_back(
                PendingMap{HalfEdge{id, side}, edge.ends[side], parse_matrix(field(ends[side], "map"))});
        edges.push_back(std::move(edge));
    }
    Graph graph(std::move(vertices), std::move(edges));
    for (auto& p : pending) {
        auto dom = vg.find(p.vertex);
        auto cod = eg.find(p.he.edge);
        if (dom == vg.end() || cod == eg.end()) bad("half-edge attached to unknown vertex");
        hm.emplace(p.he, GroupHom(dom->second, cod->second, std::move(p.m)));
    }
    CoefficientSystem system(std::move(vg), std::move(eg), std::move(hm));
    system.validate_against(graph);
    return {std::move(graph), std::move(system)};
}

json decorated_graph_json(const Graph& g, const CoefficientSystem& a) {
    json j;
    json vs = json::array();
    for (const auto& v : g.vertices()) {
        json jv;
        jv["id"] = v;
        jv["group"] = group_json(a.vertex_group(v));
        vs.push_back(std::move(jv));
    }
    j["vertices"] = std::move(vs);
    json es = json::array();
    for (const auto& e : g.edges()) {
        json je;
        je["id"] = e.id;
        je["group"] = group_json(a.edge_group(e.id));
        json ends = json::array();
        for (int side = 0; side < 2; ++side) {
            json end;
            end["vertex"] = e.ends[side];
            end["map"] = matrix_json(a.half_edge_map({e.id, side}).matrix());
            ends.push_back(std::move(end));
        }
        je["ends"] = std::move(ends);
        es.push_back(std::move(je));
    }
    j["edges"] = std::move(es);
    return j;
}

ReductionInput parse_reduction(const json& j, unsigned max_order) {
    FiniteGroup context = parse_finite_group(field(j, "context"), max_order);

    std::vector<ReductionGraph::Point> points;
    for (const auto& p : field(j, "points"))
        points.push_back(ReductionGraph::Point{field(p, "id").get<std::string>(),
                                               parse_subgroup(field(p, "label"), context)});
    std::vector<ReductionGraph::Component> components;
    for (const auto& c : field(j, "components")) {
        ComponentKind kind = ComponentKind::rational;
        if (c.contains("kind")) {
            std::string k = c.at("kind").get<std::string>();
            if (k == "rational")
                kind = ComponentKind::rational;
            else if (k == "custom")
                kind = ComponentKind::custom;
            else
                bad("component kind must be 'rational' or 'custom'");
        }
        components.push_back(ReductionGraph::Component{
            field(c, "id").get<std::string>(), parse_subgroup(field(c, "label"), context), kind});
    }
    std::vector<ReductionGraph::Branch> branches;
    for (const auto& b : field(j, "branches"))
        branches.push_back(ReductionGraph::Branch{field(b, "point").get<std::string>(),
                                                  field(b, "component").get<std::string>()});
    ReductionGraph rg(context, std::move(points), std::move(components), std::move(branches));

    std::map<LabelKey, PresentedGroup> groups;
    std::map<std::pair<LabelKey, LabelKey>, GroupHom> restrictions;
    if (j.contains("table")) {
        const json& t = j.at("table");
        for (const auto& entry : field(t, "groups"))
            groups.emplace(reduction::key_of(parse_subgroup(field(entry, "label"), context)),
                           parse_group(field(entry, "group")));
        if (t.contains("restrictions"))
            for (const auto& entry : t.at("restrictions")) {
                LabelKey from = reduction::key_of(parse_subgroup(field(entry, "from"), context));
                LabelKey to = reduction::key_of(parse_subgroup(field(entry, "to"), context));
                auto gf = groups.find(from), gt = groups.find(to);
                if (gf == groups.end() || gt == groups.end())
                    bad("restriction between labels without table groups");
                restrictions.emplace(std::make_pair(from, to),
                                     GroupHom(gf->second, gt->second,
                                              parse_matrix(field(entry, "map"))));
            }
    }
    CohomologyTable table(std::move(groups), std::move(restrictions));

    CustomData custom;
    if (j.contains("custom")) {
        for (const auto& [cid, cj] : j.at("custom").items()) {
            const auto& comp = rg.component(cid);
            if (comp.kind != ComponentKind::custom)
                bad("custom data supplied for non-custom component " + cid);
            CustomComponentData data{parse_group(field(cj, "group")), {}, std::nullopt};
            for (const auto& sp : field(cj, "specializations")) {
                std::string pid = field(sp, "point").get<std::string>();
                unsigned index = sp.contains("index") ? parse_unsigned(sp.at("index"), "index") : 0;
                std::string branch_id = pid + "~" + cid + "~" + std::to_string(index);
                const PresentedGroup& target = table.group_for(rg.point(pid).label);
                data.specializations.emplace(
                    branch_id, GroupHom(data.group, target, parse_matrix(field(sp, "map"))));
            }
            if (cj.contains("generic_restriction")) {
                data.generic_restriction = GroupHom(table.group_for(comp.label), data.group,
                                                    parse_matrix(cj.at("generic_restriction")));
                // specialization after generic restriction must agree with the
                // table restriction along every incident branch
                for (const auto& [bid, sp] : data.specializations) {
                    std::string pid = bid.substr(0, bid.find('~'));
                    GroupHom via = compose(sp, *data.generic_restriction);
                    GroupHom direct =
                        table.restriction_for(comp.label, rg.point(pid).label);
                    if (!abelian::equal(via, direct))
                        bad("custom component " + cid +
                            ": generic restriction does not commute at branch " + bid);
                }
            }
            custom.emplace(cid, std::move(data));
        }
    }
    return ReductionInput{std::move(rg), std::move(table), std::move(custom)};
}

json reduction_json(const ReductionGraph& rg) {
    json j;
    j["context"] = finite_group_json(rg.context());
    json ps = json::array();
    for (const auto& p : rg.points()) {
        json jp;
        jp["id"] = p.id;
        jp["label"] = subgroup_json(p.label);
        ps.push_back(std::move(jp));
    }
    j["points"] = std::move(ps);
    json cs = json::array();
    for (const auto& c : rg.components()) {
        json jc;
        jc["id"] = c.id;
        jc["label"] = subgroup_json(c.label);
        jc["kind"] = c.kind == ComponentKind::rational ? "rational" : "custom";
        cs.push_back(std::move(jc));
    }
    j["components"] = std::move(cs);
    json bs = json::array();
    for (const auto& b : rg.branches()) {
        json jb;
        jb["point"] = b.point;
        jb["component"] = b.component;
        bs.push_back(std::move(jb));
    }
    j["branches"] = std::move(bs);
    return j;
}

} // namespace shagraph::io
