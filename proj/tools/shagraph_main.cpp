#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "shagraph/json_io.hpp"

namespace {

using json = shagraph::io::json;
using namespace shagraph;

unsigned max_group_order() {
    if (const char* env = std::getenv("SHAGRAPH_MAX_GROUP_ORDER")) {
        long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return glattice::kDefaultMaxOrder;
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json inv(const abelian::InvariantFactors& f) { return io::invariants_json(f); }

// ---- per-command handlers ------------------------------------------------

json run_snf(const json& in) {
    abelian::IntMat m = io::parse_matrix(in.at("matrix"));
    abelian::SmithForm s = abelian::smith_normal_form(m);
    if (!(s.u * m * s.v == s.d)) throw verification_error("snf: u*m*v differs from d");
    if (abs(abelian::determinant(s.u)) != 1 || abs(abelian::determinant(s.v)) != 1)
        throw verification_error("snf: transform is not unimodular");
    json r;
    r["u"] = io::matrix_json(s.u);
    r["d"] = io::matrix_json(s.d);
    r["v"] = io::matrix_json(s.v);
    r["rank"] = s.rank;
    r["cokernel"] = inv(abelian::PresentedGroup(m.cols(), m).invariants());
    return r;
}

json run_tate(const json& in, unsigned max_order) {
    glattice::GLattice m = io::parse_lattice(in.at("lattice"), max_order);
    glattice::Subgroup h = in.contains("subgroup")
                               ? io::parse_subgroup(in.at("subgroup"), m.group())
                               : glattice::Subgroup::full(m.group());
    json r;
    r["subgroup_order"] = h.order();
    r["h_minus1"] = inv(glattice::tate_h_minus1(h, m));
    r["h0"] = inv(glattice::tate_h0(h, m));
    r["h1"] = inv(glattice::h1(h, m));
    return r;
}

json run_flasque_check(const json& in, unsigned max_order, unsigned parallel) {
    glattice::GLattice m = io::parse_lattice(in.at("lattice"), max_order);
    glattice::GLattice dm = glattice::dual(m);
    json classes = json::array();
    bool flasque = true, coflasque = true;
    for (const auto& rep : glattice::conjugacy_class_representatives(m.group())) {
        auto h1_dual = glattice::h1(rep, dm);
        auto h1_self = glattice::h1(rep, m);
        flasque = flasque && h1_dual.is_trivial();
        coflasque = coflasque && h1_self.is_trivial();
        json c;
        c["subgroup"] = io::subgroup_json(rep);
        c["order"] = rep.order();
        c["h1_dual"] = h1_dual.str();
        c["h1"] = h1_self.str();
        classes.push_back(std::move(c));
    }
    if (glattice::is_flasque(m, parallel) != flasque ||
        glattice::is_coflasque(m, parallel) != coflasque)
        throw verification_error("flasque-check: per-class listing disagrees with the flags");
    json r;
    r["flasque"] = flasque;
    r["coflasque"] = coflasque;
    r["classes"] = std::move(classes);
    return r;
}

json run_resolve(const json& in, unsigned max_order) {
    glattice::GLattice t_hat = io::parse_lattice(in.at("lattice"), max_order);
    glattice::FlasqueResolution res = glattice::flasque_resolution(t_hat);
    json r;
    r["ranks"] = {{"sub", res.seq.sub.rank()},
                  {"mid", res.seq.mid.rank()},
                  {"quot", res.seq.quot.rank()}};
    json summands = json::array();
    for (const auto& s : res.summands) {
        json e;
        e["stabilizer"] = io::subgroup_json(s.stabilizer);
        e["stabilizer_order"] = s.stabilizer.order();
        e["copies"] = s.copies;
        summands.push_back(std::move(e));
    }
    r["permutation_summands"] = std::move(summands);
    r["inject"] = io::matrix_json(res.seq.inject);
    r["surject"] = io::matrix_json(res.seq.surject);
    r["quot"] = io::lattice_json(res.seq.quot);
    r["is_flasque"] = true;  // enforced by construction; failure throws
    r["verified"] = true;
    return r;
}

json run_graph_h(const json& in) {
    auto [graph, system] = io::parse_decorated_graph(in);
    json r;
    r["h0"] = inv(decograph::h0(graph, system));
    r["h1"] = inv(decograph::h1(graph, system));
    r["cycle_rank"] = graph.cycle_rank();
    r["connected"] = graph.is_connected();
    return r;
}

json run_contract(const json& in) {
    auto [graph, system] = io::parse_decorated_graph(in.at("graph"));
    json r;
    r["h0_before"] = inv(decograph::h0(graph, system));
    r["h1_before"] = inv(decograph::h1(graph, system));
    if (in.contains("edge")) {
        decograph::HalfEdge alpha{in.at("edge").get<std::string>(),
                                  in.value("side", 0)};
        decograph::Contracted c = decograph::contract(graph, system, alpha);
        r["mode"] = "single";
        r["merged_vertex"] = c.merged_vertex;
        r["h0_after"] = inv(decograph::h0(c.graph, c.system));
        r["h1_after"] = inv(decograph::h1(c.graph, c.system));
        r["graph"] = io::decorated_graph_json(c.graph, c.system);
    } else if (in.contains("root")) {
        auto trace =
            decograph::contract_to_point(graph, system, in.at("root").get<std::string>());
        r["mode"] = "to-point";
        r["contracted"] = trace.contracted;
        json steps = json::array();
        for (const auto& s : trace.steps) steps.push_back({{"edge", s.edge}, {"side", s.side}});
        r["steps"] = std::move(steps);
        if (trace.obstruction)
            r["obstruction"] = {{"edge", trace.obstruction->edge},
                                {"side", trace.obstruction->side}};
        r["h0_after"] = inv(decograph::h0(trace.final_graph, trace.final_system));
        r["h1_after"] = inv(decograph::h1(trace.final_graph, trace.final_system));
    } else {
        throw schema_error("contract: need either 'edge' (single) or 'root' (to-point)");
    }
    return r;
}

json run_six_term(const json& in) {
    auto [ga, a] = io::parse_decorated_graph(in.at("a"));
    auto [gb, b] = io::parse_decorated_graph(in.at("b"));
    auto [gc, c] = io::parse_decorated_graph(in.at("c"));
    auto same_structure = [&](const decograph::Graph& x, const decograph::Graph& y) {
        if (x.vertices() != y.vertices() || x.edges().size() != y.edges().size()) return false;
        for (std::size_t i = 0; i < x.edges().size(); ++i)
            if (x.edges()[i].id != y.edges()[i].id || x.edges()[i].ends != y.edges()[i].ends)
                return false;
        return true;
    };
    if (!same_structure(ga, gb) || !same_structure(gb, gc))
        throw schema_error("six-term: the three systems live on different graphs");

    auto parse_morphism = [&](const json& jm, const decograph::CoefficientSystem& from,
                              const decograph::CoefficientSystem& to) {
        decograph::SystemMorphism mor;
        for (const auto& [id, mat] : jm.at("vertices").items())
            mor.vertex_maps.emplace(id, abelian::GroupHom(from.vertex_group(id),
                                                          to.vertex_group(id),
                                                          io::parse_matrix(mat)));
        for (const auto& [id, mat] : jm.at("edges").items())
            mor.edge_maps.emplace(id, abelian::GroupHom(from.edge_group(id), to.edge_group(id),
                                                        io::parse_matrix(mat)));
        return mor;
    };
    decograph::SystemMorphism f = parse_morphism(in.at("f"), a, b);
    decograph::SystemMorphism gmor = parse_morphism(in.at("g"), b, c);
    decograph::SixTerm st = decograph::six_term(ga, a, b, c, f, gmor);

    json r;
    r["h0"] = {{"a", inv(st.h0a.invariants())},
               {"b", inv(st.h0b.invariants())},
               {"c", inv(st.h0c.invariants())}};
    r["h1"] = {{"a", inv(st.h1a.invariants())},
               {"b", inv(st.h1b.invariants())},
               {"c", inv(st.h1c.invariants())}};
    r["delta"] = io::matrix_json(st.delta.matrix());
    r["exact_at"] = st.exact_at;
    r["all_exact"] = st.all_exact();
    return r;
}

json monotonic_report(const io::ReductionInput& input) {
    reduction::MonotonicResult m = reduction::is_monotonic(input.graph);
    json r;
    r["tree"] = m.tree;
    r["monotonic"] = m.monotonic;
    if (m.monotonic) r["root"] = m.root;
    if (m.witness) r["witness"] = {{"parent", m.witness->first}, {"child", m.witness->second}};
    if (m.monotonic && !input.table.groups().empty()) {
        auto rep = reduction::monotonic_implies_trivial(input.graph, input.table, input.custom);
        json v;
        v["contracted"] = rep.trace.contracted;
        v["steps"] = rep.trace.steps.size();
        v["hkappa_h1"] = rep.hkappa_h1.str();
        v["sha"] = rep.sha_value.str();
        v["verified"] = rep.verified;
        r["verification"] = std::move(v);
        if (!rep.verified)
            throw verification_error("monotonic: obstruction failed to vanish on a monotonic tree");
    }
    return r;
}

json run_psi(const io::ReductionInput& input) {
    reduction::PsiResult p = reduction::psi_injection(input.graph);
    json r;
    r["exists"] = p.exists;
    json pairs = json::array();
    for (const auto& [pt, comp] : p.psi) pairs.push_back({{"point", pt}, {"component", comp}});
    r["psi"] = std::move(pairs);
    if (p.unmatched_point) r["unmatched_point"] = *p.unmatched_point;
    r["monotonic"] = p.monotonic;
    r["agrees_with_monotonic"] = p.exists == p.monotonic;
    return r;
}

json run_basechange(const io::ReductionInput& input, const json& in, unsigned max_order) {
    (void)max_order;
    if (!in.contains("normal_subgroup"))
        throw schema_error("basechange: missing 'normal_subgroup'");
    glattice::Subgroup n = io::parse_subgroup(in.at("normal_subgroup"), input.graph.context());
    reduction::ReductionGraph out = reduction::base_change(input.graph, n);
    json r;
    r["points"] = out.points().size();
    r["components"] = out.components().size();
    r["branches"] = out.branches().size();
    r["cycle_rank"] = out.graph().cycle_rank();
    r["tree"] = out.graph().is_tree();
    r["connected"] = out.graph().is_connected();
    r["graph"] = io::reduction_json(out);
    return r;
}

json run_sha(const io::ReductionInput& input) {
    json r;
    r["sha"] = inv(reduction::sha(input.graph, input.table, input.custom));
    reduction::PhiReport phi = reduction::phi_surjection(input.graph, input.table, input.custom);
    json p;
    p["available"] = phi.available;
    if (!phi.available) {
        p["reason"] = phi.unavailable_reason;
    } else {
        p["h1_kappa"] = phi.h1_kappa.str();
        p["h1_k"] = phi.h1_k.str();
        p["image_contained"] = phi.image_contained;
        p["surjective"] = phi.surjective;
        p["all_rational"] = phi.all_rational;
        p["equal"] = phi.equal;
    }
    r["phi"] = std::move(p);
    return r;
}

json run_shap1(const io::ReductionInput& input) {
    reduction::ShaP1Report rep = reduction::sha_all_p1_report(input.graph, input.table);
    json r;
    r["left"] = inv(rep.left);
    r["middle"] = inv(rep.middle);
    r["right"] = inv(rep.right);
    json pq = json::array();
    for (const auto& [pt, q] : rep.point_quotients) pq.push_back({{"point", pt}, {"group", q.str()}});
    r["point_quotients"] = std::move(pq);
    r["cycle_rank"] = rep.cycle_rank;
    r["left_matches_constant"] = rep.left_matches_constant;
    r["exact_at_middle"] = rep.exact_at_middle;
    r["exact_at_right"] = rep.exact_at_right;
    return r;
}

json run_fixtures_list() {
    json r;
    json list = json::array();
    for (const auto& f : fixtures::all()) {
        json e;
        e["name"] = f.name;
        e["command"] = f.command;
        e["note"] = f.note;
        e["digest"] = digest(f.content);
        list.push_back(std::move(e));
    }
    r["fixtures"] = std::move(list);
    return r;
}

json dispatch(const std::string& command, const json& in, unsigned max_order,
              unsigned parallel) {
    if (command == "snf") return run_snf(in);
    if (command == "tate") return run_tate(in, max_order);
    if (command == "flasque-check") return run_flasque_check(in, max_order, parallel);
    if (command == "resolve") return run_resolve(in, max_order);
    if (command == "graph-h") return run_graph_h(in);
    if (command == "contract") return run_contract(in);
    if (command == "six-term") return run_six_term(in);
    if (command == "fixtures") return run_fixtures_list();
    // reduction-graph commands share one input schema
    io::ReductionInput input = io::parse_reduction(in, max_order);
    if (command == "monotonic") return monotonic_report(input);
    if (command == "psi") return run_psi(input);
    if (command == "basechange") return run_basechange(input, in, max_order);
    if (command == "sha") return run_sha(input);
    if (command == "shaP1-report") return run_shap1(input);
    throw schema_error("unknown command " + command);
}

struct Options {
    std::string in_path, out_path, fixture;
    int parallel = 1;
    bool verbose = false;
};

std::string load_input(const Options& opt) {
    if (!opt.fixture.empty()) {
        for (const auto& f : fixtures::all())
            if (opt.fixture == f.name) return f.content;
        throw schema_error("unknown fixture '" + opt.fixture + "'");
    }
    if (opt.in_path.empty()) throw schema_error("no input: pass --in <file> or --fixture <name>");
    std::ifstream is(opt.in_path, std::ios::binary);
    if (!is) throw schema_error("cannot read input file '" + opt.in_path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_report(const Options& opt, const json& report) {
    std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (opt.out_path.empty()) return;
    std::string tmp = opt.out_path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw schema_error("cannot write output file '" + opt.out_path + "'");
        os << text;
    }
    std::filesystem::rename(tmp, opt.out_path);
}

int run_job(const std::string& command, const Options& opt) {
    json report;
    report["command"] = command;
    auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    try {
        std::string raw;
        json input = json::object();
        if (command != "fixtures") {
            raw = load_input(opt);
            report["input_digest"] = digest(raw);
            input = json::parse(raw);
        }
        report["result"] = dispatch(command, input, max_group_order(),
                                    static_cast<unsigned>(opt.parallel));
    } catch (const limit_error& e) {
        report["error"] = {{"kind", "limit"}, {"message", e.what()}};
        code = 4;
    } catch (const verification_error& e) {
        report["error"] = {{"kind", "verification"}, {"message", e.what()}};
        code = 3;
    } catch (const schema_error& e) {
        report["error"] = {{"kind", "schema"}, {"message", e.what()}};
        code = 2;
    } catch (const mismatch_error& e) {
        report["error"] = {{"kind", "schema"}, {"message", e.what()}};
        code = 2;
    } catch (const json::exception& e) {
        report["error"] = {{"kind", "schema"}, {"message", e.what()}};
        code = 2;
    }
    auto t1 = std::chrono::steady_clock::now();
    report["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    write_report(opt, report);
    if (code != 0 && opt.verbose)
        std::cerr << "shagraph " << command << " failed: " << report["error"]["message"] << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shagraph: local-global obstruction groups of tori via decorated graphs"};
    app.require_subcommand(1);

    static const char* commands[] = {"snf",      "tate",     "flasque-check", "resolve",
                                     "graph-h",  "contract", "six-term",      "monotonic",
                                     "psi",      "basechange", "sha",         "shaP1-report",
                                     "fixtures"};
    Options opt;
    std::string chosen;
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--in", opt.in_path, "input descriptor (JSON)");
        sub->add_option("--out", opt.out_path, "report destination (JSON)");
        sub->add_option("--fixture", opt.fixture, "use a bundled fixture as the input");
        sub->add_option("--parallel", opt.parallel, "internal parallelism bound")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--verbose", opt.verbose, "echo failures to stderr");
        sub->callback([&chosen, name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return run_job(chosen, opt);
}
