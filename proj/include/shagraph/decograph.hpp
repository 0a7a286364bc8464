#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shagraph/abelian.hpp"

namespace shagraph::decograph {

using abelian::GroupHom;
using abelian::IntMat;
using abelian::InvariantFactors;
using abelian::PresentedGroup;

/// Finite graph with loops and multi-edges.  Every edge has two half-edges
/// (sides 0 and 1), each attached to a vertex.  Vertices and edges are
/// identified by string ids and iterated in id order.
class Graph {
public:
    struct Edge {
        std::string id;
        std::array<std::string, 2> ends; // vertex id per side
    };

    Graph() = default;
    Graph(std::vector<std::string> vertices, std::vector<Edge> edges);

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::size_t vertex_index(const std::string& id) const;
    std::size_t edge_index(const std::string& id) const;
    const Edge& edge(const std::string& id) const { return edges_[edge_index(id)]; }
    bool has_vertex(const std::string& id) const;

    std::size_t degree(const std::string& vertex) const; // loops count twice
    std::size_t component_count() const;
    bool is_connected() const { return component_count() <= 1; }
    bool is_tree() const;
    /// |E| - |V| + (number of components).
    std::size_t cycle_rank() const;

private:
    std::vector<std::string> vertices_; // sorted
    std::vector<Edge> edges_;           // sorted by id
};

struct HalfEdge {
    std::string edge;
    int side = 0;

    bool operator==(const HalfEdge&) const = default;
    auto operator<=>(const HalfEdge&) const = default;
};

/// Abelian-group decorations: a group per vertex and edge, and a
/// homomorphism (attached vertex group -> edge group) per half-edge.
class CoefficientSystem {
public:
    CoefficientSystem() = default;
    CoefficientSystem(std::map<std::string, PresentedGroup> vertex_groups,
                      std::map<std::string, PresentedGroup> edge_groups,
                      std::map<HalfEdge, GroupHom> half_edge_maps);

    const PresentedGroup& vertex_group(const std::string& id) const;
    const PresentedGroup& edge_group(const std::string& id) const;
    const GroupHom& half_edge_map(const HalfEdge& he) const;

    const std::map<std::string, PresentedGroup>& vertex_groups() const { return vertex_groups_; }
    const std::map<std::string, PresentedGroup>& edge_groups() const { return edge_groups_; }
    const std::map<HalfEdge, GroupHom>& half_edge_maps() const { return half_edge_maps_; }

    /// Groups and maps cover exactly the graph's vertices, edges and
    /// half-edges with matching domains and codomains.
    void validate_against(const Graph& g) const;

private:
    std::map<std::string, PresentedGroup> vertex_groups_;
    std::map<std::string, PresentedGroup> edge_groups_;
    std::map<HalfEdge, GroupHom> half_edge_maps_;
};

/// Two-term complex C0 = ⊕_x A_x → C1 = ⊕_e A_e with the unsigned sum of
/// half-edge maps as differential (a loop contributes both of its maps).
struct CochainComplex {
    PresentedGroup c0, c1;
    GroupHom d;
    std::vector<std::size_t> vertex_offset; // generator offsets, graph order
    std::vector<std::size_t> edge_offset;
};

CochainComplex cochain_complex(const Graph& g, const CoefficientSystem& a);

InvariantFactors h0(const Graph& g, const CoefficientSystem& a);
InvariantFactors h1(const Graph& g, const CoefficientSystem& a);

/// A0^m with m the cycle rank; a disconnected graph is reported through the
/// `connected` flag but still computed with the component count.
struct TopologicalH1 {
    InvariantFactors value;
    std::size_t cycle_rank = 0;
    bool connected = true;
};
TopologicalH1 topological_h1(const Graph& g, const PresentedGroup& a0);

/// Constant system: A0 everywhere, identity half-edge maps.
CoefficientSystem constant_system(const Graph& g, const PresentedGroup& a0);

/// Simplicial system for an orientation: the chosen head side of each edge
/// carries +identity, the tail side -identity.
CoefficientSystem simplicial_system(const Graph& g, const PresentedGroup& a0,
                                    const std::map<std::string, int>& head_side);

/// Per-vertex and per-edge maps commuting with all half-edge maps.
struct SystemMorphism {
    std::map<std::string, GroupHom> vertex_maps;
    std::map<std::string, GroupHom> edge_maps;
};

void validate_morphism(const Graph& g, const CoefficientSystem& from,
                       const CoefficientSystem& to, const SystemMorphism& mor);

/// Maps induced on cohomology by a morphism of systems.
GroupHom h0_map(const Graph& g, const CoefficientSystem& from, const CoefficientSystem& to,
                const SystemMorphism& mor);
GroupHom h1_map(const Graph& g, const CoefficientSystem& from, const CoefficientSystem& to,
                const SystemMorphism& mor);

/// Six-term exact sequence of a short exact sequence of systems
/// 0 -> A -> B -> C -> 0 (componentwise exactness is checked first).
struct SixTerm {
    PresentedGroup h0a, h0b, h0c, h1a, h1b, h1c;
    GroupHom f0, g0, delta, f1, g1;
    std::array<bool, 6> exact_at{}; // H0A, H0B, H0C, H1A, H1B, H1C
    bool all_exact() const;
};

SixTerm six_term(const Graph& g, const CoefficientSystem& a, const CoefficientSystem& b,
                 const CoefficientSystem& c, const SystemMorphism& f, const SystemMorphism& gm);

/// A half-edge is redundant when its edge joins two distinct vertices and
/// its map is an isomorphism; loops are never redundant.
bool is_redundant(const Graph& g, const CoefficientSystem& a, const HalfEdge& he);

struct Contracted {
    Graph graph;
    CoefficientSystem system;
    std::string merged_vertex; // surviving vertex id
};

/// Contraction along a redundant half-edge: the far vertex survives with its
/// group, and maps formerly attached to the near vertex are pre-composed
/// with -(A_alpha)^-1 A_beta.
Contracted contract(const Graph& g, const CoefficientSystem& a, const HalfEdge& alpha);

struct ContractionTrace {
    bool contracted = false;
    std::vector<HalfEdge> steps;
    std::optional<HalfEdge> obstruction; // first non-redundant leaf half-edge
    Graph final_graph;
    CoefficientSystem final_system;
};

/// Contracts a tree to its root, deepest leaves first (ties by vertex id).
/// Returns contracted=false for non-trees and when a leaf half-edge fails to
/// be redundant.
ContractionTrace contract_to_point(const Graph& g, const CoefficientSystem& a,
                                   const std::string& root);

} // namespace shagraph::decograph
