#pragma once

#include <utility>

#include <json.hpp>

#include "shagraph/reduction.hpp"

namespace shagraph::io {

using json = nlohmann::ordered_json;

using abelian::IntMat;
using abelian::InvariantFactors;
using abelian::PresentedGroup;
using glattice::FiniteGroup;
using glattice::GLattice;
using glattice::Subgroup;

/// Matrices are arrays of rows; entries are JSON integers, with decimal
/// strings accepted (and emitted) for values outside the int64 range.
IntMat parse_matrix(const json& j);
json matrix_json(const IntMat& m);

/// Either {"free_rank": r, "torsion": [d...]} or
/// {"generators": n, "relations": [[...], ...]}.
PresentedGroup parse_group(const json& j);
json group_json(const PresentedGroup& g);
json invariants_json(const InvariantFactors& f);

/// {"degree": n, "generators": [[...], ...]}
FiniteGroup parse_finite_group(const json& j, unsigned max_order);
json finite_group_json(const FiniteGroup& g);

/// A subgroup is a list of generating permutations of the ambient group.
Subgroup parse_subgroup(const json& j, const FiniteGroup& parent);
json subgroup_json(const Subgroup& h);

/// {"group": ..., "rank": r, "action": [matrix per generator]}
GLattice parse_lattice(const json& j, unsigned max_order);
json lattice_json(const GLattice& m);

/// {"vertices": [{"id", "group"}],
///  "edges": [{"id", "group", "ends": [{"vertex", "map"}, {"vertex", "map"}]}]}
std::pair<decograph::Graph, decograph::CoefficientSystem> parse_decorated_graph(const json& j);
json decorated_graph_json(const decograph::Graph& g, const decograph::CoefficientSystem& a);

struct ReductionInput {
    reduction::ReductionGraph graph;
    reduction::CohomologyTable table;
    reduction::CustomData custom;
};

/// {"context", "points", "components", "branches", "table"?, "custom"?}
ReductionInput parse_reduction(const json& j, unsigned max_order);
json reduction_json(const reduction::ReductionGraph& rg);

} // namespace shagraph::io
