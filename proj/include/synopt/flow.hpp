// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synopt/linalg.hpp"
#include "synopt/rational.hpp"

namespace synopt {

struct FlowEdge {
  std::string from, to;
  Rat capacity;  // > 0
};

/// Directed network with distinguished source and sink. At most one
/// edge per ordered vertex pair; antiparallel pairs are fine.
struct FlowNetwork {
  std::vector<std::string> vertices;  // declaration order
  std::vector<FlowEdge> edges;        // declaration order
  std::string source, sink;

  std::optional<std::size_t> vertex_index(const std::string& name) const;
  std::optional<std::size_t> edge_index(const std::string& from,
                                        const std::string& to) const;
};

/// Lines: `node <name>`, `source <name>`, `sink <name>`,
/// `edge <from> <to> <capacity>`. '#' starts a comment. Source and
/// sink lines declare their vertex if it is new; edge endpoints must
/// already be declared.
FlowNetwork parse_network(const std::string& text);

/// Edge flows in declaration order.
struct Flow {
  Vec edge_flow;
};

/// |E| whitespace-separated rationals in edge declaration order.
Flow parse_flow(const std::string& text, const FlowNetwork& net);

/// Vertex subset U as a mask over declaration order.
using Cut = std::vector<bool>;

/// Whitespace-separated vertex names.
Cut parse_cut(const std::string& text, const FlowNetwork& net);
std::string cut_names(const FlowNetwork& net, const Cut& u);

struct MaxFlowResult {
  Flow flow;
  Rat value;  // net outflow of the source
};

/// Shortest-augmenting-path maximum flow, exact rationals. Augmenting
/// paths are found by breadth-first search scanning arcs in edge
/// declaration order, so the result is deterministic.
MaxFlowResult max_flow(const FlowNetwork& net);

Rat flow_value(const FlowNetwork& net, const Flow& f);

/// Vertices reachable from the source in the residual network of a
/// maximum flow. Rejects infeasible flows and flows that still admit
/// an augmenting path.
Cut min_cut_from_flow(const FlowNetwork& net, const Flow& f);

/// Sum of capacities over U -> not-U edges. The cut must contain the
/// source and exclude the sink.
Rat cut_capacity(const FlowNetwork& net, const Cut& u);

struct CertificateReport {
  bool cut_valid = false;      // source in U, sink out
  bool bounds_ok = false;      // 0 <= f <= capacity per edge
  bool conservation_ok = false;
  bool forward_saturated = false;  // every U -> not-U edge at capacity
  bool backward_zero = false;      // every not-U -> U edge at zero
  bool value_matches = false;      // flow value == cut capacity
  Rat value;
  Rat capacity;
  bool verdict = false;  // all of the above
};

/// Checks a (flow, cut) optimality certificate; failures are report
/// content, never errors.
CertificateReport verify_certificate(const FlowNetwork& net, const Flow& f,
                                     const Cut& u);

/// First cut (by ascending subset mask over the non-terminal vertices
/// in declaration order) whose certificate verdict is true. Exists iff
/// the flow is maximal. At most 20 vertices.
std::optional<Cut> exists_certifying_cut(const FlowNetwork& net, const Flow& f,
                                         int jobs = 1);
std::optional<Cut> exists_certifying_cut_serial(const FlowNetwork& net,
                                                const Flow& f);

}  // namespace synopt
