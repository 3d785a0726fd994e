#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mbqec/statevec.hpp"

namespace mbqec {

/// Simple undirected graph over 1-based qubit indices. Edges are stored
/// deduplicated with endpoints ordered; self-loops are rejected.
class GraphSpec {
 public:
  GraphSpec(int num_qubits, std::vector<std::pair<int, int>> edges);

  int num_qubits() const { return num_qubits_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  static GraphSpec square();  // {(1,2),(1,3),(2,4),(3,4)} on 4 qubits

 private:
  int num_qubits_;
  std::vector<std::pair<int, int>> edges_;
};

/// Relation between the two frames of the 4-qubit resource: a qubit
/// relabeling (an involution) plus a local unitary applied to every qubit.
struct FrameMap {
  std::array<int, 4> permutation;  // permutation[q-1] = partner qubit of q
  Eigen::Matrix2cd local_unitary;  // applied to each qubit after permuting
};

/// The canonical map: swap qubits 2 and 4, then Hadamard on all four qubits.
FrameMap box_lab_frame();

/// CZ on every edge of |+>^n.
StateVector graph_state(const GraphSpec& spec);

/// The 4-qubit box resource
///   (|0,+,+,0> + |0,-,-,1> + |1,-,-,0> + |1,+,+,1>) / 2.
StateVector box_cluster();

/// The resource as physically produced:
///   (|0000> + |0011> + |1100> - |1111>) / 2.
StateVector lab_cluster();

/// Applies (H x H x H x H) SWAP_24; maps lab_cluster() to box_cluster().
/// The map is self-inverse because H^x4 and SWAP_24 commute.
StateVector lab_to_box(const StateVector& state);

struct ErrorFrameMapping {
  int lab_qubit;
  Eigen::Matrix2cd lab_unitary;
};

/// Where and as what a box-frame error on qubit 2 or 3 is physically
/// implemented: qubit 2 maps to lab qubit 4 (the swap), qubit 3 stays, and
/// the operator is conjugated by H (so a phase flip becomes a bit flip).
ErrorFrameMapping map_error_box_to_lab(int box_qubit,
                                       const Eigen::Matrix2cd& box_unitary);

}  // namespace mbqec
