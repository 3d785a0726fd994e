#include "mbqec/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbqec/gates.hpp"

namespace mbqec {

GraphSpec::GraphSpec(int num_qubits, std::vector<std::pair<int, int>> edges)
    : num_qubits_(num_qubits) {
  if (num_qubits < 1) {
    throw std::invalid_argument("graph needs at least one qubit");
  }
  for (auto& [a, b] : edges) {
    if (a == b) {
      throw std::invalid_argument("self-loop on qubit " + std::to_string(a));
    }
    if (a < 1 || a > num_qubits || b < 1 || b > num_qubits) {
      throw std::invalid_argument("edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ") out of range");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

GraphSpec GraphSpec::square() {
  return GraphSpec(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
}

FrameMap box_lab_frame() {
  return FrameMap{{1, 4, 3, 2}, gates::hadamard()};
}

StateVector graph_state(const GraphSpec& spec) {
  const Eigen::Index dim = Eigen::Index(1) << spec.num_qubits();
  Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(
      dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  StateVector state(spec.num_qubits(), std::move(plus));
  for (const auto& [a, b] : spec.edges()) {
    state = apply_cz(state, a, b);
  }
  return state;
}

StateVector box_cluster() {
  // (|0,+,+,0> + |0,-,-,1> + |1,-,-,0> + |1,+,+,1>) / 2; written out per
  // bit string (a,b,c,d) the amplitude is (-1)^{(a+d)(b+c)} / 4.
  Eigen::VectorXcd v(16);
  for (int idx = 0; idx < 16; ++idx) {
    const int a = (idx >> 3) & 1, b = (idx >> 2) & 1, c = (idx >> 1) & 1,
              d = idx & 1;
    v(idx) = (((a + d) * (b + c)) % 2 ? -1.0 : 1.0) / 4.0;
  }
  return StateVector(4, std::move(v));
}

StateVector lab_cluster() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(0b0000) = 0.5;
  v(0b0011) = 0.5;
  v(0b1100) = 0.5;
  v(0b1111) = -0.5;
  return StateVector(4, std::move(v));
}

StateVector lab_to_box(const StateVector& state) {
  if (state.num_qubits() != 4) {
    throw std::invalid_argument("frame map is defined on 4-qubit states");
  }
  const FrameMap frame = box_lab_frame();
  StateVector out = apply_swap(state, 2, 4);
  for (int q = 1; q <= 4; ++q) {
    out = apply_single(out, q, frame.local_unitary);
  }
  return out;
}

ErrorFrameMapping map_error_box_to_lab(int box_qubit,
                                       const Eigen::Matrix2cd& box_unitary) {
  if (box_qubit != 2 && box_qubit != 3) {
    throw std::invalid_argument("errors are mapped for box qubits 2 and 3 only");
  }
  const FrameMap frame = box_lab_frame();
  const Eigen::Matrix2cd h = frame.local_unitary;
  return ErrorFrameMapping{frame.permutation[box_qubit - 1],
                           h * box_unitary * h};
}

}  // namespace mbqec
