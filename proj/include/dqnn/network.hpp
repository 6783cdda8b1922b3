#pragma once

#include <string>
#include <vector>

#include "dqnn/isometry.hpp"
#include "dqnn/linalg.hpp"

namespace dqnn {

enum class Style { conventional, extended };

enum class LayerRole { input, hidden, ancilla, output };

struct LayerInfo {
  LayerRole role;
  std::vector<int> neuron_dims;
};

struct PerceptronSpec {
  int transition = 0;    // source computational layer index
  int neuron = 0;        // added neuron index within the destination layer
  int added_dim = 0;     // hidden/output neuron dimension
  int ancilla_dim = 0;   // 0 for conventional perceptrons
  int d_in = 0;          // product of source-layer neuron dims
  int d_out = 0;         // d_in · added_dim · (ancilla_dim or 1)
};

// Layered wiring. Each perceptron couples the whole previous layer to one
// added neuron (extended style: plus one ancilla neuron). Perceptrons run
// transition by transition, neuron label ascending within a transition.
struct Architecture {
  Style style = Style::conventional;
  std::vector<std::vector<int>> comp_layers;   // input .. output neuron dims
  std::vector<std::vector<int>> ancilla_dims;  // extended: per transition
  std::vector<LayerInfo> layers;               // role-tagged, ancillas included
  std::vector<PerceptronSpec> perceptrons;

  int d_in() const;
  int d_out() const;
};

// ancillas: one list per transition, aligned with the destination layer's
// neurons; empty (extended style) defaults every ancilla to the added
// neuron's dimension.
Architecture make_architecture(Style style,
                               std::vector<std::vector<int>> comp_layers,
                               std::vector<std::vector<int>> ancillas = {});

// qubit in / qubit out / qubit ancilla, one perceptron — the smallest
// channel-universal building block
Architecture minimal_extended_architecture();

struct Network {
  Architecture arch;
  std::vector<ParamMatrix> params;  // one per perceptron
};

Network make_network(Architecture arch);

int total_active_params(const Network& net);
Eigen::VectorXd flatten(const Network& net);
void unflatten(const Eigen::VectorXd& v, Network& net);

// ---- channel action ----

// ρ_out = tr_{non-output}[V ρ V†], computed by propagating a growing density
// matrix perceptron by perceptron and tracing dead factors early (ancillas
// right after their perceptron, source layers after their transition).
// Output factors are ordered by ascending neuron label.
Mat apply(const Network& net, const Mat& rho_in);

// Same channel through the conventional-formulation route: the full product
// of perceptron unitaries on the complete space (all non-input factors
// prepared in |0⟩), traced at the very end. Conventional style only; used to
// cross-check the isometry propagation.
Mat apply_conventional_unitary(const Network& net, const Mat& rho_in);

// full Stinespring isometry H_input → ⨂(all factors), with the assembly
// factor layout (each perceptron's new factors tensored from the left)
struct FullIsometry {
  Mat v;
  Dims dims;                       // factor dims, leftmost first
  std::vector<int> output_factors; // indices into dims, ascending neuron label
};
FullIsometry assemble_isometry_full(const Network& net);
Mat assemble_isometry(const Network& net);

// J(E) = (1/d_in) Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j| — output factor first, reference last
Mat choi_state(const Network& net);

// Kraus operators G_e = (⟨e|_env) V, env basis labels enumerated row-major
// over the env factors left-to-right in the assembly layout
std::vector<Mat> kraus_operators(const Network& net);

// ---- derivatives ----

// ∂ρ_out/∂λ^{(perceptron)}_{x,y}: the generator commutator seeded at that
// perceptron, propagated through the remaining ones exactly like apply.
// Hermitian and traceless. Inactive (x, y) is rejected.
Mat output_gradient(const Network& net, const Mat& rho_in, int perceptron,
                    int x, int y);

// all active parameters in flatten() order, one matrix each
std::vector<Mat> output_gradients(const Network& net, const Mat& rho_in);

// same for the Choi state (inert maximally-entangled reference factor)
std::vector<Mat> choi_gradients(const Network& net);

}  // namespace dqnn
