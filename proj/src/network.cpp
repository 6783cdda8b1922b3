#include "dqnn/network.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dqnn {

namespace {

int product(const std::vector<int>& v) {
  return std::accumulate(v.begin(), v.end(), 1, std::multiplies<int>());
}

}  // namespace

int Architecture::d_in() const { return product(comp_layers.front()); }
int Architecture::d_out() const { return product(comp_layers.back()); }

Architecture make_architecture(Style style,
                               std::vector<std::vector<int>> comp_layers,
                               std::vector<std::vector<int>> ancillas) {
  if (comp_layers.size() < 2)
    throw std::invalid_argument("architecture: need at least input and output layers");
  for (const auto& layer : comp_layers) {
    if (layer.empty()) throw std::invalid_argument("architecture: empty layer");
    for (int d : layer)
      if (d < 1) throw std::invalid_argument("architecture: neuron dim < 1");
  }
  const size_t transitions = comp_layers.size() - 1;
  if (style == Style::conventional) {
    if (!ancillas.empty())
      throw std::invalid_argument("architecture: conventional style takes no ancillas");
  } else {
    if (ancillas.empty()) {
      // default: ancilla dimension = added neuron dimension (channel-universal choice)
      for (size_t t = 0; t < transitions; ++t) ancillas.push_back(comp_layers[t + 1]);
    }
    if (ancillas.size() != transitions)
      throw std::invalid_argument("architecture: one ancilla list per transition");
    for (size_t t = 0; t < transitions; ++t) {
      if (ancillas[t].size() != comp_layers[t + 1].size())
        throw std::invalid_argument("architecture: ancilla count must match added neurons");
      for (int d : ancillas[t])
        if (d < 1) throw std::invalid_argument("architecture: ancilla dim < 1");
    }
  }

  Architecture a;
  a.style = style;
  a.comp_layers = comp_layers;
  a.ancilla_dims = style == Style::extended ? ancillas : std::vector<std::vector<int>>{};

  for (size_t l = 0; l < comp_layers.size(); ++l) {
    LayerRole role = l == 0 ? LayerRole::input
                            : (l + 1 == comp_layers.size() ? LayerRole::output
                                                           : LayerRole::hidden);
    a.layers.push_back({role, comp_layers[l]});
    if (style == Style::extended && l > 0)
      a.layers.push_back({LayerRole::ancilla, ancillas[l - 1]});
  }

  for (size_t t = 0; t < transitions; ++t) {
    const int src_dim = product(comp_layers[t]);
    for (size_t k = 0; k < comp_layers[t + 1].size(); ++k) {
      PerceptronSpec ps;
      ps.transition = static_cast<int>(t);
      ps.neuron = static_cast<int>(k);
      ps.added_dim = comp_layers[t + 1][k];
      ps.ancilla_dim = style == Style::extended ? ancillas[t][k] : 0;
      ps.d_in = src_dim;
      ps.d_out = src_dim * ps.added_dim * std::max(ps.ancilla_dim, 1);
      a.perceptrons.push_back(ps);
    }
  }
  return a;
}

Architecture minimal_extended_architecture() {
  return make_architecture(Style::extended, {{2}, {2}}, {{2}});
}

Network make_network(Architecture arch) {
  Network net;
  net.arch = std::move(arch);
  for (const auto& ps : net.arch.perceptrons)
    net.params.push_back(ParamMatrix::zero(ps.d_in, ps.d_out));
  return net;
}

int total_active_params(const Network& net) {
  int n = 0;
  for (const auto& ps : net.arch.perceptrons)
    n += active_param_count(ps.d_in, ps.d_out);
  return n;
}

Eigen::VectorXd flatten(const Network& net) {
  Eigen::VectorXd v(total_active_params(net));
  Eigen::Index at = 0;
  for (const auto& p : net.params) {
    const Eigen::VectorXd part = flatten_active(p);
    v.segment(at, part.size()) = part;
    at += part.size();
  }
  return v;
}

void unflatten(const Eigen::VectorXd& v, Network& net) {
  Eigen::Index at = 0;
  for (auto& p : net.params) {
    const Eigen::Index n = active_param_count(p.d_in, p.d_out);
    Eigen::VectorXd part = v.segment(at, n);
    unflatten_active(part, p);
    at += n;
  }
  if (at != v.size()) throw std::invalid_argument("unflatten: size mismatch");
}

// ---------------- propagation engine ----------------

namespace {

// current tensor factors during propagation
struct Factor {
  enum Kind { neuron, ancilla, reference } kind;
  int layer = -1;   // computational layer (neuron kind)
  int index = -1;   // neuron label within the layer
  int dim = 1;
};

Dims factor_dims(const std::vector<Factor>& fs) {
  Dims d;
  for (const auto& f : fs) d.push_back(f.dim);
  return d;
}

struct Step {
  Dims new_dims;             // factors prepended before the op
  Dims dims_ext;             // dims the op acts in
  std::vector<int> targets;  // op factor placement in dims_ext
  Mat w;                     // embedded perceptron unitary
  std::vector<int> keep;     // factors kept afterwards (indices into dims_ext)
  Dims dims_after;
};

struct Plan {
  std::vector<Step> steps;
  std::vector<Mat> pre_op_states;  // captured X_m (before U_m), per perceptron
  Dims final_dims_raw;
  std::vector<int> final_perm;     // identity ⇔ empty
  Mat result;
};

Mat zero_projector(int dim) {
  Mat z = Mat::Zero(dim, dim);
  z(0, 0) = 1.0;
  return z;
}

Mat apply_keep(const Mat& x, const Dims& dims, const std::vector<int>& keep) {
  if (keep.size() == dims.size()) return x;
  return partial_trace(x, dims, keep);
}

Plan run_forward(const Network& net, const Mat& input, bool with_ref, bool capture) {
  const auto& arch = net.arch;
  std::vector<Factor> factors;
  for (size_t k = 0; k < arch.comp_layers[0].size(); ++k)
    factors.push_back({Factor::neuron, 0, static_cast<int>(k), arch.comp_layers[0][k]});
  if (with_ref) factors.push_back({Factor::reference, -1, -1, arch.d_in()});

  if (input.rows() != input.cols() ||
      input.rows() != dims_product(factor_dims(factors)))
    throw std::invalid_argument("network: input dimension mismatch");

  Plan plan;
  Mat x = input;
  const int transitions = static_cast<int>(arch.comp_layers.size()) - 1;
  size_t pidx = 0;
  for (int t = 0; t < transitions; ++t) {
    const size_t first_of_t = pidx;
    for (size_t k = 0; k < arch.comp_layers[t + 1].size(); ++k, ++pidx) {
      const auto& ps = arch.perceptrons[pidx];
      Step st;

      std::vector<Factor> new_factors;
      new_factors.push_back({Factor::neuron, t + 1, ps.neuron, ps.added_dim});
      if (ps.ancilla_dim > 0)
        new_factors.push_back({Factor::ancilla, -1, -1, ps.ancilla_dim});
      for (const auto& f : new_factors) st.new_dims.push_back(f.dim);

      std::vector<Factor> ext = new_factors;
      ext.insert(ext.end(), factors.begin(), factors.end());
      st.dims_ext = factor_dims(ext);

      // op factor order: (added, ancilla, source neurons ascending)
      for (size_t j = 0; j < new_factors.size(); ++j)
        st.targets.push_back(static_cast<int>(j));
      for (int neuron = 0;; ++neuron) {
        bool found = false;
        for (size_t j = 0; j < ext.size(); ++j)
          if (ext[j].kind == Factor::neuron && ext[j].layer == t &&
              ext[j].index == neuron) {
            st.targets.push_back(static_cast<int>(j));
            found = true;
          }
        if (!found) break;
      }

      Mat x_ext = x;
      for (auto it = new_factors.rbegin(); it != new_factors.rend(); ++it)
        x_ext = kron(zero_projector(it->dim), x_ext);

      st.w = embed_operator(perceptron_unitary(net.params[pidx]), st.dims_ext,
                            st.targets);
      if (capture) plan.pre_op_states.push_back(x_ext);
      x = st.w * x_ext * st.w.adjoint();

      // drop dead factors: this perceptron's ancilla now, the source layer
      // once its last perceptron has fired
      const bool last_of_transition = pidx + 1 - first_of_t ==
                                      arch.comp_layers[t + 1].size();
      std::vector<Factor> next_factors;
      for (size_t j = 0; j < ext.size(); ++j) {
        const auto& f = ext[j];
        const bool is_own_ancilla = f.kind == Factor::ancilla && j == 1 &&
                                    ps.ancilla_dim > 0;
        const bool is_spent_source = last_of_transition &&
                                     f.kind == Factor::neuron && f.layer == t;
        if (is_own_ancilla || is_spent_source) continue;
        st.keep.push_back(static_cast<int>(j));
        next_factors.push_back(f);
      }
      st.dims_after = factor_dims(next_factors);
      x = apply_keep(x, st.dims_ext, st.keep);
      factors = std::move(next_factors);
      plan.steps.push_back(std::move(st));
    }
  }

  plan.final_dims_raw = factor_dims(factors);
  // canonical output order: ascending neuron label, reference last
  std::vector<int> order;
  for (int neuron = 0;; ++neuron) {
    bool found = false;
    for (size_t j = 0; j < factors.size(); ++j)
      if (factors[j].kind == Factor::neuron && factors[j].index == neuron) {
        order.push_back(static_cast<int>(j));
        found = true;
      }
    if (!found) break;
  }
  for (size_t j = 0; j < factors.size(); ++j)
    if (factors[j].kind == Factor::reference) order.push_back(static_cast<int>(j));

  bool identity = true;
  for (size_t j = 0; j < order.size(); ++j)
    if (order[j] != static_cast<int>(j)) identity = false;
  if (!identity) {
    plan.final_perm = order;
    x = permute_factors(x, plan.final_dims_raw, order);
  }
  plan.result = x;
  return plan;
}

// push a gradient seed (state on the space right after perceptron m's op)
// through the rest of the plan
Mat replay(const Plan& plan, size_t m, Mat seed) {
  seed = apply_keep(seed, plan.steps[m].dims_ext, plan.steps[m].keep);
  for (size_t j = m + 1; j < plan.steps.size(); ++j) {
    const Step& st = plan.steps[j];
    for (auto it = st.new_dims.rbegin(); it != st.new_dims.rend(); ++it)
      seed = kron(zero_projector(*it), seed);
    seed = st.w * seed * st.w.adjoint();
    seed = apply_keep(seed, st.dims_ext, st.keep);
  }
  if (!plan.final_perm.empty())
    seed = permute_factors(seed, plan.final_dims_raw, plan.final_perm);
  return seed;
}

Mat gradient_seed(const Plan& plan, const Mat& g_emb, size_t m) {
  const Step& st = plan.steps[m];
  const Mat& x = plan.pre_op_states[m];
  const Mat comm = Cx(0.0, 1.0) * (g_emb * x - x * g_emb);
  return st.w * comm * st.w.adjoint();
}

Mat maximally_entangled_input(const Architecture& arch) {
  const int d = arch.d_in();
  Mat omega = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) omega(i * d + i, j * d + j) = 1.0 / d;
  return omega;
}

}  // namespace

Mat apply(const Network& net, const Mat& rho_in) {
  return run_forward(net, rho_in, false, false).result;
}

Mat choi_state(const Network& net) {
  return run_forward(net, maximally_entangled_input(net.arch), true, false).result;
}

Mat output_gradient(const Network& net, const Mat& rho_in, int perceptron,
                    int x, int y) {
  if (perceptron < 0 || perceptron >= static_cast<int>(net.params.size()))
    throw std::invalid_argument("output_gradient: perceptron index out of range");
  const ParamMatrix& p = net.params[perceptron];
  if (!is_active_entry(x, y, p.d_in))
    throw std::invalid_argument("output_gradient: inactive parameter entry");
  Plan plan = run_forward(net, rho_in, false, true);
  const GateSuffixes sfx = gate_suffixes(p);
  const Mat g = generator(sfx, p, x, y);
  const Step& st = plan.steps[perceptron];
  const Mat g_emb = embed_operator(g, st.dims_ext, st.targets);
  return replay(plan, perceptron, gradient_seed(plan, g_emb, perceptron));
}

namespace {

std::vector<Mat> all_gradients(const Network& net, Plan& plan) {
  std::vector<Mat> out;
  for (size_t m = 0; m < net.params.size(); ++m) {
    const ParamMatrix& p = net.params[m];
    const GateSuffixes sfx = gate_suffixes(p);
    const Step& st = plan.steps[m];
    for (auto [x, y] : active_entries(p.d_in, p.d_out)) {
      const Mat g = generator(sfx, p, x, y);
      const Mat g_emb = embed_operator(g, st.dims_ext, st.targets);
      out.push_back(replay(plan, m, gradient_seed(plan, g_emb, m)));
    }
  }
  return out;
}

}  // namespace

std::vector<Mat> output_gradients(const Network& net, const Mat& rho_in) {
  Plan plan = run_forward(net, rho_in, false, true);
  return all_gradients(net, plan);
}

std::vector<Mat> choi_gradients(const Network& net) {
  Plan plan = run_forward(net, maximally_entangled_input(net.arch), true, true);
  return all_gradients(net, plan);
}

// ---------------- full-space constructions ----------------

FullIsometry assemble_isometry_full(const Network& net) {
  const auto& arch = net.arch;
  std::vector<Factor> factors;
  for (size_t k = 0; k < arch.comp_layers[0].size(); ++k)
    factors.push_back({Factor::neuron, 0, static_cast<int>(k), arch.comp_layers[0][k]});

  Mat v = Mat::Identity(arch.d_in(), arch.d_in());
  size_t pidx = 0;
  const int transitions = static_cast<int>(arch.comp_layers.size()) - 1;
  for (int t = 0; t < transitions; ++t) {
    for (size_t k = 0; k < arch.comp_layers[t + 1].size(); ++k, ++pidx) {
      const auto& ps = arch.perceptrons[pidx];
      std::vector<Factor> new_factors;
      new_factors.push_back({Factor::neuron, t + 1, ps.neuron, ps.added_dim});
      if (ps.ancilla_dim > 0)
        new_factors.push_back({Factor::ancilla, -1, -1, ps.ancilla_dim});

      for (auto it = new_factors.rbegin(); it != new_factors.rend(); ++it) {
        Mat e0 = Mat::Zero(it->dim, 1);
        e0(0, 0) = 1.0;
        v = kron(e0, v);
      }
      std::vector<Factor> ext = new_factors;
      ext.insert(ext.end(), factors.begin(), factors.end());
      const Dims dims_ext = factor_dims(ext);

      std::vector<int> targets;
      for (size_t j = 0; j < new_factors.size(); ++j)
        targets.push_back(static_cast<int>(j));
      for (int neuron = 0;; ++neuron) {
        bool found = false;
        for (size_t j = 0; j < ext.size(); ++j)
          if (ext[j].kind == Factor::neuron && ext[j].layer == t &&
              ext[j].index == neuron) {
            targets.push_back(static_cast<int>(j));
            found = true;
          }
        if (!found) break;
      }
      v = embed_operator(perceptron_unitary(net.params[pidx]), dims_ext, targets) * v;
      factors = std::move(ext);
    }
  }

  FullIsometry out;
  out.v = std::move(v);
  out.dims = factor_dims(factors);
  const int last = transitions;
  for (int neuron = 0;; ++neuron) {
    bool found = false;
    for (size_t j = 0; j < factors.size(); ++j)
      if (factors[j].kind == Factor::neuron && factors[j].layer == last &&
          factors[j].index == neuron) {
        out.output_factors.push_back(static_cast<int>(j));
        found = true;
      }
    if (!found) break;
  }
  return out;
}

Mat assemble_isometry(const Network& net) { return assemble_isometry_full(net).v; }

std::vector<Mat> kraus_operators(const Network& net) {
  const FullIsometry f = assemble_isometry_full(net);
  const int d_in = static_cast<int>(f.v.cols());

  std::vector<int> env;
  std::vector<bool> is_out(f.dims.size(), false);
  for (int o : f.output_factors) is_out[o] = true;
  for (size_t j = 0; j < f.dims.size(); ++j)
    if (!is_out[j]) env.push_back(static_cast<int>(j));

  Dims out_dims, env_dims;
  for (int o : f.output_factors) out_dims.push_back(f.dims[o]);
  for (int e : env) env_dims.push_back(f.dims[e]);
  const Eigen::Index d_out = dims_product(out_dims);
  const Eigen::Index d_env = dims_product(env_dims);

  // row of the full space for given (output digits, env digits)
  auto compose_row = [&](Eigen::Index o, Eigen::Index e) {
    std::vector<int> digits(f.dims.size(), 0);
    for (int k = static_cast<int>(out_dims.size()) - 1; k >= 0; --k) {
      digits[f.output_factors[k]] = static_cast<int>(o % out_dims[k]);
      o /= out_dims[k];
    }
    for (int k = static_cast<int>(env_dims.size()) - 1; k >= 0; --k) {
      digits[env[k]] = static_cast<int>(e % env_dims[k]);
      e /= env_dims[k];
    }
    Eigen::Index row = 0;
    for (size_t k = 0; k < f.dims.size(); ++k) row = row * f.dims[k] + digits[k];
    return row;
  };

  std::vector<Mat> ks;
  ks.reserve(d_env);
  for (Eigen::Index e = 0; e < d_env; ++e) {
    Mat k(d_out, d_in);
    for (Eigen::Index o = 0; o < d_out; ++o)
      k.row(o) = f.v.row(compose_row(o, e));
    ks.push_back(std::move(k));
  }
  return ks;
}

Mat apply_conventional_unitary(const Network& net, const Mat& rho_in) {
  if (net.arch.style != Style::conventional)
    throw std::invalid_argument("apply_conventional_unitary: conventional style only");
  if (rho_in.rows() != rho_in.cols() || rho_in.rows() != net.arch.d_in())
    throw std::invalid_argument("network: input dimension mismatch");

  const auto& arch = net.arch;
  std::vector<Factor> factors;
  for (size_t k = 0; k < arch.comp_layers[0].size(); ++k)
    factors.push_back({Factor::neuron, 0, static_cast<int>(k), arch.comp_layers[0][k]});

  Mat x = rho_in;
  size_t pidx = 0;
  const int transitions = static_cast<int>(arch.comp_layers.size()) - 1;
  for (int t = 0; t < transitions; ++t) {
    for (size_t k = 0; k < arch.comp_layers[t + 1].size(); ++k, ++pidx) {
      const auto& ps = arch.perceptrons[pidx];
      x = kron(zero_projector(ps.added_dim), x);
      factors.insert(factors.begin(),
                     {Factor::neuron, t + 1, ps.neuron, ps.added_dim});
      const Dims dims = factor_dims(factors);
      std::vector<int> targets{0};
      for (int neuron = 0;; ++neuron) {
        bool found = false;
        for (size_t j = 0; j < factors.size(); ++j)
          if (factors[j].kind == Factor::neuron && factors[j].layer == t &&
              factors[j].index == neuron) {
            targets.push_back(static_cast<int>(j));
            found = true;
          }
        if (!found) break;
      }
      const Mat w = embed_operator(perceptron_unitary(net.params[pidx]), dims, targets);
      x = w * x * w.adjoint();
    }
  }

  // trace everything but the output layer, then order neurons ascending
  const Dims dims = factor_dims(factors);
  std::vector<int> keep;
  for (size_t j = 0; j < factors.size(); ++j)
    if (factors[j].kind == Factor::neuron && factors[j].layer == transitions)
      keep.push_back(static_cast<int>(j));
  x = partial_trace(x, dims, keep);

  std::vector<Factor> kept;
  for (int j : keep) kept.push_back(factors[j]);
  Dims kdims = factor_dims(kept);
  std::vector<int> order;
  for (int neuron = 0;; ++neuron) {
    bool found = false;
    for (size_t j = 0; j < kept.size(); ++j)
      if (kept[j].index == neuron) {
        order.push_back(static_cast<int>(j));
        found = true;
      }
    if (!found) break;
  }
  bool identity = true;
  for (size_t j = 0; j < order.size(); ++j)
    if (order[j] != static_cast<int>(j)) identity = false;
  return identity ? x : permute_factors(x, kdims, order);
}

}  // namespace dqnn
