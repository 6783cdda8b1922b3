#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dqnn/linalg.hpp"

namespace dqnn {

// Cost functions comparing a produced state rho_out against a target rho_tar.
// Fidelity-style costs (f1, f2, qcb) are maximized during training; the rest
// are minimized.
enum class CostKind { hs, trace, f1, d1, f2, d2, qcb, qre };

enum class Direction { minimize, maximize };

Direction cost_direction(CostKind kind);
std::string cost_tag(CostKind kind);
CostKind cost_from_tag(const std::string& tag);
std::vector<CostKind> all_cost_kinds();

struct EvalOptions {
  // qre: replace zero eigenvalues of rho_out by a floor instead of returning
  // the +inf sentinel (training needs finite values near the boundary)
  bool qre_regularize = false;
  double qre_floor = 1e-12;
};

double evaluate(CostKind kind, const Mat& rho_tar, const Mat& rho_out,
                const EvalOptions& opts = {});

// whether gradient_term supports GradMode::analytic for this cost
bool has_analytic_gradient(CostKind kind);

enum class GradMode { analytic, finite_difference };

struct GradRequest {
  CostKind kind = CostKind::hs;
  GradMode mode = GradMode::analytic;
  double epsilon = 1e-6;  // finite-difference step along drho
  EvalOptions opts;
};

// dC/dlambda given drho = d(rho_out)/dlambda.  Returns nullopt when the pair
// is an exact match (trace distance < 1e-12) and the derivative is omitted.
std::optional<double> gradient_term(const GradRequest& req, const Mat& rho_tar,
                                    const Mat& rho_out, const Mat& drho);

// mean cost over pairs (sizes must match)
double total_cost(CostKind kind, const std::vector<Mat>& targets,
                  const std::vector<Mat>& outputs, const EvalOptions& opts = {});

}  // namespace dqnn
