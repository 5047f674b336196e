// optim.hpp -- limited-memory quasi-Newton minimizer with orthant-wise
// handling of an L1 term (OWL-QN). With c1 = 0 this is plain L-BFGS with
// Armijo backtracking.
#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace ampere {

struct OptimOptions {
  int history = 6;
  int max_iterations = 200;
  double tolerance = 1e-5;  // relative objective change over `past` iterations
  int past = 5;
  double c1 = 0.0;  // L1 coefficient applied to all parameters
  double armijo = 1e-4;
  int max_line_search = 40;
  std::ostream* log = nullptr;
  int log_every = 20;
};

struct OptimResult {
  double objective = 0.0;  // regularized: smooth part + c1 * |w|_1
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

// smooth_fg evaluates the smooth part (loss + L2 term) and its gradient.
// The L1 term is handled here via pseudo-gradients and orthant projection,
// never differentiated. The regularized objective is non-increasing across
// accepted steps.
OptimResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& smooth_fg,
    std::vector<double>& w, const OptimOptions& options);

}  // namespace ampere
