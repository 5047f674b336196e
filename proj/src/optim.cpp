// optim.cpp -- OWL-QN / L-BFGS.

#include "ampere/optim.hpp"

#include <cmath>
#include <deque>
#include <ostream>

#include "ampere/error.hpp"

namespace ampere {

namespace {

double l1_norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += std::abs(x);
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Left/right subderivative choice of f(w) + c1*|w|_1.
void pseudo_gradient(const std::vector<double>& w, const std::vector<double>& g,
                     double c1, std::vector<double>& pg) {
  pg.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      pg[i] = g[i] + c1;
    } else if (w[i] < 0.0) {
      pg[i] = g[i] - c1;
    } else if (g[i] + c1 < 0.0) {
      pg[i] = g[i] + c1;
    } else if (g[i] - c1 > 0.0) {
      pg[i] = g[i] - c1;
    } else {
      pg[i] = 0.0;
    }
  }
}

}  // namespace

OptimResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& smooth_fg,
    std::vector<double>& w, const OptimOptions& opt) {
  const std::size_t dim = w.size();
  const bool l1 = opt.c1 > 0.0;

  std::vector<double> g(dim), pg, d(dim), w_new(dim), g_new(dim);
  double f = smooth_fg(w, g);
  double F = f + opt.c1 * l1_norm(w);
  if (!std::isfinite(F)) throw NumericError("objective not finite at the initial point");

  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;
  std::deque<double> past_F{F};

  OptimResult result;
  result.objective = F;

  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    if (l1) {
      pseudo_gradient(w, g, opt.c1, pg);
    } else {
      pg = g;
    }

    double pg_norm = std::sqrt(dot(pg, pg));
    double w_norm = std::sqrt(dot(w, w));
    if (pg_norm <= 1e-8 * std::max(1.0, w_norm)) {
      result.converged = true;
      result.stop_reason = "gradient norm below threshold";
      break;
    }

    // two-loop recursion on the pseudo-gradient
    for (std::size_t i = 0; i < dim; ++i) d[i] = -pg[i];
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * dot(S[k], d);
      for (std::size_t i = 0; i < dim; ++i) d[i] -= alpha[k] * Y[k][i];
    }
    if (!S.empty()) {
      double scale = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
      for (std::size_t i = 0; i < dim; ++i) d[i] *= scale;
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      double beta = rho[k] * dot(Y[k], d);
      for (std::size_t i = 0; i < dim; ++i) d[i] += (alpha[k] - beta) * S[k][i];
    }
    if (l1) {
      // constrain the direction to the descent orthant of the pseudo-gradient
      for (std::size_t i = 0; i < dim; ++i) {
        if (d[i] * -pg[i] <= 0.0) d[i] = 0.0;
      }
    }

    double d_norm = std::sqrt(dot(d, d));
    if (d_norm <= 0.0) {
      result.converged = true;
      result.stop_reason = "null search direction";
      break;
    }

    double step = iter == 1 ? std::min(1.0, 1.0 / d_norm) : 1.0;
    bool accepted = false;
    double F_new = F, f_new = f;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      for (std::size_t i = 0; i < dim; ++i) w_new[i] = w[i] + step * d[i];
      if (l1) {
        // stay in the orthant chosen at w: sign(xi) = sign(w) or, at zero,
        // the direction the pseudo-gradient pushes toward
        for (std::size_t i = 0; i < dim; ++i) {
          double xi = w[i] != 0.0 ? w[i] : -pg[i];
          if (w_new[i] * xi < 0.0) w_new[i] = 0.0;
        }
      }
      f_new = smooth_fg(w_new, g_new);
      F_new = f_new + opt.c1 * l1_norm(w_new);
      if (!std::isfinite(F_new)) {
        step *= 0.5;
        continue;
      }
      double dgtest = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dgtest += pg[i] * (w_new[i] - w[i]);
      if (dgtest < 0.0 && F_new <= F + opt.armijo * dgtest) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stop_reason = "line search failed";
      break;
    }

    std::vector<double> s(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = w_new[i] - w[i];
      y[i] = g_new[i] - g[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-12) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opt.history) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }

    w.swap(w_new);
    g.swap(g_new);
    f = f_new;
    F = F_new;
    result.iterations = iter;
    result.objective = F;
    if (opt.log && iter % opt.log_every == 0) {
      (*opt.log) << "iter " << iter << " objective " << F << "\n";
    }

    past_F.push_back(F);
    if (static_cast<int>(past_F.size()) > opt.past + 1) past_F.pop_front();
    if (static_cast<int>(past_F.size()) == opt.past + 1) {
      double rel = (past_F.front() - F) / std::max(1.0, std::abs(F));
      if (rel < opt.tolerance) {
        result.converged = true;
        result.stop_reason = "objective change below tolerance";
        break;
      }
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "max iterations";
  result.objective = F;
  if (!std::isfinite(F)) throw NumericError("objective diverged during optimization");
  return result;
}

}  // namespace ampere
