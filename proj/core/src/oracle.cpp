#include "optocool/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "optocool/affine_flow.hpp"
#include "optocool/error.hpp"
#include "optocool/moments.hpp"

namespace optocool {
namespace {

using Dense = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// A term c_i |i + shift><i| of an operator with one nonzero per column, i = n_a dim_b + n_b.
struct ShiftTerm {
  int shift = 0;
  Vec weight;  // weight(i) multiplies the element moved from index i + shift to i
};

/// drho/dt = X + X† + sum_k L_k rho L_k†, X = -i K rho, K = H - (i/2) sum L†L.
/// K and every L_k are sums of index shifts on the product basis, so each term is a
/// row-scaled block copy instead of a general matrix product.
class MasterGenerator {
 public:
  MasterGenerator(const SystemParams& p, int dim_a, int dim_b) : dim_(dim_a * dim_b) {
    const cplx i(0.0, 1.0);
    const cplx g = p.G;
    const cplx gc = std::conj(p.G);
    diag_ = Vec::Zero(dim_);
    Vec adag_b = Vec::Zero(dim_), adag_bdag = Vec::Zero(dim_), a_b = Vec::Zero(dim_),
        a_bdag = Vec::Zero(dim_);
    Vec jump_a = Vec::Zero(dim_), jump_b = Vec::Zero(dim_), jump_bdag = Vec::Zero(dim_);
    const double down = p.gamma * (p.n_th + 1.0);
    const double up = p.gamma * p.n_th;
    for (int na = 0; na < dim_a; ++na) {
      for (int nb = 0; nb < dim_b; ++nb) {
        const int idx = na * dim_b + nb;
        const bool a_up = na + 1 < dim_a;
        const bool b_up = nb + 1 < dim_b;
        // Truncated b b† vanishes on the top phonon level.
        const double bbdag = b_up ? nb + 1.0 : 0.0;
        diag_(idx) = -p.delta_prime * na + p.omega_m * nb -
                     0.5 * i * (p.kappa * na + down * nb + up * bbdag);
        // Row idx of K collects the amplitude arriving from column idx + shift.
        if (na >= 1 && b_up) adag_b(idx) = g * std::sqrt(na * (nb + 1.0));
        if (na >= 1 && nb >= 1) adag_bdag(idx) = g * std::sqrt(static_cast<double>(na * nb));
        if (a_up && b_up) a_b(idx) = gc * std::sqrt((na + 1.0) * (nb + 1.0));
        if (a_up && nb >= 1) a_bdag(idx) = gc * std::sqrt((na + 1.0) * nb);
        if (a_up) jump_a(idx) = std::sqrt(p.kappa * (na + 1.0));
        if (b_up) jump_b(idx) = std::sqrt(down * (nb + 1.0));
        if (nb >= 1) jump_bdag(idx) = std::sqrt(up * nb);
      }
    }
    diag_ *= -i;
    coupling_ = {{-dim_b + 1, -i * adag_b},
                 {-dim_b - 1, -i * adag_bdag},
                 {dim_b + 1, -i * a_b},
                 {dim_b - 1, -i * a_bdag}};
    jumps_ = {{dim_b, jump_a}, {1, jump_b}, {-1, jump_bdag}};
    x_.resize(dim_, dim_);
  }

  void operator()(const Dense& rho, Dense& out) {
    x_.noalias() = diag_.asDiagonal() * rho;
    for (const ShiftTerm& t : coupling_) {
      const auto [lo, len] = span(t.shift);
      x_.middleRows(lo, len).noalias() +=
          t.weight.segment(lo, len).asDiagonal() * rho.middleRows(lo + t.shift, len);
    }
    out = x_ + x_.adjoint();
    for (const ShiftTerm& t : jumps_) {
      const auto [lo, len] = span(t.shift);
      const auto w = t.weight.segment(lo, len);
      out.block(lo, lo, len, len).noalias() +=
          w.asDiagonal() * rho.block(lo + t.shift, lo + t.shift, len, len) * w.asDiagonal();
    }
  }

 private:
  /// Rows i for which i + shift stays inside the basis.
  std::pair<Eigen::Index, Eigen::Index> span(int shift) const {
    return shift >= 0 ? std::pair<Eigen::Index, Eigen::Index>{0, dim_ - shift}
                      : std::pair<Eigen::Index, Eigen::Index>{-shift, dim_ + shift};
  }

  Eigen::Index dim_;
  Vec diag_;
  std::vector<ShiftTerm> coupling_;
  std::vector<ShiftTerm> jumps_;
  Dense x_;
};

struct Observables {
  double n_a = 0.0;
  double n_b = 0.0;
  double leak = 0.0;
  double trace = 0.0;
  double min_population = 0.0;
  double hermiticity = 0.0;
};

Observables observe(const Dense& rho, int dim_a, int dim_b) {
  Observables o;
  o.min_population = INFINITY;
  double top_a_sum = 0.0;
  double top_b_sum = 0.0;
  for (int na = 0; na < dim_a; ++na) {
    for (int nb = 0; nb < dim_b; ++nb) {
      const int idx = na * dim_b + nb;
      const double pop = rho(idx, idx).real();
      o.trace += pop;
      o.n_a += na * pop;
      o.n_b += nb * pop;
      o.min_population = std::min(o.min_population, pop);
      if (na >= dim_a - 2) top_a_sum += pop;
      if (nb >= dim_b - 2) top_b_sum += pop;
    }
  }
  o.leak = std::max(top_a_sum, top_b_sum);
  o.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  return o;
}

}  // namespace

void FockConfig::validate() const {
  if (dim_a < 2 || dim_b < 2) throw Error(ErrorKind::kInvalidParams, "Fock dimensions must be >= 2");
  if (!(leak_tolerance > 0.0)) throw Error(ErrorKind::kInvalidParams, "leak tolerance must be > 0");
  if (static_cast<long long>(dim_a) * dim_b > state_cap) {
    std::ostringstream os;
    os << dim_a << " x " << dim_b << " states exceed the cap of " << state_cap;
    throw Error(ErrorKind::kCapExceeded, os.str());
  }
}

MasterEvolution evolve_master(const SystemParams& params, const FockConfig& cfg,
                              std::span<const double> times, const OracleOptions& options) {
  params.validate_dynamics();
  cfg.validate();
  require_time_grid(times);
  if (!(options.step_scale > 0.0)) throw Error(ErrorKind::kInvalidParams, "step_scale must be > 0");

  const int dim = cfg.dim_a * cfg.dim_b;
  MasterGenerator rhs(params, cfg.dim_a, cfg.dim_b);

  MasterEvolution ev;
  ev.times.assign(times.begin(), times.end());

  // |0><0| for the cavity, truncated geometric distribution for the mechanics.
  Dense rho = Dense::Zero(dim, dim);
  const double x = params.n_th / (1.0 + params.n_th);
  double weight = 0.0;
  std::vector<double> pops(cfg.dim_b);
  for (int n = 0; n < cfg.dim_b; ++n) {
    pops[n] = (1.0 - x) * std::pow(x, n);
    weight += pops[n];
  }
  for (int n = 0; n < cfg.dim_b; ++n) rho(n, n) = pops[n] / weight;
  ev.renormalization = 1.0 - weight;

  const double h_max = 0.01 * options.step_scale /
                       (params.omega_m + params.kappa +
                        std::abs(params.G) * std::max(cfg.dim_a, cfg.dim_b));
  ev.max_step = h_max;
  ev.min_population = INFINITY;

  Dense k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / h_max));
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        rhs(rho, k1);
        stage = rho + (h / 2.0) * k1;
        rhs(stage, k2);
        stage = rho + (h / 2.0) * k2;
        rhs(stage, k3);
        stage = rho + h * k3;
        rhs(stage, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    now = target;

    const Observables o = observe(rho, cfg.dim_a, cfg.dim_b);
    ev.n_a.push_back(o.n_a);
    ev.n_b.push_back(o.n_b);
    ev.leak.push_back(o.leak);
    ev.trace_drift = std::max(ev.trace_drift, std::abs(o.trace - 1.0));
    ev.hermiticity = std::max(ev.hermiticity, o.hermiticity);
    ev.min_population = std::min(ev.min_population, o.min_population);
    if (options.throw_on_leak && o.leak > cfg.leak_tolerance) {
      std::ostringstream os;
      os << "top-level population " << o.leak << " exceeds " << cfg.leak_tolerance << " at t = "
         << target << " (dims " << cfg.dim_a << " x " << cfg.dim_b << ")";
      throw Error(ErrorKind::kTruncationLeak, os.str());
    }
  }
  return ev;
}

double max_abs_deviation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kInvalidParams, "series lengths differ");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

OracleReport compare(const SystemParams& params, const FockConfig& cfg,
                     std::span<const double> times, double tol_abs,
                     const CompareOptions& options) {
  OracleOptions oo;
  oo.throw_on_leak = options.throw_on_leak;
  const MasterEvolution ev = evolve_master(params, cfg, times, oo);
  const Trajectory tr = propagate(build_matrices(params), initial_vector(params.n_th), times);

  OracleReport r;
  r.config = cfg;
  r.params = params;
  r.tol = tol_abs;
  r.max_abs_dev = max_abs_deviation(ev.n_b, tr.n_b);
  r.max_abs_dev_n_a = max_abs_deviation(ev.n_a, tr.n_a);
  r.leak_max = *std::max_element(ev.leak.begin(), ev.leak.end());
  r.trace_drift = ev.trace_drift;
  r.hermiticity = ev.hermiticity;
  r.min_population = ev.min_population;
  r.renormalization = ev.renormalization;
  if (options.check_halving) {
    oo.step_scale = 0.5;
    oo.throw_on_leak = false;
    const MasterEvolution fine = evolve_master(params, cfg, times, oo);
    r.halving_dev = max_abs_deviation(ev.n_b, fine.n_b);
  }
  r.pass = r.max_abs_dev < tol_abs && r.leak_max <= cfg.leak_tolerance;
  return r;
}

}  // namespace optocool
