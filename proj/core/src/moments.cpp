#include "optocool/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optocool/affine_flow.hpp"
#include "optocool/error.hpp"

namespace optocool {

using algebra::Monomial;
using algebra::Polynomial;

const std::array<Monomial, kMomentCount>& moment_basis() {
  // {ad, a, bd, b}
  static const std::array<Monomial, kMomentCount> basis = {{
      {1, 1, 0, 0},  // a†a
      {0, 0, 1, 1},  // b†b
      {1, 0, 0, 1},  // a†b
      {0, 1, 1, 0},  // a b†
      {0, 1, 0, 1},  // a b
      {1, 0, 1, 0},  // a†b†
      {0, 2, 0, 0},  // a²
      {2, 0, 0, 0},  // a†²
      {0, 0, 0, 2},  // b²
      {0, 0, 2, 0},  // b†²
  }};
  return basis;
}

const std::array<std::string_view, kMomentCount>& moment_names() {
  static const std::array<std::string_view, kMomentCount> names = {
      "na", "nb", "adagb", "abdag", "ab", "adagbdag", "aa", "adagadag", "bb", "bdagbdag"};
  return names;
}

Eigen::VectorXcd MomentVector::to_eigen() const {
  Eigen::VectorXcd x(kMomentCount);
  for (std::size_t i = 0; i < kMomentCount; ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

MomentVector MomentVector::from_eigen(const Eigen::VectorXcd& x) {
  MomentVector out;
  for (std::size_t i = 0; i < kMomentCount; ++i) out.v[i] = x(static_cast<Eigen::Index>(i));
  return out;
}

std::optional<std::string> MomentVector::invariant_violation(double rel_tol) const {
  double scale = 1.0;
  for (const cplx& z : v) scale = std::max(scale, std::abs(z));
  const double tol = rel_tol * scale;
  for (std::size_t i = 0; i < kMomentCount; ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      return "moment " + std::string(moment_names()[i]) + " is not finite";
    }
  }
  std::ostringstream os;
  for (std::size_t i : {0u, 1u}) {
    if (std::abs(v[i].imag()) > tol) {
      os << moment_names()[i] << " has imaginary part " << v[i].imag();
      return os.str();
    }
    if (v[i].real() < -tol) {
      os << moment_names()[i] << " is negative: " << v[i].real();
      return os.str();
    }
  }
  for (std::size_t i : {2u, 4u, 6u, 8u}) {
    if (std::abs(v[i + 1] - std::conj(v[i])) > tol) {
      os << moment_names()[i + 1] << " is not the conjugate of " << moment_names()[i];
      return os.str();
    }
  }
  return std::nullopt;
}

algebra::Lindbladian lindbladian(const SystemParams& p, Coupling coupling) {
  const Polynomial a = Polynomial::a();
  const Polynomial ad = Polynomial::adag();
  const Polynomial b = Polynomial::b();
  const Polynomial bd = Polynomial::bdag();
  const cplx g = p.G;

  Polynomial h = (-p.delta_prime) * (ad * a) + p.omega_m * (bd * b);
  h += g * (ad * b) + std::conj(g) * (a * bd);
  if (coupling == Coupling::kFull) h += g * (ad * bd) + std::conj(g) * (a * b);

  algebra::Lindbladian gen;
  gen.hamiltonian = h;
  gen.jumps = {std::sqrt(p.kappa) * a, std::sqrt(p.gamma * (p.n_th + 1.0)) * b,
               std::sqrt(p.gamma * p.n_th) * bd};
  return gen;
}

MomentMatrices moment_equations(const algebra::Lindbladian& generator) {
  const auto& basis = moment_basis();
  MomentMatrices out;
  out.m.setZero();
  out.n.setZero();
  for (std::size_t row = 0; row < kMomentCount; ++row) {
    const Polynomial d = algebra::adjoint_action(generator, Polynomial::monomial(basis[row]));
    for (const auto& [mono, coeff] : d.terms()) {
      if (mono.degree() == 0) {
        out.n(static_cast<Eigen::Index>(row)) += coeff;
        continue;
      }
      const auto it = std::find(basis.begin(), basis.end(), mono);
      if (it == basis.end()) {
        throw Error(ErrorKind::kInvalidParams,
                    "moment equations do not close: d<" + std::string(moment_names()[row]) +
                        ">/dt contains " + Polynomial::monomial(mono, coeff).to_string());
      }
      out.m(static_cast<Eigen::Index>(row), it - basis.begin()) += coeff;
    }
  }
  return out;
}

MomentMatrices build_matrices(const SystemParams& params, Coupling coupling) {
  params.validate_dynamics();
  return moment_equations(lindbladian(params, coupling));
}

MomentVector initial_vector(double n_th) {
  if (!std::isfinite(n_th) || n_th < 0.0) {
    throw Error(ErrorKind::kInvalidParams, "n_th must be finite and >= 0");
  }
  MomentVector v;
  v[Moment::kNb] = n_th;
  return v;
}

Trajectory make_trajectory(std::span<const double> times, std::vector<MomentVector> states) {
  Trajectory tr;
  tr.times.assign(times.begin(), times.end());
  tr.states = std::move(states);
  tr.n_b.reserve(tr.states.size());
  tr.n_a.reserve(tr.states.size());
  for (const auto& s : tr.states) {
    tr.n_b.push_back(s.n_b());
    tr.n_a.push_back(s.n_a());
  }
  return tr;
}

namespace {

// Conjugate pairs (x, x*) map to (Re x, Im x); na and nb stay as they are.
// M and N are real in this basis, so the propagated moments keep exact
// hermitian-pair structure instead of drifting by round-off.
constexpr std::array<Eigen::Index, 4> kPairStarts{2, 4, 6, 8};

Eigen::Matrix<cplx, 10, 10> quadrature_transform() {
  Eigen::Matrix<cplx, 10, 10> t = Eigen::Matrix<cplx, 10, 10>::Zero();
  t(0, 0) = 1.0;
  t(1, 1) = 1.0;
  for (Eigen::Index i : kPairStarts) {
    t(i, i) = 0.5;
    t(i, i + 1) = 0.5;
    t(i + 1, i) = cplx(0.0, -0.5);
    t(i + 1, i + 1) = cplx(0.0, 0.5);
  }
  return t;
}

Eigen::Matrix<cplx, 10, 10> quadrature_inverse() {
  Eigen::Matrix<cplx, 10, 10> t = Eigen::Matrix<cplx, 10, 10>::Zero();
  t(0, 0) = 1.0;
  t(1, 1) = 1.0;
  for (Eigen::Index i : kPairStarts) {
    t(i, i) = 1.0;
    t(i, i + 1) = cplx(0.0, 1.0);
    t(i + 1, i) = 1.0;
    t(i + 1, i + 1) = cplx(0.0, -1.0);
  }
  return t;
}

AffineFlow quadrature_flow(const MomentMatrices& mm) {
  const Eigen::Matrix<cplx, 10, 10> t = quadrature_transform();
  const Eigen::MatrixXd m = (t * mm.m * quadrature_inverse()).real();
  const Eigen::VectorXd n = (t * mm.n).real();
  return AffineFlow(m.cast<cplx>(), n.cast<cplx>());
}

Eigen::VectorXcd to_quadratures(const MomentVector& v) {
  Eigen::VectorXcd w(kMomentCount);
  w(0) = v.v[0].real();
  w(1) = v.v[1].real();
  for (Eigen::Index i : kPairStarts) {
    const cplx z = v.v[static_cast<std::size_t>(i)];
    w(i) = z.real();
    w(i + 1) = z.imag();
  }
  return w;
}

MomentVector from_quadratures(const Eigen::VectorXcd& w) {
  MomentVector v;
  v.v[0] = w(0).real();
  v.v[1] = w(1).real();
  for (Eigen::Index i : kPairStarts) {
    const cplx z(w(i).real(), w(i + 1).real());
    v.v[static_cast<std::size_t>(i)] = z;
    v.v[static_cast<std::size_t>(i) + 1] = std::conj(z);
  }
  return v;
}

// Vectors off the hermitian-pair subspace are propagated as given.
bool hermitian_consistent(const MomentVector& v) {
  if (v.v[0].imag() != 0.0 || v.v[1].imag() != 0.0) return false;
  for (Eigen::Index i : kPairStarts) {
    const auto k = static_cast<std::size_t>(i);
    if (v.v[k + 1] != std::conj(v.v[k])) return false;
  }
  return true;
}

class MomentFlow {
 public:
  MomentFlow(const MomentMatrices& mm, bool quadratures)
      : quadratures_(quadratures),
        flow_(quadratures ? quadrature_flow(mm) : AffineFlow(mm.m, mm.n)) {}

  Eigen::VectorXcd enter(const MomentVector& v) const {
    return quadratures_ ? to_quadratures(v) : v.to_eigen();
  }
  MomentVector leave(const Eigen::VectorXcd& x) const {
    return quadratures_ ? from_quadratures(x) : MomentVector::from_eigen(x);
  }
  Eigen::VectorXcd advance_to(const Eigen::VectorXcd& x, double now, double t) {
    return flow_.advance_to(x, now, t);
  }

 private:
  bool quadratures_;
  AffineFlow flow_;
};

}  // namespace

Trajectory propagate(const MomentMatrices& matrices, const MomentVector& v0,
                     std::span<const double> times) {
  require_time_grid(times);
  MomentFlow flow(matrices, hermitian_consistent(v0));
  std::vector<MomentVector> states;
  states.reserve(times.size());
  Eigen::VectorXcd x = flow.enter(v0);
  double now = 0.0;
  for (double t : times) {
    x = flow.advance_to(x, now, t);
    now = t;
    states.push_back(flow.leave(x));
  }
  return make_trajectory(times, std::move(states));
}

KappaSchedule::KappaSchedule(std::vector<KappaSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error(ErrorKind::kScheduleGap, "kappa schedule is empty");
  if (segments_.front().t_start != 0.0) {
    throw Error(ErrorKind::kScheduleGap, "kappa schedule must start at t = 0");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!std::isfinite(s.kappa) || s.kappa <= 0.0) {
      throw Error(ErrorKind::kInvalidParams, "kappa schedule segment " + std::to_string(i) +
                                                 " has kappa <= 0");
    }
    if (!(s.t_end > s.t_start)) {
      throw Error(ErrorKind::kScheduleGap, "kappa schedule segment " + std::to_string(i) +
                                               " has non-positive length");
    }
    if (i > 0 && s.t_start != segments_[i - 1].t_end) {
      throw Error(ErrorKind::kScheduleGap, "kappa schedule has a gap or overlap before segment " +
                                               std::to_string(i));
    }
  }
}

KappaSchedule KappaSchedule::constant(double kappa, double t_end) {
  return KappaSchedule({{0.0, t_end, kappa}});
}

std::size_t KappaSchedule::segment_index(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const KappaSegment& s) { return x < s.t_end; });
  if (it == segments_.end()) {
    // The closing point of the last segment belongs to it.
    if (t == end()) return segments_.size() - 1;
    throw Error(ErrorKind::kScheduleGap, "kappa schedule does not cover t = " + std::to_string(t));
  }
  return static_cast<std::size_t>(it - segments_.begin());
}

Trajectory propagate_modulated(const SystemParams& params, const KappaSchedule& schedule,
                               const MomentVector& v0, std::span<const double> times) {
  params.validate_dynamics();
  require_time_grid(times);
  if (times.back() > schedule.end()) {
    throw Error(ErrorKind::kScheduleGap, "kappa schedule ends before the last sample time");
  }
  const bool quadratures = hermitian_consistent(v0);
  std::vector<MomentFlow> flows;
  flows.reserve(schedule.segments().size());
  for (const auto& seg : schedule.segments()) {
    flows.emplace_back(build_matrices(params.with_kappa(seg.kappa)), quadratures);
  }

  std::vector<MomentVector> states;
  states.reserve(times.size());
  Eigen::VectorXcd x = flows.front().enter(v0);
  double now = 0.0;
  std::size_t seg = 0;
  for (double target : times) {
    // Cross every breakpoint between now and target.
    while (schedule.segments()[seg].t_end < target) {
      x = flows[seg].advance_to(x, now, schedule.segments()[seg].t_end);
      now = schedule.segments()[seg].t_end;
      ++seg;
    }
    x = flows[seg].advance_to(x, now, target);
    now = target;
    states.push_back(flows[seg].leave(x));
  }
  return make_trajectory(times, std::move(states));
}

MomentVector steady_state_moments(const MomentMatrices& matrices) {
  const Eigen::MatrixXcd m = matrices.m;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(m, false);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kUnstableSystem, "eigenvalues of the drift matrix did not converge");
  }
  const double max_re = eig.eigenvalues().real().maxCoeff();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(max_re < -1e-14 * std::max(scale, 1.0))) {
    std::ostringstream os;
    os << "drift matrix has an eigenvalue with real part " << max_re << " >= 0";
    throw Error(ErrorKind::kUnstableSystem, os.str());
  }
  const Eigen::VectorXcd n = matrices.n;
  const Eigen::VectorXcd vss = -m.partialPivLu().solve(n);
  return MomentVector::from_eigen(vss);
}

}  // namespace optocool
