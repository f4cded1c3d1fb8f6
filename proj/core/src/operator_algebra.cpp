#include "optocool/operator_algebra.hpp"

#include <sstream>

namespace optocool::algebra {
namespace {

double binomial(int n, int k) {
  // C(n, k) as a double; n stays tiny here.
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Normal-order a^q a†^r for one mode:
///   a^q a†^r = sum_k C(q,k) C(r,k) k! a†^(r-k) a^(q-k).
/// Returns (coefficient, k) pairs.
std::vector<std::pair<double, int>> reorder_one_mode(int q, int r) {
  std::vector<std::pair<double, int>> out;
  const int kmax = std::min(q, r);
  for (int k = 0; k <= kmax; ++k) {
    out.emplace_back(binomial(q, k) * binomial(r, k) * factorial(k), k);
  }
  return out;
}

}  // namespace

Polynomial Polynomial::constant(cplx c) { return monomial({}, c); }

Polynomial Polynomial::monomial(Monomial m, cplx c) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

cplx Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx{} : it->second;
}

void Polynomial::add_term(const Monomial& m, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

Polynomial Polynomial::dagger() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.add_term({m.a, m.ad, m.b, m.bd}, std::conj(c));
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  Polynomial out;
  for (const auto& [x, cx] : lhs.terms()) {
    for (const auto& [y, cy] : rhs.terms()) {
      // (a†^p a^q)(a†^r a^s) per mode; the two modes commute.
      const auto ka = reorder_one_mode(x.a, y.ad);
      const auto kb = reorder_one_mode(x.b, y.bd);
      for (const auto& [wa, ia] : ka) {
        for (const auto& [wb, ib] : kb) {
          Monomial m{x.ad + y.ad - ia, x.a + y.a - ia, x.bd + y.bd - ib, x.b + y.b - ib};
          out.add_term(m, cx * cy * wa * wb);
        }
      }
    }
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    auto put = [&os](const char* sym, int n) {
      if (n == 1) os << " " << sym;
      if (n > 1) os << " " << sym << "^" << n;
    };
    put("a+", m.ad);
    put("a", m.a);
    put("b+", m.bd);
    put("b", m.b);
  }
  return os.str();
}

Polynomial commutator(const Polynomial& x, const Polynomial& y) { return x * y - y * x; }

Polynomial adjoint_action(const Lindbladian& gen, const Polynomial& obs) {
  const cplx i(0.0, 1.0);
  Polynomial out = i * commutator(gen.hamiltonian, obs);
  for (const auto& jump : gen.jumps) {
    const Polynomial jd = jump.dagger();
    const Polynomial jdj = jd * jump;
    out += jd * obs * jump;
    out -= 0.5 * (jdj * obs + obs * jdj);
  }
  return out;
}

}  // namespace optocool::algebra
