#pragma once

// Normal-ordered polynomials in the ladder operators of two bosonic modes
// (a: optical, b: mechanical). Used to derive the second-moment equations
// from the master equation instead of transcribing them by hand.

#include <array>
#include <complex>
#include <compare>
#include <map>
#include <string>
#include <vector>

namespace optocool::algebra {

using cplx = std::complex<double>;

/// a†^ad a^a b†^bd b^b
struct Monomial {
  int ad = 0;
  int a = 0;
  int bd = 0;
  int b = 0;

  int degree() const { return ad + a + bd + b; }
  auto operator<=>(const Monomial&) const = default;
};

class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(cplx c);
  static Polynomial monomial(Monomial m, cplx c = 1.0);
  static Polynomial a() { return monomial({0, 1, 0, 0}); }
  static Polynomial adag() { return monomial({1, 0, 0, 0}); }
  static Polynomial b() { return monomial({0, 0, 0, 1}); }
  static Polynomial bdag() { return monomial({0, 0, 1, 0}); }

  const std::map<Monomial, cplx>& terms() const { return terms_; }
  cplx coefficient(const Monomial& m) const;
  bool empty() const { return terms_.empty(); }

  Polynomial dagger() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(cplx s);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(Polynomial p, cplx s) { return p *= s; }
  friend Polynomial operator*(cplx s, Polynomial p) { return p *= s; }
  /// Operator product, re-normal-ordered.
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, cplx c);
  std::map<Monomial, cplx> terms_;
};

Polynomial commutator(const Polynomial& x, const Polynomial& y);

/// Generator of a Lindblad master equation d rho/dt = -i[H, rho] + sum_k D[L_k] rho.
struct Lindbladian {
  Polynomial hamiltonian;
  std::vector<Polynomial> jumps;  // rates already folded in (sqrt(rate) * op)
};

/// Heisenberg-picture generator: d<O>/dt = < i[H,O] + sum_k (L† O L - 1/2 {L†L, O}) >.
Polynomial adjoint_action(const Lindbladian& generator, const Polynomial& observable);

}  // namespace optocool::algebra
