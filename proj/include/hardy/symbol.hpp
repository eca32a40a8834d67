#pragma once
// Analytic symbols phi: Omega1 -> Omega2 for composition operators.

#include <string>

#include "hardy/hardy_analytic.hpp"
#include "hardy/polar.hpp"

namespace hardy {

enum class SymbolKind { Rotation, Inversion, Monomial, Moebius, Constant, General };

std::string symbol_kind_name(SymbolKind k);

class AnalyticSelfMap {
 public:
  // lambda z (|lambda| = 1 keeps the domain; other moduli are allowed when they fit).
  static AnalyticSelfMap rotation(Domain d, cd lambda);
  // mu r0 / z on the annulus.
  static AnalyticSelfMap inversion(double r0, cd mu);
  // c z^k; the codomain defaults to the source domain.
  static AnalyticSelfMap monomial(Domain source, int k, cd c = 1.0);
  static AnalyticSelfMap monomial(Domain source, Domain target, int k, cd c = 1.0);
  // (z + a)/(1 + conj(a) z) on the disk.
  static AnalyticSelfMap moebius(cd a);
  static AnalyticSelfMap constant(Domain source, Domain target, cd c);
  static AnalyticSelfMap constant(Domain d, cd c) { return constant(d, d, c); }
  static AnalyticSelfMap general(Domain source, Domain target, LaurentSeries s);

  SymbolKind kind() const noexcept { return kind_; }
  const Domain& source() const noexcept { return source_; }
  const Domain& target() const noexcept { return target_; }
  cd param() const noexcept { return param_; }
  int power() const noexcept { return k_; }
  // Laurent/Taylor expansion (Moebius: truncated where |a|^n < 1e-17).
  const LaurentSeries& series() const noexcept { return series_; }

  cd operator()(cd z) const;
  cd derivative(cd z) const;  // d phi / dz

  // Largest distance by which sampled images leave the closed codomain
  // (0 when every sample lies inside).
  double codomain_violation(int n_samples = 1024) const;
  std::string describe() const;

 private:
  AnalyticSelfMap(SymbolKind k, Domain s, Domain t, cd param, int power, LaurentSeries series);
  void validate() const;

  SymbolKind kind_;
  Domain source_, target_;
  cd param_;
  int k_;
  LaurentSeries series_;
};

}  // namespace hardy
