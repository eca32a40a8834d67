#include "hardy/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/error.hpp"

namespace hardy {

std::string symbol_kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::Rotation: return "rotation";
    case SymbolKind::Inversion: return "inversion";
    case SymbolKind::Monomial: return "monomial";
    case SymbolKind::Moebius: return "moebius";
    case SymbolKind::Constant: return "constant";
    case SymbolKind::General: return "general";
  }
  return "?";
}

AnalyticSelfMap::AnalyticSelfMap(SymbolKind k, Domain s, Domain t, cd param, int power, LaurentSeries series)
    : kind_(k), source_(s), target_(t), param_(param), k_(power), series_(std::move(series)) {
  validate();
}

AnalyticSelfMap AnalyticSelfMap::rotation(Domain d, cd lambda) {
  return {SymbolKind::Rotation, d, d, lambda, 1, LaurentSeries(d.inner_radius, 1, {lambda})};
}

AnalyticSelfMap AnalyticSelfMap::inversion(double r0, cd mu) {
  const Domain d = Domain::annulus(r0);
  return {SymbolKind::Inversion, d, d, mu, -1, LaurentSeries(r0, -1, {mu * r0})};
}

AnalyticSelfMap AnalyticSelfMap::monomial(Domain source, int k, cd c) { return monomial(source, source, k, c); }

AnalyticSelfMap AnalyticSelfMap::monomial(Domain source, Domain target, int k, cd c) {
  if (source.is_disk() && k < 0) throw PreconditionError("monomial: negative power on the disk");
  return {SymbolKind::Monomial, source, target, c, k, LaurentSeries(source.inner_radius, k, {c})};
}

AnalyticSelfMap AnalyticSelfMap::moebius(cd a) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("moebius: |a| must be < 1");
  std::vector<cd> c{a};
  const cd q = -std::conj(a);
  cd qn = 1.0;  // q^{n-1}
  const double scale = 1.0 - std::norm(a);
  for (int n = 1; n < 4096; ++n) {
    c.push_back(qn * scale);
    if (std::abs(qn) < 1e-17) break;
    qn *= q;
  }
  return {SymbolKind::Moebius, Domain::disk(), Domain::disk(), a, 1, LaurentSeries::disk(std::move(c))};
}

AnalyticSelfMap AnalyticSelfMap::constant(Domain source, Domain target, cd c) {
  return {SymbolKind::Constant, source, target, c, 0, LaurentSeries(source.inner_radius, 0, {c})};
}

AnalyticSelfMap AnalyticSelfMap::general(Domain source, Domain target, LaurentSeries s) {
  if (source.is_disk() && s.lo() < 0) throw PreconditionError("general symbol: negative powers on the disk");
  return {SymbolKind::General, source, target, 0.0, 0, std::move(s)};
}

cd AnalyticSelfMap::operator()(cd z) const {
  switch (kind_) {
    case SymbolKind::Rotation: return param_ * z;
    case SymbolKind::Inversion: return param_ * source_.inner_radius / z;
    case SymbolKind::Monomial: return param_ * std::pow(z, k_);
    case SymbolKind::Moebius: return (z + param_) / (1.0 + std::conj(param_) * z);
    case SymbolKind::Constant: return param_;
    case SymbolKind::General: return series_(z);
  }
  return {};
}

cd AnalyticSelfMap::derivative(cd z) const {
  switch (kind_) {
    case SymbolKind::Rotation: return param_;
    case SymbolKind::Inversion: return -param_ * source_.inner_radius / (z * z);
    case SymbolKind::Monomial: return k_ == 0 ? cd{} : param_ * static_cast<double>(k_) * std::pow(z, k_ - 1);
    case SymbolKind::Moebius: {
      const cd d = 1.0 + std::conj(param_) * z;
      return (1.0 - std::norm(param_)) / (d * d);
    }
    case SymbolKind::Constant: return {};
    case SymbolKind::General: {
      cd s{};
      for (int n = series_.lo(); n <= series_.hi(); ++n)
        if (n != 0) s += static_cast<double>(n) * series_[n] * std::pow(z, n - 1);
      return s;
    }
  }
  return {};
}

double AnalyticSelfMap::codomain_violation(int n_samples) const {
  double worst = 0.0;
  auto check = [&](cd w) {
    const double r = std::abs(w);
    worst = std::max(worst, r - 1.0);
    if (!target_.is_disk()) worst = std::max(worst, target_.inner_radius - r);
  };
  const double rho = source_.inner_radius;
  const int rings = 8;
  for (int j = 0; j <= rings; ++j) {
    const double r = rho + (1.0 - rho) * j / rings;
    if (r == 0.0) {
      check((*this)(0.0));
      continue;
    }
    for (int k = 0; k < n_samples; ++k) check((*this)(std::polar(r, CircleGrid::angle(k, n_samples))));
  }
  return worst;
}

void AnalyticSelfMap::validate() const {
  if (!source_.is_disk() && !(source_.inner_radius > 0.0 && source_.inner_radius < 1.0))
    throw PreconditionError("symbol: bad source annulus");
  const double v = codomain_violation();
  if (v > 1e-10) {
    std::ostringstream msg;
    msg << "symbol " << describe() << " leaves the codomain by " << v;
    throw PreconditionError(msg.str());
  }
}

std::string AnalyticSelfMap::describe() const {
  std::ostringstream s;
  s << symbol_kind_name(kind_);
  switch (kind_) {
    case SymbolKind::Rotation:
    case SymbolKind::Inversion:
    case SymbolKind::Moebius:
    case SymbolKind::Constant: s << "(" << param_.real() << (param_.imag() < 0 ? "" : "+") << param_.imag() << "i)"; break;
    case SymbolKind::Monomial: s << "(k=" << k_ << ", c=" << param_.real() << "+" << param_.imag() << "i)"; break;
    case SymbolKind::General: s << "(terms " << series_.lo() << ".." << series_.hi() << ")"; break;
  }
  return s.str();
}

}  // namespace hardy
