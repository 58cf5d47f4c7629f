#include "wwlab/phases.hpp"

#include <algorithm>

#include "wwlab/errors.hpp"

namespace wwlab {

PolynomialPhase::PolynomialPhase(std::vector<CirclePoint> c)
    : degree(static_cast<int>(c.size())), coeffs(std::move(c)) {}

PolynomialPhase PolynomialPhase::zero(int degree) {
  if (degree < 0) throw InputError("phase degree must be nonnegative");
  return PolynomialPhase(std::vector<CirclePoint>(static_cast<std::size_t>(degree)));
}

PolynomialPhase PolynomialPhase::monomial(int j, CirclePoint c) {
  if (j < 1) throw InputError("monomial degree must be at least 1");
  auto p = zero(j);
  p.coeffs[static_cast<std::size_t>(j - 1)] = c;
  return p;
}

PolynomialPhase PolynomialPhase::parse(const std::vector<std::string>& coeff_texts) {
  std::vector<CirclePoint> c;
  c.reserve(coeff_texts.size());
  for (const auto& t : coeff_texts) c.push_back(CirclePoint::parse(t));
  return PolynomialPhase(std::move(c));
}

CirclePoint PolynomialPhase::coeff(int j) const {
  if (j < 1 || j > degree) return CirclePoint{};
  return coeffs[static_cast<std::size_t>(j - 1)];
}

int PolynomialPhase::effective_degree() const {
  for (int j = degree; j >= 1; --j) {
    if (coeff(j).frac != 0) return j;
  }
  return 0;
}

PolynomialPhase operator+(const PolynomialPhase& p, const PolynomialPhase& q) {
  const int d = std::max(p.degree, q.degree);
  auto r = PolynomialPhase::zero(d);
  for (int j = 1; j <= d; ++j) r.coeffs[static_cast<std::size_t>(j - 1)] = p.coeff(j) + q.coeff(j);
  return r;
}

CirclePoint phase_angle(const PolynomialPhase& p, std::uint64_t n) {
  CirclePoint acc{};
  for (int j = p.degree; j >= 1; --j) acc = (acc + p.coeffs[static_cast<std::size_t>(j - 1)]).times(n);
  return acc;
}

PolynomialPhase scale_phase(const PolynomialPhase& p, FixedReal t) {
  PolynomialPhase r = p;
  for (auto& c : r.coeffs) c = t.scale(c);
  return r;
}

nlohmann::json to_json(const PolynomialPhase& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(c.hex());
  return {{"degree", p.degree}, {"coeffs", coeffs}};
}

PolynomialPhase phase_from_json(const nlohmann::json& j) {
  std::vector<std::string> texts;
  for (const auto& c : j.at("coeffs")) texts.push_back(c.get<std::string>());
  auto p = PolynomialPhase::parse(texts);
  if (j.contains("degree") && j.at("degree").get<int>() != p.degree) {
    throw InputError("phase JSON degree does not match coefficient count");
  }
  return p;
}

std::complex<double> trig_eval(const TrigPolynomial& phi, CirclePoint alpha) {
  ComplexCompensatedSum sum;
  for (const auto& t : phi.terms) sum.add(t.amplitude * unit_phasor(alpha.times_signed(t.m)));
  return sum.value();
}

nlohmann::json to_json(const TrigPolynomial& phi) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : phi.terms) out.push_back({{"m", t.m}, {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
  return out;
}

TrigPolynomial trig_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("trigonometric polynomial JSON must be a list");
  TrigPolynomial phi;
  for (const auto& t : j) {
    phi.terms.push_back(TrigTerm{t.at("m").get<std::int64_t>(), {t.value("re", 0.0), t.value("im", 0.0)}});
  }
  return phi;
}

}  // namespace wwlab
