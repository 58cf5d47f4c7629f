#include "wwlab/observables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "wwlab/errors.hpp"

namespace wwlab {

Observable::Observable(std::string name, std::map<TermKey, std::complex<double>> terms, std::string factor_notes)
    : name_(std::move(name)), terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == std::complex<double>{}; });
  for (const auto& [key, amp] : terms_) {
    for (std::size_t d = 0; d < 3; ++d) {
      if (key[d] != 0) arity_ = std::max(arity_, d + 1);
    }
    if (key[3] != 0) uses_bits_ = true;
    meta_.sup_bound += std::abs(amp);
  }
  if (const auto it = terms_.find(TermKey{0, 0, 0, 0}); it != terms_.end()) meta_.mean = it->second;
  meta_.factor_notes = std::move(factor_notes);
}

bool Observable::compatible(const SystemSpec& system) const {
  if (uses_bits_ && arity_ > 0) return false;
  if (uses_bits_) return system.kind == SystemKind::Bernoulli;
  if (arity_ == 0) return true;
  return system.kind != SystemKind::Bernoulli && arity_ <= system.dimension();
}

bool Observable::compatible(const StatePoint& x) const {
  if (uses_bits_ && arity_ > 0) return false;
  if (uses_bits_) return x.is_cursor();
  if (arity_ == 0) return true;
  return !x.is_cursor() && arity_ <= x.dimension();
}

bool Observable::is_character() const {
  return terms_.size() == 1 && terms_.begin()->first[3] == 0 &&
         terms_.begin()->second == std::complex<double>{1.0, 0.0};
}

namespace {

CirclePoint term_angle(const TermKey& key, const StatePoint& x) {
  CirclePoint angle{};
  for (std::size_t d = 0; d < 3; ++d) {
    if (key[d] != 0) angle += x[d].times_signed(key[d]);
  }
  return angle;
}

}  // namespace

CirclePoint Observable::phase(const StatePoint& x) const {
  if (!is_character()) throw InputError("observable '" + name_ + "' is not a character");
  if (!compatible(x)) throw InputError("observable '" + name_ + "' does not fit this state");
  return term_angle(terms_.begin()->first, x);
}

std::complex<double> Observable::evaluate(const StatePoint& x) const {
  if (!compatible(x)) throw InputError("observable '" + name_ + "' does not fit this state");
  const double sign = uses_bits_ ? (x.current_bit() ? -1.0 : 1.0) : 1.0;
  std::complex<double> value{};
  for (const auto& [key, amp] : terms_) {
    std::complex<double> term = amp;
    if (key[0] != 0 || key[1] != 0 || key[2] != 0) term *= unit_phasor(term_angle(key, x));
    if (key[3] != 0) term *= sign;
    value += term;
  }
  return value;
}

Observable operator*(const Observable& f, const Observable& g) {
  std::map<TermKey, std::complex<double>> terms;
  for (const auto& [kf, af] : f.terms()) {
    for (const auto& [kg, ag] : g.terms()) {
      const TermKey k{kf[0] + kg[0], kf[1] + kg[1], kf[2] + kg[2], (kf[3] + kg[3]) % 2};
      terms[k] += af * ag;
    }
  }
  std::string notes = f.metadata().factor_notes;
  if (!g.metadata().factor_notes.empty()) notes += (notes.empty() ? "" : " | ") + g.metadata().factor_notes;
  return Observable(f.name() + "*" + g.name(), std::move(terms), std::move(notes));
}

Observable conjugate(const Observable& f) {
  std::map<TermKey, std::complex<double>> terms;
  for (const auto& [k, a] : f.terms()) terms[TermKey{-k[0], -k[1], -k[2], k[3]}] = std::conj(a);
  return Observable("conj(" + f.name() + ")", std::move(terms), f.metadata().factor_notes);
}

Observable scaled(const Observable& f, std::complex<double> lambda) {
  std::map<TermKey, std::complex<double>> terms;
  for (const auto& [k, a] : f.terms()) terms[k] = lambda * a;
  return Observable("scaled(" + f.name() + ")", std::move(terms), f.metadata().factor_notes);
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t') out.push_back(c);
  }
  return out;
}

std::int64_t parse_frequency(const std::string& arg, const std::string& whole) {
  std::int64_t m = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), m);
  if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
    throw LookupError("bad integer frequency in observable '" + whole + "'");
  }
  return m;
}

Observable character(std::size_t axis, std::int64_t m, const std::string& name) {
  TermKey key{0, 0, 0, 0};
  key[axis] = m;
  static const char* kNotes[3] = {
      "Kronecker (Z_1) eigenfunction on rotation, AnzaiSkew and Heisenberg",
      "AnzaiSkew: in Z_2, orthogonal to Z_1 for m != 0; Heisenberg: Z_1 eigenfunction",
      "Heisenberg: in Z_2, orthogonal to Z_1 for m != 0",
  };
  return Observable(name, {{key, {1.0, 0.0}}}, m == 0 ? "constant" : kNotes[axis]);
}

Observable lookup_atom(const std::string& atom) {
  if (atom == "const_one") return Observable(atom, {{TermKey{0, 0, 0, 0}, {1.0, 0.0}}}, "constant; in every Z_k");
  if (atom == "rademacher_bit") {
    return Observable(atom, {{TermKey{0, 0, 0, 1}, {1.0, 0.0}}},
                      "Bernoulli: mean zero, in Z_k^perp for all k (weakly mixing)");
  }
  if (atom == "bump_x") {
    return Observable(atom,
                      {{TermKey{0, 0, 0, 0}, {0.5, 0.0}},
                       {TermKey{1, 0, 0, 0}, {0.25, 0.0}},
                       {TermKey{-1, 0, 0, 0}, {0.25, 0.0}}},
                      "cos^2(pi x), nonnegative smooth bump; Z_1-measurable");
  }
  const auto open = atom.find('(');
  if (open == std::string::npos || atom.back() != ')') throw LookupError("unknown observable '" + atom + "'");
  const std::string head = atom.substr(0, open);
  const std::string arg = atom.substr(open + 1, atom.size() - open - 2);
  if (head == "character_x") return character(0, parse_frequency(arg, atom), atom);
  if (head == "character_y") return character(1, parse_frequency(arg, atom), atom);
  if (head == "character_z") return character(2, parse_frequency(arg, atom), atom);
  if (head == "rademacher_mix") {
    char* end = nullptr;
    const double lambda = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size() || !(lambda >= 0.0 && lambda <= 1.0)) {
      throw LookupError("rademacher_mix needs a weight in [0, 1]: '" + atom + "'");
    }
    return Observable(atom, {{TermKey{0, 0, 0, 0}, {1.0 - lambda, 0.0}}, {TermKey{0, 0, 0, 1}, {lambda, 0.0}}},
                      "Bernoulli: mean 1-lambda; |||f|||_k = 1-lambda for all k");
  }
  throw LookupError("unknown observable '" + atom + "'");
}

}  // namespace

Observable catalog_lookup(const std::string& name) {
  const std::string compact = strip_spaces(name);
  if (compact.empty()) throw LookupError("empty observable name");
  std::optional<Observable> result;
  std::size_t start = 0;
  while (start <= compact.size()) {
    const auto star = compact.find('*', start);
    const auto atom = compact.substr(start, star == std::string::npos ? std::string::npos : star - start);
    if (atom.empty()) throw LookupError("malformed product in observable '" + name + "'");
    auto f = lookup_atom(atom);
    result = result ? *result * f : f;
    if (star == std::string::npos) break;
    start = star + 1;
  }
  // Products keep the canonical compact spelling as their name.
  return Observable(compact, result->terms(), result->metadata().factor_notes);
}

std::vector<std::string> catalog_names() {
  return {"const_one",      "character_x(m)",     "character_y(m)", "character_z(m)",
          "rademacher_bit", "rademacher_mix(λ)", "bump_x",         "<name>*<name>"};
}

std::vector<std::complex<double>> evaluate_along(const OrbitTable& orbit, const Observable& f) {
  if (!f.compatible(orbit.system)) {
    throw InputError("observable '" + f.name() + "' does not fit system '" + to_string(orbit.system.kind) + "'");
  }
  std::vector<std::complex<double>> out;
  out.reserve(orbit.length());
  for (const auto& s : orbit.states) out.push_back(f.evaluate(s));
  return out;
}

}  // namespace wwlab
