#include "wwlab/systems.hpp"

#include <random>

#include "wwlab/errors.hpp"

namespace wwlab {

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Rotation: return "rotation";
    case SystemKind::AnzaiSkew: return "anzai";
    case SystemKind::Bernoulli: return "bernoulli";
    case SystemKind::Heisenberg: return "heisenberg";
  }
  return "unknown";
}

SystemKind system_kind_from_string(const std::string& name) {
  if (name == "rotation") return SystemKind::Rotation;
  if (name == "anzai" || name == "anzai_skew") return SystemKind::AnzaiSkew;
  if (name == "bernoulli") return SystemKind::Bernoulli;
  if (name == "heisenberg") return SystemKind::Heisenberg;
  throw LookupError("unknown system kind '" + name + "' (expected rotation|anzai|bernoulli|heisenberg)");
}

bool stream_bit(std::uint64_t key, std::uint64_t index) {
  const std::uint64_t block = derive_seed(key, index >> 6);
  return ((block >> (index & 63)) & 1U) != 0;
}

StatePoint StatePoint::torus(std::span<const CirclePoint> coords) {
  if (coords.empty() || coords.size() > 3) throw InputError("torus points have 1 to 3 coordinates");
  StatePoint p;
  for (std::size_t i = 0; i < coords.size(); ++i) p.coords_[i] = coords[i];
  p.dim_ = coords.size();
  return p;
}

StatePoint StatePoint::torus(std::initializer_list<CirclePoint> coords) {
  return torus(std::span<const CirclePoint>(coords.begin(), coords.size()));
}

StatePoint StatePoint::cursor(std::uint64_t key, std::uint64_t offset) {
  StatePoint p;
  p.is_cursor_ = true;
  p.cursor_ = BitCursor{key, offset};
  return p;
}

CirclePoint StatePoint::coord(std::size_t i) const {
  if (is_cursor_ || i >= dim_) throw InputError("state has no coordinate " + std::to_string(i));
  return coords_[i];
}

BitCursor StatePoint::bits() const {
  if (!is_cursor_) throw InputError("state is not a bit-stream cursor");
  return cursor_;
}

SystemSpec SystemSpec::rotation(CirclePoint alpha, std::string label) {
  return SystemSpec{SystemKind::Rotation, alpha, {}, std::move(label)};
}
SystemSpec SystemSpec::anzai_skew(CirclePoint alpha, std::string label) {
  return SystemSpec{SystemKind::AnzaiSkew, alpha, {}, std::move(label)};
}
SystemSpec SystemSpec::bernoulli(std::string label) {
  return SystemSpec{SystemKind::Bernoulli, {}, {}, std::move(label)};
}
SystemSpec SystemSpec::heisenberg(CirclePoint alpha, CirclePoint beta, std::string label) {
  return SystemSpec{SystemKind::Heisenberg, alpha, beta, std::move(label)};
}

std::size_t SystemSpec::dimension() const {
  switch (kind) {
    case SystemKind::Rotation: return 1;
    case SystemKind::AnzaiSkew: return 2;
    case SystemKind::Bernoulli: return 0;
    case SystemKind::Heisenberg: return 3;
  }
  return 0;
}

bool SystemSpec::has_closed_form() const { return kind != SystemKind::Heisenberg; }

bool SystemSpec::accepts(const StatePoint& x) const {
  if (kind == SystemKind::Bernoulli) return x.is_cursor();
  return !x.is_cursor() && x.dimension() == dimension();
}

nlohmann::json to_json(const SystemSpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.kind) {
    case SystemKind::Rotation:
    case SystemKind::AnzaiSkew: params["alpha"] = spec.alpha.hex(); break;
    case SystemKind::Heisenberg:
      params["alpha"] = spec.alpha.hex();
      params["beta"] = spec.beta.hex();
      break;
    case SystemKind::Bernoulli: params["symbols"] = 2; break;
  }
  return {{"kind", to_string(spec.kind)}, {"params", params}, {"label", spec.label}};
}

SystemSpec system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InputError("system JSON needs a 'kind' field");
  SystemSpec spec;
  spec.kind = system_kind_from_string(j.at("kind").get<std::string>());
  spec.label = j.value("label", std::string{});
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto coord = [&](const char* key) {
    if (!params.contains(key)) throw InputError(std::string("system params missing '") + key + "'");
    return CirclePoint::parse(params.at(key).get<std::string>());
  };
  if (spec.kind != SystemKind::Bernoulli) spec.alpha = coord("alpha");
  if (spec.kind == SystemKind::Heisenberg) spec.beta = coord("beta");
  return spec;
}

CirclePoint golden_alpha() {
  // (sqrt(5) - 1) / 2 = 0.6180339887498948482...
  return CirclePoint{0x9e3779b97f4a7c15ULL};
}

namespace {

// C(n,2) mod 2^64, computed exactly in 128 bits.
std::uint64_t choose2(std::uint64_t n) {
  const u128 p = static_cast<u128>(n) * (n == 0 ? 0 : n - 1);
  return static_cast<std::uint64_t>(p >> 1);
}

void check_state(const SystemSpec& system, const StatePoint& x) {
  if (!system.accepts(x)) {
    throw InputError("state dimension does not match system '" + to_string(system.kind) + "'");
  }
}

}  // namespace

StatePoint step(const SystemSpec& system, const StatePoint& x) {
  check_state(system, x);
  StatePoint y = x;
  switch (system.kind) {
    case SystemKind::Rotation: y[0] += system.alpha; break;
    case SystemKind::AnzaiSkew:
      y[0] = x[0] + system.alpha;
      y[1] = x[1] + x[0];
      break;
    case SystemKind::Heisenberg:
      y[0] = x[0] + system.alpha;
      y[1] = x[1] + system.beta;
      y[2] = x[2] + mul_round(x[0], system.beta);
      break;
    case SystemKind::Bernoulli: {
      const auto c = x.bits();
      y = StatePoint::cursor(c.key, c.offset + 1);
      break;
    }
  }
  return y;
}

StatePoint iterate(const SystemSpec& system, const StatePoint& x, std::uint64_t steps) {
  check_state(system, x);
  if (steps == 0) return x;
  StatePoint y = x;
  switch (system.kind) {
    case SystemKind::Rotation: y[0] = x[0] + system.alpha.times(steps); break;
    case SystemKind::AnzaiSkew:
      y[0] = x[0] + system.alpha.times(steps);
      y[1] = x[1] + x[0].times(steps) + system.alpha.times(choose2(steps));
      break;
    case SystemKind::Bernoulli: {
      const auto c = x.bits();
      y = StatePoint::cursor(c.key, c.offset + steps);
      break;
    }
    case SystemKind::Heisenberg:
      for (std::uint64_t i = 0; i < steps; ++i) y = step(system, y);
      break;
  }
  return y;
}

OrbitTable orbit(const SystemSpec& system, const StatePoint& x, std::uint64_t stride, std::size_t length) {
  if (length == 0) throw InputError("orbit length must be at least 1");
  if (stride == 0) throw InputError("orbit stride must be at least 1 (forward orbits only)");
  check_state(system, x);
  OrbitTable table{system, x, stride, {}};
  table.states.resize(length);
  if (system.has_closed_form()) {
    for (std::size_t n = 0; n < length; ++n) table.states[n] = iterate(system, x, stride * n);
  } else {
    table.states[0] = x;
    for (std::size_t n = 1; n < length; ++n) table.states[n] = iterate(system, table.states[n - 1], stride);
  }
  return table;
}

std::vector<StatePoint> sample_initial_points(const SystemSpec& system, std::size_t count, std::uint64_t seed) {
  std::vector<StatePoint> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    if (system.kind == SystemKind::Bernoulli) {
      points.push_back(StatePoint::cursor(rng(), 0));
      continue;
    }
    std::array<CirclePoint, 3> c{};
    for (std::size_t d = 0; d < system.dimension(); ++d) c[d] = CirclePoint{rng()};
    points.push_back(StatePoint::torus(std::span<const CirclePoint>(c.data(), system.dimension())));
  }
  return points;
}

}  // namespace wwlab
