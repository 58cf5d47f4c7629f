#pragma once

// Explicitly computable measure-preserving systems on the torus and on the
// one-sided Bernoulli shift, with exact orbit generation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwlab/fixed_point.hpp"

namespace wwlab {

enum class SystemKind { Rotation, AnzaiSkew, Bernoulli, Heisenberg };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

/// Position in a Bernoulli bit stream: the stream is identified by `key`,
/// the shift has been applied `offset` times.
struct BitCursor {
  std::uint64_t key = 0;
  std::uint64_t offset = 0;
  auto operator<=>(const BitCursor&) const = default;
};

/// Bit `index` of the stream `key`. Counter-based: O(1), no stored arrays.
bool stream_bit(std::uint64_t key, std::uint64_t index);

class StatePoint {
 public:
  StatePoint() = default;
  static StatePoint torus(std::span<const CirclePoint> coords);
  static StatePoint torus(std::initializer_list<CirclePoint> coords);
  static StatePoint cursor(std::uint64_t key, std::uint64_t offset = 0);

  /// Number of torus coordinates; 0 for a bit-stream cursor.
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  [[nodiscard]] bool is_cursor() const { return is_cursor_; }
  [[nodiscard]] CirclePoint coord(std::size_t i) const;
  [[nodiscard]] BitCursor bits() const;
  /// Current bit under the cursor (x_0 of the shifted sequence).
  [[nodiscard]] bool current_bit() const { return stream_bit(cursor_.key, cursor_.offset); }

  CirclePoint& operator[](std::size_t i) { return coords_[i]; }
  const CirclePoint& operator[](std::size_t i) const { return coords_[i]; }

  bool operator==(const StatePoint&) const = default;

 private:
  std::array<CirclePoint, 3> coords_{};
  std::size_t dim_ = 0;
  bool is_cursor_ = false;
  BitCursor cursor_{};
};

struct SystemSpec {
  SystemKind kind = SystemKind::Rotation;
  CirclePoint alpha{};
  CirclePoint beta{};  // Heisenberg only
  std::string label;

  static SystemSpec rotation(CirclePoint alpha, std::string label = {});
  static SystemSpec anzai_skew(CirclePoint alpha, std::string label = {});
  static SystemSpec bernoulli(std::string label = {});
  static SystemSpec heisenberg(CirclePoint alpha, CirclePoint beta, std::string label = {});

  /// Torus dimension of the state space; 0 for the Bernoulli shift.
  [[nodiscard]] std::size_t dimension() const;
  /// True when T^n has an exact closed form (Rotation, AnzaiSkew, Bernoulli).
  [[nodiscard]] bool has_closed_form() const;
  [[nodiscard]] bool accepts(const StatePoint& x) const;

  bool operator==(const SystemSpec&) const = default;
};

nlohmann::json to_json(const SystemSpec& spec);
SystemSpec system_from_json(const nlohmann::json& j);

/// Golden-ratio rotation number rounded to 2^-64, the default irrational proxy.
CirclePoint golden_alpha();

/// T^steps(x). Closed form where the kind has one, repeated application otherwise.
StatePoint iterate(const SystemSpec& system, const StatePoint& x, std::uint64_t steps);

/// Single application of T.
StatePoint step(const SystemSpec& system, const StatePoint& x);

struct OrbitTable {
  SystemSpec system;
  StatePoint start;
  std::uint64_t stride = 1;
  std::vector<StatePoint> states;  // states[n] = T^{stride·n}(start)

  [[nodiscard]] std::size_t length() const { return states.size(); }
};

OrbitTable orbit(const SystemSpec& system, const StatePoint& x, std::uint64_t stride, std::size_t length);

/// Deterministic points distributed by the invariant measure: Lebesgue on the
/// torus coordinates, fair coin bits for the Bernoulli shift. Point i depends
/// only on (seed, i), so prefixes agree across different counts.
std::vector<StatePoint> sample_initial_points(const SystemSpec& system, std::size_t count, std::uint64_t seed);

}  // namespace wwlab
