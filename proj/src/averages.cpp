#include "wwlab/averages.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "wwlab/errors.hpp"
#include "wwlab/fft.hpp"
#include "wwlab/parallel.hpp"

namespace wwlab {
namespace {

// Candidates within this margin of the incumbent count as ties; ties keep
// the lexicographically earlier argmax.
constexpr double kTieTolerance = 1e-12;

bool improves(double candidate, double incumbent) { return candidate > incumbent + kTieTolerance; }

void sort_factors(std::vector<WeightFactor>& factors) {
  std::stable_sort(factors.begin(), factors.end(), [](const WeightFactor& l, const WeightFactor& r) {
    return std::tie(l.source, l.shift, l.conjugated) < std::tie(r.source, r.shift, r.conjugated);
  });
}

void check_observable(const Observable& f, const SystemSpec& sys, const StatePoint& x) {
  if (!sys.accepts(x)) throw InputError("initial point does not match system '" + to_string(sys.kind) + "'");
  if (!f.compatible(sys)) {
    throw InputError("observable '" + f.name() + "' does not fit system '" + to_string(sys.kind) + "'");
  }
}

WeightSequence build(const SystemSpec& sys, const StatePoint& x, const Observable& f1, const Observable& f2,
                     std::uint64_t a, std::uint64_t b, std::size_t n_max) {
  if (n_max == 0) throw InputError("N_max must be at least 1");
  if (a == 0 || b == 0) throw InputError("strides a, b must be at least 1 (forward orbits only)");
  check_observable(f1, sys, x);
  check_observable(f2, sys, x);
  WeightSequence w;
  w.a = a;
  w.b = b;
  w.f1_label = f1.name();
  w.f2_label = f2.name();
  w.system = sys;
  w.start = x;
  w.factors = {WeightFactor{f1, a, 0, false, 0}, WeightFactor{f2, b, 0, false, 1}};
  for (const auto stride : {a, b}) {
    if (!w.orbits.contains(stride)) {
      w.orbits.emplace(stride, std::make_shared<const OrbitTable>(orbit(sys, x, stride, n_max + 1)));
    }
  }
  materialize(w, n_max);
  return w;
}

void check_schedule(const std::vector<std::size_t>& schedule, std::size_t available) {
  if (schedule.empty()) throw InputError("truncation schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || schedule[i] > available) {
      throw InputError("truncation " + std::to_string(schedule[i]) + " outside [1, " + std::to_string(available) +
                       "]");
    }
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw InputError("truncation schedule must be increasing");
  }
}

// u_n · e(q(n)) for n = 1..N, using exact phases when available.
void modulate(const WeightSequence& w, const PolynomialPhase& q, std::size_t N,
              std::span<std::complex<double>> out, std::size_t M) {
  std::fill(out.begin(), out.end(), std::complex<double>{});
  const bool trivial = q.effective_degree() == 0;
  for (std::size_t n = 1; n <= N; ++n) {
    std::complex<double> term;
    if (w.phases) {
      term = unit_phasor((*w.phases)[n - 1] + phase_angle(q, n));
    } else {
      term = trivial ? w.values[n - 1] : w.values[n - 1] * phase_value(q, n);
    }
    out[n % M] += term;
  }
}

struct CellBest {
  double value = -1.0;
  std::size_t j = 0;
};

CellBest scan_cell(const WeightSequence& w, const PolynomialPhase& q, std::size_t N, std::size_t M) {
  std::vector<std::complex<double>> in(M), out(M);
  modulate(w, q, N, in, M);
  dft_positive(in, out);
  CellBest best;
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t j = 0; j < M; ++j) {
    const double v = std::abs(out[j]) * inv_n;
    if (best.value < 0.0 || improves(v, best.value)) best = CellBest{v, j};
  }
  return best;
}

void check_scan_size(const WeightSequence& w, std::size_t N, std::size_t oversample, std::size_t max_points) {
  if (N < 1 || N > w.size()) {
    throw InputError("scan length " + std::to_string(N) + " outside [1, " + std::to_string(w.size()) + "]");
  }
  if (oversample < 1) throw InputError("oversample must be at least 1");
  if (oversample > max_points / N) throw InputError("FFT grid oversample·N exceeds the memory budget");
}

double linear_rigor_bound(const WeightSequence& w, std::size_t N, std::size_t M) {
  return std::numbers::pi * static_cast<double>(N) * w.mean_modulus(N) / static_cast<double>(M);
}

}  // namespace

WeightSequence WeightSequence::from_values(std::vector<std::complex<double>> values) {
  WeightSequence w;
  w.values = std::move(values);
  w.f1_label = "raw";
  w.f2_label = "raw";
  return w;
}

double WeightSequence::max_modulus(std::size_t N) const {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(N, values.size()); ++i) m = std::max(m, std::abs(values[i]));
  return m;
}

double WeightSequence::mean_modulus(std::size_t N) const {
  const std::size_t L = std::min(N, values.size());
  if (L == 0) return 0.0;
  CompensatedSum s;
  for (std::size_t i = 0; i < L; ++i) s.add(std::abs(values[i]));
  return s.value() / static_cast<double>(L);
}

void materialize(WeightSequence& w, std::size_t length) {
  sort_factors(w.factors);
  const bool characters =
      std::all_of(w.factors.begin(), w.factors.end(), [](const WeightFactor& f) { return f.f.is_character(); });
  w.values.assign(length, {});
  if (characters) {
    w.phases.emplace(length);
  } else {
    w.phases.reset();
  }
  for (std::size_t n = 1; n <= length; ++n) {
    CirclePoint phase{};
    std::complex<double> value{1.0, 0.0};
    for (const auto& factor : w.factors) {
      const auto& table = *w.orbits.at(factor.stride);
      const std::size_t idx = n + factor.shift;
      if (idx >= table.length()) throw InputError("orbit table too short for weight index");
      const StatePoint& s = table.states[idx];
      if (characters) {
        const CirclePoint ph = factor.f.phase(s);
        phase = factor.conjugated ? phase - ph : phase + ph;
      } else {
        const auto v = factor.f.evaluate(s);
        value *= factor.conjugated ? std::conj(v) : v;
      }
    }
    if (characters) {
      (*w.phases)[n - 1] = phase;
      w.values[n - 1] = unit_phasor(phase);
    } else {
      w.values[n - 1] = value;
    }
  }
}

WeightSequence weight_sequence(const SystemSpec& sys, const StatePoint& x, const Observable& f1,
                               const Observable& f2, std::uint64_t a, std::uint64_t b, std::size_t n_max) {
  if (a == b) {
    throw InputError(
        "a = b: the average reduces to a single-orbit polynomial ergodic average of f1·f2; "
        "use single_function_weights (single-function mode)");
  }
  return build(sys, x, f1, f2, a, b, n_max);
}

WeightSequence single_function_weights(const SystemSpec& sys, const StatePoint& x, const Observable& f1,
                                       const Observable& f2, std::uint64_t a, std::size_t n_max) {
  return build(sys, x, f1, f2, a, a, n_max);
}

std::vector<std::size_t> geometric_schedule(std::size_t n_max, std::size_t n_min) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= n_max && n != 0; n <<= 1) {
    if (n >= n_min) out.push_back(n);
  }
  return out;
}

AverageSeries ww_average(const WeightSequence& w, const PolynomialPhase& p, const std::vector<std::size_t>& schedule) {
  check_schedule(schedule, w.size());
  AverageSeries series{schedule, {}, p};
  series.values.reserve(schedule.size());
  const bool trivial = p.effective_degree() == 0;
  ComplexCompensatedSum sum;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= schedule.back(); ++n) {
    if (w.phases) {
      sum.add(unit_phasor((*w.phases)[n - 1] + phase_angle(p, n)));
    } else {
      sum.add(trivial ? w.values[n - 1] : w.values[n - 1] * phase_value(p, n));
    }
    if (n == schedule[next]) {
      series.values.push_back(sum.value() / static_cast<double>(n));
      ++next;
    }
  }
  return series;
}

AverageSeries twisted_average_trig(const WeightSequence& w, const TrigPolynomial& phi, const PolynomialPhase& p,
                                   const std::vector<std::size_t>& schedule) {
  check_schedule(schedule, w.size());
  std::vector<ComplexCompensatedSum> sums(schedule.size());
  for (const auto& term : phi.terms) {
    const auto series = ww_average(w, scale_phase(p, FixedReal::integer(term.m)), schedule);
    for (std::size_t i = 0; i < schedule.size(); ++i) sums[i].add(term.amplitude * series.values[i]);
  }
  AverageSeries out{schedule, {}, p};
  for (const auto& s : sums) out.values.push_back(s.value());
  return out;
}

nlohmann::json to_json(const SupScan& scan) {
  nlohmann::json argmax = nlohmann::json::array();
  for (const auto& c : scan.argmax) argmax.push_back(c.hex());
  nlohmann::json argmax_real = nlohmann::json::array();
  for (const auto& c : scan.argmax) argmax_real.push_back(c.to_double());
  return {{"family", scan.family == SupFamily::Linear ? "linear" : "poly_grid"},
          {"degree", scan.degree},
          {"N", scan.N},
          {"oversample", scan.oversample},
          {"fft_points", scan.fft_points},
          {"grid_sizes", scan.grid_sizes},
          {"levels", scan.levels},
          {"sup_value", scan.sup_value},
          {"argmax", argmax},
          {"argmax_real", argmax_real},
          {"rigor_bound", scan.rigor_bound},
          {"rigorous", scan.rigorous},
          {"cells_scanned", scan.cells_scanned}};
}

std::vector<double> linear_grid_values(const WeightSequence& w, std::size_t N, std::size_t oversample) {
  check_scan_size(w, N, oversample, std::size_t{1} << 30);
  const std::size_t M = oversample * N;
  std::vector<std::complex<double>> in(M), out(M);
  modulate(w, PolynomialPhase{}, N, in, M);
  dft_positive(in, out);
  std::vector<double> values(M);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (std::size_t j = 0; j < M; ++j) values[j] = std::abs(out[j]) * inv_n;
  return values;
}

SupScan sup_linear_fft(const WeightSequence& w, std::size_t N, std::size_t oversample) {
  check_scan_size(w, N, oversample, std::size_t{1} << 30);
  const std::size_t M = oversample * N;
  const auto best = scan_cell(w, PolynomialPhase{}, N, M);
  SupScan scan;
  scan.family = SupFamily::Linear;
  scan.degree = 1;
  scan.N = N;
  scan.oversample = oversample;
  scan.fft_points = M;
  scan.sup_value = best.value;
  scan.argmax = {CirclePoint::from_rational(static_cast<std::int64_t>(best.j), M)};
  scan.rigor_bound = linear_rigor_bound(w, N, M);
  scan.rigorous = true;
  scan.cells_scanned = 1;
  return scan;
}

std::size_t GridBudget::grid_size(int j) const {
  if (grid.empty()) throw InputError("grid budget has no sizes");
  const auto idx = static_cast<std::size_t>(j - 2);
  return idx < grid.size() ? grid[idx] : grid.back();
}

SupScan sup_poly_grid(const WeightSequence& w, std::size_t N, int k, const GridBudget& budget) {
  if (k < 1) throw InputError("phase degree k must be at least 1");
  check_scan_size(w, N, budget.oversample, budget.max_fft_points);
  if (k == 1) return sup_linear_fft(w, N, budget.oversample);
  if (budget.levels < 0) throw InputError("refinement levels must be nonnegative");

  const auto dims = static_cast<std::size_t>(k - 1);
  const std::size_t M = budget.oversample * N;
  std::vector<std::size_t> sizes(dims);
  u128 product = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    sizes[d] = budget.grid_size(static_cast<int>(d) + 2);
    if (sizes[d] == 0) throw InputError("grid sizes must be positive");
    product = std::min<u128>(product * sizes[d], static_cast<u128>(budget.max_cells) + 1);
  }
  const auto total = static_cast<std::size_t>(product);

  SupScan scan;
  scan.family = SupFamily::PolyGrid;
  scan.degree = k;
  scan.N = N;
  scan.oversample = budget.oversample;
  scan.fft_points = M;
  scan.grid_sizes = sizes;
  scan.levels = budget.levels;
  scan.rigor_bound = linear_rigor_bound(w, N, M);
  scan.rigorous = false;

  // Incumbent: higher coefficients (c_2..c_k) and the c_1 bin.
  std::vector<CirclePoint> best_high(dims);
  CellBest best;

  auto phase_for = [k](const std::vector<CirclePoint>& high) {
    auto q = PolynomialPhase::zero(k);
    for (std::size_t d = 0; d < high.size(); ++d) q.coeffs[d + 1] = high[d];
    return q;
  };
  auto record = [&] {
    scan.sup_value = best.value < 0.0 ? 0.0 : best.value;
    scan.argmax.assign(1, CirclePoint::from_rational(static_cast<std::int64_t>(best.j), M));
    scan.argmax.insert(scan.argmax.end(), best_high.begin(), best_high.end());
  };
  auto scan_batch = [&](const std::vector<std::vector<CirclePoint>>& batch) {
    std::vector<CellBest> results(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) { results[i] = scan_cell(w, phase_for(batch[i]), N, M); });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (best.value < 0.0 || improves(results[i].value, best.value)) {
        best = results[i];
        best_high = batch[i];
      }
    }
    scan.cells_scanned += batch.size();
  };

  // Coarse grid, c_2 most significant so index order is lexicographic.
  const std::size_t coarse = std::min(total, budget.max_cells);
  std::vector<std::vector<CirclePoint>> batch;
  batch.reserve(coarse);
  for (std::size_t t = 0; t < coarse; ++t) {
    std::vector<CirclePoint> high(dims);
    std::size_t rem = t;
    for (std::size_t d = dims; d-- > 0;) {
      high[d] = CirclePoint::from_rational(static_cast<std::int64_t>(rem % sizes[d]), sizes[d]);
      rem /= sizes[d];
    }
    batch.push_back(std::move(high));
  }
  scan_batch(batch);
  record();
  if (coarse < total) {
    throw PartialResultError("coarse grid exceeds the cell cap; incumbent covers " + std::to_string(coarse) +
                                 " cells",
                             scan);
  }

  std::size_t neighborhood = 1;
  for (std::size_t d = 0; d < dims; ++d) neighborhood *= 3;
  for (int level = 1; level <= budget.levels; ++level) {
    if (scan.cells_scanned + neighborhood - 1 > budget.max_cells) {
      throw PartialResultError("refinement exceeds the cell cap at level " + std::to_string(level), scan);
    }
    std::vector<CirclePoint> steps(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      steps[d] = CirclePoint::from_rational(1, sizes[d] << level);
    }
    batch.clear();
    for (std::size_t t = 0; t < neighborhood; ++t) {
      std::vector<CirclePoint> high = best_high;
      std::size_t rem = t;
      bool center = true;
      for (std::size_t d = dims; d-- > 0;) {
        const auto digit = static_cast<int>(rem % 3);
        rem /= 3;
        if (digit == 0) high[d] -= steps[d];
        if (digit == 2) high[d] += steps[d];
        center = center && digit == 1;
      }
      if (!center) batch.push_back(std::move(high));
    }
    scan_batch(batch);
    record();
  }
  return scan;
}

}  // namespace wwlab
