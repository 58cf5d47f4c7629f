#include "wwlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fftw3.h>
#include <openssl/crypto.h>

#include "wwlab/errors.hpp"
#include "wwlab/fixed_point.hpp"
#include "wwlab/parallel.hpp"
#include "wwlab/seminorms.hpp"

namespace wwlab {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Observable lookup_for(const std::string& name, const SystemSpec& sys) {
  auto f = catalog_lookup(name);
  if (!f.compatible(sys)) {
    throw InputError("observable '" + name + "' does not fit system '" + to_string(sys.kind) + "'");
  }
  return f;
}

void require_distinct_strides(const ExperimentConfig& cfg) {
  if (cfg.a == cfg.b) {
    throw InputError(
        "a = b: double-recurrence experiments need distinct strides; the average reduces to a single-orbit "
        "polynomial average of f1·f2 (single-function mode)");
  }
}

double sup_squared(const WeightSequence& w, std::size_t N, int degree, const GridBudget& budget, double* rigor) {
  const SupScan scan = degree <= 1 ? sup_linear_fft(w, N, budget.oversample) : sup_poly_grid(w, N, degree, budget);
  if (rigor != nullptr) *rigor = scan.rigor_bound;
  return scan.sup_value * scan.sup_value;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

std::string plot_script(const std::string& experiment, const std::string& csv_name) {
  std::ostringstream gp;
  gp << "# " << experiment << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set grid\n";
  const std::string file = "'" + csv_name + "'";
  if (experiment == "uniformity") {
    gp << "set logscale xy 2\nset xlabel 'N'\nset ylabel 'E sup |W_N|^2'\n"
       << "plot " << file << " using 1:2:3 with yerrorlines, " << file << " using 1:7 with lines\n";
  } else if (experiment == "domination") {
    gp << "set xlabel 'min seminorm^2'\nset ylabel 'E sup |W_N|^2'\n"
       << "plot " << file << " using 9:4:5 with yerrorbars\n";
  } else if (experiment == "convergence") {
    gp << "set logscale xy 2\nset xlabel 'N'\nset ylabel '|W_N - W_{N/2}|'\n"
       << "plot " << file << " using 3:7 with points\n";
  } else if (experiment == "maximal") {
    gp << "set style data histograms\nset ylabel 'ratio'\n"
       << "plot " << file << " using 6:xtic(1), 2 title 'bound'\n";
  } else {
    gp << "set logscale xy 2\nset xlabel 'N'\nset ylabel 'L2 Cauchy difference'\n"
       << "plot " << file << " using 1:3 with linespoints\n";
  }
  return gp.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MonteCarloIntegral MonteCarloIntegral::from_values(std::string statistic, std::vector<double> values) {
  if (values.empty()) throw InputError("Monte-Carlo integral over zero samples");
  MonteCarloIntegral mc;
  mc.statistic = std::move(statistic);
  mc.count = values.size();
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double n = static_cast<double>(mc.count);
  mc.mean = sum.value() / n;
  CompensatedSum sq;
  for (double v : values) sq.add((v - mc.mean) * (v - mc.mean));
  mc.std_error = mc.count > 1 ? std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  mc.min = *lo;
  mc.max = *hi;
  // Guard the rounding of the compensated mean against the sample range.
  mc.mean = std::clamp(mc.mean, mc.min, mc.max);
  mc.values = std::move(values);
  return mc;
}

nlohmann::json to_json(const MonteCarloIntegral& mc) {
  return {{"statistic", mc.statistic}, {"mean", mc.mean}, {"std_error", mc.std_error},
          {"min", mc.min},             {"max", mc.max},   {"count", mc.count}};
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("Spearman correlation needs two equal samples of size >= 2");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

UniformityReport run_uniformity_experiment(const ExperimentConfig& cfg) {
  require_distinct_strides(cfg);
  const auto f1 = lookup_for(cfg.f1, cfg.system);
  const auto f2 = lookup_for(cfg.f2, cfg.system);
  const auto schedule = cfg.schedule();
  if (schedule.empty()) throw InputError("empty truncation schedule");
  const auto points = sample_initial_points(cfg.system, cfg.samples, cfg.seed);

  std::vector<std::vector<double>> sups(points.size()), rigor(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto w = weight_sequence(cfg.system, points[i], f1, f2, cfg.a, cfg.b, schedule.back());
    for (const auto N : schedule) {
      double r = 0.0;
      sups[i].push_back(sup_squared(w, N, cfg.degree, cfg.sup, &r));
      rigor[i].push_back(r);
    }
  });

  UniformityReport rep;
  rep.schedule = schedule;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    std::vector<double> v, r;
    for (std::size_t i = 0; i < points.size(); ++i) {
      v.push_back(sups[i][s]);
      r.push_back(rigor[i][s]);
    }
    rep.sup_squared.push_back(MonteCarloIntegral::from_values("sup_sq", std::move(v)));
    rep.rigor_bound.push_back(MonteCarloIntegral::from_values("rigor_bound", std::move(r)));
  }
  const double first = rep.sup_squared.front().mean;
  const double last = rep.sup_squared.back().mean;
  rep.decay = first > 0.0 ? last / first : 0.0;
  rep.passed = cfg.decay_ratio <= 0.0 || last <= cfg.decay_ratio * first;
  return rep;
}

DominationReport run_seminorm_domination(const ExperimentConfig& cfg) {
  require_distinct_strides(cfg);
  if (cfg.family.size() < 3) throw InputError("domination family needs at least 3 observables");
  const auto f2 = lookup_for(cfg.f2, cfg.system);
  std::vector<Observable> family;
  for (const auto& name : cfg.family) family.push_back(lookup_for(name, cfg.system));
  const auto points = sample_initial_points(cfg.system, cfg.samples, cfg.seed);

  auto seminorms = [&](const Observable& f) {
    std::vector<double> v(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      v[i] = ghk_estimate(cfg.system, points[i], f, cfg.seminorm_k, cfg.seminorm_N, cfg.seminorm_H).value;
    });
    return MonteCarloIntegral::from_values("seminorm", std::move(v));
  };
  const auto sem_f2 = seminorms(f2);

  DominationReport rep;
  std::vector<double> lhs, rhs, sem;
  for (std::size_t m = 0; m < family.size(); ++m) {
    std::vector<double> v(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      const auto w = weight_sequence(cfg.system, points[i], family[m], f2, cfg.a, cfg.b, cfg.n_max);
      v[i] = sup_squared(w, cfg.n_max, cfg.degree, cfg.sup, nullptr);
    });
    DominationMember member;
    member.f1 = cfg.family[m];
    member.lhs = MonteCarloIntegral::from_values("sup_sq", std::move(v));
    member.seminorm_f1 = seminorms(family[m]);
    member.seminorm_f2 = sem_f2;
    member.rhs = std::min(member.seminorm_f1.mean * member.seminorm_f1.mean, sem_f2.mean * sem_f2.mean);
    lhs.push_back(member.lhs.mean);
    rhs.push_back(member.rhs);
    sem.push_back(member.seminorm_f1.mean);
    rep.members.push_back(std::move(member));
  }
  rep.spearman = spearman(lhs, rhs);
  rep.strictly_ordered = std::set<double>(sem.begin(), sem.end()).size() == sem.size();
  rep.passed = rep.spearman >= cfg.min_spearman;
  return rep;
}

ConvergenceReport run_convergence_experiment(const ExperimentConfig& cfg) {
  require_distinct_strides(cfg);
  if (cfg.system.kind == SystemKind::Bernoulli) {
    throw InputError("convergence experiment expects a structured system (rotation, anzai, heisenberg)");
  }
  const auto f1 = lookup_for(cfg.f1, cfg.system);
  const auto f2 = lookup_for(cfg.f2, cfg.system);
  const auto schedule = cfg.schedule();
  if (schedule.size() < 2) throw InputError("convergence experiment needs at least two truncations");
  std::vector<PolynomialPhase> phases = cfg.phases;
  if (phases.empty()) phases.push_back(PolynomialPhase::zero(cfg.degree));
  const auto points = sample_initial_points(cfg.system, cfg.samples, cfg.seed);

  ConvergenceReport rep;
  rep.schedule = schedule;
  rep.averages.assign(phases.size(), std::vector<std::vector<std::complex<double>>>(points.size()));
  rep.diffs.assign(phases.size(), std::vector<std::vector<double>>(points.size()));
  parallel_for(points.size(), [&](std::size_t i) {
    const auto w = weight_sequence(cfg.system, points[i], f1, f2, cfg.a, cfg.b, schedule.back());
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const auto series = ww_average(w, phases[p], schedule);
      rep.averages[p][i] = series.values;
      for (std::size_t s = 1; s < series.values.size(); ++s) {
        rep.diffs[p][i].push_back(std::abs(series.values[s] - series.values[s - 1]));
      }
    }
  });
  std::size_t ok = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool good = true;
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const double d = rep.diffs[p][i].back();
      rep.max_final_diff = std::max(rep.max_final_diff, d);
      good = good && d <= cfg.cauchy_tol;
    }
    if (good) ++ok;
  }
  rep.fraction_ok = points.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(points.size());
  rep.passed = rep.fraction_ok >= cfg.cauchy_fraction;
  return rep;
}

MaximalReport run_maximal_inequality_check(const SystemSpec& system, const std::vector<Observable>& F,
                                           std::size_t n_max, std::size_t samples, std::uint64_t seed) {
  if (n_max < 1) throw InputError("N_max must be at least 1");
  if (F.empty()) throw InputError("maximal check needs at least one observable");
  const auto points = sample_initial_points(system, samples, seed);
  MaximalReport rep;
  rep.n_max = n_max;
  rep.passed = true;
  for (const auto& f : F) {
    if (!f.compatible(system)) throw InputError("observable '" + f.name() + "' does not fit the system");
    std::vector<double> sup_sq(points.size()), mod_sq(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      const auto values = evaluate_along(orbit(system, points[i], 1, n_max), f);
      CompensatedSum running;
      double best = 0.0;
      for (std::size_t n = 0; n < n_max; ++n) {
        running.add(std::abs(values[n]));
        best = std::max(best, running.value() / static_cast<double>(n + 1));
      }
      sup_sq[i] = best * best;
      mod_sq[i] = std::norm(values[0]);
    });
    MaximalEntry e;
    e.observable = f.name();
    e.sup_average_sq = MonteCarloIntegral::from_values("maximal_sq", std::move(sup_sq));
    e.modulus_sq = MonteCarloIntegral::from_values("modulus_sq", std::move(mod_sq));
    e.lhs = std::sqrt(e.sup_average_sq.mean);
    e.norm2 = std::sqrt(e.modulus_sq.mean);
    if (e.norm2 == 0.0) throw InputError("observable '" + f.name() + "' vanishes on every sample");
    e.ratio = e.lhs / e.norm2;
    // Relative error of a square root is half the relative error of its argument.
    const double rel_lhs = e.sup_average_sq.mean > 0.0 ? 0.5 * e.sup_average_sq.std_error / e.sup_average_sq.mean : 0.0;
    const double rel_norm = 0.5 * e.modulus_sq.std_error / e.modulus_sq.mean;
    e.margin = rel_lhs + rel_norm;
    e.passed = e.ratio <= 2.0 * (1.0 + 3.0 * e.margin);
    rep.passed = rep.passed && e.passed;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

std::vector<std::uint64_t> integer_phase_values(const std::vector<std::int64_t>& coeffs, std::size_t n_max) {
  constexpr __int128 kLimit = static_cast<__int128>(1) << 63;
  constexpr __int128 kGuard = static_cast<__int128>(1) << 100;
  std::vector<std::uint64_t> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    __int128 acc = 0;
    for (std::size_t j = coeffs.size(); j-- > 0;) {
      acc = (acc + coeffs[j]) * static_cast<__int128>(n);
      if (acc > kGuard || acc < -kGuard) throw InputError("return-time phase overflows at n = " + std::to_string(n));
    }
    if (acc < 0 || acc >= kLimit) {
      throw InputError("return-time phase p(n) must lie in [0, 2^63) for n <= N_max; fails at n = " +
                       std::to_string(n));
    }
    out[n] = static_cast<std::uint64_t>(acc);
  }
  return out;
}

std::vector<std::complex<double>> return_time_averages(const WeightSequence& w, const SystemSpec& S,
                                                       const StatePoint& y, const Observable& g,
                                                       const std::vector<std::int64_t>& coeffs,
                                                       const std::vector<std::size_t>& schedule) {
  if (!S.has_closed_form()) throw UnsupportedError("return-time system needs a closed-form iterate");
  if (!g.compatible(S) || !S.accepts(y)) throw InputError("g or y does not fit the return-time system");
  if (schedule.empty() || schedule.back() > w.size()) throw InputError("schedule exceeds the weight sequence");
  const auto p = integer_phase_values(coeffs, schedule.back());
  const bool exact = w.phases.has_value() && g.is_character();
  ComplexCompensatedSum sum;
  std::vector<std::complex<double>> out;
  std::size_t next = 0;
  for (std::size_t n = 1; n <= schedule.back(); ++n) {
    const StatePoint s = iterate(S, y, p[n]);
    if (exact) {
      sum.add(unit_phasor((*w.phases)[n - 1] + g.phase(s)));
    } else {
      sum.add(w.values[n - 1] * g.evaluate(s));
    }
    if (n == schedule[next]) {
      out.push_back(sum.value() / static_cast<double>(n));
      ++next;
    }
  }
  return out;
}

std::vector<std::complex<double>> return_time_rotation_reduction(const WeightSequence& w, CirclePoint beta,
                                                                 CirclePoint y, std::int64_t m,
                                                                 const std::vector<std::int64_t>& coeffs,
                                                                 const std::vector<std::size_t>& schedule) {
  std::vector<CirclePoint> c;
  for (const auto cj : coeffs) c.push_back(beta.times_signed(cj).times_signed(m));
  const auto series = ww_average(w, PolynomialPhase(c), schedule);
  const auto ey = unit_phasor(y.times_signed(m));
  std::vector<std::complex<double>> out;
  for (const auto& v : series.values) out.push_back(ey * v);
  return out;
}

ReturnTimeReport run_return_time_experiment(const ExperimentConfig& cfg) {
  require_distinct_strides(cfg);
  if (!cfg.rt_system) throw InputError("return-time experiment needs a [return_time.system] table");
  if (cfg.rt_y_samples < 1) throw InputError("y_samples must be at least 1");
  const SystemSpec& S = *cfg.rt_system;
  const auto f1 = lookup_for(cfg.f1, cfg.system);
  const auto f2 = lookup_for(cfg.f2, cfg.system);
  const auto g = lookup_for(cfg.rt_g, S);
  const auto schedule = cfg.schedule();
  if (schedule.empty()) throw InputError("empty truncation schedule");
  integer_phase_values(cfg.rt_coefficients, schedule.back());
  const auto xs = sample_initial_points(cfg.system, cfg.samples, cfg.seed);
  const auto ys = sample_initial_points(S, cfg.samples * cfg.rt_y_samples, derive_seed(cfg.seed, 0x5ec0dULL));

  // sq_diff[i][j][s], sq_norm[i][j][s] for x_i, y_{i,j}
  std::vector<std::vector<std::vector<std::complex<double>>>> v(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto w = weight_sequence(cfg.system, xs[i], f1, f2, cfg.a, cfg.b, schedule.back());
    for (std::size_t j = 0; j < cfg.rt_y_samples; ++j) {
      v[i].push_back(return_time_averages(w, S, ys[i * cfg.rt_y_samples + j], g, cfg.rt_coefficients, schedule));
    }
  });
  ReturnTimeReport rep;
  rep.schedule = schedule;
  const double pairs = static_cast<double>(xs.size() * cfg.rt_y_samples);
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    CompensatedSum norm, diff;
    for (const auto& per_x : v) {
      for (const auto& series : per_x) {
        norm.add(std::norm(series[s]));
        if (s > 0) diff.add(std::norm(series[s] - series[s - 1]));
      }
    }
    rep.l2_norm.push_back(std::sqrt(norm.value() / pairs));
    if (s > 0) rep.l2_diff.push_back(std::sqrt(diff.value() / pairs));
  }
  const auto& d = rep.l2_diff;
  if (d.size() >= 3) {
    rep.decreasing = d[d.size() - 3] > d[d.size() - 2] && d[d.size() - 2] > d[d.size() - 1];
  }
  rep.passed = rep.decreasing;
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.experiment = cfg.experiment;
  std::ostringstream csv;
  std::ostringstream summary;
  if (cfg.experiment == "uniformity") {
    const auto rep = run_uniformity_experiment(cfg);
    csv << "N,mean_sup_sq,std_error,min,max,count,mean_rigor_bound\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t s = 0; s < rep.schedule.size(); ++s) {
      const auto& mc = rep.sup_squared[s];
      csv << rep.schedule[s] << ',' << format_double(mc.mean) << ',' << format_double(mc.std_error) << ','
          << format_double(mc.min) << ',' << format_double(mc.max) << ',' << mc.count << ','
          << format_double(rep.rigor_bound[s].mean) << '\n';
      rows.push_back({{"N", rep.schedule[s]}, {"sup_sq", to_json(mc)}, {"rigor_bound", to_json(rep.rigor_bound[s])}});
    }
    res.passed = rep.passed;
    summary << "decay ratio " << format_double(rep.decay) << " (threshold " << format_double(cfg.decay_ratio) << ")";
    res.report = {{"series", rows}, {"decay", rep.decay}, {"passed", rep.passed}};
  } else if (cfg.experiment == "domination") {
    const auto rep = run_seminorm_domination(cfg);
    csv << "member,f1,f2,lhs_mean,lhs_std_error,seminorm_f1,seminorm_f1_std_error,seminorm_f2,rhs\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t m = 0; m < rep.members.size(); ++m) {
      const auto& e = rep.members[m];
      csv << m << ',' << quoted(e.f1) << ',' << quoted(cfg.f2) << ',' << format_double(e.lhs.mean) << ','
          << format_double(e.lhs.std_error) << ',' << format_double(e.seminorm_f1.mean) << ','
          << format_double(e.seminorm_f1.std_error) << ',' << format_double(e.seminorm_f2.mean) << ','
          << format_double(e.rhs) << '\n';
      rows.push_back({{"f1", e.f1},
                      {"lhs", to_json(e.lhs)},
                      {"seminorm_f1", to_json(e.seminorm_f1)},
                      {"seminorm_f2", to_json(e.seminorm_f2)},
                      {"rhs", e.rhs}});
    }
    res.passed = rep.passed;
    summary << "spearman " << format_double(rep.spearman) << " (threshold " << format_double(cfg.min_spearman)
            << ")" << (rep.strictly_ordered ? "" : "; seminorm estimates tie");
    res.report = {{"members", rows},
                  {"spearman", rep.spearman},
                  {"strictly_ordered", rep.strictly_ordered},
                  {"passed", rep.passed}};
  } else if (cfg.experiment == "convergence") {
    const auto rep = run_convergence_experiment(cfg);
    csv << "phase,point,N,re,im,modulus,cauchy_diff\n";
    for (std::size_t p = 0; p < rep.averages.size(); ++p) {
      for (std::size_t i = 0; i < rep.averages[p].size(); ++i) {
        for (std::size_t s = 0; s < rep.schedule.size(); ++s) {
          const auto z = rep.averages[p][i][s];
          csv << p << ',' << i << ',' << rep.schedule[s] << ',' << format_double(z.real()) << ','
              << format_double(z.imag()) << ',' << format_double(std::abs(z)) << ','
              << (s == 0 ? std::string{} : format_double(rep.diffs[p][i][s - 1])) << '\n';
        }
      }
    }
    res.passed = rep.passed;
    summary << "fraction of points within " << format_double(cfg.cauchy_tol) << ": "
            << format_double(rep.fraction_ok) << " (threshold " << format_double(cfg.cauchy_fraction) << ")";
    res.report = {{"fraction_ok", rep.fraction_ok},
                  {"max_final_diff", rep.max_final_diff},
                  {"schedule", rep.schedule},
                  {"passed", rep.passed}};
  } else if (cfg.experiment == "maximal") {
    std::vector<Observable> F;
    const auto names = cfg.maximal.empty() ? std::vector<std::string>{cfg.f1} : cfg.maximal;
    for (const auto& name : names) F.push_back(lookup_for(name, cfg.system));
    const auto rep = run_maximal_inequality_check(cfg.system, F, cfg.n_max, cfg.samples, cfg.seed);
    csv << "observable,lhs,norm2,ratio,margin,bound,passed\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : rep.entries) {
      const double bound = 2.0 * (1.0 + 3.0 * e.margin);
      csv << quoted(e.observable) << ',' << format_double(e.lhs) << ',' << format_double(e.norm2) << ','
          << format_double(e.ratio) << ',' << format_double(e.margin) << ',' << format_double(bound) << ','
          << (e.passed ? 1 : 0) << '\n';
      rows.push_back({{"observable", e.observable},
                      {"lhs", e.lhs},
                      {"norm2", e.norm2},
                      {"ratio", e.ratio},
                      {"margin", e.margin},
                      {"bound", bound},
                      {"passed", e.passed}});
    }
    res.passed = rep.passed;
    summary << rep.entries.size() << " observables, N_max " << rep.n_max;
    res.report = {{"entries", rows}, {"n_max", rep.n_max}, {"passed", rep.passed}};
  } else if (cfg.experiment == "return_time") {
    const auto rep = run_return_time_experiment(cfg);
    csv << "N,l2_norm,l2_cauchy_diff\n";
    for (std::size_t s = 0; s < rep.schedule.size(); ++s) {
      csv << rep.schedule[s] << ',' << format_double(rep.l2_norm[s]) << ','
          << (s == 0 ? std::string{} : format_double(rep.l2_diff[s - 1])) << '\n';
    }
    res.passed = rep.passed;
    summary << "L2 Cauchy differences " << (rep.decreasing ? "decrease" : "do not decrease")
            << " across the final three doublings";
    res.report = {{"schedule", rep.schedule},
                  {"l2_norm", rep.l2_norm},
                  {"l2_diff", rep.l2_diff},
                  {"decreasing", rep.decreasing},
                  {"passed", rep.passed}};
  } else {
    throw LookupError("unknown experiment '" + cfg.experiment +
                      "' (expected uniformity|domination|convergence|maximal|return_time)");
  }
  res.csv = csv.str();
  res.summary = summary.str();
  return res;
}

nlohmann::json version_info() {
  return {{"wwlab", kVersion},
          {"fftw", std::string(fftw_version)},
          {"openssl", std::string(OpenSSL_version(OPENSSL_VERSION))},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", std::string(__VERSION__)}};
}

OutputPaths write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result, double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir.empty() ? "." : cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::string hash = config_hash(cfg);
  const std::string stem = hash + "." + result.experiment;
  OutputPaths paths{(dir / (stem + ".csv")).string(), (dir / (stem + ".json")).string(),
                    (dir / (hash + ".manifest.json")).string(), (dir / (hash + ".plot.gp")).string()};

  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
  };
  write(paths.csv, result.csv);
  nlohmann::json report = result.report;
  report["experiment"] = result.experiment;
  report["config_hash"] = hash;
  report["summary"] = result.summary;
  write(paths.json, report.dump(2) + "\n");
  write(paths.plot, plot_script(result.experiment, stem + ".csv"));
  const nlohmann::json manifest = {
      {"config_hash", hash},
      {"config", to_json(cfg)},
      {"experiment", result.experiment},
      {"seed", cfg.seed},
      {"versions", version_info()},
      {"wall_time_seconds", wall_seconds},
      {"threads", thread_cap()},
      {"passed", result.passed},
      {"summary", result.summary},
      {"outputs",
       {fs::path(paths.csv).filename().string(), fs::path(paths.json).filename().string(),
        fs::path(paths.plot).filename().string()}},
  };
  write(paths.manifest, manifest.dump(2) + "\n");
  return paths;
}

}  // namespace wwlab
