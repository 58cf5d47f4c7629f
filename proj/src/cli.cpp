#include "wwlab/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "wwlab/averages.hpp"
#include "wwlab/config.hpp"
#include "wwlab/errors.hpp"
#include "wwlab/harness.hpp"
#include "wwlab/parallel.hpp"
#include "wwlab/seminorms.hpp"
#include "wwlab/vdc.hpp"

namespace wwlab {
namespace {

constexpr double kVdcTolerance = 1e-9;

/// Raised when a check run from the command line fails (exit status 2).
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemFlags {
  std::string kind = "rotation";
  std::string alpha = "golden";
  std::int64_t alpha_num = 0;
  std::uint64_t alpha_den = 0;
  std::string beta = "1/3";
  std::string x;
  std::uint64_t key = 0;
  bool has_key = false;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--system", kind, "rotation | anzai | bernoulli | heisenberg")->capture_default_str();
    cmd->add_option("--alpha", alpha, "rotation number: golden, 0x<hex>, p/q or decimal")->capture_default_str();
    cmd->add_option("--alpha-num", alpha_num, "numerator of a rational alpha");
    cmd->add_option("--alpha-den", alpha_den, "denominator of a rational alpha");
    cmd->add_option("--beta", beta, "second rotation number (heisenberg)")->capture_default_str();
    cmd->add_option("--x", x, "initial point, comma-separated coordinates (default: sampled from --seed)");
    cmd->add_option("--key", key, "bit-stream key of a bernoulli initial point")->each([this](const std::string&) {
      has_key = true;
    });
    cmd->add_option("--seed", seed, "seed for sampled initial points")->capture_default_str();
  }

  [[nodiscard]] SystemSpec system() const {
    const SystemKind k = system_kind_from_string(kind);
    CirclePoint a = parse_circle(alpha);
    if (alpha_den != 0) a = CirclePoint::from_rational(alpha_num, alpha_den);
    switch (k) {
      case SystemKind::Rotation: return SystemSpec::rotation(a);
      case SystemKind::AnzaiSkew: return SystemSpec::anzai_skew(a);
      case SystemKind::Bernoulli: return SystemSpec::bernoulli();
      case SystemKind::Heisenberg: return SystemSpec::heisenberg(a, parse_circle(beta));
    }
    throw InputError("unknown system");
  }

  [[nodiscard]] StatePoint start(const SystemSpec& sys) const {
    if (sys.kind == SystemKind::Bernoulli) {
      if (!x.empty()) throw InputError("bernoulli initial points are given by --key");
      return has_key ? StatePoint::cursor(key) : sample_initial_points(sys, 1, seed)[0];
    }
    if (x.empty()) return sample_initial_points(sys, 1, seed)[0];
    std::vector<CirclePoint> coords;
    std::stringstream ss(x);
    for (std::string item; std::getline(ss, item, ',');) coords.push_back(parse_circle(item));
    if (coords.size() != sys.dimension()) {
      throw InputError("--x needs " + std::to_string(sys.dimension()) + " coordinates");
    }
    return StatePoint::torus(coords);
  }
};

PolynomialPhase parse_phase_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return PolynomialPhase::parse(items);
}

WeightSequence build_weights(const SystemSpec& sys, const StatePoint& x, const std::string& f1,
                             const std::string& f2, std::uint64_t a, std::uint64_t b, std::size_t n) {
  const auto o1 = catalog_lookup(f1);
  const auto o2 = catalog_lookup(f2);
  return a == b ? single_function_weights(sys, x, o1, o2, a, n) : weight_sequence(sys, x, o1, o2, a, b, n);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string start_text(const StatePoint& x) {
  if (x.is_cursor()) return "key:" + std::to_string(x.bits().key);
  std::string s;
  for (std::size_t d = 0; d < x.dimension(); ++d) s += (d ? "," : "") + x.coord(d).hex();
  return s;
}

std::vector<std::complex<double>> read_complex_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("input file not found: " + path);
  std::vector<std::complex<double>> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string re, im;
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    try {
      values.emplace_back(std::stod(re), im.empty() ? 0.0 : std::stod(im));
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header row
      throw InputError("malformed complex value on line " + std::to_string(lineno) + " of " + path);
    }
  }
  return values;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-recurrence Wiener-Wintner averages: orbits, weighted averages, sups, seminorms, experiments", "wwlab"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "cap on worker threads (also WWLAB_THREADS)");

  // orbit
  auto* orbit_cmd = app.add_subcommand("orbit", "print T^{stride n} x for n < length");
  SystemFlags orbit_sys;
  orbit_sys.attach(orbit_cmd);
  std::uint64_t orbit_stride = 1;
  std::size_t orbit_length = 16;
  std::string orbit_f;
  orbit_cmd->add_option("--stride", orbit_stride)->capture_default_str();
  orbit_cmd->add_option("--length", orbit_length)->capture_default_str();
  orbit_cmd->add_option("--f", orbit_f, "observable evaluated along the orbit");

  // average
  auto* avg_cmd = app.add_subcommand("average", "W_N(f1, f2, x, p) along a geometric schedule");
  SystemFlags avg_sys;
  avg_sys.attach(avg_cmd);
  std::string avg_f1 = "const_one", avg_f2 = "const_one", avg_p;
  std::uint64_t avg_a = 1, avg_b = 2;
  std::size_t avg_nmax = 1024, avg_nmin = 1;
  std::string avg_out;
  avg_cmd->add_option("--f1", avg_f1)->capture_default_str();
  avg_cmd->add_option("--f2", avg_f2)->capture_default_str();
  avg_cmd->add_option("--a", avg_a)->capture_default_str();
  avg_cmd->add_option("--b", avg_b)->capture_default_str();
  avg_cmd->add_option("--p", avg_p, "phase coefficients c_1,...,c_k (empty: zero phase)");
  avg_cmd->add_option("--n-max", avg_nmax)->capture_default_str();
  avg_cmd->add_option("--n-min", avg_nmin)->capture_default_str();
  avg_cmd->add_option("--out-dir", avg_out, "write <hash>.average.csv/json here instead of stdout");

  // sup-ww
  auto* sup_cmd = app.add_subcommand("sup-ww", "sup over polynomial phases of |W_N|");
  SystemFlags sup_sys;
  sup_sys.attach(sup_cmd);
  std::string sup_f1 = "const_one", sup_f2 = "const_one", sup_out;
  std::uint64_t sup_a = 1, sup_b = 2;
  std::size_t sup_n = 1024;
  int sup_k = 1;
  GridBudget budget;
  sup_cmd->add_option("--f1", sup_f1)->capture_default_str();
  sup_cmd->add_option("--f2", sup_f2)->capture_default_str();
  sup_cmd->add_option("--a", sup_a)->capture_default_str();
  sup_cmd->add_option("--b", sup_b)->capture_default_str();
  sup_cmd->add_option("--N", sup_n)->capture_default_str();
  sup_cmd->add_option("--k", sup_k, "phase degree")->capture_default_str();
  sup_cmd->add_option("--grid", budget.grid, "coarse grid sizes for c_2..c_k")->capture_default_str();
  sup_cmd->add_option("--levels", budget.levels)->capture_default_str();
  sup_cmd->add_option("--oversample", budget.oversample)->capture_default_str();
  sup_cmd->add_option("--max-cells", budget.max_cells)->capture_default_str();
  sup_cmd->add_option("--out-dir", sup_out, "also write <hash>.sup-ww.csv/json here");

  // seminorm
  auto* sem_cmd = app.add_subcommand("seminorm", "orbit estimates of |||f|||_k");
  SystemFlags sem_sys;
  sem_sys.attach(sem_cmd);
  std::string sem_f = "const_one";
  int sem_k = 2;
  std::size_t sem_n = 4096, sem_h = 64, sem_points = 1;
  sem_cmd->add_option("--f", sem_f)->capture_default_str();
  sem_cmd->add_option("--k", sem_k)->capture_default_str();
  sem_cmd->add_option("--N", sem_n)->capture_default_str();
  sem_cmd->add_option("--H", sem_h)->capture_default_str();
  sem_cmd->add_option("--points", sem_points, "number of sampled initial points")->capture_default_str();

  // vdc-check
  auto* vdc_cmd = app.add_subcommand("vdc-check", "van der Corput bound on given or random sequences");
  std::string vdc_input;
  bool vdc_random = false;
  std::size_t vdc_trials = 1000, vdc_nmin = 8, vdc_nmax = 512;
  std::uint64_t vdc_seed = 1;
  std::optional<std::size_t> vdc_h;
  vdc_cmd->add_option("--input", vdc_input, "CSV of re,im rows");
  vdc_cmd->add_flag("--random", vdc_random, "generate random sequences in the unit disk");
  vdc_cmd->add_option("--trials", vdc_trials)->capture_default_str();
  vdc_cmd->add_option("--seed", vdc_seed)->capture_default_str();
  vdc_cmd->add_option("--n-min", vdc_nmin)->capture_default_str();
  vdc_cmd->add_option("--n-max", vdc_nmax)->capture_default_str();
  vdc_cmd->add_option("--H", vdc_h, "window (default: every H in [0, N-1] for --input, random for --random)");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a TOML-configured experiment");
  std::string exp_config, exp_outdir;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_samples;
  exp_cmd->add_option("--config", exp_config, "TOML experiment config")->required();
  exp_cmd->add_option("--seed", exp_seed, "override the config seed");
  exp_cmd->add_option("--samples", exp_samples, "override the sample count");
  exp_cmd->add_option("--output-dir", exp_outdir, "override the output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (threads != 0) set_thread_cap(threads);

    if (orbit_cmd->parsed()) {
      const auto sys = orbit_sys.system();
      const auto x = orbit_sys.start(sys);
      const auto table = orbit(sys, x, orbit_stride, orbit_length);
      std::optional<Observable> f;
      if (!orbit_f.empty()) f = catalog_lookup(orbit_f);
      std::vector<std::complex<double>> fv;
      if (f) fv = evaluate_along(table, *f);
      out << "n";
      if (sys.kind == SystemKind::Bernoulli) {
        out << ",key,offset,bit";
      } else {
        for (std::size_t d = 0; d < sys.dimension(); ++d) out << ",x" << d;
      }
      if (f) out << ",re,im";
      out << "\n";
      for (std::size_t n = 0; n < table.length(); ++n) {
        const auto& s = table.states[n];
        out << n;
        if (s.is_cursor()) {
          out << ',' << s.bits().key << ',' << s.bits().offset << ',' << (s.current_bit() ? 1 : 0);
        } else {
          for (std::size_t d = 0; d < s.dimension(); ++d) out << ',' << s.coord(d).hex();
        }
        if (f) out << ',' << format_double(fv[n].real()) << ',' << format_double(fv[n].imag());
        out << "\n";
      }
      return 0;
    }

    if (avg_cmd->parsed()) {
      const auto sys = avg_sys.system();
      const auto x = avg_sys.start(sys);
      const auto p = parse_phase_list(avg_p);
      const auto w = build_weights(sys, x, avg_f1, avg_f2, avg_a, avg_b, avg_nmax);
      const auto series = ww_average(w, p, geometric_schedule(avg_nmax, avg_nmin));
      std::ostringstream csv;
      csv << "N,re,im,modulus\n";
      for (std::size_t i = 0; i < series.schedule.size(); ++i) {
        const auto z = series.values[i];
        csv << series.schedule[i] << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
            << format_double(std::abs(z)) << '\n';
      }
      if (avg_out.empty()) {
        out << csv.str();
        return 0;
      }
      const nlohmann::json params = {{"op", "average"}, {"system", to_json(sys)}, {"x", start_text(x)},
                                     {"f1", avg_f1},    {"f2", avg_f2},          {"a", avg_a},
                                     {"b", avg_b},      {"phase", to_json(p)},   {"n_min", avg_nmin},
                                     {"n_max", avg_nmax}};
      const std::string hash = sha256_hex(params.dump()).substr(0, 16);
      std::filesystem::create_directories(avg_out);
      const std::string stem = (std::filesystem::path(avg_out) / (hash + ".average")).string();
      write_file(stem + ".csv", csv.str());
      nlohmann::json values = nlohmann::json::array();
      for (std::size_t i = 0; i < series.schedule.size(); ++i) {
        values.push_back({{"N", series.schedule[i]}, {"re", series.values[i].real()}, {"im", series.values[i].imag()}});
      }
      write_file(stem + ".json", nlohmann::json{{"params", params}, {"series", values}}.dump(2) + "\n");
      out << stem << ".csv\n";
      return 0;
    }

    if (sup_cmd->parsed()) {
      const auto sys = sup_sys.system();
      const auto x = sup_sys.start(sys);
      const auto w = build_weights(sys, x, sup_f1, sup_f2, sup_a, sup_b, sup_n);
      SupScan scan;
      try {
        scan = sup_poly_grid(w, sup_n, sup_k, budget);
      } catch (const PartialResultError& e) {
        out << to_json(e.incumbent()).dump() << "\n";
        throw CheckFailed(e.what());
      }
      out << to_json(scan).dump() << "\n";
      if (!sup_out.empty()) {
        const nlohmann::json params = {{"op", "sup-ww"}, {"system", to_json(sys)}, {"x", start_text(x)},
                                       {"f1", sup_f1},   {"f2", sup_f2},          {"a", sup_a},
                                       {"b", sup_b},     {"N", sup_n},            {"k", sup_k},
                                       {"grid", budget.grid}, {"levels", budget.levels},
                                       {"oversample", budget.oversample}, {"max_cells", budget.max_cells}};
        const std::string hash = sha256_hex(params.dump()).substr(0, 16);
        std::filesystem::create_directories(sup_out);
        const std::string stem = (std::filesystem::path(sup_out) / (hash + ".sup-ww")).string();
        std::ostringstream csv;
        csv << "grid_point,value\n";
        if (sup_k == 1) {
          const auto values = linear_grid_values(w, sup_n, budget.oversample);
          const double M = static_cast<double>(values.size());
          for (std::size_t j = 0; j < values.size(); ++j) {
            csv << format_double(static_cast<double>(j) / M) << ',' << format_double(values[j]) << '\n';
          }
        } else {
          csv << format_double(scan.argmax.front().to_double()) << ',' << format_double(scan.sup_value) << '\n';
        }
        write_file(stem + ".csv", csv.str());
        write_file(stem + ".json", nlohmann::json{{"params", params}, {"scan", to_json(scan)}}.dump(2) + "\n");
      }
      return 0;
    }

    if (sem_cmd->parsed()) {
      const auto sys = sem_sys.system();
      const auto f = catalog_lookup(sem_f);
      std::vector<StatePoint> points;
      if (!sem_sys.x.empty() || sem_sys.has_key) {
        points.push_back(sem_sys.start(sys));
      } else {
        points = sample_initial_points(sys, sem_points, sem_sys.seed);
      }
      for (const auto& x : points) {
        const auto est = ghk_estimate(sys, x, f, sem_k, sem_n, sem_h);
        out << to_json(est, sem_sys.seed).dump() << "\n";
      }
      return 0;
    }

    if (vdc_cmd->parsed()) {
      std::size_t violations = 0;
      auto emit = [&](const VdcReport& r) {
        out << to_json(r).dump() << "\n";
        if (r.slack < -kVdcTolerance) ++violations;
      };
      if (vdc_random) {
        if (vdc_nmin < 1 || vdc_nmax < vdc_nmin) throw InputError("need 1 <= n-min <= n-max");
        for (std::size_t t = 0; t < vdc_trials; ++t) {
          std::mt19937_64 rng(derive_seed(vdc_seed, t));
          const auto N = std::uniform_int_distribution<std::size_t>(vdc_nmin, vdc_nmax)(rng);
          const auto H = vdc_h ? *vdc_h : std::uniform_int_distribution<std::size_t>(0, N - 1)(rng);
          std::uniform_real_distribution<double> unit(0.0, 1.0);
          std::vector<std::complex<double>> a(N);
          for (auto& z : a) z = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
          emit(vdc_bound(a, H));
        }
      } else if (!vdc_input.empty()) {
        const auto a = read_complex_csv(vdc_input);
        if (a.empty()) throw InputError("no values in " + vdc_input);
        if (vdc_h) {
          emit(vdc_bound(a, *vdc_h));
        } else {
          for (std::size_t H = 0; H < a.size(); ++H) emit(vdc_bound(a, H));
        }
      } else {
        throw InputError("vdc-check needs --input FILE or --random");
      }
      if (violations > 0) throw CheckFailed(std::to_string(violations) + " van der Corput violations");
      return 0;
    }

    if (exp_cmd->parsed()) {
      auto cfg = load_config(exp_config);
      if (exp_seed) cfg.seed = *exp_seed;
      if (exp_samples) cfg.samples = *exp_samples;
      if (!exp_outdir.empty()) cfg.output_dir = exp_outdir;
      if (threads == 0 && cfg.threads != 0) set_thread_cap(cfg.threads);
      const auto t0 = std::chrono::steady_clock::now();
      const auto result = run_experiment(cfg);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto paths = write_outputs(cfg, result, wall);
      out << (result.passed ? "PASS " : "FAIL ") << result.experiment << ": " << result.summary << "\n"
          << paths.csv << "\n"
          << paths.manifest << "\n";
      return result.passed ? 0 : 2;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace wwlab
