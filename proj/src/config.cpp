#include "wwlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <toml.hpp>

#include "wwlab/errors.hpp"

namespace wwlab {
namespace {

using Keys = std::set<std::string, std::less<>>;

void check_keys(const toml::table& t, const Keys& allowed, const std::string& where) {
  for (auto&& [key, node] : t) {
    if (!allowed.contains(key.str())) {
      throw InputError("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

const toml::table* subtable(const toml::table& t, std::string_view key) {
  const auto* node = t.get(key);
  if (node == nullptr) return nullptr;
  const auto* tbl = node->as_table();
  if (tbl == nullptr) throw InputError("'" + std::string(key) + "' must be a table");
  return tbl;
}

std::string read_string(const toml::node& n, std::string_view key) {
  if (const auto v = n.value<std::string>()) return *v;
  throw InputError("'" + std::string(key) + "' must be a string");
}

std::int64_t read_int(const toml::node& n, std::string_view key) {
  if (n.is_integer()) return *n.value<std::int64_t>();
  if (n.is_floating_point()) {
    const double d = *n.value<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.2e18) return static_cast<std::int64_t>(d);
  }
  throw InputError("'" + std::string(key) + "' must be an integer");
}

std::uint64_t read_count(const toml::node& n, std::string_view key) {
  const auto v = read_int(n, key);
  if (v < 0) throw InputError("'" + std::string(key) + "' must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

double read_double(const toml::node& n, std::string_view key) {
  if (const auto v = n.value<double>()) return *v;
  throw InputError("'" + std::string(key) + "' must be a number");
}

const toml::array& read_array(const toml::node& n, std::string_view key) {
  const auto* arr = n.as_array();
  if (arr == nullptr) throw InputError("'" + std::string(key) + "' must be an array");
  return *arr;
}

std::vector<std::string> read_strings(const toml::node& n, std::string_view key) {
  std::vector<std::string> out;
  for (const auto& e : read_array(n, key)) out.push_back(read_string(e, key));
  return out;
}

std::string circle_text(const toml::node& n, std::string_view key) {
  if (n.is_string()) return *n.value<std::string>();
  if (n.is_integer() || n.is_floating_point()) return CirclePoint::from_double(*n.value<double>()).hex();
  throw InputError("'" + std::string(key) + "' must be a string or number");
}

SystemSpec read_system(const toml::table& t, const std::string& where) {
  check_keys(t, {"kind", "alpha", "beta", "label"}, where);
  const auto* kind_node = t.get("kind");
  if (kind_node == nullptr) throw InputError(where + ".kind is required");
  const SystemKind kind = system_kind_from_string(read_string(*kind_node, "kind"));
  const auto circle = [&](std::string_view key) {
    const auto* n = t.get(key);
    return n == nullptr ? golden_alpha() : parse_circle(circle_text(*n, key));
  };
  std::string label;
  if (const auto* n = t.get("label")) label = read_string(*n, "label");
  switch (kind) {
    case SystemKind::Rotation: return SystemSpec::rotation(circle("alpha"), label);
    case SystemKind::AnzaiSkew: return SystemSpec::anzai_skew(circle("alpha"), label);
    case SystemKind::Bernoulli: return SystemSpec::bernoulli(label);
    case SystemKind::Heisenberg: {
      const auto* beta = t.get("beta");
      return SystemSpec::heisenberg(circle("alpha"),
                                    beta == nullptr ? CirclePoint::from_rational(1, 3) : parse_circle(circle_text(*beta, "beta")),
                                    label);
    }
  }
  throw InputError("unknown system kind");
}

std::vector<std::string> json_strings(const nlohmann::json& j) { return j.get<std::vector<std::string>>(); }

}  // namespace

CirclePoint parse_circle(const std::string& text) {
  if (text == "golden") return golden_alpha();
  return CirclePoint::parse(text);
}

ExperimentConfig config_from_toml(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw InputError(msg.str());
  }
  check_keys(root,
             {"experiment", "seed", "samples", "output_dir", "threads", "system", "observables", "average", "sup",
              "seminorm", "maximal", "return_time", "assert"},
             "top level");
  ExperimentConfig cfg;
  if (const auto* n = root.get("experiment")) cfg.experiment = read_string(*n, "experiment");
  if (const auto* n = root.get("seed")) cfg.seed = read_count(*n, "seed");
  if (const auto* n = root.get("samples")) cfg.samples = read_count(*n, "samples");
  if (const auto* n = root.get("output_dir")) cfg.output_dir = read_string(*n, "output_dir");
  if (const auto* n = root.get("threads")) cfg.threads = read_count(*n, "threads");

  if (const auto* t = subtable(root, "system")) cfg.system = read_system(*t, "[system]");

  if (const auto* t = subtable(root, "observables")) {
    check_keys(*t, {"f1", "f2", "a", "b", "family"}, "[observables]");
    if (const auto* n = t->get("f1")) cfg.f1 = read_string(*n, "f1");
    if (const auto* n = t->get("f2")) cfg.f2 = read_string(*n, "f2");
    if (const auto* n = t->get("a")) cfg.a = read_count(*n, "a");
    if (const auto* n = t->get("b")) cfg.b = read_count(*n, "b");
    if (const auto* n = t->get("family")) cfg.family = read_strings(*n, "family");
  }

  if (const auto* t = subtable(root, "average")) {
    check_keys(*t, {"degree", "n_min", "n_max", "phases"}, "[average]");
    if (const auto* n = t->get("degree")) cfg.degree = static_cast<int>(read_count(*n, "degree"));
    if (const auto* n = t->get("n_min")) cfg.n_min = read_count(*n, "n_min");
    if (const auto* n = t->get("n_max")) cfg.n_max = read_count(*n, "n_max");
    if (const auto* n = t->get("phases")) {
      for (const auto& entry : read_array(*n, "phases")) {
        std::vector<std::string> coeffs;
        for (const auto& c : read_array(entry, "phases")) coeffs.push_back(circle_text(c, "phases"));
        cfg.phases.push_back(PolynomialPhase::parse(coeffs));
      }
    }
  }

  if (const auto* t = subtable(root, "sup")) {
    check_keys(*t, {"grid", "levels", "oversample", "max_cells", "max_fft_points"}, "[sup]");
    if (const auto* n = t->get("grid")) {
      cfg.sup.grid.clear();
      if (n->is_array()) {
        for (const auto& g : read_array(*n, "grid")) cfg.sup.grid.push_back(read_count(g, "grid"));
      } else {
        cfg.sup.grid.push_back(read_count(*n, "grid"));
      }
    }
    if (const auto* n = t->get("levels")) cfg.sup.levels = static_cast<int>(read_count(*n, "levels"));
    if (const auto* n = t->get("oversample")) cfg.sup.oversample = read_count(*n, "oversample");
    if (const auto* n = t->get("max_cells")) cfg.sup.max_cells = read_count(*n, "max_cells");
    if (const auto* n = t->get("max_fft_points")) cfg.sup.max_fft_points = read_count(*n, "max_fft_points");
  }

  if (const auto* t = subtable(root, "seminorm")) {
    check_keys(*t, {"k", "N", "H"}, "[seminorm]");
    if (const auto* n = t->get("k")) cfg.seminorm_k = static_cast<int>(read_count(*n, "k"));
    if (const auto* n = t->get("N")) cfg.seminorm_N = read_count(*n, "N");
    if (const auto* n = t->get("H")) cfg.seminorm_H = read_count(*n, "H");
  }

  if (const auto* t = subtable(root, "maximal")) {
    check_keys(*t, {"observables"}, "[maximal]");
    if (const auto* n = t->get("observables")) cfg.maximal = read_strings(*n, "observables");
  }

  if (const auto* t = subtable(root, "return_time")) {
    check_keys(*t, {"system", "g", "coefficients", "y_samples"}, "[return_time]");
    if (const auto* s = subtable(*t, "system")) cfg.rt_system = read_system(*s, "[return_time.system]");
    if (const auto* n = t->get("g")) cfg.rt_g = read_string(*n, "g");
    if (const auto* n = t->get("coefficients")) {
      cfg.rt_coefficients.clear();
      for (const auto& c : read_array(*n, "coefficients")) {
        try {
          cfg.rt_coefficients.push_back(read_int(c, "coefficients"));
        } catch (const InputError&) {
          throw InputError("return-time phase needs integer coefficients");
        }
      }
    }
    if (const auto* n = t->get("y_samples")) cfg.rt_y_samples = read_count(*n, "y_samples");
  }

  if (const auto* t = subtable(root, "assert")) {
    check_keys(*t, {"decay_ratio", "cauchy_tol", "cauchy_fraction", "min_spearman"}, "[assert]");
    if (const auto* n = t->get("decay_ratio")) cfg.decay_ratio = read_double(*n, "decay_ratio");
    if (const auto* n = t->get("cauchy_tol")) cfg.cauchy_tol = read_double(*n, "cauchy_tol");
    if (const auto* n = t->get("cauchy_fraction")) cfg.cauchy_fraction = read_double(*n, "cauchy_fraction");
    if (const auto* n = t->get("min_spearman")) cfg.min_spearman = read_double(*n, "min_spearman");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config file not found: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_toml(text.str());
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : cfg.phases) phases.push_back(to_json(p));
  return {
      {"experiment", cfg.experiment},
      {"seed", cfg.seed},
      {"samples", cfg.samples},
      {"system", to_json(cfg.system)},
      {"observables", {{"f1", cfg.f1}, {"f2", cfg.f2}, {"a", cfg.a}, {"b", cfg.b}, {"family", cfg.family}}},
      {"average", {{"degree", cfg.degree}, {"n_min", cfg.n_min}, {"n_max", cfg.n_max}, {"phases", phases}}},
      {"sup",
       {{"grid", cfg.sup.grid},
        {"levels", cfg.sup.levels},
        {"oversample", cfg.sup.oversample},
        {"max_cells", cfg.sup.max_cells},
        {"max_fft_points", cfg.sup.max_fft_points}}},
      {"seminorm", {{"k", cfg.seminorm_k}, {"N", cfg.seminorm_N}, {"H", cfg.seminorm_H}}},
      {"maximal", {{"observables", cfg.maximal}}},
      {"return_time",
       {{"system", cfg.rt_system ? to_json(*cfg.rt_system) : nlohmann::json(nullptr)},
        {"g", cfg.rt_g},
        {"coefficients", cfg.rt_coefficients},
        {"y_samples", cfg.rt_y_samples}}},
      {"assert",
       {{"decay_ratio", cfg.decay_ratio},
        {"cauchy_tol", cfg.cauchy_tol},
        {"cauchy_fraction", cfg.cauchy_fraction},
        {"min_spearman", cfg.min_spearman}}},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    cfg.experiment = j.at("experiment").get<std::string>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.samples = j.at("samples").get<std::size_t>();
    cfg.system = system_from_json(j.at("system"));
    const auto& obs = j.at("observables");
    cfg.f1 = obs.at("f1").get<std::string>();
    cfg.f2 = obs.at("f2").get<std::string>();
    cfg.a = obs.at("a").get<std::uint64_t>();
    cfg.b = obs.at("b").get<std::uint64_t>();
    cfg.family = json_strings(obs.at("family"));
    const auto& avg = j.at("average");
    cfg.degree = avg.at("degree").get<int>();
    cfg.n_min = avg.at("n_min").get<std::size_t>();
    cfg.n_max = avg.at("n_max").get<std::size_t>();
    for (const auto& p : avg.at("phases")) cfg.phases.push_back(phase_from_json(p));
    const auto& sup = j.at("sup");
    cfg.sup.grid = sup.at("grid").get<std::vector<std::size_t>>();
    cfg.sup.levels = sup.at("levels").get<int>();
    cfg.sup.oversample = sup.at("oversample").get<std::size_t>();
    cfg.sup.max_cells = sup.at("max_cells").get<std::size_t>();
    cfg.sup.max_fft_points = sup.at("max_fft_points").get<std::size_t>();
    const auto& sem = j.at("seminorm");
    cfg.seminorm_k = sem.at("k").get<int>();
    cfg.seminorm_N = sem.at("N").get<std::size_t>();
    cfg.seminorm_H = sem.at("H").get<std::size_t>();
    cfg.maximal = json_strings(j.at("maximal").at("observables"));
    const auto& rt = j.at("return_time");
    if (!rt.at("system").is_null()) cfg.rt_system = system_from_json(rt.at("system"));
    cfg.rt_g = rt.at("g").get<std::string>();
    cfg.rt_coefficients = rt.at("coefficients").get<std::vector<std::int64_t>>();
    cfg.rt_y_samples = rt.at("y_samples").get<std::size_t>();
    const auto& as = j.at("assert");
    cfg.decay_ratio = as.at("decay_ratio").get<double>();
    cfg.cauchy_tol = as.at("cauchy_tol").get<double>();
    cfg.cauchy_fraction = as.at("cauchy_fraction").get<double>();
    cfg.min_spearman = as.at("min_spearman").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed config JSON: ") + e.what());
  }
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(to_json(cfg).dump()).substr(0, 16); }

}  // namespace wwlab
