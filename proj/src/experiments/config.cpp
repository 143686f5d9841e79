// Copyright 2026 The SKQD Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>
#include <sstream>

#include "skqd/experiments.hpp"

namespace skqd::experiments {
namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

// Tracks which keys were read so leftovers can be reported.
class Reader {
 public:
  Reader(const Json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) config_error(where_ + ": expected a JSON object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return doc_.contains(key); }

  const Json& at(const std::string& key) {
    used_.insert(key);
    return doc_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(at(key), key);
  }

  template <typename T>
  void get_optional(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    const Json& v = at(key);
    if (v.is_null()) {
      out.reset();
    } else {
      out = convert<T>(v, key);
    }
  }

  template <typename T>
  void get_list(const std::string& key, std::vector<T>& out) {
    if (!has(key)) return;
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) config_error(where_ + "." + key + ": expected a non-empty array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(convert<T>(v[i], key + "[" + std::to_string(i) + "]"));
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (used_.count(key) == 0) config_error(where_ + ": unknown key '" + key + "'");
    }
  }

  template <typename T>
  T convert(const Json& v, const std::string& key) const {
    const std::string path = where_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) config_error(path + ": expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) config_error(path + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) config_error(path + ": expected a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) config_error(path + ": must be finite");
      return x;
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) config_error(path + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
        if (v.get<std::int64_t>() < 0) config_error(path + ": must be nonnegative");
        return static_cast<T>(v.get<std::int64_t>());
      } else {
        return static_cast<T>(v.get<std::int64_t>());
      }
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  const Json& doc_;
  std::string where_;
  std::set<std::string> used_;
};

void check(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

// "auto" or a positive number.
void read_dt(Reader& r, std::optional<double>& dt) {
  if (!r.has("dt")) return;
  const Json& v = r.at("dt");
  if (v.is_string() && v.get<std::string>() == "auto") {
    dt.reset();
    return;
  }
  dt = r.convert<double>(v, "dt");
  check(*dt > 0.0, r.where() + ".dt: must be positive or \"auto\"");
}

void read_seeds(Reader& r, Seeds& seeds) {
  if (!r.has("seeds")) return;
  Reader s(r.at("seeds"), r.where() + ".seeds");
  s.get("base", seeds.base);
  s.get("count", seeds.count);
  s.finish();
  check(seeds.count >= 1, r.where() + ".seeds.count: must be at least 1");
}

void read_threshold(Reader& r, std::optional<double>& t) {
  r.get_optional("threshold", t);
  check(!t || *t >= 0.0, r.where() + ".threshold: must be nonnegative");
}

template <typename T>
void check_positive(const std::vector<T>& v, const std::string& what) {
  for (const auto& x : v) check(x > T{0}, what + ": entries must be positive");
}

NoiseTarget read_target(const Reader& r, const Json& v, const std::string& key) {
  const auto s = r.convert<std::string>(v, key);
  try {
    return parse_noise_target(s);
  } catch (const Error&) {
    config_error(r.where() + "." + key + ": expected \"H-only\" or \"H-and-S\", got \"" + s + "\"");
  }
}

BenchTfimConfig read_bench(Reader& r) {
  BenchTfimConfig c;
  r.get_list("n", c.n);
  r.get("h1", c.h1);
  r.get("h2", c.h2);
  r.get("d", c.d);
  read_dt(r, c.dt);
  r.get_list("M", c.shots);
  read_seeds(r, c.seeds);
  r.get("kqd_shots", c.kqd_shots);
  if (r.has("noise_targets")) {
    const Json& v = r.at("noise_targets");
    check(v.is_array() && !v.empty(), r.where() + ".noise_targets: expected a non-empty array");
    c.noise_targets.clear();
    for (const auto& t : v) c.noise_targets.push_back(read_target(r, t, "noise_targets"));
  }
  read_threshold(r, c.threshold);
  for (int n : c.n) check(n >= 2 && n <= 24, r.where() + ".n: qubit counts must lie in 2..24");
  check(c.d >= 1, r.where() + ".d: must be at least 1");
  check_positive(c.shots, r.where() + ".M");
  check(c.kqd_shots > 0.0, r.where() + ".kqd_shots: must be positive");
  return c;
}

KqdConfig read_kqd(Reader& r) {
  KqdConfig c;
  r.get("n", c.n);
  r.get("h1", c.h1);
  r.get("h2", c.h2);
  r.get_list("d", c.d);
  read_dt(r, c.dt);
  r.get("sigma", c.sigma);
  if (r.has("noise_target")) c.noise_target = read_target(r, r.at("noise_target"), "noise_target");
  r.get("seed", c.seed);
  read_threshold(r, c.threshold);
  check(c.n >= 2 && c.n <= 24, r.where() + ".n: must lie in 2..24");
  check_positive(c.d, r.where() + ".d");
  check(c.sigma >= 0.0, r.where() + ".sigma: must be nonnegative");
  return c;
}

SkqdConfig read_skqd(Reader& r) {
  SkqdConfig c;
  r.get_list("n", c.n);
  if (r.has("fields")) {
    const Json& v = r.at("fields");
    check(v.is_array() && !v.empty(), r.where() + ".fields: expected a non-empty array of [h1, h2]");
    c.fields.clear();
    for (const auto& f : v) {
      check(f.is_array() && f.size() == 2 && f[0].is_number() && f[1].is_number(),
            r.where() + ".fields: each entry must be [h1, h2]");
      c.fields.emplace_back(f[0].get<double>(), f[1].get<double>());
    }
  }
  r.get_list("d", c.d);
  read_dt(r, c.dt);
  r.get_list("M", c.shots);
  read_seeds(r, c.seeds);
  r.get("alpha_target", c.alpha_target);
  r.get_optional("d_max", c.d_max);
  r.get("eta", c.eta);
  for (int n : c.n) check(n >= 2 && n <= 24, r.where() + ".n: qubit counts must lie in 2..24");
  check_positive(c.d, r.where() + ".d");
  check_positive(c.shots, r.where() + ".M");
  check(c.alpha_target > 0.0 && c.alpha_target <= 1.0, r.where() + ".alpha_target: must lie in (0, 1]");
  check(c.eta > 0.0 && c.eta <= 1.0, r.where() + ".eta: must lie in (0, 1]");
  check(!c.d_max || *c.d_max >= 1, r.where() + ".d_max: must be at least 1");
  return c;
}

SiamConfig read_siam(Reader& r) {
  SiamConfig c;
  r.get("L", c.bath_sites);
  r.get_list("U", c.u);
  r.get("d", c.d);
  r.get("dt", c.dt);
  if (r.has("method")) {
    const Json& v = r.at("method");
    const auto s = r.convert<std::string>(v, "method");
    if (s != "auto") {
      try {
        c.method = parse_evolution_method(s);
      } catch (const Error&) {
        config_error(r.where() + ".method: expected auto, exact-eigen, lanczos-expmv or trotter2, got \"" + s + "\"");
      }
    }
  }
  r.get_list("M", c.shots);
  r.get("seed", c.seed);
  r.get("stage1_M", c.stage1_shots);
  if (r.has("k_fermi")) {
    const Json& v = r.at("k_fermi");
    if (!(v.is_string() && v.get<std::string>() == "auto")) c.k_fermi = r.convert<int>(v, "k_fermi");
  }
  r.get("uniform_baseline", c.uniform_baseline);
  r.get("correlations", c.correlations);
  r.get_optional("d_max", c.d_max);
  check(c.bath_sites >= 7 && c.bath_sites <= 15, r.where() + ".L: bath sites must lie in 7..15");
  check(c.d >= 1, r.where() + ".d: must be at least 1");
  check(c.dt > 0.0, r.where() + ".dt: must be positive");
  check_positive(c.shots, r.where() + ".M");
  check(c.stage1_shots >= 1, r.where() + ".stage1_M: must be at least 1");
  check(!c.d_max || *c.d_max >= 1, r.where() + ".d_max: must be at least 1");
  return c;
}

VerifyBoundsConfig read_verify(Reader& r) {
  VerifyBoundsConfig c;
  r.get("grid", c.grid);
  r.get("seed", c.seed);
  check(c.grid == "small" || c.grid == "full", r.where() + ".grid: expected \"small\" or \"full\"");
  return c;
}

SparsityEConfig read_sparsity(Reader& r) {
  SparsityEConfig c;
  r.get_list("n", c.n);
  r.get_list("h", c.h);
  for (int n : c.n) check(n >= 3 && n <= 24, r.where() + ".n: qubit counts must lie in 3..24");
  check_positive(c.h, r.where() + ".h");
  return c;
}

Json dt_json(const std::optional<double>& dt) { return dt ? Json(*dt) : Json("auto"); }

Json threshold_json(const std::optional<double>& t) { return t ? Json(*t) : Json(nullptr); }

Json seeds_json(const Seeds& s) { return Json{{"base", s.base}, {"count", s.count}}; }

}  // namespace

std::string kind_of(const ExperimentConfig& config) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BenchTfimConfig>) return "bench-tfim";
        if constexpr (std::is_same_v<T, KqdConfig>) return "kqd";
        if constexpr (std::is_same_v<T, SkqdConfig>) return "skqd";
        if constexpr (std::is_same_v<T, SiamConfig>) return "siam";
        if constexpr (std::is_same_v<T, VerifyBoundsConfig>) return "verify-bounds";
        if constexpr (std::is_same_v<T, SparsityEConfig>) return "sparsity-e";
      },
      config);
}

ExperimentConfig parse_config(const Json& doc) {
  Reader r(doc, "config");
  if (!r.has("kind")) config_error("config: missing required key 'kind'");
  const auto kind = r.convert<std::string>(r.at("kind"), "kind");
  ExperimentConfig out;
  if (kind == "bench-tfim") {
    out = read_bench(r);
  } else if (kind == "kqd") {
    out = read_kqd(r);
  } else if (kind == "skqd") {
    out = read_skqd(r);
  } else if (kind == "siam") {
    out = read_siam(r);
  } else if (kind == "verify-bounds") {
    out = read_verify(r);
  } else if (kind == "sparsity-e") {
    out = read_sparsity(r);
  } else {
    config_error("config.kind: unknown experiment kind \"" + kind +
                 "\" (expected bench-tfim, kqd, skqd, siam, verify-bounds or sparsity-e)");
  }
  r.finish();
  return out;
}

Json to_json(const ExperimentConfig& config) {
  Json j{{"kind", kind_of(config)}};
  std::visit(
      [&j](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BenchTfimConfig>) {
          j["n"] = c.n;
          j["h1"] = c.h1;
          j["h2"] = c.h2;
          j["d"] = c.d;
          j["dt"] = dt_json(c.dt);
          j["M"] = c.shots;
          j["seeds"] = seeds_json(c.seeds);
          j["kqd_shots"] = c.kqd_shots;
          Json targets = Json::array();
          for (auto t : c.noise_targets) targets.push_back(to_string(t));
          j["noise_targets"] = targets;
          j["threshold"] = threshold_json(c.threshold);
        } else if constexpr (std::is_same_v<T, KqdConfig>) {
          j["n"] = c.n;
          j["h1"] = c.h1;
          j["h2"] = c.h2;
          j["d"] = c.d;
          j["dt"] = dt_json(c.dt);
          j["sigma"] = c.sigma;
          j["noise_target"] = to_string(c.noise_target);
          j["seed"] = c.seed;
          j["threshold"] = threshold_json(c.threshold);
        } else if constexpr (std::is_same_v<T, SkqdConfig>) {
          j["n"] = c.n;
          Json fields = Json::array();
          for (const auto& [a, b] : c.fields) fields.push_back(Json::array({a, b}));
          j["fields"] = fields;
          j["d"] = c.d;
          j["dt"] = dt_json(c.dt);
          j["M"] = c.shots;
          j["seeds"] = seeds_json(c.seeds);
          j["alpha_target"] = c.alpha_target;
          j["d_max"] = c.d_max ? Json(*c.d_max) : Json(nullptr);
          j["eta"] = c.eta;
        } else if constexpr (std::is_same_v<T, SiamConfig>) {
          j["L"] = c.bath_sites;
          j["U"] = c.u;
          j["d"] = c.d;
          j["dt"] = c.dt;
          j["method"] = c.method ? to_string(*c.method) : "auto";
          j["M"] = c.shots;
          j["seed"] = c.seed;
          j["stage1_M"] = c.stage1_shots;
          j["k_fermi"] = c.k_fermi ? Json(*c.k_fermi) : Json("auto");
          j["uniform_baseline"] = c.uniform_baseline;
          j["correlations"] = c.correlations;
          j["d_max"] = c.d_max ? Json(*c.d_max) : Json(nullptr);
        } else if constexpr (std::is_same_v<T, VerifyBoundsConfig>) {
          j["grid"] = c.grid;
          j["seed"] = c.seed;
        } else if constexpr (std::is_same_v<T, SparsityEConfig>) {
          j["n"] = c.n;
          j["h"] = c.h;
        }
      },
      config);
  return j;
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  std::visit(
      [seed](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BenchTfimConfig> || std::is_same_v<T, SkqdConfig>) {
          c.seeds.base = seed;
        } else if constexpr (std::is_same_v<T, KqdConfig> || std::is_same_v<T, SiamConfig> ||
                             std::is_same_v<T, VerifyBoundsConfig>) {
          c.seed = seed;
        }
      },
      config);
}

Output run(const ExperimentConfig& config) {
  return std::visit(
      [](const auto& c) -> Output {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BenchTfimConfig>) return run_bench_tfim(c);
        if constexpr (std::is_same_v<T, KqdConfig>) return run_kqd(c);
        if constexpr (std::is_same_v<T, SkqdConfig>) return run_skqd(c);
        if constexpr (std::is_same_v<T, SiamConfig>) return run_siam(c);
        if constexpr (std::is_same_v<T, VerifyBoundsConfig>) return run_verify_bounds(c);
        if constexpr (std::is_same_v<T, SparsityEConfig>) return run_sparsity_e(c);
      },
      config);
}

}  // namespace skqd::experiments
