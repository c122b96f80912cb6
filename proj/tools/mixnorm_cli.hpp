// Copyright 2026 The mixnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Command-line front end. dispatch() is kept separate from main() so tests
// can drive it in process.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or validation error.
// Machine output (JSON, or CSV for `probe --format csv`) goes to `out`,
// diagnostics to `err`.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixnorm/mixnorm.hpp"

namespace mixnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

inline std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("malformed " + what + " document: " + e.what());
  }
}

inline json read_json(const std::string& path, const std::string& what) { return parse_json(read_text(path), what); }

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<Exponent> parse_exponents(const std::string& s) {
  std::vector<Exponent> out;
  for (const auto& tok : split_list(s)) out.push_back(Exponent::parse(tok));
  if (out.empty()) throw ValidationError("empty exponent list");
  return out;
}

inline std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split_list(s)) {
    const Rational r = Rational::parse(tok);
    if (!r.is_integer()) throw ValidationError("expected an integer, got '" + tok + "'");
    out.push_back(r.num());
  }
  return out;
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) out.push_back(Rational::parse(tok).to_double());
  return out;
}

inline double default_tolerance() {
  if (const char* env = std::getenv("MIXNORM_TOL")) {
    try {
      return Rational::parse(env).to_double();
    } catch (const std::exception&) {
      throw ValidationError(std::string("MIXNORM_TOL is not a number: '") + env + "'");
    }
  }
  return kDefaultTolerance;
}

inline void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

/// Tensor from a JSON or CSV file; CSV (and JSON with a string "space"
/// reference) needs `space_path`.
inline Tensor load_tensor(const std::string& path, const std::string& space_path) {
  const json space_doc = space_path.empty() ? json() : read_json(space_path, "space");
  const std::string text = read_text(path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) {
    if (space_doc.is_null()) throw ValidationError("CSV tensor '" + path + "' needs --space");
    return tensor_from_csv(text, std::make_shared<const ProductSpace>(space_from_json(space_doc)));
  }
  const json doc = parse_json(text, "tensor");
  if (doc.is_object() && doc.contains("space") && doc.at("space").is_string() && space_doc.is_null()) {
    throw ValidationError("tensor '" + path + "' references space '" + doc.at("space").get<std::string>() +
                          "'; supply it with --space");
  }
  return load_validated(space_doc, doc).second;
}

/// Inputs sharing one space object so that evaluate_instance accepts them.
inline std::vector<Tensor> load_tensors(const std::vector<std::string>& paths, const std::string& space_path) {
  std::vector<Tensor> out;
  for (const auto& p : paths) {
    Tensor t = load_tensor(p, space_path);
    if (!out.empty()) {
      if (!(t.space() == out[0].space())) throw ValidationError("tensor '" + p + "' is on a different space than the first tensor");
      t = Tensor(out[0].space_ptr(), std::vector<double>(t.values().begin(), t.values().end()));
    }
    out.push_back(std::move(t));
  }
  return out;
}

struct InstanceArgs {
  std::string instance_path;
  std::string kind;
  std::string params;
  std::string params_path;

  void add_to(CLI::App* app) {
    app->add_option("--instance", instance_path, "instance document (JSON)");
    app->add_option("--kind", kind, "inequality kind");
    app->add_option("--params", params, "kind parameters as inline JSON");
    app->add_option("--params-file", params_path, "kind parameters as a JSON file");
  }

  [[nodiscard]] bool fixed() const { return !instance_path.empty() || !params.empty() || !params_path.empty(); }

  [[nodiscard]] json params_doc() const {
    if (!params.empty()) return parse_json(params, "params");
    if (!params_path.empty()) return read_json(params_path, "params");
    return json::object();
  }

  [[nodiscard]] InequalityInstance load() const {
    if (!instance_path.empty()) {
      if (!kind.empty() || fixed_params()) throw ValidationError("--instance excludes --kind and --params");
      return instance_from_json(read_json(instance_path, "instance"));
    }
    if (kind.empty()) throw ValidationError("supply --instance or --kind");
    return build_instance(kind_from_name(kind), params_doc());
  }

 private:
  [[nodiscard]] bool fixed_params() const { return !params.empty() || !params_path.empty(); }
};

inline bool parametrized(Kind k) { return k != Kind::littlewood43 && k != Kind::quad6; }

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Mixed-norm inequality toolkit", "mixnorm");
  app.require_subcommand(1);
  double tol = 0.0;
  bool tol_set = false;
  app.add_option_function<double>("--tol", [&](double t) { tol = t, tol_set = true; }, "pass tolerance (default $MIXNORM_TOL or 1e-8)");
  auto tolerance = [&] {
    if (tol_set) {
      if (!(tol >= 0)) throw ValidationError("--tol must be nonnegative");
      return tol;
    }
    return default_tolerance();
  };

  // eval
  auto* eval = app.add_subcommand("eval", "mixed norm of a tensor");
  std::string e_tensor, e_space, e_spec, e_p, e_axes, e_path = "direct";
  eval->add_option("--tensor", e_tensor, "tensor document (JSON or .csv)")->required();
  eval->add_option("--space", e_space, "space document");
  eval->add_option("--spec", e_spec, "norm spec document");
  eval->add_option("--p", e_p, "exponent row, e.g. 2,1,inf");
  eval->add_option("--axes", e_axes, "axis ids for --p (default: space order)");
  eval->add_option("--path", e_path, "direct | log")->check(CLI::IsMember({"direct", "log"}));

  // orbit
  auto* orb = app.add_subcommand("orbit", "orbit size, harmonic mean and orbit listing");
  std::string o_p, o_axes, o_mode = "exponents";
  orb->add_option("--p", o_p, "exponent row")->required();
  orb->add_option("--axes", o_axes, "axis ids");
  orb->add_option("--mode", o_mode, "exponents | variables")->check(CLI::IsMember({"exponents", "variables"}));

  // decompose
  auto* dec = app.add_subcommand("decompose", "adjacent-transposition certificate for a raising permutation");
  std::string d_p, d_axes, d_sigma, d_dir = "raise";
  dec->add_option("--p", d_p, "exponent row")->required();
  dec->add_option("--axes", d_axes, "axis ids");
  dec->add_option("--sigma", d_sigma, "1-based images, e.g. 2,3,1")->required();
  dec->add_option("--direction", d_dir, "raise | lower")->check(CLI::IsMember({"raise", "lower"}));

  // plan
  auto* plan = app.add_subcommand("plan", "derive an inequality instance");
  InstanceArgs p_args;
  p_args.add_to(plan);

  // verify
  auto* ver = app.add_subcommand("verify", "evaluate an instance on given or random tensors");
  InstanceArgs v_args;
  v_args.add_to(ver);
  std::vector<std::string> v_tensors;
  std::string v_space, v_config;
  std::optional<std::uint64_t> v_seed;
  std::size_t v_random = 0;
  ver->add_option("--tensors", v_tensors, "input tensors (one, broadcast, or one per slot)");
  ver->add_option("--space", v_space, "space document for CSV tensors or space references");
  ver->add_option("--random", v_random, "number of random trials");
  ver->add_option("--seed", v_seed, "master seed (required with --random)");
  ver->add_option("--config", v_config, "trial config document for --random");

  // coeffs
  auto* co = app.add_subcommand("coeffs", "subset coefficients c_i");
  std::size_t c_n = 0, c_k = 0;
  std::string c_strategy = "uniform", c_values;
  std::optional<std::uint64_t> c_seed;
  co->add_option("--n", c_n)->required();
  co->add_option("--k", c_k)->required();
  co->add_option("--strategy", c_strategy, "uniform | random | user");
  co->add_option("--seed", c_seed, "seed for --strategy random");
  co->add_option("--c", c_values, "user coefficients, e.g. 1/2,1/3,...");

  // probe
  auto* pr = app.add_subcommand("probe", "scaling-family ratios");
  std::string pr_p, pr_axes, pr_test, pr_t = "1,2,4,8,16,32,64,128,256,512,1024", pr_format = "json";
  pr->add_option("--p", pr_p, "exponent row P")->required();
  pr->add_option("--axes", pr_axes, "axis ids");
  pr->add_option("--test-p", pr_test, "left-hand exponent p")->required();
  pr->add_option("--t", pr_t, "scales t");
  pr->add_option("--format", pr_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  // search
  auto* se = app.add_subcommand("search", "maximize lhs/rhs over tensors");
  InstanceArgs s_args;
  s_args.add_to(se);
  std::string s_config, s_weights;
  std::optional<std::uint64_t> s_seed;
  std::optional<std::size_t> s_evals, s_axis;
  se->add_option("--seed", s_seed, "master seed")->required();
  se->add_option("--config", s_config, "search config document");
  se->add_option("--max-evals", s_evals);
  se->add_option("--axis-size", s_axis);
  se->add_option("--weight-range", s_weights, "min,max");

  // sweep
  auto* sw = app.add_subcommand("sweep", "randomized soundness sweep over catalog kinds");
  std::string w_config, w_kinds;
  std::optional<std::uint64_t> w_seed;
  std::optional<std::size_t> w_trials;
  std::size_t w_threads = 1;
  sw->add_option("--config", w_config, "sweep config document");
  sw->add_option("--seed", w_seed, "master seed (required unless in --config)");
  sw->add_option("--trials", w_trials, "trials per kind");
  sw->add_option("--kinds", w_kinds, "comma-separated kinds");
  sw->add_option("--threads", w_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (eval->parsed()) {
      const Tensor f = load_tensor(e_tensor, e_space);
      NormSpec spec;
      if (!e_spec.empty()) {
        if (!e_p.empty()) throw ValidationError("--spec excludes --p");
        spec = normspec_from_json(read_json(e_spec, "norm spec"));
      } else {
        if (e_p.empty()) throw ValidationError("supply --spec or --p");
        spec = NormSpec(parse_exponents(e_p), e_axes.empty() ? f.space().ids() : split_list(e_axes));
      }
      const EvalPath path = e_path == "log" ? EvalPath::log_domain : EvalPath::direct;
      const double v = eval_mixed_norm(f, spec, path);
      emit(out, {{"spec", normspec_to_json(spec)},
                 {"path", e_path},
                 {"value", v},
                 {"log_value", detail::finite_or_string(log_mixed_norm(f, spec))}});
      return kExitOk;
    }
    if (orb->parsed()) {
      const auto p = parse_exponents(o_p);
      const NormSpec spec(p, o_axes.empty() ? NormSpec::default_axes(p.size()) : split_list(o_axes));
      const OrbitInfo info = orbit_info(spec);
      json listing = json::array();
      for (const auto& s : orbit(spec, o_mode == "variables" ? Action::variables : Action::exponents)) {
        listing.push_back(normspec_to_json(s));
      }
      emit(out, {{"m", info.m},
                 {"pbar", info.pbar.str()},
                 {"pbar_float", info.pbar.is_infinite() ? json("inf") : json(info.pbar.value())},
                 {"pbar_exact", info.exact},
                 {"values", exponent_list_to_json(info.values)},
                 {"multiplicities", info.multiplicities},
                 {"mode", o_mode},
                 {"orbit", listing}});
      return kExitOk;
    }
    if (dec->parsed()) {
      const auto p = parse_exponents(d_p);
      const NormSpec spec(p, d_axes.empty() ? NormSpec::default_axes(p.size()) : split_list(d_axes));
      const Permutation s = Permutation::from_one_based(parse_ints(d_sigma));
      const RaiseTrace trace = decompose(s, spec, d_dir == "lower" ? Direction::lower : Direction::raise);
      emit(out, trace_to_json(trace));
      return kExitOk;
    }
    if (plan->parsed()) {
      emit(out, instance_to_json(p_args.load()));
      return kExitOk;
    }
    if (ver->parsed()) {
      const double t = tolerance();
      json reports = json::array();
      bool all_pass = true;
      std::size_t passed = 0;
      auto record = [&](const InequalityInstance& inst, VerificationReport rep, bool with_instance) {
        json doc = report_to_json(rep);
        if (with_instance) doc["instance"] = instance_to_json(inst);
        if (!rep.pass) {
          all_pass = false;
        } else {
          ++passed;
        }
        reports.push_back(std::move(doc));
      };
      if (v_random > 0) {
        if (!v_tensors.empty()) throw ValidationError("--random excludes --tensors");
        if (!v_seed) throw ValidationError("--random needs --seed");
        TrialConfig cfg;
        if (!v_config.empty()) {
          json doc = read_json(v_config, "trial config");
          if (!doc.contains("seed")) doc["seed"] = *v_seed;
          cfg = trial_config_from_json(doc);
        }
        cfg.seed = *v_seed;
        cfg.tolerance = t;
        std::optional<InequalityInstance> fixed;
        std::optional<Kind> kind;
        if (v_args.fixed()) {
          fixed = v_args.load();
        } else {
          if (v_args.kind.empty()) throw ValidationError("supply --instance or --kind");
          kind = kind_from_name(v_args.kind);
          if (!parametrized(*kind)) fixed = build_instance(*kind, json::object());
        }
        for (std::size_t i = 0; i < v_random; ++i) {
          const InequalityInstance inst = fixed ? *fixed : random_instance(*kind, cfg, i);
          const RandomInputs in = random_inputs(cfg, i, inst.arity, inst.axes);
          VerificationReport rep = evaluate_instance(inst, in.tensors, t);
          rep.seed = cfg.seed;
          rep.trial = i;
          record(inst, std::move(rep), !fixed);
        }
      } else {
        if (v_tensors.empty()) throw ValidationError("supply --tensors or --random N --seed S");
        const InequalityInstance inst = v_args.load();
        if (const auto issues = precondition_issues(inst); !issues.empty()) throw ValidationError(issues.front());
        record(inst, evaluate_instance(inst, load_tensors(v_tensors, v_space), t), false);
      }
      emit(out, {{"reports", reports}, {"trials", reports.size()}, {"passed", passed}, {"pass", all_pass}});
      return all_pass ? kExitOk : kExitFailure;
    }
    if (co->parsed()) {
      const auto strategy = strategy_from_name(c_strategy);
      if (strategy == CoefficientStrategy::seeded_random && !c_seed) throw ValidationError("--strategy random needs --seed");
      std::vector<Rational> user;
      if (strategy == CoefficientStrategy::user) {
        if (c_values.empty()) throw ValidationError("--strategy user needs --c");
        for (const auto& tok : split_list(c_values)) user.push_back(Rational::parse(tok));
      } else if (!c_values.empty()) {
        throw ValidationError("--c is only used with --strategy user");
      }
      const auto c = solve_subset_coefficients(c_n, c_k, strategy, c_seed.value_or(0), user);
      const auto chk = check_subset_coefficients(c_n, c_k, c);
      json cj = json::array();
      json cf = json::array();
      for (const auto& ci : c) {
        cj.push_back(ci.str());
        cf.push_back(ci.to_double());
      }
      json res = json::array();
      for (const auto& r : chk.residuals) res.push_back(r.str());
      emit(out, {{"n", c_n},
                 {"k", c_k},
                 {"M", c.size()},
                 {"strategy", c_strategy},
                 {"seed", c_seed ? json(*c_seed) : json(nullptr)},
                 {"subsets", detail::subsets_to_json(k_subsets(c_n, c_k))},
                 {"c", cj},
                 {"c_float", cf},
                 {"residuals", res}});
      return kExitOk;
    }
    if (pr->parsed()) {
      const auto p = parse_exponents(pr_p);
      const NormSpec spec(p, pr_axes.empty() ? NormSpec::default_axes(p.size()) : split_list(pr_axes));
      const ScalingProbe probe = scaling_probe(spec, Exponent::parse(pr_test), parse_doubles(pr_t));
      if (pr_format == "csv") {
        out << probe_to_csv(probe);
      } else {
        emit(out, probe_to_json(probe));
      }
      return kExitOk;
    }
    if (se->parsed()) {
      SearchConfig cfg;
      if (!s_config.empty()) {
        json doc = read_json(s_config, "search config");
        if (!doc.contains("seed")) doc["seed"] = *s_seed;
        cfg = search_config_from_json(doc);
      }
      cfg.seed = *s_seed;
      cfg.tolerance = tolerance();
      if (s_evals) cfg.max_evals = *s_evals;
      if (s_axis) cfg.axis_size = *s_axis;
      if (!s_weights.empty()) {
        const auto w = parse_doubles(s_weights);
        if (w.size() != 2) throw ValidationError("--weight-range takes min,max");
        cfg.weight_min = w[0];
        cfg.weight_max = w[1];
      }
      const InequalityInstance inst = s_args.load();
      if (const auto issues = precondition_issues(inst); !issues.empty()) throw ValidationError(issues.front());
      const SearchResult r = maximize_ratio(inst, cfg);
      json doc = search_result_to_json(r);
      doc["config"] = search_config_to_json(cfg);
      doc["instance"] = instance_to_json(inst);
      emit(out, doc);
      return r.report.pass ? kExitOk : kExitFailure;
    }
    if (sw->parsed()) {
      json doc = w_config.empty() ? json::object() : read_json(w_config, "sweep config");
      if (w_seed) doc["seed"] = *w_seed;
      if (!doc.contains("seed")) throw ValidationError("sweep needs --seed (or \"seed\" in --config)");
      if (w_trials) doc["trials"] = *w_trials;
      if (!w_kinds.empty()) doc["kinds"] = split_list(w_kinds);
      if (tol_set || std::getenv("MIXNORM_TOL") || !doc.contains("tolerance")) doc["tolerance"] = tolerance();
      doc["threads"] = w_threads;
      const TrialConfig cfg = trial_config_from_json(doc);
      const json report = sweep(cfg);
      emit(out, report);
      return report.at("pass").get<bool>() ? kExitOk : kExitFailure;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const RationalOverflow& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  err << "error: no subcommand\n";
  return kExitInvalid;
}

inline int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  try {
    return run(argc, argv, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace mixnorm::cli
