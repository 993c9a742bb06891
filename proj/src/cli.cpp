#include "adaptdim/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adaptdim/experiments.hpp"
#include "adaptdim/format.hpp"
#include "adaptdim/io.hpp"
#include "adaptdim/learner.hpp"
#include "adaptdim/randmat.hpp"
#include "adaptdim/shatter.hpp"
#include "adaptdim/spectral.hpp"

namespace adaptdim::cli {

namespace fs = std::filesystem;

namespace {

// Typed access to one JSON object that rejects unknown fields.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  bool has(const std::string& key) {
    seen_.push_back(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError("missing field '" + key + "' in " + where_);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError("field '" + key + "' in " + where_ + " must be a number");
    return v.get<double>();
  }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) throw ConfigError("field '" + key + "' in " + where_ + " must be positive");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t min_value = 0) {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError("field '" + key + "' in " + where_ + " must be a non-negative integer");
    }
    const auto n = v.get<std::size_t>();
    if (n < min_value) {
      throw ConfigError("field '" + key + "' in " + where_ + " must be >= " + std::to_string(min_value));
    }
    return n;
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError("field '" + key + "' in " + where_ + " must be a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError("field '" + key + "' in " + where_ + " must be a boolean");
    return v.get<bool>();
  }

  std::vector<std::size_t> counts(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError("field '" + key + "' in " + where_ + " must be a non-empty array");
    std::vector<std::size_t> out;
    for (const auto& item : v) {
      if (!item.is_number_integer() || item.get<long long>() < 1) {
        throw ConfigError("field '" + key + "' in " + where_ + " must contain positive integers");
      }
      out.push_back(item.get<std::size_t>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ConfigError("unknown field '" + key + "' in " + where_);
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

dist::DistributionSpec build_distribution(const json& j) {
  if (j.is_object() && j.contains("example")) {
    Fields f(j, "distribution example");
    const std::string name = f.text("example");
    const std::size_t d = f.count("d", 1);
    std::optional<double> v;
    if (f.has("v")) v = f.positive("v");
    f.finish();
    if (name == "spiky") return dist::spiky_example(d);
    if (name == "bernoulli") return dist::bernoulli_example(d);
    if (name == "gaussian_mixture") {
      if (!v) throw ConfigError("gaussian_mixture example needs 'v'");
      return dist::gaussian_mixture_example(d, *v);
    }
    throw ConfigError("unknown distribution example '" + name + "'");
  }
  return io::spec_from_json(j);
}

DistributionConfig distribution_field(Fields& f) {
  DistributionConfig cfg{f.raw("distribution")};
  try {
    build_distribution(cfg.value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid distribution: ") + e.what());
  }
  return cfg;
}

std::string existing_file(Fields& f, const std::string& key) {
  const std::string path = f.text(key);
  if (!fs::exists(path)) throw ConfigError("file '" + path + "' given by '" + key + "' does not exist");
  return path;
}

LearnCurveParams learn_curve_fields(Fields& f) {
  LearnCurveParams p;
  p.distribution = distribution_field(f);
  p.gamma = f.positive("gamma");
  p.m_grid = f.counts("m_grid");
  if (f.has("trials")) p.trials = f.count("trials", 1);
  if (f.has("learner")) p.learner = f.text("learner");
  if (f.has("reference")) p.reference = f.text("reference");
  try {
    learner::learner_kind_from_string(p.learner);
    learner::reference_loss_from_string(p.reference);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

json learn_curve_json(const LearnCurveParams& p) {
  return json{{"distribution", p.distribution.value}, {"gamma", p.gamma},     {"m_grid", p.m_grid},
              {"trials", p.trials},                   {"learner", p.learner}, {"reference", p.reference}};
}

// Writes `content` to out/name and records it.
void emit(ExperimentReport& report, const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  report.outputs.push_back(path.string());
}

std::string curve_csv(const learner::LearningCurve& curve) {
  std::ostringstream os;
  learner::write_curve_csv(os, curve);
  return os.str();
}

json curve_summary(const learner::LearningCurve& curve) {
  json entries = json::array();
  for (const auto& e : curve.entries) {
    entries.push_back({{"m", e.m},
                       {"mean_test_error", e.mean_test_error},
                       {"std_error", e.std_error},
                       {"precondition_failures", e.precondition_failures},
                       {"max_train_margin_loss", e.max_train_margin_loss}});
  }
  json j{{"learner_kind", learner::to_string(curve.learner_kind)},
         {"gamma", curve.gamma},
         {"distribution_digest", curve.distribution_digest},
         {"reference_kind", learner::to_string(curve.reference_kind)},
         {"entries", entries}};
  j["reference_loss"] = curve.reference_loss ? json(*curve.reference_loss) : json(nullptr);
  if (curve.reference_kind == learner::ReferenceLoss::margin && curve.reference_loss) {
    j["reference_note"] = "margin loss of the known Bayes direction; upper-bounds the optimal margin loss";
  }
  return j;
}

learner::LearningCurve run_curve(const LearnCurveParams& p, std::uint64_t seed, unsigned workers) {
  learner::CurveOptions options;
  options.workers = workers;
  options.reference = learner::reference_loss_from_string(p.reference);
  return learner::learning_curve(build_distribution(p.distribution.value), p.gamma, p.m_grid, p.trials,
                                 learner::learner_kind_from_string(p.learner), seed, options);
}

void run_reproduce(const ExperimentConfig& cfg, const ReproduceParams& p, const fs::path& dir,
                   ExperimentReport& report) {
  const auto start = std::chrono::steady_clock::now();
  auto over_budget = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > p.budget_seconds;
  };
  std::ostringstream table;
  table << "example,parameter,quantity,value\n";
  auto row = [&](const std::string& ex, const std::string& param, const std::string& q, const std::string& v) {
    table << ex << ',' << param << ',' << q << ',' << v << '\n';
  };
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("not_reached"); };
  json summary = json::object();

  auto finish = [&](bool complete) {
    report.complete = complete;
    summary["complete"] = complete;
    report.summary = summary;
    emit(report, dir, "examples_table.csv", table.str());
  };

  // (a) spiky spectrum
  {
    const auto run = experiments::spiky_run(cfg.seed, cfg.workers);
    row("spiky", "d=1001", "k_1", std::to_string(run.k));
    row("spiky", "d=1001", "sample_complexity_eps_0.15", opt(run.complexity));
    emit(report, dir, "spiky_curve.csv", curve_csv(run.curve));
    summary["spiky"] = {{"k_1", run.k}, {"sample_complexity", run.complexity ? json(*run.complexity) : json(nullptr)}};
  }
  if (over_budget()) return finish(false);

  // (b) Rademacher coordinates with label X[1]
  std::optional<std::size_t> complexity20;
  std::optional<std::size_t> complexity40;
  for (std::size_t d : {20, 40}) {
    const auto run = experiments::bernoulli_run(d, cfg.seed, cfg.workers);
    const std::string param = "d=" + std::to_string(d);
    row("bernoulli", param, "k_1", std::to_string(run.k));
    row("bernoulli", param, "sample_complexity_eps_0.15", opt(run.complexity));
    emit(report, dir, "bernoulli_d" + std::to_string(d) + "_curve.csv", curve_csv(run.curve));
    (d == 20 ? complexity20 : complexity40) = run.complexity;
    summary["bernoulli_d" + std::to_string(d)] = {
        {"k_1", run.k}, {"sample_complexity", run.complexity ? json(*run.complexity) : json(nullptr)}};
    if (over_budget()) return finish(false);
  }
  if (complexity20 && complexity40) {
    const double ratio = static_cast<double>(*complexity40) / static_cast<double>(*complexity20);
    row("bernoulli", "d=40/d=20", "complexity_ratio", format_double(ratio));
    summary["bernoulli_ratio"] = ratio;
    summary["bernoulli_ratio_in_range"] = ratio >= 1.5 && ratio <= 2.5;
  }

  // (c) Gaussian mixture, discriminative vs generative
  std::optional<std::size_t> generative4;
  std::optional<std::size_t> generative8;
  for (double v : {4.0, 8.0}) {
    const auto run = experiments::mixture_run(256, v, cfg.seed, cfg.workers);
    const std::string param = "d=256 v=" + format_double(v);
    const std::string tag = "mixture_v" + format_double(v);
    row("gaussian_mixture", param, "k_v/2", std::to_string(run.k));
    row("gaussian_mixture", param, "discriminative_m_at_error_0.05", opt(run.discriminative_reach));
    row("gaussian_mixture", param, "generative_m_at_error_0.05", opt(run.generative_reach));
    emit(report, dir, tag + "_discriminative_curve.csv", curve_csv(run.discriminative));
    emit(report, dir, tag + "_generative_curve.csv", curve_csv(run.generative));
    (v == 4.0 ? generative4 : generative8) = run.generative_reach;
    summary[tag] = {{"k", run.k},
                    {"discriminative_reach", run.discriminative_reach ? json(*run.discriminative_reach) : json(nullptr)},
                    {"generative_reach", run.generative_reach ? json(*run.generative_reach) : json(nullptr)}};
    if (over_budget()) return finish(false);
  }
  if (generative4 && generative8) summary["generative_faster_at_v8"] = *generative8 < *generative4;
  finish(true);
}

void run_command(const ExperimentConfig& cfg, const fs::path& dir, ExperimentReport& report) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KGammaParams>) {
          const CovarianceSpectrum spectrum =
              p.spectrum_file ? io::read_spectrum_csv(fs::path(*p.spectrum_file)) : CovarianceSpectrum(*p.spectrum);
          const auto res = spectral::k_gamma(spectrum, p.gamma);
          std::ostringstream csv;
          csv << "gamma,k,tail_sum\n" << format_double(res.gamma) << ',' << res.k << ',' << format_double(res.tail_sum) << '\n';
          emit(report, dir, "kgamma.csv", csv.str());
          report.summary = io::to_json(res);
          report.summary["dimension"] = spectrum.dimension();
          report.summary["trace"] = spectrum.trace();
          if (p.alpha) {
            const auto g = spectral::check_growth_bound(spectrum, p.gamma, *p.alpha);
            report.summary["growth"] = {{"alpha", *p.alpha}, {"k_gamma", g.k_gamma}, {"k_alpha_gamma", g.k_alpha_gamma},
                                        {"holds", g.holds}};
          }
        } else if constexpr (std::is_same_v<T, LimitCertParams>) {
          const auto points = io::read_points_csv(fs::path(p.points_file));
          const auto cert = spectral::set_limit_certificate(points, p.k);
          emit(report, dir, "limit_certificate.json", io::to_json(cert).dump(2) + "\n");
          report.summary = {{"b", cert.b}, {"k", cert.k}, {"covers_all_points", spectral::certificate_covers(cert, points)}};
        } else if constexpr (std::is_same_v<T, ShatterCheckParams>) {
          const auto points = io::read_points_csv(fs::path(p.points_file));
          shatter::ShatterOptions opts;
          opts.cap = p.cap;
          opts.workers = cfg.workers;
          auto cert = shatter::shatter_at_origin(points, p.gamma, opts);
          if (p.witnesses && cert.shattered) shatter::attach_witnesses(cert, points);
          emit(report, dir, "certificate.json", io::to_json(cert).dump(2) + "\n");
          report.summary = {{"shattered", cert.shattered},
                            {"worst_value", std::isfinite(cert.worst_value) ? json(cert.worst_value) : json(nullptr)},
                            {"lambda_min_sufficient", shatter::lambda_min_sufficient(points, p.gamma)}};
        } else if constexpr (std::is_same_v<T, FatDimParams>) {
          const auto points = io::read_points_csv(fs::path(p.points_file));
          shatter::ShatterOptions opts;
          opts.workers = cfg.workers;
          const auto est = shatter::fat_shattering_search(points, p.gamma, p.max_subset, opts);
          emit(report, dir, "fat_dim.json", io::to_json(est).dump(2) + "\n");
          report.summary = io::to_json(est);
        } else if constexpr (std::is_same_v<T, EigenProbParams>) {
          const auto spec = build_distribution(p.distribution.value);
          std::vector<randmat::EigenProbEstimate> estimates;
          for (std::size_t m : p.m_grid) {
            estimates.push_back(randmat::estimate_shatter_prob(spec, p.gamma, m, p.trials, cfg.seed, cfg.workers));
          }
          std::ostringstream csv;
          randmat::write_probability_csv(csv, estimates);
          emit(report, dir, "eigen_prob.csv", csv.str());
          report.summary = {{"points", estimates.size()}};
        } else if constexpr (std::is_same_v<T, MUnderlineParams>) {
          const auto spec = build_distribution(p.distribution.value);
          const auto res = randmat::m_underline(spec, p.gamma, p.m_max, p.trials, cfg.seed, cfg.workers);
          std::ostringstream csv;
          randmat::write_probability_csv(csv, res.estimates);
          emit(report, dir, "m_underline.csv", csv.str());
          const auto k = spectral::k_gamma(spec.spectrum(), p.gamma).k;
          report.summary = {{"m_underline", res.m_underline}, {"first_failing_m", res.first_failing_m}, {"k_gamma", k}};
        } else if constexpr (std::is_same_v<T, EdgeCheckParams>) {
          const auto spec = build_distribution(p.distribution.value);
          const auto res = randmat::edge_mc_compare(spec, p.beta, p.trials, cfg.seed, cfg.workers);
          std::ostringstream csv;
          csv << "m,d,beta,trials,seed,empirical_mean,predicted,rel_error\n"
              << res.m << ',' << res.d << ',' << format_double(p.beta) << ',' << res.trials << ',' << cfg.seed << ','
              << format_double(res.empirical_mean) << ',' << format_double(res.predicted) << ','
              << format_double(res.rel_error) << '\n';
          emit(report, dir, "edge_check.csv", csv.str());
          report.summary = {{"empirical_mean", res.empirical_mean}, {"predicted", res.predicted},
                            {"rel_error", res.rel_error}, {"m", res.m}, {"d", res.d}};
        } else if constexpr (std::is_same_v<T, LearnCurveParams>) {
          const auto curve = run_curve(p, cfg.seed, cfg.workers);
          emit(report, dir, "learning_curve.csv", curve_csv(curve));
          report.summary = curve_summary(curve);
        } else if constexpr (std::is_same_v<T, SampleComplexityParams>) {
          const auto curve = run_curve(p.curve, cfg.seed, cfg.workers);
          emit(report, dir, "learning_curve.csv", curve_csv(curve));
          const auto m = learner::empirical_sample_complexity(curve, p.epsilon);
          std::ostringstream csv;
          csv << "epsilon,reference_loss,sample_complexity\n"
              << format_double(p.epsilon) << ',' << format_double(*curve.reference_loss) << ','
              << (m ? std::to_string(*m) : std::string("not_reached")) << '\n';
          emit(report, dir, "sample_complexity.csv", csv.str());
          report.summary = curve_summary(curve);
          report.summary["epsilon"] = p.epsilon;
          report.summary["sample_complexity"] = m ? json(*m) : json("not_reached");
        } else if constexpr (std::is_same_v<T, ReproduceParams>) {
          run_reproduce(cfg, p, dir, report);
        }
      },
      cfg.params);
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"kgamma",     "limit-cert",  "shatter-check",     "fat-dim",
                                              "eigen-prob", "m-underline", "edge-check",        "learn-curve",
                                              "sample-complexity",         "reproduce-examples"};
  return names;
}

ExperimentConfig parse_config(const std::string& command, const json& j) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  Fields f(j, command + " config");
  ExperimentConfig cfg;
  cfg.command = command;
  if (f.has("command") && f.text("command") != command) {
    throw ConfigError("config is for command '" + j.at("command").get<std::string>() + "', not '" + command + "'");
  }
  if (command != "reproduce-examples" || f.has("schema_version")) {
    const std::size_t version = f.count("schema_version");
    if (version != static_cast<std::size_t>(kSchemaVersion)) {
      throw ConfigError("unsupported schema_version " + std::to_string(version) + " (expected " +
                        std::to_string(kSchemaVersion) + ")");
    }
  }
  if (f.has("seed")) cfg.seed = f.count("seed");
  if (f.has("workers")) cfg.workers = static_cast<unsigned>(f.count("workers", 1));
  if (f.has("out")) cfg.out = f.text("out");

  if (command == "kgamma") {
    KGammaParams p;
    if (f.has("spectrum_file")) p.spectrum_file = existing_file(f, "spectrum_file");
    if (f.has("spectrum")) {
      const json& arr = f.raw("spectrum");
      if (!arr.is_array()) throw ConfigError("spectrum must be an array");
      std::vector<double> values;
      for (const auto& v : arr) {
        if (!v.is_number()) throw ConfigError("spectrum must contain numbers");
        values.push_back(v.get<double>());
      }
      try {
        CovarianceSpectrum{values};
      } catch (const ValidationError& e) {
        throw ConfigError(e.what());
      }
      p.spectrum = values;
    }
    if (p.spectrum_file.has_value() == p.spectrum.has_value()) {
      throw ConfigError("kgamma needs exactly one of 'spectrum_file' or 'spectrum'");
    }
    p.gamma = f.positive("gamma");
    if (f.has("alpha")) {
      p.alpha = f.number("alpha");
      if (!(*p.alpha > 0.0 && *p.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    }
    cfg.params = p;
  } else if (command == "limit-cert") {
    LimitCertParams p;
    p.points_file = existing_file(f, "points_file");
    p.k = f.count("k");
    cfg.params = p;
  } else if (command == "shatter-check") {
    ShatterCheckParams p;
    p.points_file = existing_file(f, "points_file");
    p.gamma = f.positive("gamma");
    if (f.has("cap")) p.cap = f.count("cap", 1);
    if (f.has("witnesses")) p.witnesses = f.flag("witnesses");
    cfg.params = p;
  } else if (command == "fat-dim") {
    FatDimParams p;
    p.points_file = existing_file(f, "points_file");
    p.gamma = f.positive("gamma");
    p.max_subset = f.count("max_subset", 1);
    cfg.params = p;
  } else if (command == "eigen-prob") {
    EigenProbParams p;
    p.distribution = distribution_field(f);
    p.gamma = f.positive("gamma");
    p.m_grid = f.counts("m_grid");
    if (f.has("trials")) p.trials = f.count("trials", 1);
    cfg.params = p;
  } else if (command == "m-underline") {
    MUnderlineParams p;
    p.distribution = distribution_field(f);
    p.gamma = f.positive("gamma");
    p.m_max = f.count("m_max", 1);
    if (f.has("trials")) p.trials = f.count("trials", 1);
    cfg.params = p;
  } else if (command == "edge-check") {
    EdgeCheckParams p;
    p.distribution = distribution_field(f);
    p.beta = f.number("beta");
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
    if (f.has("trials")) p.trials = f.count("trials", 1);
    cfg.params = p;
  } else if (command == "learn-curve") {
    cfg.params = learn_curve_fields(f);
  } else if (command == "sample-complexity") {
    SampleComplexityParams p;
    p.curve = learn_curve_fields(f);
    p.epsilon = f.number("epsilon");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    cfg.params = p;
  } else {
    ReproduceParams p;
    if (f.has("budget_seconds")) p.budget_seconds = f.positive("budget_seconds");
    cfg.params = p;
  }
  f.finish();
  return cfg;
}

json to_json(const ExperimentConfig& config) {
  json j{{"command", config.command},
         {"schema_version", config.schema_version},
         {"seed", config.seed},
         {"workers", config.workers},
         {"out", config.out}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KGammaParams>) {
          if (p.spectrum_file) j["spectrum_file"] = *p.spectrum_file;
          if (p.spectrum) j["spectrum"] = *p.spectrum;
          j["gamma"] = p.gamma;
          if (p.alpha) j["alpha"] = *p.alpha;
        } else if constexpr (std::is_same_v<T, LimitCertParams>) {
          j["points_file"] = p.points_file;
          j["k"] = p.k;
        } else if constexpr (std::is_same_v<T, ShatterCheckParams>) {
          j["points_file"] = p.points_file;
          j["gamma"] = p.gamma;
          j["cap"] = p.cap;
          j["witnesses"] = p.witnesses;
        } else if constexpr (std::is_same_v<T, FatDimParams>) {
          j["points_file"] = p.points_file;
          j["gamma"] = p.gamma;
          j["max_subset"] = p.max_subset;
        } else if constexpr (std::is_same_v<T, EigenProbParams>) {
          j["distribution"] = p.distribution.value;
          j["gamma"] = p.gamma;
          j["m_grid"] = p.m_grid;
          j["trials"] = p.trials;
        } else if constexpr (std::is_same_v<T, MUnderlineParams>) {
          j["distribution"] = p.distribution.value;
          j["gamma"] = p.gamma;
          j["m_max"] = p.m_max;
          j["trials"] = p.trials;
        } else if constexpr (std::is_same_v<T, EdgeCheckParams>) {
          j["distribution"] = p.distribution.value;
          j["beta"] = p.beta;
          j["trials"] = p.trials;
        } else if constexpr (std::is_same_v<T, LearnCurveParams>) {
          j.update(learn_curve_json(p));
        } else if constexpr (std::is_same_v<T, SampleComplexityParams>) {
          j.update(learn_curve_json(p.curve));
          j["epsilon"] = p.epsilon;
        } else if constexpr (std::is_same_v<T, ReproduceParams>) {
          j["budget_seconds"] = p.budget_seconds;
        }
      },
      config.params);
  return j;
}

json to_json(const ExperimentReport& report) {
  return json{{"command", report.command},
              {"inputs_digest", report.inputs_digest},
              {"outputs", report.outputs},
              {"summary", report.summary},
              {"wall_clock_seconds", report.wall_clock_seconds},
              {"version", report.version},
              {"seed", report.seed},
              {"complete", report.complete}};
}

ExperimentReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.command = config.command;
  report.seed = config.seed;
  json inputs = to_json(config);
  inputs.erase("out");
  inputs.erase("workers");
  report.inputs_digest = io::digest(inputs.dump());

  const fs::path dir(config.out);
  fs::create_directories(dir);
  run_command(config, dir, report);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.outputs.push_back((dir / "report.json").string());
  std::ofstream out(dir / "report.json");
  if (!out) throw Error("cannot write report.json");
  out << to_json(report).dump(2) << '\n';
  return report;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Adapted-dimension, fat-shattering and sample-complexity experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--workers", workers, "worker threads");
    sub->add_option("--out", out_dir, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config " + config_path);
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
      }
    } else if (command != "reproduce-examples") {
      throw ConfigError("--config is required for " + command);
    }
    config = parse_config(command, j);
    if (seed) config.seed = *seed;
    if (workers) {
      if (*workers < 1) throw ConfigError("--workers must be >= 1");
      config.workers = *workers;
    }
    if (out_dir) config.out = *out_dir;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto report = run(config);
    std::cout << to_json(report).dump(2) << '\n';
    return report.complete ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace adaptdim::cli
