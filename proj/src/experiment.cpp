#include "bilin/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "bilin/embedding.hpp"
#include "bilin/freiman.hpp"
#include "bilin/operators.hpp"
#include "bilin/parallel.hpp"
#include "bilin/phase.hpp"
#include "bilin/random.hpp"
#include "bilin/recovery.hpp"
#include "bilin/rnmp.hpp"

namespace bilin::experiment {

using nlohmann::json;

namespace {

using Member = std::variant<std::size_t ExperimentConfig::*, double ExperimentConfig::*,
                            std::string ExperimentConfig::*>;

const std::vector<std::pair<std::string, Member>>& schema() {
  static const std::vector<std::pair<std::string, Member>> fields = {
      {"n", &ExperimentConfig::n},
      {"n1", &ExperimentConfig::n1},
      {"n2", &ExperimentConfig::n2},
      {"m", &ExperimentConfig::m},
      {"s", &ExperimentConfig::s},
      {"f", &ExperimentConfig::f},
      {"kappa", &ExperimentConfig::kappa},
      {"ensemble", &ExperimentConfig::ensemble},
      {"map", &ExperimentConfig::map},
      {"set_kind", &ExperimentConfig::set_kind},
      {"problem", &ExperimentConfig::problem},
      {"variant", &ExperimentConfig::variant},
      {"set", &ExperimentConfig::set},
      {"delta", &ExperimentConfig::delta},
      {"eps", &ExperimentConfig::eps},
      {"tolerance", &ExperimentConfig::tolerance},
      {"c", &ExperimentConfig::c},
      {"c2", &ExperimentConfig::c2},
      {"lambda", &ExperimentConfig::lambda},
      {"rho", &ExperimentConfig::rho},
      {"trials", &ExperimentConfig::trials},
      {"runs", &ExperimentConfig::runs},
      {"search_trials", &ExperimentConfig::search_trials},
      {"det_budget", &ExperimentConfig::det_budget},
      {"search_budget", &ExperimentConfig::search_budget},
      {"m_min", &ExperimentConfig::m_min},
      {"m_max", &ExperimentConfig::m_max},
      {"m_steps", &ExperimentConfig::m_steps},
      {"max_iterations", &ExperimentConfig::max_iterations},
      {"seed", &ExperimentConfig::seed},
      {"out", &ExperimentConfig::out},
  };
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' is out of range");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a finite real number, got '" + v + "'");
  }
  return out;
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return Rng(seed).split(stream).next_u64(); }

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }
  if (v.is_null()) return "nan";
  return v.dump();
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table: row width");
    rows.push_back(std::move(row));
  }

  json to_json() const {
    json out = json::array();
    for (const auto& r : rows) {
      json o;
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
      out.push_back(o);
    }
    return out;
  }

  std::string csv(const json& config) const {
    std::string out = std::string("# bilin ") + kVersion + "\n# config " + config.dump() + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
      out += '\n';
    }
    return out;
  }
};

RunResult finish(const ExperimentConfig& cfg, const Table& table, json summary, int status = 0) {
  RunResult res;
  res.status = status;
  const std::string name = to_string(cfg.command);
  json report;
  report["version"] = kVersion;
  report["command"] = name;
  report["config"] = cfg.to_json();
  report["summary"] = summary;
  report["rows"] = table.to_json();
  res.summary = report;
  res.files.push_back({name + ".json", report.dump(2) + "\n"});
  if (cfg.format == Format::csv) res.files.push_back({name + ".csv", table.csv(cfg.to_json())});
  return res;
}

json certificate_json(const rnmp::Certificate& c) {
  return {{"quantity", c.quantity}, {"method", c.method}, {"value", c.value},
          {"seed", c.seed},         {"heuristic", c.heuristic}, {"detail", c.detail}};
}

RunResult run_rnmp_bound(const ExperimentConfig& cfg) {
  rnmp::SearchOptions opts;
  opts.trials = cfg.search_trials;
  opts.threads = cfg.threads;
  const auto b = rnmp::compute_bounds(cfg.s, cfg.f, cfg.n, cfg.seed, opts, cfg.det_budget);
  Table t{{"s", "f", "n", "n_effective", "alpha_lower", "alpha_empirical", "beta", "heuristic"}, {}};
  bool heuristic = false;
  json certs = json::array();
  for (const auto& c : b.certificates) {
    heuristic = heuristic || c.heuristic;
    certs.push_back(certificate_json(c));
  }
  t.add({b.s, b.f, b.n, b.n_effective, b.alpha_lower, b.alpha_empirical, b.beta, heuristic});
  json summary{{"alpha_lower", b.alpha_lower}, {"alpha_empirical", b.alpha_empirical}, {"beta", b.beta},
               {"certificates", certs}};
  return finish(cfg, t, summary);
}

operators::BilinearMap build_map(const ExperimentConfig& cfg, embedding::SetKind kind) {
  if (kind == embedding::SetKind::sparse_vectors) return operators::identity_lift(cfg.rows(), 1);
  if (cfg.map == "convolution") return operators::zero_padded_convolution_map(cfg.n);
  if (cfg.map == "circular") return operators::circular_convolution_map(cfg.n);
  return operators::identity_lift(cfg.rows(), cfg.cols());
}

operators::LinearOperator build_phi(const ExperimentConfig& cfg, std::size_t m, std::size_t n_out, std::uint64_t seed) {
  if (cfg.ensemble == "identity") return operators::identity_operator(n_out);
  if (cfg.ensemble == "gaussian") return operators::gaussian_operator(m, n_out, derive(seed, 0));
  const operators::RowSelection omega = derive(seed, 2);
  if (cfg.ensemble == "circulant") return operators::partial_circulant_demodulator(m, n_out, derive(seed, 0), omega);
  return operators::universal_random_demodulator(m, n_out, derive(seed, 0), derive(seed, 1), omega);
}

RunResult run_embed_verify(const ExperimentConfig& cfg) {
  const auto kind = embedding::set_kind_from_string(cfg.set_kind);
  const auto b = build_map(cfg, kind);
  embedding::StructuredSetSpec spec;
  spec.kind = kind;
  spec.n1 = b.n1();
  spec.n2 = b.n2();
  spec.s = cfg.s;
  spec.f = cfg.f;
  spec.kappa = cfg.kappa;
  const std::size_t n_out = b.n_out();
  std::size_t m = cfg.m ? cfg.m : embedding::sample_complexity_bilinear(cfg.s, cfg.f, cfg.kappa, cfg.n, cfg.delta, cfg.c2);
  if (cfg.ensemble == "identity") m = n_out;
  if ((cfg.ensemble == "circulant" || cfg.ensemble == "demodulator") && m > n_out) m = n_out;

  Table t{{"run", "m", "trials", "skipped", "min_ratio", "max_ratio", "delta_hat", "within_delta"}, {}};
  std::size_t within = 0;
  json first;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const auto phi = build_phi(cfg, m, n_out, derive(cfg.seed, 2 * r));
    const auto rep = embedding::verify_embedding(phi, b, spec, cfg.trials, derive(cfg.seed, 2 * r + 1), cfg.threads);
    const bool ok = rep.delta_hat <= cfg.delta;
    within += ok;
    t.add({r, m, rep.trials, rep.skipped, rep.min_ratio, rep.max_ratio, rep.delta_hat, ok});
    if (r == 0) first = rep.summary_json();
  }
  const double eps_hat = embedding::epsilon_hat(cfg.delta, 1.0, 1.0, 1.0);
  const double entropy = embedding::entropy_sparse_lowrank(cfg.s, cfg.f, cfg.kappa, cfg.n, eps_hat);
  json bounds{{"sample_complexity", embedding::sample_complexity_bilinear(cfg.s, cfg.f, cfg.kappa, cfg.n, cfg.delta, cfg.c2)},
              {"epsilon_hat", eps_hat},
              {"entropy", entropy},
              {"jl_sparsity", embedding::jl_sparsity_requirement(cfg.rho, entropy)},
              {"demodulator_measurements",
               embedding::demodulator_measurement_bound(cfg.lambda, embedding::demodulator_entropy_term(entropy), cfg.n,
                                                        cfg.delta, cfg.c)}};
  json summary{{"m", m},         {"n_out", n_out},           {"runs", cfg.runs},
               {"runs_within_delta", within}, {"first_run", first}, {"bounds", bounds}};
  return finish(cfg, t, summary);
}

std::vector<std::size_t> sweep_points(const ExperimentConfig& cfg, std::size_t dim, std::size_t sparsity) {
  const std::size_t lo = cfg.m_min ? cfg.m_min : std::min(dim, sparsity + 1);
  const std::size_t hi = cfg.m_max ? cfg.m_max : std::max(lo, dim / 2);
  if (lo > hi) throw ConfigError("config: m_min exceeds m_max");
  if (hi > dim) throw ConfigError("config: m_max exceeds the unknown's dimension");
  std::vector<std::size_t> pts;
  const std::size_t steps = std::max<std::size_t>(1, cfg.m_steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double frac = steps == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    pts.push_back(lo + static_cast<std::size_t>(std::llround(frac * static_cast<double>(hi - lo))));
  }
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

CVector planted_sparse(Rng& rng, std::size_t n, std::size_t s) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i : rng.sample_without_replacement(n, s)) v[static_cast<Eigen::Index>(i)] = rng.complex_normal();
  return v;
}

RunResult run_recover_sweep(const ExperimentConfig& cfg) {
  const bool rank_one = cfg.problem == "rank_one";
  const std::size_t dim = rank_one ? cfg.rows() * cfg.cols() : cfg.n;
  const std::size_t sparsity = rank_one ? cfg.s * cfg.f : cfg.s;
  const auto ms = sweep_points(cfg, dim, sparsity);
  const std::size_t m_top = ms.back();

  struct Outcome {
    double error = 0.0;
    bool converged = true;
  };
  std::vector<std::vector<Outcome>> out(cfg.trials, std::vector<Outcome>(ms.size()));
  recovery::SolverOptions opts;
  opts.max_iterations = cfg.max_iterations;
  opts.record_trace = false;
  const Rng base(cfg.seed);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    Rng rng = base.split(trial);
    const CMatrix full = operators::gaussian_operator(m_top, dim, rng.next_u64()).materialize();
    CVector x, y, u;
    if (rank_one) {
      x = planted_sparse(rng, cfg.rows(), cfg.s);
      y = planted_sparse(rng, cfg.cols(), cfg.f);
      u = operators::rank_one_pack(x, y);
    } else {
      u = planted_sparse(rng, dim, cfg.s);
    }
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::size_t m = ms[k];
      const CMatrix a = full.topRows(static_cast<Eigen::Index>(m)) * std::sqrt(static_cast<double>(m_top) / m);
      const CVector b = a * u;
      const auto res = recovery::bpdn_synthesis(operators::dense_operator(a), b, cfg.eps, opts);
      double err;
      if (rank_one) {
        const CMatrix truth = operators::unvec(u, cfg.rows(), cfg.cols());
        const CMatrix est = operators::unvec(res.solution, cfg.rows(), cfg.cols());
        if (est.norm() == 0.0) {
          err = 1.0;
        } else {
          const auto fac = recovery::rank_one_factor(est);
          err = (fac.x * fac.y.transpose() - truth).norm() / truth.norm();
        }
      } else {
        err = (res.solution - u).norm() / u.norm();
      }
      out[trial][k] = {err, res.converged};
    }
  });

  Table t{{"m", "trials", "successes", "success_rate", "mean_rel_error", "max_rel_error", "nonconverged", "flagged"}, {}};
  bool monotone = true;
  double prev = -1.0;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    std::size_t ok = 0, bad = 0;
    double sum = 0.0, worst = 0.0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const auto& o = out[trial][k];
      ok += o.error <= cfg.tolerance;
      bad += !o.converged;
      sum += o.error;
      worst = std::max(worst, o.error);
    }
    const double rate = static_cast<double>(ok) / static_cast<double>(cfg.trials);
    monotone = monotone && rate >= prev;
    prev = rate;
    t.add({ms[k], cfg.trials, ok, rate, sum / static_cast<double>(cfg.trials), worst, bad, bad > 0});
  }
  json summary{{"dimension", dim}, {"sparsity", sparsity}, {"success_rate_monotone", monotone}};
  return finish(cfg, t, summary);
}

RunResult run_phase_stability(const ExperimentConfig& cfg) {
  const auto v = phase::variant_from_string(cfg.variant);
  const auto est = phase::stability_constant_estimate(cfg.n, cfg.trials, cfg.seed, v, cfg.threads);
  const std::size_t dim = v == phase::Variant::plain ? 2 * cfg.n - 1 : v == phase::Variant::padded ? 4 * cfg.n - 3 : 4 * cfg.n - 1;
  Table t{{"n", "variant", "dimension", "c_hat", "c_hat_scaled", "trials", "excluded", "positive"}, {}};
  t.add({cfg.n, phase::to_string(v), dim, est.c_hat, est.c_hat * std::sqrt(static_cast<double>(dim)), est.trials,
         est.excluded, est.positive});
  return finish(cfg, t, est.worst_pair_json());
}

freiman::IndexSet parse_set(const std::string& text) {
  std::vector<freiman::Index> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string tok = trim(item);
    std::size_t used = 0;
    long long val = 0;
    try {
      val = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) throw ConfigError("config: 'set' expects comma-separated integers");
    v.push_back(val);
  }
  if (v.empty()) throw ConfigError("config: 'set' is empty");
  try {
    return freiman::IndexSet(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: 'set': ") + e.what());
  }
}

RunResult run_freiman_search(const ExperimentConfig& cfg) {
  const auto a = parse_set(cfg.set);
  const auto res = freiman::min_diameter_isomorphic_image(a, cfg.search_budget, cfg.threads);
  const std::size_t m = a.size();
  const double bound = freiman::grynkiewicz_bound(m, m >= 2 ? m - 2 : 0);

  freiman::RemapResult shifted = res;
  for (auto& v : shifted.source) v -= a[0];
  const auto len = static_cast<Eigen::Index>(a.diameter() + 1);
  double worst = 0.0;
  const Rng base(cfg.seed);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = base.split(trial);
    CVector x = CVector::Zero(len), y = CVector::Zero(len);
    for (auto v : shifted.source) {
      x[static_cast<Eigen::Index>(v)] = rng.complex_normal();
      y[static_cast<Eigen::Index>(v)] = rng.complex_normal();
    }
    worst = std::max(worst, freiman::remapped_convolution_norm_check(x, y, shifted) / (x.norm() * y.norm()));
  }
  Table t{{"m", "source_diameter", "diameter", "grynkiewicz_bound", "within_bound", "verified", "exhaustive",
           "max_norm_residual"},
          {}};
  t.add({m, a.diameter(), res.diameter, bound, static_cast<double>(res.diameter) <= bound, res.verified_isomorphism,
         res.search_exhaustive, worst});
  return finish(cfg, t, res.to_json());
}

double adjoint_defect(const operators::LinearOperator& op, Rng& rng) {
  const CVector x = rng.complex_normal_vector(op.cols()), y = rng.complex_normal_vector(op.rows());
  const CVector ax = op.apply(x);
  return std::abs(y.dot(ax) - op.adjoint(y).dot(x)) / (ax.norm() * y.norm() + x.norm() * op.adjoint(y).norm());
}

double dense_defect(const operators::LinearOperator& op, Rng& rng) {
  const CVector x = rng.complex_normal_vector(op.cols());
  const CVector fast = op.apply(x);
  return (fast - op.materialize() * x).norm() / fast.norm();
}

RunResult run_demod_selftest(const ExperimentConfig& cfg) {
  const std::size_t n = cfg.n;
  const std::size_t m = cfg.m ? cfg.m : std::max<std::size_t>(1, n / 2);
  if (m > n) throw ConfigError("config: demod-selftest needs m <= n");
  const operators::RowSelection omega = derive(cfg.seed, 2);
  const auto gauss = operators::gaussian_operator(m, n, derive(cfg.seed, 0));
  const auto circ = operators::partial_circulant_demodulator(m, n, derive(cfg.seed, 0), omega);
  const auto demod = operators::universal_random_demodulator(m, n, derive(cfg.seed, 0), derive(cfg.seed, 1), omega);
  const auto signs = operators::sign_diagonal(n, derive(cfg.seed, 1));
  const auto dft = operators::dft_operator(n);
  const auto wh = operators::weyl_heisenberg(1, 2, n);
  const auto lift = operators::zero_padded_convolution_map(n).lifted_operator();

  Rng rng = Rng(cfg.seed).split(3);
  const double tol = 1e-10;
  Table t{{"check", "value", "tolerance", "pass"}, {}};
  bool all = true;
  auto check = [&](const std::string& name, double value) {
    const bool ok = value <= tol;
    all = all && ok;
    t.add({name, value, tol, ok});
  };
  check("adjoint_gaussian", adjoint_defect(gauss, rng));
  check("adjoint_circulant", adjoint_defect(circ, rng));
  check("adjoint_demodulator", adjoint_defect(demod, rng));
  check("adjoint_sign_diagonal", adjoint_defect(signs, rng));
  check("adjoint_dft", adjoint_defect(dft, rng));
  check("adjoint_weyl_heisenberg", adjoint_defect(wh, rng));
  check("adjoint_convolution_lift", adjoint_defect(lift, rng));
  check("fft_vs_dense_circulant", dense_defect(circ, rng));
  check("fft_vs_dense_demodulator", dense_defect(demod, rng));
  {
    const CMatrix f = dft.materialize();
    check("dft_unitarity", (f.adjoint() * f - CMatrix::Identity(f.rows(), f.cols())).cwiseAbs().maxCoeff());
    const CMatrix w = wh.materialize();
    check("weyl_heisenberg_unitarity", (w.adjoint() * w - CMatrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff());
  }
  {
    const CVector x = rng.complex_normal_vector(n);
    check("sign_diagonal_involution", (signs.apply(signs.apply(x)) - x).norm() / x.norm());
    const auto rebuilt = operators::make_operator(demod.descriptor());
    check("descriptor_rebuild_demodulator", (rebuilt.apply(x) - demod.apply(x)).norm() / demod.apply(x).norm());
  }
  json summary{{"m", m}, {"n", n}, {"all_passed", all}, {"operator", embedding::descriptor_json(demod.descriptor())}};
  return finish(cfg, t, summary, all ? 0 : 1);
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::rnmp_bound: return "rnmp-bound";
    case Command::embed_verify: return "embed-verify";
    case Command::recover_sweep: return "recover-sweep";
    case Command::phase_stability: return "phase-stability";
    case Command::freiman_search: return "freiman-search";
    case Command::demod_selftest: return "demod-selftest";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  for (auto c : {Command::rnmp_bound, Command::embed_verify, Command::recover_sweep, Command::phase_stability,
                 Command::freiman_search, Command::demod_selftest})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format format_from_string(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

void ExperimentConfig::assign(const std::string& key, const std::string& value) {
  if (key == "command") {
    command = command_from_string(value);
    has_command = true;
    return;
  }
  if (key == "format") {
    format = format_from_string(value);
    return;
  }
  if (key == "threads") {
    const auto t = parse_unsigned(key, value);
    if (t == 0 || t > 1024) throw ConfigError("config: 'threads' must be in [1, 1024]");
    threads = static_cast<unsigned>(t);
    return;
  }
  for (const auto& [name, member] : schema()) {
    if (name != key) continue;
    std::visit(
        [&](auto ptr) {
          using T = std::decay_t<decltype(this->*ptr)>;
          if constexpr (std::is_same_v<T, std::string>) {
            this->*ptr = value;
          } else if constexpr (std::is_same_v<T, double>) {
            this->*ptr = parse_real(key, value);
          } else {
            this->*ptr = static_cast<T>(parse_unsigned(key, value));
          }
        },
        member);
    return;
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  need(has_command, "'command' is required");
  need(n >= 1, "'n' must be positive");
  need(s >= 1 && f >= 1 && kappa >= 1, "'s', 'f' and 'kappa' must be positive");
  need(trials >= 1 && runs >= 1, "'trials' and 'runs' must be positive");
  need(delta > 0.0 && delta < 1.0, "'delta' must lie in (0, 1)");
  need(eps >= 0.0 && tolerance > 0.0, "'eps' must be nonnegative and 'tolerance' positive");
  need(c > 0.0 && c2 > 0.0 && lambda > 0.0 && rho > 0.0, "constants must be positive");
  need(max_iterations >= 1 && search_trials >= 1 && det_budget >= 1 && search_budget >= 1, "budgets must be positive");
  switch (command) {
    case Command::rnmp_bound:
      need(s <= n && f <= n, "'s' and 'f' must not exceed 'n'");
      break;
    case Command::embed_verify: {
      try {
        embedding::set_kind_from_string(set_kind);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      need(ensemble == "gaussian" || ensemble == "circulant" || ensemble == "demodulator" || ensemble == "identity",
           "'ensemble' must be gaussian, circulant, demodulator or identity");
      need(map == "convolution" || map == "circular" || map == "identity", "'map' must be convolution, circular or identity");
      if (map != "identity") need(rows() == n && cols() == n, "convolution maps need n1 = n2 = n");
      break;
    }
    case Command::recover_sweep:
      need(problem == "sparse" || problem == "rank_one", "'problem' must be sparse or rank_one");
      need(problem == "sparse" ? s <= n : (s <= rows() && f <= cols()), "sparsity exceeds the dimension");
      break;
    case Command::phase_stability:
      try {
        phase::variant_from_string(variant);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      break;
    case Command::freiman_search:
      parse_set(set);
      break;
    case Command::demod_selftest:
      break;
  }
}

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = to_string(command);
  for (const auto& [name, member] : schema()) {
    if (name == "out") continue;
    std::visit([&](auto ptr) { j[name] = this->*ptr; }, member);
  }
  j["format"] = to_string(format);
  return j;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (seen.count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
    }
    seen[key] = lineno;
    try {
      cfg.assign(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  return parse_config(in);
}

RunResult run(const ExperimentConfig& config) {
  config.validate();
  try {
    switch (config.command) {
      case Command::rnmp_bound: return run_rnmp_bound(config);
      case Command::embed_verify: return run_embed_verify(config);
      case Command::recover_sweep: return run_recover_sweep(config);
      case Command::phase_stability: return run_phase_stability(config);
      case Command::freiman_search: return run_freiman_search(config);
      case Command::demod_selftest: return run_demod_selftest(config);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown command");
}

void write_reports(const RunResult& result, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory '" + directory + "': " + ec.message());
  for (const auto& f : result.files) {
    const auto path = std::filesystem::path(directory) / f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << f.content;
    if (!out.flush()) throw IoError("write failed for '" + path.string() + "'");
  }
}

}  // namespace bilin::experiment
