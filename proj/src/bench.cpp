#include "maxstab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "maxstab/csv.hpp"
#include "maxstab/errors.hpp"
#include "maxstab/special.hpp"

namespace maxstab {

namespace {

// stream-family tags; one disjoint family per (phase, algorithm)
constexpr std::uint64_t kTagVPool = 0x56504F4F4CULL;
constexpr std::uint64_t kTagZPool = 0x5A504F4F4CULL;
constexpr std::uint64_t kTagAnchorCal = 0xA5CA10ULL;
constexpr std::uint64_t kTagETCal = 0xE7CA10ULL;
constexpr std::uint64_t kTagBoot = 0xB007ULL;

const std::set<std::string>& known_algorithms() {
  static const std::set<std::string> names = {
      "original",     "k_stationary",   "lambda_modified",    "optimized",
      "random_shift", "dieker_mikosch", "extremal_functions"};
  return names;
}

ErrorEstimate estimate_from_inner(const std::vector<double>& inner, int bootstrap,
                                  std::uint64_t bootstrap_seed) {
  const std::size_t n = inner.size();
  double acc = 0.0;
  for (double x : inner) acc += std::exp(-x);
  ErrorEstimate out{1.0 - acc / static_cast<double>(n), 0.0};
  if (bootstrap > 0 && n > 1) {
    RngStream rng(bootstrap_seed, 0);
    double bsum = 0.0, bsq = 0.0;
    for (int b = 0; b < bootstrap; ++b) {
      double racc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto pick = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * n));
        racc += std::exp(-inner[pick]);
      }
      const double p = 1.0 - racc / static_cast<double>(n);
      bsum += p;
      bsq += p * p;
    }
    const double mean = bsum / bootstrap;
    out.se = std::sqrt(std::max(0.0, bsq / bootstrap - mean * mean));
  }
  return out;
}

std::vector<double> inner_terms_threshold(const Eigen::MatrixXd& z, const Eigen::MatrixXd& v,
                                          double tau) {
  const Eigen::Index n_z = z.rows(), n_v = v.rows(), n = z.cols();
  std::vector<double> inner(static_cast<std::size_t>(n_z));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n_z; ++i) {
    const Eigen::ArrayXd invz = z.row(i).array().inverse();
    const double tau_term = tau * invz.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n_v; ++j) {
      double m = 0.0;
      for (Eigen::Index x = 0; x < n; ++x) m = std::max(m, v(j, x) * invz[x]);
      acc += std::max(0.0, m - tau_term);
    }
    inner[static_cast<std::size_t>(i)] = acc / static_cast<double>(n_v);
  }
  return inner;
}

}  // namespace

ErrorEstimate error_probability_fields(const Eigen::MatrixXd& z, const Eigen::MatrixXd& v,
                                       double tau, int bootstrap,
                                       std::uint64_t bootstrap_seed) {
  if (z.rows() < 1 || v.rows() < 1) throw contract_error("error_probability: empty pool");
  if (z.cols() != v.cols()) throw contract_error("error_probability: grid size mismatch");
  return estimate_from_inner(inner_terms_threshold(z, v, tau), bootstrap, bootstrap_seed);
}

ErrorEstimate error_probability(const std::vector<StoppedField>& stopped,
                                const std::vector<SpectralSample>& pool, double tau,
                                int bootstrap, std::uint64_t bootstrap_seed) {
  if (stopped.empty() || pool.empty()) throw contract_error("error_probability: empty pool");
  const Eigen::Index n = stopped.front().values.size();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(stopped.size()), n);
  for (std::size_t i = 0; i < stopped.size(); ++i)
    z.row(static_cast<Eigen::Index>(i)) = stopped[i].values.transpose();
  Eigen::MatrixXd v(static_cast<Eigen::Index>(pool.size()), n);
  for (std::size_t j = 0; j < pool.size(); ++j)
    v.row(static_cast<Eigen::Index>(j)) = pool[j].values.transpose();
  return error_probability_fields(z, v, tau, bootstrap, bootstrap_seed);
}

ErrorEstimate error_probability_subset(const Eigen::MatrixXd& z, const Eigen::MatrixXd& v,
                                       const std::vector<int>& subset, int bootstrap,
                                       std::uint64_t bootstrap_seed) {
  if (z.rows() < 1 || v.rows() < 1) throw contract_error("error_probability: empty pool");
  if (z.cols() != v.cols()) throw contract_error("error_probability: grid size mismatch");
  if (subset.empty()) throw contract_error("error_probability_subset: empty subset");
  const Eigen::Index n_z = z.rows(), n_v = v.rows(), n = z.cols();
  std::vector<double> inner(static_cast<std::size_t>(n_z));
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n_z; ++i) {
    const Eigen::ArrayXd invz = z.row(i).array().inverse();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n_v; ++j) {
      double m_all = 0.0;
      for (Eigen::Index x = 0; x < n; ++x) m_all = std::max(m_all, v(j, x) * invz[x]);
      double m_sub = 0.0;
      for (int x : subset) m_sub = std::max(m_sub, v(j, x) * invz[x]);
      acc += std::max(0.0, m_all - m_sub);
    }
    inner[static_cast<std::size_t>(i)] = acc / static_cast<double>(n_v);
  }
  return estimate_from_inner(inner, bootstrap, bootstrap_seed);
}

std::vector<PairEstimate> empirical_variogram(const Eigen::MatrixXd& draws, const Grid& grid,
                                              const std::vector<std::pair<int, int>>& pairs) {
  if (draws.rows() < 1000) throw contract_error("empirical_variogram: needs >= 1000 draws");
  if (draws.cols() != grid.size())
    throw contract_error("empirical_variogram: draws do not match the grid");
  const Eigen::Index m = draws.rows();
  std::vector<PairEstimate> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const Eigen::ArrayXd sq = (draws.col(i) - draws.col(j)).array().square();
    const double mean = sq.mean();
    const double var = (sq - mean).square().sum() / static_cast<double>(m - 1);
    out.push_back({i, j, mean, std::sqrt(var / static_cast<double>(m))});
  }
  return out;
}

std::vector<PairEstimate> empirical_variogram(const Eigen::MatrixXd& draws, const Grid& grid) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < grid.size(); ++i)
    for (int j = i + 1; j < grid.size(); ++j) pairs.emplace_back(i, j);
  return empirical_variogram(draws, grid, pairs);
}

KsResult frechet_ks_test(const std::vector<double>& samples) {
  if (samples.size() < 1000) throw contract_error("frechet_ks_test: needs >= 1000 samples");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() <= 0.0)
    throw contract_error("frechet_ks_test: samples must be strictly positive");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::exp(-1.0 / sorted[i]);
    d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  const double sqn = std::sqrt(n);
  return {d, kolmogorov_tail((sqn + 0.12 + 0.11 / sqn) * d)};
}

void Scenario::validate() const {
  if (id.empty()) throw contract_error("Scenario: id must be set");
  if (!(alpha > 0.0 && alpha < 2.0)) throw domain_error("Scenario: alpha must lie in (0,2)");
  if (dim < 1) throw domain_error("Scenario: dim must be >= 1");
  if (static_cast<int>(half_widths.size()) != dim)
    throw contract_error("Scenario: one half-width per axis");
  if (static_cast<int>(counts.size()) != dim)
    throw contract_error("Scenario: one count per axis");
  if (scale.has_value() == sigma2K.has_value())
    throw contract_error("Scenario: exactly one of scale / sigma2_K");
  if (algorithms.empty()) throw contract_error("Scenario: algorithms must be nonempty");
  for (const auto& a : algorithms)
    if (!known_algorithms().count(a))
      throw contract_error("Scenario: unknown algorithm '" + a + "'");
  if (n_Z < 100 || n_V < 100)
    throw contract_error("Scenario: replicate counts must be >= 100");
  if (!(anchor_error > 0.0 && anchor_error < 1.0))
    throw domain_error("Scenario: anchor_error must lie in (0,1)");
  if (target_ET && !(*target_ET >= 1.0))
    throw domain_error("Scenario: target_ET must be >= 1");
  if (n_extremal && *n_extremal < 1)
    throw domain_error("Scenario: n_extremal must be >= 1");
}

double Scenario::resolved_scale() const {
  if (scale) return *scale;
  Eigen::VectorXd hw(dim);
  for (int a = 0; a < dim; ++a) hw[a] = half_widths[static_cast<std::size_t>(a)];
  return scale_for_target_variance_ball(alpha, dim, hw.norm(), *sigma2K);
}

namespace {

Scenario parse_scenario(const nlohmann::json& j) {
  static const std::set<std::string> keys = {
      "id",     "alpha",      "scale",      "sigma2_K",   "dim",       "half_widths",
      "counts", "algorithms", "n_Z",        "n_V",        "seed",      "anchor_tau",
      "target_ET", "anchor_error", "n_extremal"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key()))
      throw contract_error("Scenario config: unknown key '" + it.key() + "'");
  Scenario sc;
  sc.id = j.at("id").get<std::string>();
  sc.alpha = j.at("alpha").get<double>();
  if (j.contains("scale")) sc.scale = j["scale"].get<double>();
  if (j.contains("sigma2_K")) sc.sigma2K = j["sigma2_K"].get<double>();
  sc.dim = j.value("dim", 1);
  sc.half_widths = j.value("half_widths", std::vector<double>(static_cast<std::size_t>(sc.dim), 1.0));
  sc.counts = j.at("counts").get<std::vector<int>>();
  sc.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  sc.n_Z = j.value("n_Z", 5000);
  sc.n_V = j.value("n_V", 2000);
  sc.seed = j.value("seed", std::uint64_t{20180817});
  if (j.contains("anchor_tau")) sc.anchor_tau = j["anchor_tau"].get<double>();
  if (j.contains("target_ET")) sc.target_ET = j["target_ET"].get<double>();
  sc.anchor_error = j.value("anchor_error", 0.1);
  if (j.contains("n_extremal")) sc.n_extremal = j["n_extremal"].get<int>();
  sc.validate();
  return sc;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  return parse_scenario(nlohmann::json::parse(text));
}

std::vector<Scenario> scenarios_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw contract_error("scenarios_from_file: cannot open " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  std::vector<Scenario> out;
  if (j.is_array())
    for (const auto& item : j) out.push_back(parse_scenario(item));
  else
    out.push_back(parse_scenario(j));
  return out;
}

namespace {

struct AlgoSetup {
  std::string name;
  SpectralSampler sampler;        // spectral-pool sampler (for EF: the original process)
  bool is_extremal = false;
  std::shared_ptr<const Representation> base;  // EF base representation
};

Eigen::MatrixXd spectral_pool(const SpectralSampler& sampler, int n_v,
                              const StreamFamily& streams) {
  Eigen::MatrixXd pool(n_v, sampler.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int j = 0; j < n_v; ++j) {
    RngStream rng = streams.stream(static_cast<std::uint64_t>(j));
    Eigen::VectorXd v;
    sampler.draw_into(v, rng);
    pool.row(j) = v.transpose();
  }
  return pool;
}

// Bisection on tau for the anchor error target, common random numbers across
// evaluations; the production estimate is made afterwards at full scale.
double calibrate_anchor_error(const SpectralSampler& sampler, const Eigen::MatrixXd& vpool,
                              double target, double band, int cal_n,
                              const StreamFamily& streams) {
  const auto p_at = [&](double tau) {
    Eigen::MatrixXd z(cal_n, sampler.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < cal_n; ++i) {
      RngStream rng = streams.stream(static_cast<std::uint64_t>(i));
      z.row(i) = threshold_stopping(sampler, tau, rng).values.transpose();
    }
    return error_probability_fields(z, vpool, tau, /*bootstrap=*/0).p;
  };

  double lo = 1.0, hi = 1.0;  // P is nonincreasing in tau
  double p = p_at(1.0);
  if (p > target) {
    while (p > target) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e9) throw calibration_error("anchor calibration: no bracket above 1e9");
      p = p_at(hi);
    }
  } else {
    while (p < target) {
      hi = lo;
      lo /= 4.0;
      if (lo < 1e-6) throw calibration_error("anchor calibration: no bracket below 1e-6");
      p = p_at(lo);
    }
  }
  double best_tau = std::sqrt(lo * hi);
  for (int iter = 0; iter < 40; ++iter) {
    best_tau = std::sqrt(lo * hi);
    const double pm = p_at(best_tau);
    if (std::fabs(pm - target) <= band) return best_tau;
    (pm > target ? lo : hi) = best_tau;
    if (hi / lo < 1.0 + 1e-10) break;
  }
  return best_tau;
}

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var = (xs.size() > 1) ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

BenchResult run_scenario(const Scenario& sc) {
  sc.validate();
  const Variogram v(sc.alpha, sc.resolved_scale());
  Eigen::VectorXd hw(sc.dim);
  for (int a = 0; a < sc.dim; ++a) hw[a] = sc.half_widths[static_cast<std::size_t>(a)];
  const Hyperrectangle rect(hw);
  const Grid grid = regular_grid(rect, sc.counts, sc.id);
  const int n = grid.size();

  // the origin-pinned representation backs original/random_shift/DM/EF
  std::shared_ptr<const Representation> original_rep;
  const auto need_original = [&]() {
    if (!original_rep) {
      const int at = grid.find_point(Eigen::VectorXd::Zero(sc.dim));
      if (at < 0)
        throw contract_error("run_scenario: grid must contain the origin for this algorithm");
      original_rep = std::make_shared<Representation>(
          covariance_from_measure(v, grid, dirac_measure(grid, at)));
    }
    return original_rep;
  };

  std::vector<AlgoSetup> setups;
  for (const auto& name : sc.algorithms) {
    const auto make_sampler = [&]() -> SpectralSampler {
      if (name == "original") return SpectralSampler::log_gaussian(need_original());
      if (name == "lambda_modified")
        return SpectralSampler::log_gaussian(std::make_shared<Representation>(
            covariance_from_measure(v, grid, uniform_vertex_measure(grid, rect))));
      if (name == "k_stationary")
        return SpectralSampler::log_gaussian(std::make_shared<Representation>(
            k_stationary_covariance(v, grid, rect.enclosing_radius())));
      if (name == "optimized")
        return SpectralSampler::log_gaussian(
            std::make_shared<Representation>(optimized_representation(v, grid)));
      if (name == "random_shift") return random_shift_sampler(*need_original());
      if (name == "dieker_mikosch") return dieker_mikosch_sampler(*need_original());
      // extremal_functions: the spectral pool comes from the original process
      return SpectralSampler::log_gaussian(need_original());
    };
    const bool is_ef = (name == "extremal_functions");
    setups.push_back(AlgoSetup{name, make_sampler(), is_ef,
                               is_ef ? need_original() : nullptr});
  }

  // anchor: lambda-modified when present, else the first threshold algorithm
  int anchor = -1;
  for (std::size_t i = 0; i < setups.size(); ++i)
    if (setups[i].name == "lambda_modified") anchor = static_cast<int>(i);
  if (anchor < 0)
    for (std::size_t i = 0; i < setups.size(); ++i)
      if (!setups[i].is_extremal) {
        anchor = static_cast<int>(i);
        break;
      }
  if (anchor < 0 && !sc.target_ET && !sc.n_extremal)
    throw contract_error("run_scenario: extremal-functions-only scenario needs target_ET or n_extremal");

  // spectral pools
  std::vector<Eigen::MatrixXd> vpools(setups.size());
  for (std::size_t i = 0; i < setups.size(); ++i)
    vpools[i] = spectral_pool(setups[i].sampler, sc.n_V,
                              StreamFamily{sc.seed, mix_u64(kTagVPool, i)});

  BenchResult result;
  result.scenario_id = sc.id;

  // anchor threshold
  double tau_anchor = 0.0;
  if (anchor >= 0) {
    result.anchor_algorithm = setups[static_cast<std::size_t>(anchor)].name;
    if (sc.anchor_tau) {
      tau_anchor = *sc.anchor_tau;
    } else if (sc.target_ET) {
      tau_anchor = calibrate_tau(setups[static_cast<std::size_t>(anchor)].sampler, *sc.target_ET,
                                 0.01, StreamFamily{sc.seed, mix_u64(kTagETCal, 0xACULL)});
    } else {
      tau_anchor = calibrate_anchor_error(
          setups[static_cast<std::size_t>(anchor)].sampler,
          vpools[static_cast<std::size_t>(anchor)], sc.anchor_error, 0.005,
          std::min(sc.n_Z, 1500), StreamFamily{sc.seed, kTagAnchorCal});
    }
    result.anchor_tau = tau_anchor;
  }

  // production pools, anchor first so its measured mean cost fixes the budget
  std::vector<AlgoResult> rows(setups.size());
  std::vector<Eigen::MatrixXd> zpools(setups.size());
  double target_et = sc.target_ET.value_or(0.0);

  const auto produce = [&](std::size_t idx, double tau) {
    AlgoSetup& a = setups[idx];
    AlgoResult& row = rows[idx];
    row.algorithm = a.name;
    row.tau = tau;
    Eigen::MatrixXd z(sc.n_Z, n);
    std::vector<double> cost(static_cast<std::size_t>(sc.n_Z));
    const StreamFamily fam{sc.seed, mix_u64(kTagZPool, idx)};
    const auto t0 = std::chrono::steady_clock::now();
    if (a.is_extremal) {
      const int budget = sc.n_extremal.value_or(
          std::max(1, std::min(n, static_cast<int>(std::lround(target_et)))));
      row.n_extr = budget;
      const std::vector<int> subset = equispaced_subset(n, budget);
#pragma omp parallel for schedule(dynamic, 4)
      for (int i = 0; i < sc.n_Z; ++i) {
        RngStream rng = fam.stream(static_cast<std::uint64_t>(i));
        ExtremalField field = extremal_functions_simulate(*a.base, subset, rng);
        z.row(i) = field.values.transpose();
        cost[static_cast<std::size_t>(i)] = static_cast<double>(field.gaussian_draws);
      }
    } else {
#pragma omp parallel for schedule(dynamic, 4)
      for (int i = 0; i < sc.n_Z; ++i) {
        RngStream rng = fam.stream(static_cast<std::uint64_t>(i));
        StoppedField field = threshold_stopping(a.sampler, tau, rng);
        z.row(i) = field.values.transpose();
        cost[static_cast<std::size_t>(i)] = static_cast<double>(field.T);
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.seconds_per_rep =
        std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(sc.n_Z);
    const MeanSe et = mean_se(cost);
    row.et_mean = et.mean;
    row.et_se = et.se;
    zpools[idx] = std::move(z);
  };

  if (anchor >= 0) {
    produce(static_cast<std::size_t>(anchor), tau_anchor);
    target_et = rows[static_cast<std::size_t>(anchor)].et_mean;
  }
  result.target_ET = target_et;

  for (std::size_t idx = 0; idx < setups.size(); ++idx) {
    if (static_cast<int>(idx) == anchor) continue;
    if (setups[idx].is_extremal) {
      produce(idx, std::numeric_limits<double>::quiet_NaN());
    } else {
      const double tau =
          calibrate_tau(setups[idx].sampler, target_et, 0.01,
                        StreamFamily{sc.seed, mix_u64(kTagETCal, idx)});
      produce(idx, tau);
    }
  }

  // error probabilities and spectral diagnostics
  for (std::size_t idx = 0; idx < setups.size(); ++idx) {
    AlgoResult& row = rows[idx];
    const std::uint64_t boot_seed = mix_u64(sc.seed, mix_u64(kTagBoot, idx));
    ErrorEstimate est;
    if (setups[idx].is_extremal) {
      const std::vector<int> subset = equispaced_subset(n, row.n_extr);
      est = error_probability_subset(zpools[idx], vpools[idx], subset, 200, boot_seed);
    } else {
      est = error_probability_fields(zpools[idx], vpools[idx], row.tau, 200, boot_seed);
    }
    row.p_hat = est.p;
    row.p_se = est.se;
    const std::array<double, 3> levels{5.0, 10.0, 20.0};
    for (std::size_t u = 0; u < levels.size(); ++u) {
      long count = 0;
      for (Eigen::Index j = 0; j < vpools[idx].rows(); ++j)
        if (vpools[idx].row(j).maxCoeff() > levels[u]) ++count;
      row.exceedance[u] = static_cast<double>(count) / static_cast<double>(vpools[idx].rows());
    }
  }

  result.rows = std::move(rows);
  return result;
}

void write_bench_csv(const std::vector<BenchResult>& results,
                     const std::filesystem::path& path, bool include_timing) {
  std::vector<std::string> header = {"scenario", "algorithm", "tau",     "ET_mean",
                                     "ET_se",    "Phat",      "Phat_se"};
  if (include_timing) header.push_back("seconds_per_rep");
  CsvWriter out(path, header);
  for (const auto& res : results)
    for (const auto& row : res.rows) {
      std::vector<std::string> cells = {res.scenario_id,
                                        row.algorithm,
                                        format_double(row.tau),
                                        format_double(row.et_mean),
                                        format_double(row.et_se),
                                        format_double(row.p_hat),
                                        format_double(row.p_se)};
      if (include_timing) cells.push_back(format_double(row.seconds_per_rep));
      out.row(cells);
    }
}

void write_diagnostics_csv(const std::vector<BenchResult>& results,
                           const std::filesystem::path& path) {
  CsvWriter out(path, {"scenario", "algorithm", "n_extr", "anchor_algorithm", "anchor_tau",
                       "target_ET", "exceed_u5", "exceed_u10", "exceed_u20"});
  for (const auto& res : results)
    for (const auto& row : res.rows)
      out.row({res.scenario_id, row.algorithm, std::to_string(row.n_extr),
               res.anchor_algorithm, format_double(res.anchor_tau),
               format_double(res.target_ET), format_double(row.exceedance[0]),
               format_double(row.exceedance[1]), format_double(row.exceedance[2])});
}

void variance_profile_export(const Representation& rep, const std::filesystem::path& path) {
  std::vector<std::string> header;
  for (int a = 0; a < rep.grid().dim(); ++a) header.push_back("x" + std::to_string(a + 1));
  header.push_back("sigma2");
  CsvWriter out(path, header);
  for (int i = 0; i < rep.size(); ++i) {
    std::vector<std::string> cells;
    for (int a = 0; a < rep.grid().dim(); ++a)
      cells.push_back(format_double(rep.grid().points()(i, a)));
    cells.push_back(format_double(rep.variance_profile()[i]));
    out.row(cells);
  }
}

}  // namespace maxstab
