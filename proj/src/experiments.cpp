#include "kgsig/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "kgsig/errors.hpp"
#include "kgsig/minkowski.hpp"
#include "kgsig/signature.hpp"
#include "kgsig/state.hpp"
#include "kgsig/symplectic.hpp"

namespace kgsig {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

// ---------------------------------------------------------------- config parsing

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, text));
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(fmt::format("{}: cannot parse '{}' as an integer", key, text));
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::pair<double, double>> parse_intervals(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split(text, ',')) {
    const auto ends = split(item, ':');
    if (ends.size() != 2) throw ConfigError(fmt::format("{}: expected lower:upper, got '{}'", key, item));
    out.emplace_back(parse_double(key, ends[0]), parse_double(key, ends[1]));
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.N", [](auto& c, auto& k, auto& v) { c.num_points = parse_int<int>(k, v); }},
      {"grid.L", [](auto& c, auto& k, auto& v) { c.length = parse_double(k, v); }},
      {"mass.m", [](auto& c, auto& k, auto& v) { c.mass = parse_double(k, v); }},
      {"mass.m_L", [](auto& c, auto& k, auto& v) { c.m_lower = parse_double(k, v); }},
      {"mass.m_R", [](auto& c, auto& k, auto& v) { c.m_upper = parse_double(k, v); }},
      {"mass.delta", [](auto& c, auto& k, auto& v) { c.delta = parse_double(k, v); }},
      {"quadrature.mass_nodes", [](auto& c, auto& k, auto& v) { c.mass_nodes = parse_int<int>(k, v); }},
      {"quadrature.dt", [](auto& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
      {"quadrature.T_initial", [](auto& c, auto& k, auto& v) { c.t_initial = parse_double(k, v); }},
      {"quadrature.T_max", [](auto& c, auto& k, auto& v) { c.t_max = parse_double(k, v); }},
      {"quadrature.tol", [](auto& c, auto& k, auto& v) { c.tol = parse_double(k, v); }},
      {"run.seed", [](auto& c, auto& k, auto& v) { c.seed = parse_int<std::uint64_t>(k, v); }},
      {"run.trials", [](auto& c, auto& k, auto& v) { c.trials = parse_int<int>(k, v); }},
      {"run.state_trials", [](auto& c, auto& k, auto& v) { c.state_trials = parse_int<int>(k, v); }},
      {"run.window", [](auto& c, auto& k, auto& v) { c.window = parse_double(k, v); }},
      {"run.evolve_time", [](auto& c, auto& k, auto& v) { c.evolve_time = parse_double(k, v); }},
      {"run.evolve_steps", [](auto& c, auto& k, auto& v) { c.evolve_steps = parse_int<int>(k, v); }},
      {"reconstruct.deltas", [](auto& c, auto& k, auto& v) { c.deltas = parse_list(k, v); }},
      {"reconstruct.intervals", [](auto& c, auto& k, auto& v) { c.intervals = parse_intervals(k, v); }},
      {"masslimit.masses", [](auto& c, auto& k, auto& v) { c.masses = parse_list(k, v); }},
      {"wick.points", [](auto& c, auto& k, auto& v) { c.wick_points = parse_int<int>(k, v); }},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_inside(const MassInterval& interval, double m, double delta, const char* what) {
  require(interval.encloses(m - delta, m + delta),
          fmt::format("{}: [m - delta, m + delta] = [{}, {}] must lie strictly inside ({}, {})", what, m - delta,
                      m + delta, interval.lower(), interval.upper()));
}

// ---------------------------------------------------------------- helpers

std::shared_ptr<const SpectralBasis> make_basis(const ExperimentConfig& c) {
  const SpatialGrid grid = build_grid(c.num_points, c.length);
  return std::make_shared<const SpectralBasis>(spectral_decompose(laplacian(grid), grid.spacing));
}

// Complex Cauchy data with decaying random mode coefficients.
CauchyDatum random_datum(std::mt19937_64& rng, const SpectralBasis& basis) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ModeDatum d = ModeDatum::zero(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    const double s = 1.0 / (1.0 + n);
    d.phi(n) = s * std::complex<double>(normal(rng), normal(rng));
    d.pi(n) = s * std::complex<double>(normal(rng), normal(rng));
  }
  return to_field(d, basis);
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

WindowOptions window_options(const ExperimentConfig& c) { return {c.dt, c.t_initial, c.tol, c.t_max}; }

double dirichlet_eigenvalue(int n, const SpatialGrid& grid) {
  const double s = std::sin((n + 1) * kPi / (2.0 * (grid.num_points + 1)));
  return 4.0 / (grid.spacing * grid.spacing) * s * s;
}

// ---------------------------------------------------------------- commands

CommandResult cmd_spectrum(const ExperimentConfig& c) {
  const SpatialGrid grid = build_grid(c.num_points, c.length);
  const auto basis = make_basis(c);
  ResultTable t{"modes", {"n", "lambda", "lambda_exact", "omega"}, {}};
  double max_rel = 0.0;
  for (int n = 0; n < basis->size(); ++n) {
    const double exact = dirichlet_eigenvalue(n, grid);
    max_rel = std::max(max_rel, std::abs(basis->eigenvalue(n) - exact) / exact);
    t.rows.push_back({double(n), basis->eigenvalue(n), exact, omega(basis->eigenvalue(n), c.mass)});
  }
  const Eigen::MatrixXd v = basis->eigenvectors();
  const double ortho =
      (grid.spacing * v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  json r;
  r["spacing"] = grid.spacing;
  r["lambda_min"] = basis->eigenvalues().minCoeff();
  r["lambda_max"] = basis->eigenvalues().maxCoeff();
  r["max_relative_eigenvalue_error"] = max_rel;
  r["orthonormality_residual"] = ortho;
  return {r, {t}};
}

CommandResult cmd_evolve(const ExperimentConfig& c) {
  const SpatialGrid grid = build_grid(c.num_points, c.length);
  const auto basis = make_basis(c);
  std::mt19937_64 rng(c.seed);
  const CauchyDatum a = random_datum(rng, *basis);
  const CauchyDatum b = random_datum(rng, *basis);
  const SignatureOperator s = signature_analytic(c.mass, *basis);
  const std::complex<double> sig0 = symplectic(a, b, grid);
  const double norm0 = scalar_product_m(a, a, s, *basis).real();
  ResultTable t{"conservation", {"t", "sigma_re", "sigma_im", "norm", "sigma_drift", "norm_drift"}, {}};
  double max_sig = 0.0, max_norm = 0.0;
  for (int k = 0; k <= c.evolve_steps; ++k) {
    const double time = c.evolve_time * k / c.evolve_steps;
    const CauchyDatum at = propagate(a, time, c.mass, *basis);
    const CauchyDatum bt = propagate(b, time, c.mass, *basis);
    const std::complex<double> sig = symplectic(at, bt, grid);
    const double norm = scalar_product_m(at, at, s, *basis).real();
    const double ds = std::abs(sig - sig0) / std::abs(sig0);
    const double dn = std::abs(norm - norm0) / std::abs(norm0);
    max_sig = std::max(max_sig, ds);
    max_norm = std::max(max_norm, dn);
    t.rows.push_back({time, sig.real(), sig.imag(), norm, ds, dn});
  }
  json r;
  r["sigma_initial"] = complex_json(sig0);
  r["norm_initial"] = norm0;
  r["max_relative_sigma_drift"] = max_sig;
  r["max_relative_norm_drift"] = max_norm;
  return {r, {t}};
}

CommandResult cmd_green(const ExperimentConfig& c) {
  const SpatialGrid grid = build_grid(c.num_points, c.length);
  const auto basis = make_basis(c);
  std::mt19937_64 rng(c.seed);
  const TimeGrid coarse = TimeGrid::symmetric(c.window, c.dt);
  const TimeGrid fine = TimeGrid::symmetric(c.window, c.dt / 2.0);
  ResultTable t{"pairs",
                {"pair", "gm_re", "gm_im", "lemma_residual", "lemma_residual_half", "kg_retarded", "kg_advanced",
                 "kg_retarded_half"},
                {}};
  double max_lemma = 0.0, max_lemma_half = 0.0, max_ret = 0.0, max_adv = 0.0, max_ret_half = 0.0;
  for (int i = 0; i < c.trials; ++i) {
    const RandomProfile pf = random_profile(rng, *basis, -c.window, c.window);
    const RandomProfile pg = random_profile(rng, *basis, -c.window, c.window);
    std::array<double, 2> lemma{};
    std::complex<double> gm;
    for (int level = 0; level < 2; ++level) {
      const TimeGrid& tg = level == 0 ? coarse : fine;
      const SpacetimeTestFunction f = pf.sample(tg), g = pg.sample(tg);
      const std::complex<double> form = gm_form(f, g, c.mass, *basis);
      const std::complex<double> sig =
          symplectic(causal_fundamental(f, c.mass, *basis), causal_fundamental(g, c.mass, *basis), grid);
      lemma[level] = std::abs(form - sig) / std::max(1.0, std::abs(form));
      if (level == 0) gm = form;
    }
    const SpacetimeTestFunction f = pf.sample(coarse);
    const double ret = kg_residual(retarded_green(f, c.mass, *basis), &f, c.mass, grid);
    const double adv = kg_residual(advanced_green(f, c.mass, *basis), &f, c.mass, grid);
    const SpacetimeTestFunction fh = pf.sample(fine);
    const double ret_half = kg_residual(retarded_green(fh, c.mass, *basis), &fh, c.mass, grid);
    max_lemma = std::max(max_lemma, lemma[0]);
    max_lemma_half = std::max(max_lemma_half, lemma[1]);
    max_ret = std::max(max_ret, ret);
    max_adv = std::max(max_adv, adv);
    max_ret_half = std::max(max_ret_half, ret_half);
    t.rows.push_back({double(i), gm.real(), gm.imag(), lemma[0], lemma[1], ret, adv, ret_half});
  }
  json r;
  r["dt"] = coarse.dt;
  r["max_lemma_residual"] = max_lemma;
  r["max_lemma_residual_half_dt"] = max_lemma_half;
  r["lemma_halving_ratio"] = max_lemma / max_lemma_half;
  r["max_kg_residual_retarded"] = max_ret;
  r["max_kg_residual_advanced"] = max_adv;
  r["max_kg_residual_retarded_half_dt"] = max_ret_half;
  r["kg_halving_ratio"] = max_ret / max_ret_half;
  return {r, {t}};
}

CommandResult cmd_signature(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const SignatureOperator s = signature_analytic(c.mass, *basis);
  const SignatureSpectrum sp = assembled_spectrum(s, *basis);
  const ModeBlockOperator j = complex_structure(s);
  const ModeBlockOperator jj = j * j;
  double j_residual = 0.0;
  for (int n = 0; n < jj.size(); ++n) {
    j_residual = std::max(j_residual, (jj.block(n) + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
  }
  ResultTable eig{"eigenvalues", {"index", "re", "im"}, {}};
  for (int i = 0; i < sp.eigenvalues.size(); ++i) {
    eig.rows.push_back({double(i), sp.eigenvalues(i).real(), sp.eigenvalues(i).imag()});
  }
  ResultTable blocks{"blocks", {"n", "omega", "s00", "s01", "s10", "s11"}, {}};
  for (int n = 0; n < s.size(); ++n) {
    const auto& b = s.block(n);
    blocks.rows.push_back({double(n), omega(basis->eigenvalue(n), c.mass), b(0, 0), b(0, 1), b(1, 0), b(1, 1)});
  }
  json r;
  r["count_minus_pi"] = sp.count_minus;
  r["count_plus_pi"] = sp.count_plus;
  r["max_eigenvalue_deviation"] = sp.max_eigenvalue_deviation;
  r["max_eigenvector_residual"] = sp.max_eigenvector_residual;
  r["max_eigenspace_distance"] = sp.max_eigenspace_distance;
  r["complex_structure_square_residual"] = j_residual;
  return {r, {eig, blocks}};
}

CommandResult cmd_massdecomp(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const MassInterval interval(c.m_lower, c.m_upper);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double len = c.m_upper - c.m_lower;
  auto random_weight = [&] {
    const double half = 0.5 * len * (0.4 + 0.5 * unit(rng));
    const double margin = 0.01 * len;
    const double lo = c.m_lower + half + margin;
    const double hi = c.m_upper - half - margin;
    return MassWeight(lo + (hi - lo) * unit(rng), half, c.mass_nodes);
  };
  ResultTable t{"pairs", {"pair", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_error", "T"}, {}};
  double max_rel = 0.0, max_t = 0.0;
  for (int i = 0; i < c.trials; ++i) {
    const MassWeight wa = random_weight();
    const MassWeight wb = random_weight();
    const CauchyDatum a = random_datum(rng, *basis);
    const CauchyDatum b = random_datum(rng, *basis);
    const MassFamily fa = make_family(a, wa, interval, basis);
    const MassFamily fb = make_family(b, wb, interval, basis);
    const SpacetimeInnerReport lhs = spacetime_inner(fa, fb, window_options(c));
    const std::complex<double> rhs = mass_decomposition_rhs(fa, fb, 2 * c.mass_nodes);
    const double rel = std::abs(lhs.value - rhs) / std::abs(rhs);
    max_rel = std::max(max_rel, rel);
    max_t = std::max(max_t, lhs.half_width);
    t.rows.push_back({double(i), lhs.value.real(), lhs.value.imag(), rhs.real(), rhs.imag(), rel, lhs.half_width});
  }
  json r;
  r["pairs"] = c.trials;
  r["max_relative_error"] = max_rel;
  r["max_half_width"] = max_t;
  return {r, {t}};
}

CommandResult cmd_reconstruct(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const MassInterval interval(c.m_lower, c.m_upper);
  ReconstructionOptions opts;
  opts.window = window_options(c);
  opts.mass_nodes = c.mass_nodes;
  ResultTable by_delta{"deltas", {"delta", "max_deviation", "max_imaginary", "max_half_width"}, {}};
  ResultTable by_mode{"modes", {"delta", "n", "deviation", "half_width"}, {}};
  std::vector<ReconstructionReport> reports;
  for (double d : c.deltas) {
    ReconstructionReport rep = signature_reconstruct(c.mass, *basis, interval, d, opts);
    by_delta.rows.push_back({d, rep.max_deviation, rep.max_imaginary, rep.max_half_width});
    for (std::size_t n = 0; n < rep.mode_deviation.size(); ++n) {
      by_mode.rows.push_back({d, double(n), rep.mode_deviation[n], rep.mode_half_width[n]});
    }
    reports.push_back(std::move(rep));
  }
  bool improving = true;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    improving = improving && reports[i].max_deviation < reports[i - 1].max_deviation;
  }
  ResultTable by_interval{"intervals", {"m_L", "m_R", "max_deviation", "difference_from_base"}, {}};
  double max_difference = 0.0;
  const ReconstructionReport& base = reports.front();
  for (const auto& [lo, hi] : c.intervals) {
    const ReconstructionReport rep = signature_reconstruct(c.mass, *basis, MassInterval(lo, hi), c.deltas.front(), opts);
    const double diff = (rep.op.mode_matrix() - base.op.mode_matrix()).cwiseAbs().maxCoeff();
    max_difference = std::max(max_difference, diff);
    by_interval.rows.push_back({lo, hi, rep.max_deviation, diff});
  }
  json r;
  r["max_deviation_first_delta"] = base.max_deviation;
  r["max_deviation_last_delta"] = reports.back().max_deviation;
  r["improving_with_smaller_delta"] = improving;
  r["max_interval_difference"] = max_difference;
  return {r, {by_delta, by_mode, by_interval}};
}

CommandResult cmd_state(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const TwoPointEvaluator state(c.mass, basis);
  const PositivityReport p = state_positivity_suite(state, c.seed, c.state_trials, TimeGrid::symmetric(c.window, c.dt));
  json r;
  r["trials"] = p.trials;
  r["min_gram_eigenvalue"] = p.min_gram_eigenvalue;
  r["max_gram_eigenvalue"] = p.max_gram_eigenvalue;
  r["max_imag_diagonal"] = p.max_imag_diagonal;
  r["min_real_diagonal"] = p.min_real_diagonal;
  r["max_imag_identity_residual"] = p.max_imag_identity_residual;
  r["max_ccr_residual"] = p.max_ccr_residual;
  return {r, {}};
}

CommandResult cmd_masslimit(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const MasslessLimitReport rep = massless_limit(*basis, c.masses);
  ResultTable t{"masses", {"m", "norm_difference", "euclidean_difference", "bound", "ratio"}, {}};
  bool decreasing = true;
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    const auto& row = rep.table[i];
    const double ratio = row.norm_difference / row.bound;
    max_ratio = std::max(max_ratio, ratio);
    if (i > 0) decreasing = decreasing && row.norm_difference < rep.table[i - 1].norm_difference;
    t.rows.push_back({row.mass, row.norm_difference, row.euclidean_difference, row.bound, ratio});
  }
  std::mt19937_64 rng(c.seed);
  const CauchyDatum a = random_datum(rng, *basis);
  const CauchyDatum b = random_datum(rng, *basis);
  const RieszConsistency rz = riesz_consistency(a, b, rep.limit, *basis);
  json r;
  r["strictly_decreasing"] = decreasing;
  r["max_ratio_to_bound"] = max_ratio;
  r["riesz_ratio"] = complex_json(rz.ratio);
  return {r, {t}};
}

CommandResult cmd_crosscheck(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const minkowski::CrossCheckReport rep = minkowski::cross_check_lattice(c.mass, *basis);
  ResultTable t{"modes", {"lambda", "omega", "closed_form_deviation", "transform_deviation", "eigen_deviation"}, {}};
  for (const auto& row : rep.rows) {
    t.rows.push_back({row.lambda, row.omega, row.closed_form_deviation, row.transform_deviation, row.eigen_deviation});
  }
  // Continuum identity <a|b> = i sigma(a, S b) on random three-dimensional modes.
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<minkowski::Mode> modes;
  for (int i = 0; i < 8; ++i) {
    minkowski::Mode m;
    m.momentum = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    m.weight = 0.5 + std::abs(normal(rng));
    modes.push_back(m);
  }
  const minkowski::ModeSuperposition shape(3, c.mass, modes);
  auto draw = [&] {
    std::vector<std::complex<double>> p, q;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      p.emplace_back(normal(rng), normal(rng));
      q.emplace_back(normal(rng), normal(rng));
    }
    return shape.with_amplitudes(p, q);
  };
  const auto a = draw();
  const auto b = draw();
  const std::complex<double> lhs = minkowski::scalar_product(a, b);
  const std::complex<double> rhs = kI * minkowski::symplectic(a, minkowski::signature_action(b));
  const auto roundtrip = minkowski::inverse_cauchy_transform(minkowski::cauchy_transform(a), shape);
  double rt = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    rt = std::max({rt, std::abs(roundtrip.modes()[i].a_plus - a.modes()[i].a_plus),
                   std::abs(roundtrip.modes()[i].a_minus - a.modes()[i].a_minus)});
  }
  json r;
  r["max_closed_form_deviation"] = rep.max_closed_form_deviation;
  r["max_transform_deviation"] = rep.max_transform_deviation;
  r["max_eigen_deviation"] = rep.max_eigen_deviation;
  r["continuum_identity_residual"] = std::abs(lhs - rhs) / std::abs(lhs);
  r["transform_roundtrip_residual"] = rt;
  return {r, {t}};
}

// Sum over all orderings whose consecutive pairs are increasing with increasing
// first elements; each pairing is visited exactly once.
std::complex<double> enumerate_pairings(int count, const Eigen::MatrixXcd& w, long& visited) {
  std::vector<int> p(count);
  for (int i = 0; i < count; ++i) p[i] = i;
  std::complex<double> total{0.0, 0.0};
  visited = 0;
  do {
    bool canonical = true;
    for (int k = 0; k + 1 < count && canonical; k += 2) {
      canonical = p[k] < p[k + 1] && (k == 0 || p[k - 2] < p[k]);
    }
    if (!canonical) continue;
    ++visited;
    std::complex<double> term{1.0, 0.0};
    for (int k = 0; k < count; k += 2) term *= w(p[k], p[k + 1]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

CommandResult cmd_wick(const ExperimentConfig& c) {
  const auto basis = make_basis(c);
  const TwoPointEvaluator state(c.mass, basis);
  std::mt19937_64 rng(c.seed);
  const TimeGrid time = TimeGrid::symmetric(c.window, c.dt);
  std::vector<SpacetimeTestFunction> fs;
  for (int i = 0; i < c.wick_points + 1; ++i) fs.push_back(random_real_test_function(rng, *basis, time));
  const std::span<const SpacetimeTestFunction> points(fs.data(), c.wick_points);
  const std::complex<double> value = wick_n_point(state, points);
  const Eigen::MatrixXcd w = state.gram(points);
  long visited = 0;
  const std::complex<double> direct = enumerate_pairings(c.wick_points % 2 == 0 ? c.wick_points : 0, w, visited);
  const int odd_count = c.wick_points % 2 == 0 ? c.wick_points + 1 : c.wick_points;
  const std::complex<double> odd =
      wick_n_point(state, std::span<const SpacetimeTestFunction>(fs.data(), std::min<int>(odd_count, 7)));
  ResultTable t{"pairings", {"points", "matchings", "double_factorial"}, {}};
  for (int n = 0; n <= 8; n += 2) {
    double df = 1.0;
    for (int k = n - 1; k > 1; k -= 2) df *= k;
    t.rows.push_back({double(n), double(perfect_matchings(n).size()), df});
  }
  json r;
  r["points"] = c.wick_points;
  r["value"] = complex_json(value);
  r["direct_enumeration"] = complex_json(c.wick_points % 2 == 0 ? direct : std::complex<double>{});
  r["enumeration_difference"] = c.wick_points % 2 == 0 ? std::abs(value - direct) : std::abs(value);
  r["enumerated_pairings"] = visited;
  r["odd_value"] = complex_json(odd);
  return {r, {t}};
}

using Command = CommandResult (*)(const ExperimentConfig&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table = {
      {"spectrum", cmd_spectrum},       {"evolve", cmd_evolve},         {"green", cmd_green},
      {"signature", cmd_signature},     {"massdecomp", cmd_massdecomp}, {"reconstruct", cmd_reconstruct},
      {"state", cmd_state},             {"masslimit", cmd_masslimit},   {"crosscheck", cmd_crosscheck},
      {"wick", cmd_wick},
  };
  return table;
}

void write_json(std::string& out, const json& v, int indent) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(key).dump() + ": ";
        write_json(out, item, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      out += "[";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ", ";
        first = false;
        write_json(out, item, indent + 2);
      }
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? fmt::format("{:.17g}", d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

std::string format_cell(double d) { return std::isfinite(d) ? fmt::format("{:.17g}", d) : "nan"; }

}  // namespace

void ExperimentConfig::validate(const std::string& command) const {
  require(num_points >= 2, fmt::format("grid.N must be at least 2 (got {})", num_points));
  require(length > 0.0, fmt::format("grid.L must be positive (got {})", length));
  require(mass > 0.0, fmt::format("mass.m must be positive (got {})", mass));
  const MassInterval interval(m_lower, m_upper);
  require(delta > 0.0, "mass.delta must be positive");
  require(mass_nodes >= 2, "quadrature.mass_nodes must be at least 2");
  require(dt > 0.0, "quadrature.dt must be positive");
  require(t_initial > 0.0, "quadrature.T_initial must be positive");
  require(t_max >= t_initial, "quadrature.T_max must be at least T_initial");
  require(tol > 0.0, "quadrature.tol must be positive");
  require(trials >= 1 && state_trials >= 1, "run.trials and run.state_trials must be at least 1");
  require(window > 0.0 && window >= 4.0 * dt, "run.window must be positive and span several time steps");
  require(evolve_time >= 0.0 && evolve_steps >= 1, "run.evolve_time must be >= 0 and run.evolve_steps >= 1");
  require(!deltas.empty(), "reconstruct.deltas must not be empty");
  for (double d : deltas) require(d > 0.0, "reconstruct.deltas must be positive");
  require(!masses.empty(), "masslimit.masses must not be empty");
  for (std::size_t i = 0; i < masses.size(); ++i) {
    require(masses[i] > 0.0, "masslimit.masses must be positive");
    require(i == 0 || masses[i] < masses[i - 1], "masslimit.masses must be strictly decreasing");
  }
  require(wick_points >= 0 && wick_points <= 8, "wick.points must be between 0 and 8");
  for (const auto& [lo, hi] : intervals) MassInterval(lo, hi);

  if (command == "reconstruct") {
    for (double d : deltas) require_inside(interval, mass, d, "reconstruct");
    for (const auto& [lo, hi] : intervals) require_inside(MassInterval(lo, hi), mass, deltas.front(), "reconstruct");
  }
}

json ExperimentConfig::to_json() const {
  json j;
  j["grid"] = {{"N", num_points}, {"L", length}};
  j["mass"] = {{"m", mass}, {"m_L", m_lower}, {"m_R", m_upper}, {"delta", delta}};
  j["quadrature"] = {{"mass_nodes", mass_nodes}, {"dt", dt}, {"T_initial", t_initial}, {"T_max", t_max}, {"tol", tol}};
  j["run"] = {{"seed", seed},           {"trials", trials},           {"state_trials", state_trials},
              {"window", window},       {"evolve_time", evolve_time}, {"evolve_steps", evolve_steps}};
  json ivs = json::array();
  for (const auto& [lo, hi] : intervals) ivs.push_back(json::array({lo, hi}));
  j["reconstruct"] = {{"deltas", deltas}, {"intervals", ivs}};
  j["masslimit"] = {{"masses", masses}};
  j["wick"] = {{"points", wick_points}};
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("cannot read config {}: {}", path.string(), e.message()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(fmt::format("config key '{}' must sit inside a [section]", section));
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError(fmt::format("unknown config key '{}'", full));
      it->second(base, full, value.data());
    }
  }
  return base;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

CommandResult execute(const std::string& command, const ExperimentConfig& config) {
  for (const auto& [name, fn] : commands()) {
    if (name == command) return fn(config);
  }
  throw ConfigError(fmt::format("unknown command '{}'", command));
}

std::string format_json(const json& value) {
  std::string out;
  write_json(out, value, 0);
  out += "\n";
  return out;
}

std::string format_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

int run(const std::string& command, const ExperimentConfig& config, const std::filesystem::path& out,
        bool quiet) {
  try {
    config.validate(command);
    const auto start = std::chrono::steady_clock::now();
    const CommandResult result = execute(command, config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out);
    json summary;
    summary["command"] = command;
    summary["config"] = config.to_json();
    summary["results"] = result.results;
    json files = json::array();
    for (const auto& t : result.tables) {
      const std::string name = fmt::format("{}_{}.csv", command, t.name);
      files.push_back(name);
      std::ofstream(out / name, std::ios::binary) << format_csv(t);
    }
    summary["tables"] = files;
    summary["timing_file"] = command + "_timing.json";
    std::ofstream(out / (command + ".json"), std::ios::binary) << format_json(summary);
    json timing;
    timing["command"] = command;
    timing["runtime_seconds"] = seconds;
    std::ofstream(out / (command + "_timing.json"), std::ios::binary) << format_json(timing);
    if (!quiet) std::cout << format_json(result.results);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace kgsig
