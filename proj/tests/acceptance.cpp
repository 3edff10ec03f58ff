#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "kgsig/errors.hpp"
#include "kgsig/experiments.hpp"

using kgsig::CommandResult;
using kgsig::ExperimentConfig;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double num(const CommandResult& r, const char* key) { return r.results.at(key).get<double>(); }

std::pair<CommandResult, double> timed(const std::string& command, const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult r = kgsig::execute(command, c);
  return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

Outcome mass_decomposition() {
  ExperimentConfig c;
  c.t_max = 25600.0;
  const auto [r, secs] = timed("massdecomp", c);
  const double err = num(r, "max_relative_error");
  return {err <= 1e-3 && secs <= 120.0,
          fmt::format("max relative error {:.3e} over {} pairs (<= 1e-3), {:.1f} s (<= 120 s)", err, c.trials, secs)};
}

Outcome signature_spectrum() {
  const auto [r, secs] = timed("signature", ExperimentConfig{});
  const int minus = r.results.at("count_minus_pi").get<int>();
  const int plus = r.results.at("count_plus_pi").get<int>();
  const double dev = num(r, "max_eigenvalue_deviation");
  const double dist = num(r, "max_eigenspace_distance");
  const double res = num(r, "max_eigenvector_residual");
  const bool ok = minus == 16 && plus == 16 && dev <= 1e-10 && dist <= 1e-10 && res <= 1e-10;
  return {ok, fmt::format("multiplicities {}/{} (16/16), eigenvalue deviation {:.2e}, eigenspace distance {:.2e}, "
                          "residual {:.2e} (<= 1e-10), {:.2f} s",
                          minus, plus, dev, dist, res, secs)};
}

Outcome greens_lemma() {
  const auto [r, secs] = timed("green", ExperimentConfig{});
  const double res = num(r, "max_lemma_residual");
  const double ratio = num(r, "lemma_halving_ratio");
  return {res <= 1e-6 && ratio >= 3.0,
          fmt::format("scaled residual {:.3e} (<= 1e-6), halving dt reduces it {:.1f}x (>= 3x), {:.2f} s", res, ratio,
                      secs)};
}

Outcome state_properties() {
  ExperimentConfig c;
  c.state_trials = 20;
  const auto [r, secs] = timed("state", c);
  const double eig = num(r, "min_gram_eigenvalue");
  const double im = num(r, "max_imag_identity_residual");
  const double ccr = num(r, "max_ccr_residual");
  return {eig >= -1e-8 && im <= 1e-6 && ccr <= 1e-6,
          fmt::format("min Gram eigenvalue {:.2e} (>= -1e-8), Im identity {:.2e}, commutator {:.2e} (<= 1e-6), {:.2f} s",
                      eig, im, ccr, secs)};
}

Outcome massless_limit() {
  const auto [r, secs] = timed("masslimit", ExperimentConfig{});
  const bool decreasing = r.results.at("strictly_decreasing").get<bool>();
  const double ratio = num(r, "max_ratio_to_bound");
  return {decreasing && ratio <= 2.0,
          fmt::format("strictly decreasing: {}, largest norm/bound ratio {:.3f} (<= 2), {:.3f} s", decreasing, ratio,
                      secs)};
}

Outcome reconstruction() {
  const auto [r, secs] = timed("reconstruct", ExperimentConfig{});
  const double first = num(r, "max_deviation_first_delta");
  const double last = num(r, "max_deviation_last_delta");
  const bool improving = r.results.at("improving_with_smaller_delta").get<bool>();
  const double diff = num(r, "max_interval_difference");
  return {first <= 1e-3 && improving && diff <= 1e-3 && secs <= 300.0,
          fmt::format("deviation {:.3e} at delta 0.05 (<= 1e-3), {:.3e} at delta 0.025, interval difference {:.2e}, "
                      "{:.1f} s (<= 300 s)",
                      first, last, diff, secs)};
}

Outcome cross_check() {
  const auto [r, secs] = timed("crosscheck", ExperimentConfig{});
  const double closed = num(r, "max_closed_form_deviation");
  const double transform = num(r, "max_transform_deviation");
  return {closed <= 1e-14 && transform <= 1e-14,
          fmt::format("block deviation {:.2e}, amplitude-route deviation {:.2e} (<= 1e-14), {:.3f} s", closed,
                      transform, secs)};
}

Outcome conservation() {
  const auto [r, secs] = timed("evolve", ExperimentConfig{});
  const double s = num(r, "max_relative_sigma_drift");
  const double n = num(r, "max_relative_norm_drift");
  return {s <= 1e-11 && n <= 1e-11,
          fmt::format("symplectic drift {:.2e}, norm drift {:.2e} over t in [0, 100] (<= 1e-11), {:.3f} s", s, n, secs)};
}

Outcome wick() {
  ExperimentConfig c;
  c.wick_points = 4;
  const auto [r, secs] = timed("wick", c);
  const double diff = num(r, "enumeration_difference");
  const auto odd = r.results.at("odd_value");
  const bool odd_zero = odd.at(0).get<double>() == 0.0 && odd.at(1).get<double>() == 0.0;
  bool counts = true;
  for (const auto& row : r.tables.front().rows) counts = counts && row[1] == row[2];
  return {diff == 0.0 && odd_zero && counts,
          fmt::format("four-point difference {} (exact), odd value zero: {}, matchings equal (2n-1)!!: {}, {:.3f} s",
                      diff, odd_zero, counts, secs)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"A1", mass_decomposition}, {"A2", signature_spectrum}, {"A3", greens_lemma},
      {"A4", state_properties},   {"A5", massless_limit},     {"A6", reconstruction},
      {"A7", cross_check},        {"A8", conservation},       {"A9", wick},
  };
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("error: {}", e.what())};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("{} {} {}", id, o.pass ? "PASS" : "FAIL", o.detail) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
