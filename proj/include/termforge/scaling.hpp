// Copyright 2026 The termforge Authors
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

// Sequence-length scaling fits, equal-wall-time comparisons and forward FLOP
// accounting for the frame-head / recurrent main model.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "termforge/common.hpp"

namespace termforge::scaling {

// Power law in sequence length ----------------------------------------------------

struct PowerLawFit {
  double A = 0;      // loss at L = 1
  double alpha = 0;  // loss ~ A * L^-alpha
  double r2 = 0;     // in log-log space
  double s = 0;      // step count the points were measured at (0 if unknown)
  double operator()(double L) const;
};

/// Ordinary least squares on (ln L, ln loss). Needs at least three points
/// with distinct L; throws InvalidArgument otherwise or on non-positive values.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points, double s = 0);

// Exponent dynamics ---------------------------------------------------------------

struct AlphaDynamics {
  double alpha_inf = 0;
  double tau = 0;
  double rss = 0;  // residual sum of squares of the fit
  double operator()(double s) const;
};

/// Nonlinear least squares for alpha(s) = alpha_inf * (1 - exp(-s / tau)).
/// Starts from the best point of a fixed log-spaced tau grid (alpha_inf solved
/// in closed form for each tau), then refines with damped Gauss-Newton in
/// (alpha_inf, ln tau). Needs at least two points, s > 0 and two distinct s.
AlphaDynamics fit_alpha_dynamics(const std::vector<std::pair<double, double>>& points);

/// Linear interpolation of a value in ln s between knots, held constant
/// outside the knot range.
class LogInterpolant {
 public:
  /// Throws InvalidArgument unless knots are non-empty with positive,
  /// strictly increasing s.
  explicit LogInterpolant(std::vector<std::pair<double, double>> knots);
  double operator()(double s) const;

 private:
  std::vector<std::pair<double, double>> knots_;
};

// Equal wall-time comparison ------------------------------------------------------

struct EqualTimeModel {
  double gamma = 1024;  // steps per unit time at L = 1; s(L, t) = gamma * t / L
  std::function<double(double)> A;
  std::function<double(double)> alpha;
  double loss(double t, double L) const;
};

struct Crossover {
  double L1 = 0;
  double L2 = 0;                  // L2 > L1
  std::optional<double> first;    // first grid t with loss(t, L2) < loss(t, L1)
  std::optional<double> settled;  // first grid t after which L2 stays lower to the grid end
  bool persistent = false;        // first == settled
};

struct EqualTimeResult {
  std::vector<double> t;
  std::vector<double> lengths;
  std::vector<std::vector<double>> loss;  // loss[i][k] at lengths[i], t[k]
  std::vector<Crossover> crossovers;      // every pair, L1 < L2
};

/// Log-spaced grid of `n` points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

EqualTimeResult equal_time_curves(const EqualTimeModel& model, std::vector<double> lengths,
                                  const std::vector<double>& t_grid);

/// A(s) from the three reference fits and alpha(s) from `dynamics`, with
/// gamma chosen so one unit of time is one step at L = 1024.
EqualTimeModel reference_model(const AlphaDynamics& dynamics);

/// The (s, A, alpha) reference fits at 400, 650 and 4000 steps.
struct ReferenceFit {
  double s, A, alpha;
};
const std::vector<ReferenceFit>& reference_fits();

// FLOP accounting -----------------------------------------------------------------

struct FlopConfig {
  double B = 512;     // batch
  double D = 768;     // width
  double N_f = 7680;  // tokens per frame
  int P = 2;          // pooling stages
  int L_t = 3;        // transformer blocks after pooling
  double T_s = 1024;  // main sequence length
  int L_s = 2;        // main layers
  double H = 768;     // recurrent cell hidden size
};

struct FlopRow {
  std::string label;
  double flops = 0;
  double share = 0;  // of the total
};

struct FlopTable {
  std::vector<FlopRow> rows;
  double frame_head = 0;
  double main = 0;
  double total = 0;
  double frame_head_closed_form = 0;  // single-expression form of the frame-head sum
  double main_closed_form = 0;
};

/// Throws InvalidArgument for non-positive sizes or when N_f / 2^P is not an integer.
FlopTable estimate_flops(const FlopConfig& config);

/// Fixed-width text table.
std::string format_flops(const FlopTable& table);

/// TF block: 24 B T D^2 + 4 B T^2 D. LSTM: 16 B T D^2 (input and hidden width D).
double transformer_block_flops(double B, double T, double D);
double lstm_flops(double B, double T, double D);

}  // namespace termforge::scaling
