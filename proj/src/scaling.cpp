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

#include "termforge/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace termforge::scaling {

// Power law in sequence length ----------------------------------------------------

double PowerLawFit::operator()(double L) const { return A * std::pow(L, -alpha); }

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points, double s) {
  if (points.size() < 3) throw InvalidArgument("power-law fit needs at least three points");
  std::vector<double> xs, ys;
  for (const auto& [L, loss] : points) {
    if (!(L > 0) || !(loss > 0) || !std::isfinite(L) || !std::isfinite(loss)) {
      throw InvalidArgument("power-law fit needs positive finite L and loss");
    }
    xs.push_back(std::log(L));
    ys.push_back(std::log(loss));
  }
  auto sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("power-law fit needs distinct L values");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  PowerLawFit fit;
  fit.A = std::exp(intercept);
  fit.alpha = -slope;
  fit.s = s;
  if (syy == 0) {
    fit.r2 = 1;
  } else {
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (intercept + slope * xs[i]);
      rss += r * r;
    }
    fit.r2 = std::clamp(1 - rss / syy, 0.0, 1.0);
  }
  return fit;
}

// Exponent dynamics ---------------------------------------------------------------

double AlphaDynamics::operator()(double s) const { return alpha_inf * (1 - std::exp(-s / tau)); }

namespace {

double rss_of(const std::vector<std::pair<double, double>>& pts, double a, double tau) {
  double r = 0;
  for (const auto& [s, y] : pts) {
    const double d = y - a * (1 - std::exp(-s / tau));
    r += d * d;
  }
  return r;
}

/// Least-squares alpha_inf for a fixed tau.
double best_scale(const std::vector<std::pair<double, double>>& pts, double tau) {
  double num = 0, den = 0;
  for (const auto& [s, y] : pts) {
    const double g = 1 - std::exp(-s / tau);
    num += g * y;
    den += g * g;
  }
  return den > 0 ? num / den : 0;
}

}  // namespace

AlphaDynamics fit_alpha_dynamics(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgument("alpha dynamics fit needs at least two points");
  double smin = std::numeric_limits<double>::infinity(), smax = 0;
  for (const auto& [s, y] : points) {
    if (!(s > 0) || !std::isfinite(s) || !std::isfinite(y)) {
      throw InvalidArgument("alpha dynamics fit needs positive finite steps");
    }
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (smin == smax) throw InvalidArgument("alpha dynamics fit needs at least two distinct step counts");

  // Seed from a fixed grid of tau values.
  double tau = 0, a = 0, best = std::numeric_limits<double>::infinity();
  for (double t : log_grid(smin / 100, smax * 100, 801)) {
    const double at = best_scale(points, t);
    const double r = rss_of(points, at, t);
    if (r < best) {
      best = r;
      tau = t;
      a = at;
    }
  }

  // Damped Gauss-Newton (Levenberg-Marquardt) in (a, u = ln tau).
  double u = std::log(tau);
  double lambda = 1e-3;
  for (int iter = 0; iter < 500; ++iter) {
    const double t = std::exp(u);
    double jaa = 0, jau = 0, juu = 0, ga = 0, gu = 0;
    for (const auto& [s, y] : points) {
      const double e = std::exp(-s / t);
      const double f = a * (1 - e);
      const double da = 1 - e;
      const double du = -a * e * s / t;
      const double r = y - f;
      jaa += da * da;
      jau += da * du;
      juu += du * du;
      ga += da * r;
      gu += du * r;
    }
    bool improved = false;
    while (lambda < 1e12) {
      const double m00 = jaa * (1 + lambda), m11 = juu * (1 + lambda), m01 = jau;
      const double det = m00 * m11 - m01 * m01;
      if (det <= 0 || !std::isfinite(det)) {
        lambda *= 10;
        continue;
      }
      const double step_a = (m11 * ga - m01 * gu) / det;
      const double step_u = (m00 * gu - m01 * ga) / det;
      const double na = a + step_a, nu = u + step_u;
      const double r = rss_of(points, na, std::exp(nu));
      if (std::isfinite(r) && r <= best) {
        const bool small = std::abs(step_a) <= 1e-15 + 1e-13 * std::abs(a) && std::abs(step_u) <= 1e-13;
        a = na;
        u = nu;
        best = r;
        lambda = std::max(lambda / 10, 1e-12);
        improved = !small;
        break;
      }
      lambda *= 10;
    }
    if (!improved) break;
  }
  return {a, std::exp(u), best};
}

LogInterpolant::LogInterpolant(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InvalidArgument("interpolant needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].first > 0)) throw InvalidArgument("interpolant knots need positive s");
    if (i && !(knots_[i].first > knots_[i - 1].first)) throw InvalidArgument("interpolant knots must increase");
  }
}

double LogInterpolant::operator()(double s) const {
  if (s <= knots_.front().first) return knots_.front().second;
  if (s >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), s, [](double v, const auto& k) { return v < k.first; });
  auto lo = hi - 1;
  const double w = (std::log(s) - std::log(lo->first)) / (std::log(hi->first) - std::log(lo->first));
  return lo->second + w * (hi->second - lo->second);
}

// Equal wall-time comparison ------------------------------------------------------

double EqualTimeModel::loss(double t, double L) const {
  const double s = gamma * t / L;
  return A(s) * std::pow(L, -alpha(s));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi >= lo) || n == 0) throw InvalidArgument("log grid needs 0 < lo <= hi and n > 0");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.back() = hi;
  return g;
}

EqualTimeResult equal_time_curves(const EqualTimeModel& model, std::vector<double> lengths,
                                  const std::vector<double>& t_grid) {
  if (!model.A || !model.alpha) throw InvalidArgument("equal-time model needs A(s) and alpha(s)");
  if (!(model.gamma > 0)) throw InvalidArgument("gamma must be positive");
  if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()) || t_grid.front() < 0) {
    throw InvalidArgument("time grid must be non-empty, sorted and non-negative");
  }
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  for (double L : lengths) {
    if (!(L > 0)) throw InvalidArgument("sequence lengths must be positive");
  }
  EqualTimeResult res;
  res.t = t_grid;
  res.lengths = lengths;
  for (double L : lengths) {
    std::vector<double> row;
    row.reserve(t_grid.size());
    for (double t : t_grid) row.push_back(model.loss(t, L));
    res.loss.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t j = i + 1; j < lengths.size(); ++j) {
      Crossover c{lengths[i], lengths[j], std::nullopt, std::nullopt, false};
      const auto& a = res.loss[i];
      const auto& b = res.loss[j];
      for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (b[k] < a[k]) {
          c.first = t_grid[k];
          break;
        }
      }
      if (b.back() < a.back()) {
        std::size_t k = t_grid.size() - 1;
        while (k > 0 && b[k - 1] < a[k - 1]) --k;
        c.settled = t_grid[k];
      }
      c.persistent = c.first && c.settled && *c.first == *c.settled;
      res.crossovers.push_back(c);
    }
  }
  return res;
}

const std::vector<ReferenceFit>& reference_fits() {
  static const std::vector<ReferenceFit> fits{{400, 5.65, 0.129}, {650, 5.80, 0.196}, {4000, 4.96, 0.318}};
  return fits;
}

EqualTimeModel reference_model(const AlphaDynamics& dynamics) {
  std::vector<std::pair<double, double>> knots;
  for (const auto& f : reference_fits()) knots.emplace_back(f.s, f.A);
  EqualTimeModel m;
  m.gamma = 1024;
  m.A = LogInterpolant(std::move(knots));
  m.alpha = dynamics;
  return m;
}

// FLOP accounting -----------------------------------------------------------------

double transformer_block_flops(double B, double T, double D) { return 24 * B * T * D * D + 4 * B * T * T * D; }

double lstm_flops(double B, double T, double D) { return 16 * B * T * D * D; }

namespace {

std::string fmt(const char* f, double a, double b = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

FlopTable estimate_flops(const FlopConfig& c) {
  if (!(c.B > 0 && c.D > 0 && c.N_f > 0 && c.T_s > 0 && c.H > 0) || c.P < 0 || c.L_t < 0 || c.L_s <= 0) {
    throw InvalidArgument("FLOP config sizes must be positive");
  }
  const double pool = std::ldexp(1.0, c.P);
  const double T_P = c.N_f / pool;
  if (c.N_f != std::floor(c.N_f) || T_P != std::floor(T_P)) {
    throw InvalidArgument("N_f / 2^P must be an integer");
  }
  FlopTable t;
  for (int s = 0; s < c.P; ++s) {
    const double T = c.N_f / std::ldexp(1.0, s);
    t.rows.push_back({fmt("Frame-head TF block (T=%.0f) x1", T), transformer_block_flops(c.B, T, c.D), 0});
  }
  if (c.L_t > 0) {
    t.rows.push_back({fmt("Frame-head TF blocks (T=%.0f) x%.0f", T_P, c.L_t),
                      c.L_t * transformer_block_flops(c.B, T_P, c.D), 0});
  }
  t.rows.push_back({fmt("Frame-head reduction LSTM (T=%.0f)", T_P), lstm_flops(c.B, T_P, c.D), 0});
  const std::size_t head_rows = t.rows.size();
  t.rows.push_back({fmt("Main LSTM (%.0f layers, T=%.0f)", c.L_s, c.T_s),
                    c.L_s * 8 * c.B * c.T_s * (c.D * c.H + c.H * c.H), 0});
  t.rows.push_back({fmt("Main MLP (%.0f layers, T=%.0f)", c.L_s, c.T_s), c.L_s * 16 * c.B * c.T_s * c.D * c.D, 0});

  for (std::size_t i = 0; i < t.rows.size(); ++i) (i < head_rows ? t.frame_head : t.main) += t.rows[i].flops;
  t.total = t.frame_head + t.main;
  for (auto& r : t.rows) r.share = r.flops / t.total;

  const double q = std::ldexp(1.0, -2 * c.P);  // 4^-P
  const double h = 1 / pool;                  // 2^-P
  t.frame_head_closed_form = c.B * c.D * c.N_f * c.N_f * (16.0 / 3.0 * (1 - q) + 4 * c.L_t * q) +
                             c.B * c.D * c.D * c.N_f * (48 + (24.0 * c.L_t - 32) * h);
  t.main_closed_form = c.L_s * (8 * c.B * c.T_s * (c.D * c.H + c.H * c.H) + 16 * c.B * c.T_s * c.D * c.D);
  return t;
}

std::string format_flops(const FlopTable& t) {
  std::string out;
  auto line = [&](const std::string& label, double flops, double share) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-40s %12.4e %8.2f%%\n", label.c_str(), flops, 100 * share);
    out += buf;
  };
  for (const auto& r : t.rows) line(r.label, r.flops, r.share);
  line("Frame-head subtotal", t.frame_head, t.frame_head / t.total);
  line("Main sequence subtotal", t.main, t.main / t.total);
  line("Overall total", t.total, 1);
  return out;
}

}  // namespace termforge::scaling
