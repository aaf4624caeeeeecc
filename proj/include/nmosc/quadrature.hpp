#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "nmosc/errors.hpp"

namespace nmosc {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae and weights).
namespace gk15 {
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

template <class T>
struct PanelEstimate {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
};

// One Gauss-Kronrod 15 panel; error estimate per QUADPACK's (200|K-G|)^1.5 rule.
template <class T, class F>
PanelEstimate<T> gk15_panel(F&& f, double a, double b) {
  using gk15::wg;
  using gk15::wgk;
  using gk15::xgk;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  T fc = f(center);
  T result_gauss = wg[3] * fc;
  T result_kronrod = wgk[7] * fc;
  double result_abs = gk15::wgk[7] * std::abs(fc);

  T fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    T fsum = fv1[j] + fv2[j];
    result_kronrod += wgk[j] * fsum;
    result_abs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) result_gauss += wg[j / 2] * fsum;
  }

  PanelEstimate<T> out;
  out.a = a;
  out.b = b;
  out.value = half * result_kronrod;
  const double diff = std::abs(result_kronrod - result_gauss) * std::abs(half);
  result_abs *= std::abs(half);
  double err = diff;
  if (result_abs > 0.0 && diff > 0.0) {
    const double scaled = std::pow(200.0 * diff / result_abs, 1.5);
    err = result_abs * std::min(1.0, scaled);
  }
  out.error = err;
  return out;
}

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  std::size_t max_panels = 20000;
  // Initial panels are never wider than this (0 = no limit). Used to keep
  // oscillatory integrands resolved before adaptive refinement starts.
  double max_initial_width = 0.0;
};

// Adaptive Gauss-Kronrod integration over a list of contiguous breakpoints.
// Refines the worst panel until the summed error estimate meets the tolerance.
template <class T, class F>
T adaptive_integrate(F&& f, const std::vector<double>& breakpoints, const QuadratureOptions& opt,
                     const char* label = "integral") {
  std::vector<PanelEstimate<T>> panels;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double a = breakpoints[i];
    double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    std::size_t pieces = 1;
    if (opt.max_initial_width > 0.0) {
      pieces = static_cast<std::size_t>(std::ceil((b - a) / opt.max_initial_width));
      pieces = std::max<std::size_t>(pieces, 1);
    }
    if (pieces > opt.max_panels)
      throw AccuracyError(std::string(label) + ": oscillatory pre-split exceeds panel budget");
    const double w = (b - a) / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p)
      panels.push_back(gk15_panel<T>(f, a + w * static_cast<double>(p),
                                     a + w * static_cast<double>(p + 1)));
  }
  if (panels.empty()) return T{};

  auto total = [&panels]() {
    T v{};
    double e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair<T, double>(v, e);
  };

  for (;;) {
    auto [value, error] = total();
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    if (error <= tol) return value;
    if (panels.size() >= opt.max_panels)
      throw AccuracyError(std::string(label) + ": tolerance not reached within panel budget");
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& x, const auto& y) { return x.error < y.error; });
    const double a = worst->a, b = worst->b, mid = 0.5 * (a + b);
    *worst = gk15_panel<T>(f, a, mid);
    panels.push_back(gk15_panel<T>(f, mid, b));
  }
}

template <class T, class F>
T adaptive_integrate(F&& f, double a, double b, const QuadratureOptions& opt,
                     const char* label = "integral") {
  return adaptive_integrate<T>(std::forward<F>(f), std::vector<double>{a, b}, opt, label);
}

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Nodes by Newton iteration on the Legendre recurrence.
GaussLegendreRule gauss_legendre(std::size_t n);

}  // namespace nmosc
