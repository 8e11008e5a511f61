#ifndef WEDGETRACK_NUMERICS_HPP
#define WEDGETRACK_NUMERICS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

// Small deterministic kernels shared by the wave-curve and solver code.
// Everything here is plain double arithmetic, no state, no randomness.

namespace wedgetrack::num {

// Brent's method on [a, b]; f(a) and f(b) must bracket a root.
inline double brent(const std::function<double(double)>& f, double a, double b,
                    double tol = 0.0, int maxit = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::runtime_error("brent: root not bracketed");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
  }
  return b;
}

// Expand a bracket from x0 toward hi (or lo) until f changes sign.
// Returns the first interval [a, b] with a sign change, stepping
// geometrically; throws if the domain edge is reached first.
inline std::pair<double, double> bracket_from(
    const std::function<double(double)>& f, double x0, double limit,
    double first_step) {
  double a = x0, fa = f(a);
  if (fa == 0.0) return {a, a};
  double step = first_step;
  const double dir = (limit > x0) ? 1.0 : -1.0;
  for (int it = 0; it < 200; ++it) {
    double b = a + dir * step;
    if ((dir > 0 && b >= limit) || (dir < 0 && b <= limit)) b = limit;
    const double fb = f(b);
    if (fa * fb <= 0.0) return {a, b};
    if (b == limit) break;
    a = b;
    fa = fb;
    step *= 2.0;
  }
  throw std::runtime_error("bracket_from: no sign change before domain edge");
}

// Gaussian elimination with partial pivoting, fixed size.
template <int N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> A,
                                   std::array<double, N> b) {
  for (int k = 0; k < N; ++k) {
    int piv = k;
    for (int i = k + 1; i < N; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    if (A[piv][k] == 0.0) throw std::runtime_error("solve_linear: singular");
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < N; ++i) {
      const double m = A[i][k] / A[k][k];
      for (int j = k; j < N; ++j) A[i][j] -= m * A[k][j];
      b[i] -= m * b[k];
    }
  }
  std::array<double, N> x{};
  for (int i = N - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < N; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

// Damped Newton with central-difference Jacobian. Residual must map
// R^N -> R^N; converges when the max-norm residual drops below tol.
template <int N>
struct NewtonResult {
  std::array<double, N> x;
  double residual;
  int iterations;
  bool converged;
};

template <int N>
NewtonResult<N> newton(
    const std::function<std::array<double, N>(const std::array<double, N>&)>& F,
    std::array<double, N> x, double tol = 1e-12, int maxit = 50,
    double fd_step = 1e-7) {
  auto maxabs = [](const std::array<double, N>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  };
  std::array<double, N> r = F(x);
  double rn = maxabs(r);
  int it = 0;
  for (; it < maxit && rn > tol; ++it) {
    std::array<std::array<double, N>, N> J{};
    for (int j = 0; j < N; ++j) {
      const double h = fd_step * std::max(1.0, std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const auto rp = F(xp), rm = F(xm);
      for (int i = 0; i < N; ++i) J[i][j] = (rp[i] - rm[i]) / (2.0 * h);
    }
    std::array<double, N> rhs;
    for (int i = 0; i < N; ++i) rhs[i] = -r[i];
    std::array<double, N> dx;
    try {
      dx = solve_linear<N>(J, rhs);
    } catch (const std::runtime_error&) {
      return {x, rn, it, false};
    }
    double lam = 1.0;
    for (int half = 0; half < 12; ++half) {
      auto xt = x;
      for (int i = 0; i < N; ++i) xt[i] += lam * dx[i];
      std::array<double, N> rt;
      bool ok = true;
      try {
        rt = F(xt);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) {
        const double rtn = maxabs(rt);
        if (rtn < rn || half == 11) {
          x = xt;
          r = rt;
          rn = rtn;
          break;
        }
      }
      lam *= 0.5;
    }
  }
  return {x, rn, it, rn <= tol};
}

// Classic Dormand-Prince RK5(4) stage set, used with a fixed substep count;
// step choice is left to the caller so evaluations stay deterministic.
template <int N>
std::array<double, N> dopri5(
    const std::function<std::array<double, N>(const std::array<double, N>&)>& f,
    std::array<double, N> y, double length, int substeps) {
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  const double h = length / substeps;
  auto axpy = [](std::array<double, N> base,
                 std::initializer_list<std::pair<double, const std::array<double, N>*>> terms,
                 double hh) {
    for (auto& t : terms)
      for (int i = 0; i < N; ++i) base[i] += hh * t.first * (*t.second)[i];
    return base;
  };
  for (int s = 0; s < substeps; ++s) {
    const auto k1 = f(y);
    const auto k2 = f(axpy(y, {{a21, &k1}}, h));
    const auto k3 = f(axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    const auto k4 = f(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    const auto k5 =
        f(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    const auto k6 = f(axpy(
        y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    y = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
  }
  return y;
}

}  // namespace wedgetrack::num

#endif
