#pragma once

// Test-only reference implementations, independent of the library code paths
// they check: an adaptive Simpson quadrature for overlap integrals, a
// split-step spectral propagator on a grid for wavepacket evolution, and a
// deterministic LCG for reproducible random draws.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sgsim::testing {

// ---------------------------------------------------------------------------
// deterministic RNG

class Lcg {
  public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}
    double uniform() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return lo * std::pow(hi / lo, uniform());
    }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature for complex integrands

namespace detail {

inline std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, std::complex<double> fa,
                                    std::complex<double> fm, std::complex<double> fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline std::complex<double> adapt(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, std::complex<double> fa,
                                  std::complex<double> fm, std::complex<double> fb,
                                  std::complex<double> whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const std::complex<double> flm = f(lm), frm = f(rm);
    const std::complex<double> left = simpson(f, a, m, fa, flm, fm);
    const std::complex<double> right = simpson(f, m, b, fm, frm, fb);
    const std::complex<double> delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive quadrature depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

inline std::complex<double> integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol = 1e-13, int depth = 48) {
    const double m = 0.5 * (a + b);
    const std::complex<double> fa = f(a), fm = f(m), fb = f(b);
    return detail::adapt(f, a, b, fa, fm, fb, detail::simpson(f, a, b, fa, fm, fb), tol,
                         depth);
}

// ---------------------------------------------------------------------------
// radix-2 FFT and split-step propagator

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be 2^k");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                           (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

struct GridPacket {
    double sigma_x = 0.0;
    double x_c = 0.0;
    double a = 0.0;  // quadratic phase, fitted near the center
    double b = 0.0;  // linear phase
    double norm = 0.0;
};

/// Strang split-step evolution of a Gaussian-shape packet under
/// V = +- 1/2 m omega^2 x^2 (sign < 0 for the inverted well).
/// Works in whatever consistent unit system the inputs use.
inline GridPacket split_step_evolve(double hbar, double mass, double omega, double sign,
                                    double t, double sigma0, double a0, double b0,
                                    double x0, std::size_t n = 1 << 14,
                                    double half_width = 40.0, int steps = 20000) {
    std::vector<std::complex<double>> psi(n);
    const double L = 2.0 * half_width;
    const double dx = L / static_cast<double>(n);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = -half_width + dx * static_cast<double>(i);

    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const double re = -(x - x0) * (x - x0) / (4.0 * sigma0 * sigma0);
        const double im = a0 / 4.0 * x * x + b0 * x;
        psi[i] = std::exp(std::complex<double>(re, im));
        nrm += std::norm(psi[i]) * dx;
    }
    for (auto& p : psi) p /= std::sqrt(nrm);

    const double dt = t / steps;
    std::vector<std::complex<double>> expv(n), expt(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = 0.5 * sign * mass * omega * omega * xs[i] * xs[i];
        expv[i] = std::exp(std::complex<double>(0.0, -v * dt / (2.0 * hbar)));
        const double k = 2.0 * std::numbers::pi *
                         (i < n / 2 ? static_cast<double>(i)
                                    : static_cast<double>(i) - static_cast<double>(n)) /
                         L;
        expt[i] = std::exp(std::complex<double>(0.0, -hbar * k * k * dt / (2.0 * mass)));
    }
    for (int s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) psi[i] *= expv[i];
        fft_inplace(psi, false);
        for (std::size_t i = 0; i < n; ++i) psi[i] *= expt[i];
        fft_inplace(psi, true);
        for (std::size_t i = 0; i < n; ++i) psi[i] *= expv[i];
    }

    GridPacket out;
    double norm = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = std::norm(psi[i]) * dx;
        norm += rho;
        mean += xs[i] * rho;
    }
    mean /= norm;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        var += (xs[i] - mean) * (xs[i] - mean) * std::norm(psi[i]) * dx;
    var /= norm;
    out.norm = norm;
    out.x_c = mean;
    out.sigma_x = std::sqrt(var);

    // quadratic fit of the unwrapped phase within one sigma of the center
    std::vector<double> px, py;
    double prev = std::arg(psi[0]);
    double unwrapped = prev;
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = std::arg(psi[i]);
        double d = ph - prev;
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        unwrapped += d;
        prev = ph;
        if (std::abs(xs[i] - mean) < out.sigma_x) {
            px.push_back(xs[i]);
            py.push_back(unwrapped);
        }
    }
    // least squares for py = c2 x^2 + c1 x + c0
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double x = px[i], y = py[i];
        const double x2 = x * x;
        s0 += 1.0; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
        t0 += y; t1 += x * y; t2 += x2 * y;
    }
    // solve the 3x3 normal equations by Cramer's rule
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * s1 - s2 * s2);
    const double c2 = (t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - s1 * t0) +
                       s2 * (t1 * s1 - s2 * t0)) /
                      det;
    const double c1 = (s4 * (t1 * s0 - t0 * s1) - t2 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * t0 - t1 * s2)) /
                      det;
    out.a = 4.0 * c2;
    out.b = c1;
    return out;
}

}  // namespace sgsim::testing
