#include "relaxometer/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace relaxometer {

namespace {

double offdiag_norm(const Eigen::MatrixXcd& h) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < h.rows(); ++p)
        for (Eigen::Index q = 0; q < h.cols(); ++q)
            if (p != q) s += std::norm(h(p, q));
    return std::sqrt(s);
}

}  // namespace

EighResult eigh(const Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    if (n != h.cols() || n > 8) throw std::invalid_argument("eigh: need square n <= 8");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("eigh: input not Hermitian");

    Eigen::MatrixXcd a = 0.5 * (h + h.adjoint());
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());

    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm(a) < 1e-14 * scale) {
            converged = true;
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const complex_t hpq = a(p, q);
                if (std::abs(hpq) < 1e-300) continue;
                // exact eigenvectors of the 2x2 block [[app, hpq], [hpq*, aqq]];
                // lam1 - app = rad - d is evaluated cancellation-free so small
                // rotations still zero the pivot to full precision
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double d = 0.5 * (app - aqq);
                const double rad = std::hypot(d, std::abs(hpq));
                double lam1_minus_app;
                if (d >= 0.0)
                    lam1_minus_app = rad + d > 0.0 ? std::norm(hpq) / (rad + d) : 0.0;
                else
                    lam1_minus_app = rad - d;
                complex_t alpha = hpq, beta = complex_t(lam1_minus_app, 0.0);
                double nrm = std::sqrt(std::norm(alpha) + std::norm(beta));
                if (nrm < 1e-300) { alpha = 1.0; beta = 0.0; nrm = 1.0; }
                alpha /= nrm;
                beta /= nrm;
                // columns (alpha, beta) and (-conj(beta), conj(alpha))
                for (Eigen::Index k = 0; k < n; ++k) {  // A <- A U
                    const complex_t akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * alpha + akq * beta;
                    a(k, q) = -akp * std::conj(beta) + akq * std::conj(alpha);
                }
                for (Eigen::Index k = 0; k < n; ++k) {  // A <- U^dag A
                    const complex_t apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(alpha) * apk + std::conj(beta) * aqk;
                    a(q, k) = -beta * apk + alpha * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {  // V <- V U
                    const complex_t vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * alpha + vkq * beta;
                    v(k, q) = -vkp * std::conj(beta) + vkq * std::conj(alpha);
                }
            }
        }
    }
    if (!converged && offdiag_norm(a) >= 1e-14 * scale)
        throw std::runtime_error("eigh: Jacobi iteration did not converge");

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

    EighResult out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<size_t>(i)], order[static_cast<size_t>(i)]).real();
        out.vectors.col(i) = v.col(order[static_cast<size_t>(i)]);
    }
    return out;
}

Eigen::MatrixXcd sqrtm_psd(const Eigen::MatrixXcd& rho) {
    EighResult es = eigh(rho);
    Eigen::VectorXd lam = es.values;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-9)
            throw std::invalid_argument("sqrtm_psd: input not PSD within tolerance");
        lam(i) = std::sqrt(std::max(0.0, lam(i)));
    }
    return es.vectors * lam.asDiagonal() * es.vectors.adjoint();
}

namespace {

Vector4 population_rhs(const Vector4& p, const Matrix4& w) {
    Vector4 dp;
    const Vector4 out_rates = w.colwise().sum().transpose();
    for (int m = 0; m < 4; ++m) {
        double in = 0.0;
        for (int n = 0; n < 4; ++n)
            if (n != m) in += p(n) * w(m, n);
        dp(m) = in - p(m) * out_rates(m);
    }
    return dp;
}

}  // namespace

Vector4 integrate_populations(const Vector4& p0, const Matrix4& w, double t_end, double dt) {
    if (t_end < 0.0 || !(dt > 0.0))
        throw std::invalid_argument("integrate_populations: bad t_end or dt");
    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    Vector4 p = p0;
    for (long i = 0; i < steps; ++i) {
        const Vector4 k1 = population_rhs(p, w);
        const Vector4 k2 = population_rhs(p + 0.5 * h * k1, w);
        const Vector4 k3 = population_rhs(p + 0.5 * h * k2, w);
        const Vector4 k4 = population_rhs(p + h * k3, w);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
}

double secular_step_bound(const RateTable& rates, const SpectralDecomposition& spec) {
    const double scale = std::max({spec.omega.cwiseAbs().maxCoeff(),
                                   rates.w.maxCoeff(), rates.gamma.maxCoeff(), 1e-30});
    return 0.01 / scale;
}

Matrix4c integrate_secular(const Matrix4c& rho0_eigen, const RateTable& rates,
                           const SpectralDecomposition& spec, double t_end, double dt) {
    if (t_end < 0.0 || !(dt > 0.0))
        throw std::invalid_argument("integrate_secular: bad t_end or dt");
    if (dt > secular_step_bound(rates, spec) * (1.0 + 1e-9))
        throw std::invalid_argument("integrate_secular: dt exceeds stability bound");

    auto rhs = [&](const Matrix4c& r) {
        Matrix4c dr;
        const Vector4 out_rates = rates.w.colwise().sum().transpose();
        for (int m = 0; m < 4; ++m) {
            complex_t in = 0.0;
            for (int n = 0; n < 4; ++n)
                if (n != m) in += r(n, n) * rates.w(m, n);
            dr(m, m) = in - r(m, m) * out_rates(m);
        }
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                if (m != n)
                    dr(m, n) = (complex_t(0.0, -spec.omega(m, n)) - rates.gamma(m, n)) * r(m, n);
        return dr;
    };

    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    Matrix4c r = rho0_eigen;
    for (long i = 0; i < steps; ++i) {
        const Matrix4c k1 = rhs(r);
        const Matrix4c k2 = rhs(r + 0.5 * h * k1);
        const Matrix4c k3 = rhs(r + 0.5 * h * k2);
        const Matrix4c k4 = rhs(r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return r;
}

double rate_quadrature_formula(double omega, const BathConfig& cfg) {
    return halfline_rate(omega, cfg);
}

namespace {

// psi^(n)(z) for n = 1..3, Re z > 0: shift until Re z >= 20, then the
// Bernoulli asymptotic series.
complex_t polygamma(int n, complex_t z) {
    static const std::array<double, 7> bern = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                               -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0,
                                               7.0 / 6.0};
    complex_t acc = 0.0;
    while (z.real() < 20.0) {
        double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
        double fact = (n == 1) ? 1.0 : (n == 2 ? 2.0 : 6.0);
        acc -= sgn * fact * std::pow(z, -(n + 1));
        z += 1.0;
    }
    const double sgn_lead = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n-1)
    const double fact_nm1 = (n == 1) ? 1.0 : (n == 2 ? 1.0 : 2.0);   // (n-1)!
    const double fact_n = (n == 1) ? 1.0 : (n == 2 ? 2.0 : 6.0);     // n!
    complex_t sum = fact_nm1 * std::pow(z, -n) + 0.5 * fact_n * std::pow(z, -(n + 1));
    for (int k = 1; k <= 7; ++k) {
        // (2k + n - 1)! / (2k)! = product of (2k+1) .. (2k+n-1)
        double num = 1.0;
        for (int j = 2 * k + 1; j <= 2 * k + n - 1; ++j) num *= j;
        sum += bern[static_cast<size_t>(k - 1)] * num * std::pow(z, -(2 * k + n));
    }
    return acc + sgn_lead * sum;
}

struct OhmicCorrelation {
    double kappa, beta, s;  // s = 1/omega_c

    // C(t), C'(t), C''(t) of <X(t)X>_beta for J(w) = kappa w exp(-w s).
    complex_t value(double t) const {
        const complex_t u(s, t);
        complex_t c = std::pow(u, -2);
        if (std::isfinite(beta))
            c += (2.0 / (beta * beta)) * polygamma(1, 1.0 + u / beta).real();
        return kappa * c;
    }
    complex_t deriv1(double t) const {
        const complex_t u(s, t);
        complex_t c = complex_t(0.0, -2.0) * std::pow(u, -3);
        if (std::isfinite(beta))
            c += (2.0 / (beta * beta)) *
                 (polygamma(2, 1.0 + u / beta) * complex_t(0.0, 1.0 / beta)).real();
        return kappa * c;
    }
    complex_t deriv2(double t) const {
        const complex_t u(s, t);
        complex_t c = -6.0 * std::pow(u, -4);
        if (std::isfinite(beta))
            c += (2.0 / (beta * beta)) *
                 (-polygamma(3, 1.0 + u / beta) / (beta * beta)).real();
        return kappa * c;
    }
};

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
const std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
const std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
complex_t gauss_panel(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    complex_t acc = 0.0;
    for (size_t i = 0; i < kGlNodes.size(); ++i) {
        acc += kGlWeights[i] * (f(mid + half * kGlNodes[i]) + f(mid - half * kGlNodes[i]));
    }
    return half * acc;
}

}  // namespace

double rate_quadrature_time_domain(double omega, const BathConfig& cfg) {
    cfg.validate();
    if (!(cfg.omega_c > 0.0))
        throw std::invalid_argument("rate_quadrature_time_domain: cutoff not resolved");
    if (std::abs(omega) < 1e-3)
        throw std::invalid_argument("rate_quadrature_time_domain: |omega| too small");

    const OhmicCorrelation corr{cfg.kappa, cfg.beta, 1.0 / cfg.omega_c};
    auto integrand = [&](double t) {
        return std::exp(complex_t(0.0, -omega * t)) * corr.value(t);
    };

    const double t_max = 2000.0;
    const double h_max = std::min(0.25, M_PI / (8.0 * (std::abs(omega) + 1.0)));
    complex_t total = 0.0;
    // graded panels resolve the cutoff-scale feature near t = 0
    double a = 0.0, h = corr.s / 8.0;
    while (a < t_max) {
        const double b = std::min(a + h, t_max);
        total += gauss_panel(integrand, a, b);
        a = b;
        h = std::min(h * 1.15, h_max);
    }
    // integration-by-parts tail, three terms
    const complex_t iw(0.0, omega);
    const complex_t phase = std::exp(complex_t(0.0, -omega * t_max));
    total += phase * (corr.value(t_max) / iw + corr.deriv1(t_max) / (iw * iw) +
                      corr.deriv2(t_max) / (iw * iw * iw));
    return total.real();
}

}  // namespace relaxometer
