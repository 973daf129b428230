#include "propersplit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "propersplit/errors.hpp"

namespace propersplit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_like(double magnitude, double carrier) {
    return carrier >= 0.0 ? std::fabs(magnitude) : -std::fabs(magnitude);
}

// In-place Householder reduction to upper Hessenberg form.
void hessenberg_reduce(Matrix& h) {
    const int n = h.rows();
    for (int k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (int i = k + 1; i < n; ++i) norm += h(i, k) * h(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = h(k + 1, k) >= 0.0 ? -norm : norm;
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] = h(i, k);
        v[static_cast<std::size_t>(k + 1)] -= alpha;
        double vtv = 0.0;
        for (int i = k + 1; i < n; ++i) vtv += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        if (vtv == 0.0) continue;
        const double beta = 2.0 / vtv;
        // H <- P H
        for (int j = 0; j < n; ++j) {
            double w = 0.0;
            for (int i = k + 1; i < n; ++i) w += v[static_cast<std::size_t>(i)] * h(i, j);
            w *= beta;
            for (int i = k + 1; i < n; ++i) h(i, j) -= w * v[static_cast<std::size_t>(i)];
        }
        // H <- H P
        for (int i = 0; i < n; ++i) {
            double w = 0.0;
            for (int j = k + 1; j < n; ++j) w += h(i, j) * v[static_cast<std::size_t>(j)];
            w *= beta;
            for (int j = k + 1; j < n; ++j) h(i, j) -= w * v[static_cast<std::size_t>(j)];
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns the
// eigenvalues in deflation order. Sweep budget is 100 * n in total, with
// an exceptional ad hoc shift every tenth stalled iteration on a block.
std::vector<Eigenvalue> hqr(Matrix& a, int n, int budget) {
    std::vector<Eigenvalue> out;
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(a(i, j));
    if (anorm == 0.0) anorm = 1.0;

    int sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::fabs(a(l - 1, l - 1)) + std::fabs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(a(l, l - 1)) <= kEps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = a(nn, nn);
            if (l == nn) {
                out.push_back({x + t, 0.0});
                --nn;
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_like(z, p);
                        double r1 = x + z;
                        double r2 = (z != 0.0) ? x - w / z : x + z;
                        out.push_back({r1, 0.0});
                        out.push_back({r2, 0.0});
                    } else {
                        out.push_back({x + p, z});
                        out.push_back({x + p, -z});
                    }
                    nn -= 2;
                } else {
                    if (sweeps >= budget) {
                        throw NonConvergence("eigenvalue sweep budget exhausted after " +
                                             std::to_string(sweeps) + " QR steps");
                    }
                    if (its > 0 && its % 10 == 0) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        double s = std::fabs(a(nn, nn - 1)) + std::fabs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    ++sweeps;
                    double p = 0.0, q = 0.0, r = 0.0;
                    int m = 0;
                    for (m = nn - 2; m >= l; --m) {
                        double z = a(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - rr - ss;
                        r = a(m + 2, m + 1);
                        double scale = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= scale;
                        q /= scale;
                        r /= scale;
                        if (m == l) break;
                        const double u = std::fabs(a(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        const double v =
                            std::fabs(p) * (std::fabs(a(m - 1, m - 1)) + std::fabs(z) + std::fabs(a(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
                            double x2 = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (x2 != 0.0) {
                                p /= x2;
                                q /= x2;
                                r /= x2;
                            }
                            x = x2;
                        }
                        double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double y2 = q / s;
                        double z2 = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            double pp = a(k, j) + q * a(k + 1, j);
                            if (k != nn - 1) {
                                pp += r * a(k + 2, j);
                                a(k + 2, j) -= pp * z2;
                            }
                            a(k + 1, j) -= pp * y2;
                            a(k, j) -= pp * x;
                        }
                        const int mmin = std::min(nn, k + 3);
                        for (int i = l; i <= mmin; ++i) {
                            double pp = x * a(i, k) + y2 * a(i, k + 1);
                            if (k != nn - 1) {
                                pp += z2 * a(i, k + 2);
                                a(i, k + 2) -= pp * r;
                            }
                            a(i, k + 1) -= pp * q;
                            a(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1 && nn >= 0);
    }
    return out;
}

}  // namespace

double Eigenvalue::modulus() const { return std::hypot(re, im); }

Spectrum eigenvalues(const Matrix& a, const ToleranceConfig&) {
    if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues require a square matrix");
    const int n = a.rows();
    Spectrum spec;
    if (n == 1) {
        spec.eigenvalues = {{a(0, 0), 0.0}};
        spec.spectral_radius = std::fabs(a(0, 0));
        return spec;
    }
    Matrix h = a;
    hessenberg_reduce(h);
    spec.eigenvalues = hqr(h, n, 100 * n);
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), [](const Eigenvalue& x, const Eigenvalue& y) {
        const double mx = x.modulus();
        const double my = y.modulus();
        if (mx != my) return mx > my;
        if (x.re != y.re) return x.re > y.re;
        return x.im > y.im;
    });
    for (const Eigenvalue& ev : spec.eigenvalues) {
        spec.spectral_radius = std::max(spec.spectral_radius, ev.modulus());
    }
    return spec;
}

double spectral_radius(const Matrix& a, const ToleranceConfig& cfg) {
    return eigenvalues(a, cfg).spectral_radius;
}

}  // namespace propersplit
