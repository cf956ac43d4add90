#include "qmse/optimize.hpp"
#include "qmse/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qmse {

namespace {

constexpr double kRhoBegin = 1.0; // initial simplex edge length
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Minimizer {
    const Objective& f;
    const int d;
    const int max_evals;
    const double rho_end;

    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
    MinimizeResult res;

    Minimizer(const Objective& fn, int dim, int budget, double tol)
        : f(fn), d(dim), max_evals(budget), rho_end(tol) {}

    bool budget_left() const { return res.n_evals < max_evals; }

    double eval(const std::vector<double>& x) {
        double v = f(x);
        ++res.n_evals;
        if (!std::isfinite(v))
            fail("objective-not-finite",
                 "objective returned a non-finite value after " +
                     std::to_string(res.n_evals) + " evaluations");
        if (res.trace.empty() || v < res.fx) {
            res.fx = v;
            res.x = x;
            res.trace.push_back(v);
        }
        return v;
    }

    bool try_eval(const std::vector<double>& x, double& v) {
        if (!budget_left()) return false;
        v = eval(x);
        return true;
    }

    // working radius: farthest vertex distance from the best one
    double radius(int b) const {
        double r = 0.0;
        for (int i = 0; i <= d; ++i) {
            if (i == b) continue;
            double s = 0.0;
            for (int c = 0; c < d; ++c) {
                double t = pts[i][c] - pts[b][c];
                s += t * t;
            }
            r = std::max(r, s);
        }
        return std::sqrt(r);
    }

    MinimizeResult run(std::vector<double> x0) {
        pts.assign(d + 1, x0);
        vals.assign(d + 1, 0.0);
        vals[0] = eval(x0);
        for (int i = 1; i <= d && budget_left(); ++i) {
            pts[i][i - 1] += kRhoBegin;
            vals[i] = eval(pts[i]);
        }

        std::vector<int> order(d + 1);
        while (budget_left()) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return vals[a] < vals[b]; });
            const int b = order[0];
            const int sw = order[std::max(d - 1, 0)];
            const int w = order[d];
            if (radius(b) < rho_end) break;

            // centroid of the face opposite the worst vertex; candidate
            // steps lie on the descent ray of the interpolated model
            std::vector<double> c(d, 0.0);
            for (int i = 0; i <= d; ++i) {
                if (i == w) continue;
                for (int k = 0; k < d; ++k) c[k] += pts[i][k];
            }
            for (int k = 0; k < d; ++k) c[k] /= d;
            auto along = [&](double t) {
                std::vector<double> x(d);
                for (int k = 0; k < d; ++k) x[k] = c[k] + t * (c[k] - pts[w][k]);
                return x;
            };

            std::vector<double> xr = along(kReflect);
            double fr;
            if (!try_eval(xr, fr)) break;

            if (fr < vals[b]) {
                std::vector<double> xe = along(kExpand);
                double fe;
                if (!try_eval(xe, fe)) break;
                if (fe < fr) {
                    pts[w] = std::move(xe);
                    vals[w] = fe;
                } else {
                    pts[w] = std::move(xr);
                    vals[w] = fr;
                }
            } else if (fr < vals[sw]) {
                pts[w] = std::move(xr);
                vals[w] = fr;
            } else {
                const bool outside = fr < vals[w];
                std::vector<double> xc = along(outside ? kContract : -kContract);
                double fc;
                if (!try_eval(xc, fc)) break;
                if (outside ? fc <= fr : fc < vals[w]) {
                    pts[w] = std::move(xc);
                    vals[w] = fc;
                } else {
                    // radius shrink toward the best vertex
                    for (int i = 0; i <= d && budget_left(); ++i) {
                        if (i == b) continue;
                        for (int k = 0; k < d; ++k)
                            pts[i][k] = pts[b][k] + kShrink * (pts[i][k] - pts[b][k]);
                        vals[i] = eval(pts[i]);
                    }
                }
            }
        }
        return std::move(res);
    }
};

} // namespace

MinimizeResult minimize(const Objective& f, std::vector<double> x0, int max_iters,
                        double tol) {
    if (x0.empty()) fail("bad-dimension", "minimize needs at least one variable");
    if (max_iters < 1) fail("bad-budget", "max_iters must be positive");
    if (!(tol > 0.0)) fail("bad-tolerance", "tol must be positive");
    Minimizer m(f, static_cast<int>(x0.size()), max_iters, tol);
    return m.run(std::move(x0));
}

} // namespace qmse
