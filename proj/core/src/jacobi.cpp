#include "monas/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "monas/errors.hpp"

namespace monas {

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    if (n < 1 || static_cast<std::size_t>(n) * n != a.size())
        throw ConfigError("matrix size does not match n*n");
    if (n == 1) return {a[0]};

    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += at(p, q) * at(p, q);
        return s;
    };
    double diag2 = 0.0;
    for (int p = 0; p < n; ++p) diag2 += at(p, p) * at(p, p);
    const double tol = 1e-30 * std::max(diag2 + 2.0 * off_norm2(), 1e-300);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_norm2() > tol; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = arp - s * (arq + tau * arp);
                    at(p, r) = at(r, p);
                    at(r, q) = arq + s * (arp - tau * arq);
                    at(q, r) = at(r, q);
                }
            }
        }
    }

    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) ev[static_cast<std::size_t>(p)] = at(p, p);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

} // namespace monas
