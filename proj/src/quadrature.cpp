#include "spectral_hardy/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "spectral_hardy/linalg.hpp"

namespace spectral_hardy::quad {

template <typename Real>
JacobiFamily<Real>::JacobiFamily(Real alpha, Real beta, std::size_t max_degree)
    : alpha_(alpha), beta_(beta), diag_(max_degree + 1), off_(max_degree + 2) {
    if (!(alpha > Real(-1)) || !(beta > Real(-1))) throw std::domain_error("JacobiFamily: exponents must exceed -1");
    const Real a = alpha, b = beta;
    using std::lgamma;
    mu0_ = std::exp(lgamma(a + 1) + lgamma(b + 1) - lgamma(a + b + 2));
    // Monic recurrence on [-1,1] for (1-t)^a (1+t)^b, then mapped by x = (t+1)/2.
    for (std::size_t k = 0; k <= max_degree; ++k) {
        const Real n = Real(k);
        Real an;
        if (k == 0) {
            an = (b - a) / (a + b + 2);
        } else {
            const Real two = 2 * n + a + b;
            an = (b * b - a * a) / (two * (two + 2));
        }
        diag_[k] = (an + 1) / 2;
    }
    off_[0] = 0;
    for (std::size_t k = 1; k <= max_degree + 1; ++k) {
        const Real n = Real(k);
        Real bn;
        if (k == 1) {
            bn = 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
        } else {
            const Real two = 2 * n + a + b;
            bn = 4 * n * (n + a) * (n + b) * (n + a + b) / (two * two * (two + 1) * (two - 1));
        }
        off_[k] = std::sqrt(bn) / 2;
    }
}

template <typename Real>
void JacobiFamily<Real>::evaluate(std::size_t n, Real x, std::vector<Real>& vals, std::vector<Real>* ders) const {
    if (n > max_degree()) throw std::out_of_range("JacobiFamily::evaluate: degree too high");
    vals.assign(n + 1, Real(0));
    vals[0] = 1 / std::sqrt(mu0_);
    if (n >= 1) vals[1] = (x - diag_[0]) * vals[0] / off_[1];
    for (std::size_t k = 1; k < n; ++k)
        vals[k + 1] = ((x - diag_[k]) * vals[k] - off_[k] * vals[k - 1]) / off_[k + 1];
    if (!ders) return;
    auto& d = *ders;
    d.assign(n + 1, Real(0));
    if (n >= 1) d[1] = vals[0] / off_[1];
    for (std::size_t k = 1; k < n; ++k)
        d[k + 1] = ((x - diag_[k]) * d[k] + vals[k] - off_[k] * d[k - 1]) / off_[k + 1];
}

template <typename Real>
Rule<Real> gauss_jacobi(std::size_t n, Real alpha, Real beta) {
    if (n == 0) throw std::invalid_argument("gauss_jacobi: need at least one node");
    JacobiFamily<Real> fam(alpha, beta, n);
    // Golub-Welsch for initial nodes.
    std::vector<Real> d(fam.diagonal().begin(), fam.diagonal().begin() + n);
    std::vector<Real> e(n, Real(0));
    for (std::size_t k = 1; k < n; ++k) e[k] = fam.offdiagonal()[k];
    linalg::Matrix<Real> id(n);
    for (std::size_t k = 0; k < n; ++k) id(k, k) = 1;
    auto eig = linalg::tridiagonal_eigen(std::move(d), std::move(e), std::move(id));

    Rule<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    std::vector<Real> vals, ders;
    for (std::size_t i = 0; i < n; ++i) {
        Real x = eig.values[i];
        // Newton polish on p_n, then Christoffel weights 1 / sum p_k(x)^2.
        for (int it = 0; it < 3; ++it) {
            fam.evaluate(n, x, vals, &ders);
            if (ders[n] == Real(0)) break;
            const Real dx = vals[n] / ders[n];
            x -= dx;
        }
        fam.evaluate(n - 1, x, vals);
        Real sum = 0;
        for (std::size_t k = 0; k < n; ++k) sum += vals[k] * vals[k];
        rule.nodes[i] = x;
        rule.weights[i] = 1 / sum;
    }
    return rule;
}

Rule<double> gauss_legendre(std::size_t n, double a, double b) {
    auto r = gauss_jacobi<long double>(n, 0.0L, 0.0L);
    Rule<double> out;
    out.nodes.resize(n);
    out.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.nodes[i] = static_cast<double>(a + (b - a) * r.nodes[i]);
        out.weights[i] = static_cast<double>((b - a) * r.weights[i]);
    }
    return out;
}

template class JacobiFamily<double>;
template class JacobiFamily<long double>;
template Rule<double> gauss_jacobi<double>(std::size_t, double, double);
template Rule<long double> gauss_jacobi<long double>(std::size_t, long double, long double);

namespace {

constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

KronrodPanel kronrod15(double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    KronrodPanel p{};
    p.nodes[7] = c;
    p.kronrod[7] = h * kWgk[7];
    p.gauss[7] = h * kWg[3];
    for (int j = 0; j < 7; ++j) {
        p.nodes[j] = c - h * kXgk[j];
        p.nodes[14 - j] = c + h * kXgk[j];
        p.kronrod[j] = p.kronrod[14 - j] = h * kWgk[j];
        p.gauss[j] = p.gauss[14 - j] = (j % 2 == 1) ? h * kWg[j / 2] : 0.0;
    }
    return p;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    double total = first.value, err = first.error;
    heap.push(first);
    std::size_t count = 1;
    while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) && count < opts.max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            heap.push(worst);
            break;
        }
        Segment l = gk15(f, worst.a, mid), r = gk15(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // re-sum to shed accumulated cancellation in the running totals
    total = 0;
    err = 0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.error = err;
    res.intervals = count;
    res.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return res;
}

Result integrate(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                 const Options& opts) {
    Result res;
    res.converged = true;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const auto piece = integrate(f, breakpoints[i], breakpoints[i + 1], opts);
        res.value += piece.value;
        res.error += piece.error;
        res.intervals += piece.intervals;
        res.converged = res.converged && piece.converged;
    }
    return res;
}

}  // namespace spectral_hardy::quad
