#include "spectral_hardy/angular.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/linalg.hpp"
#include "spectral_hardy/quadrature.hpp"
#include "spectral_hardy/specfun.hpp"

namespace spectral_hardy::angular {

namespace {

using LD = long double;
using quad::JacobiFamily;

constexpr std::size_t kSingular = 2;

// Radial functions x^sigma (1-x)^tau p_j(x), x = u^2, where p_j is orthonormal
// for x^{2 sigma - s} (1-x)^{2 tau + (N-2)/2}.  The first block is regular
// (sigma = 0), the second carries the equator singularity (sigma = s).
struct Block {
    LD sigma;
    std::size_t count;
    JacobiFamily<LD> family;
};

struct RadialBasis {
    int N;
    LD s;
    LD tau;
    std::vector<Block> blocks;

    RadialBasis(int n_dim, LD s_, LD tau_, std::size_t size) : N(n_dim), s(s_), tau(tau_) {
        const LD half_pow = 2 * tau + LD(N - 2) / 2;
        const std::size_t n_sing = std::min(kSingular, size - 1);
        blocks.push_back({0, size - n_sing, JacobiFamily<LD>(half_pow, -s, size - n_sing)});
        blocks.push_back({s, n_sing, JacobiFamily<LD>(half_pow, s, n_sing)});
    }

    std::size_t size() const { return blocks[0].count + blocks[1].count; }

    // Values of all basis functions at x.
    void values(LD x, std::vector<LD>& out) const {
        out.clear();
        std::vector<LD> p;
        for (const auto& b : blocks) {
            b.family.evaluate(b.count - 1, x, p);
            const LD pre = (b.sigma == 0 ? LD(1) : std::pow(x, b.sigma)) * (tau == 0 ? LD(1) : std::pow(1 - x, tau));
            for (std::size_t j = 0; j < b.count; ++j) out.push_back(pre * p[j]);
        }
    }
};

// Exponent pair (beta on x, alpha on 1-x) of a weight.
struct WeightKey {
    LD beta, alpha;
    bool operator<(const WeightKey& o) const { return beta < o.beta || (beta == o.beta && alpha < o.alpha); }
};

class RuleCache {
public:
    explicit RuleCache(std::size_t n) : n_(n) {}
    const quad::Rule<LD>& get(LD beta, LD alpha) {
        const WeightKey key{beta, alpha};
        auto it = rules_.find(key);
        if (it == rules_.end()) it = rules_.emplace(key, quad::gauss_jacobi<LD>(n_, alpha, beta)).first;
        return it->second;
    }

private:
    std::size_t n_;
    std::map<WeightKey, quad::Rule<LD>> rules_;
};

// Energy, mass and equator-trace data for one radial basis.
struct ModeSystem {
    linalg::Matrix<LD> stiffness;
    linalg::Matrix<LD> mass;
    std::vector<LD> trace;
};

// Reduced derivative q with phi' = x^{e}(1-x)^{f} q.
LD reduced_derivative(LD sigma, LD tau, LD x, LD p, LD dp) {
    if (sigma == 0 && tau == 0) return dp;
    if (sigma == 0) return -tau * p + (1 - x) * dp;
    if (tau == 0) return sigma * p + x * dp;
    return sigma * (1 - x) * p - tau * x * p + x * (1 - x) * dp;
}

ModeSystem assemble_mode(const RadialBasis& basis, int mode, RuleCache& rules) {
    const std::size_t n = basis.size();
    ModeSystem sys{linalg::Matrix<LD>(n), linalg::Matrix<LD>(n), std::vector<LD>(n, 0)};
    const LD s = basis.s, tau = basis.tau;
    const LD dim = basis.N;
    std::vector<LD> pi, pj, dpi, dpj;

    std::size_t off_i = 0;
    for (std::size_t bi = 0; bi < basis.blocks.size(); ++bi) {
        const Block& a = basis.blocks[bi];
        std::size_t off_j = 0;
        for (std::size_t bj = 0; bj <= bi; ++bj) {
            const Block& b = basis.blocks[bj];
            auto accumulate = [&](linalg::Matrix<LD>& target, LD factor, LD beta, LD alpha, bool derivative) {
                const auto& rule = rules.get(beta, alpha);
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const LD x = rule.nodes[q];
                    a.family.evaluate(a.count - 1, x, pi, &dpi);
                    b.family.evaluate(b.count - 1, x, pj, &dpj);
                    if (derivative) {
                        for (std::size_t i = 0; i < a.count; ++i) pi[i] = reduced_derivative(a.sigma, tau, x, pi[i], dpi[i]);
                        for (std::size_t j = 0; j < b.count; ++j) pj[j] = reduced_derivative(b.sigma, tau, x, pj[j], dpj[j]);
                    }
                    const LD w = factor * rule.weights[q];
                    for (std::size_t i = 0; i < a.count; ++i)
                        for (std::size_t j = 0; j < b.count; ++j) target(off_i + i, off_j + j) += w * pi[i] * pj[j];
                }
            };
            const LD sig = a.sigma + b.sigma;
            accumulate(sys.mass, LD(0.5), sig - s, 2 * tau + (dim - 2) / 2, false);
            const LD ex = (a.sigma == 0 ? 0 : a.sigma - 1) + (b.sigma == 0 ? 0 : b.sigma - 1);
            const LD fx = tau == 0 ? 0 : 2 * (tau - 1);
            accumulate(sys.stiffness, LD(2), 1 - s + ex, dim / 2 + fx, true);
            if (mode != 0) accumulate(sys.stiffness, LD(mode) * mode / 2, sig - s, 2 * tau - 1, false);
            off_j += b.count;
        }
        off_i += a.count;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            sys.mass(j, i) = sys.mass(i, j);
            sys.stiffness(j, i) = sys.stiffness(i, j);
        }
    // Only the regular block is nonzero on the equator x = 0.
    std::vector<LD> p;
    const Block& reg = basis.blocks[0];
    reg.family.evaluate(reg.count - 1, 0, p);
    for (std::size_t j = 0; j < reg.count; ++j) sys.trace[j] = p[j];
    return sys;
}

// Lowest eigenpair of A c = mu M c, with c^T M c = 1.
std::pair<LD, std::vector<LD>> lowest_eigenpair(const linalg::Matrix<LD>& a, const linalg::Matrix<LD>& m) {
    const std::size_t n = a.size();
    try {
        auto eig = linalg::generalized_symmetric_eigen(a, m);
        std::vector<LD> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = eig.vectors(i, 0);
        return {eig.values[0], c};
    } catch (const std::domain_error&) {
    }
    // Canonical orthogonalisation: drop near-null directions of the mass matrix.
    auto me = linalg::symmetric_eigen(m);
    const LD top = me.values.back();
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < n; ++k)
        if (me.values[k] > LD(1e-15) * top) keep.push_back(k);
    const std::size_t r = keep.size();
    linalg::Matrix<LD> x_mat(n);  // only first r columns used
    for (std::size_t c = 0; c < r; ++c) {
        const LD scale = 1 / std::sqrt(me.values[keep[c]]);
        for (std::size_t i = 0; i < n; ++i) x_mat(i, c) = me.vectors(i, keep[c]) * scale;
    }
    linalg::Matrix<LD> red(r);
    std::vector<LD> ax(n);
    for (std::size_t cj = 0; cj < r; ++cj) {
        for (std::size_t i = 0; i < n; ++i) {
            LD v = 0;
            for (std::size_t k = 0; k < n; ++k) v += a(i, k) * x_mat(k, cj);
            ax[i] = v;
        }
        for (std::size_t ci = 0; ci < r; ++ci) {
            LD v = 0;
            for (std::size_t i = 0; i < n; ++i) v += x_mat(i, ci) * ax[i];
            red(ci, cj) = v;
        }
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j) red(i, j) = red(j, i) = (red(i, j) + red(j, i)) / 2;
    auto eig = linalg::symmetric_eigen(std::move(red));
    std::vector<LD> c(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) c[i] += x_mat(i, k) * eig.vectors(k, 0);
    return {eig.values[0], c};
}

// Real angular functions on the circle: 1, sqrt2 cos(m tau), sqrt2 sin(m tau).
struct AngularFunction {
    int mode;
    bool sine;
    double operator()(double tau) const {
        if (mode == 0) return 1.0;
        return std::numbers::sqrt2 * (sine ? std::sin(mode * tau) : std::cos(mode * tau));
    }
};

struct Discretisation {
    std::vector<AngularFunction> angular;
    std::vector<std::shared_ptr<const RadialBasis>> radial;  // one per angular function
};

struct SolveOutput {
    double mu1;
    std::vector<double> coeffs;
    double trace;
    std::function<double(double, double)> eigenfunction;
};

// Galerkin solve with the given angular functions; coupling[k][l] is
// (1/2pi) int a e_k e_l (just a for the axially symmetric problem).
SolveOutput solve(int N, double s, const std::vector<AngularFunction>& angular,
                  const std::vector<std::vector<double>>& coupling, std::size_t radial_size, std::size_t quad_points) {
    const std::size_t na = angular.size();
    const LD kappa = specfun::kappa_s(s);
    RuleCache rules(quad_points);

    Discretisation disc;
    disc.angular = angular;
    std::map<int, std::pair<std::shared_ptr<const RadialBasis>, ModeSystem>> per_mode;
    for (const auto& f : angular) {
        auto it = per_mode.find(f.mode);
        if (it == per_mode.end()) {
            auto basis = std::make_shared<const RadialBasis>(N, LD(s), LD(std::abs(f.mode)) / 2, radial_size);
            auto sys = assemble_mode(*basis, f.mode, rules);
            it = per_mode.emplace(f.mode, std::make_pair(basis, std::move(sys))).first;
        }
        disc.radial.push_back(it->second.first);
    }

    const std::size_t nr = radial_size;
    const std::size_t n = na * nr;
    linalg::Matrix<LD> a(n), m(n);
    for (std::size_t k = 0; k < na; ++k) {
        const ModeSystem& sk = per_mode.at(angular[k].mode).second;
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nr; ++j) {
                a(k * nr + i, k * nr + j) = sk.stiffness(i, j);
                m(k * nr + i, k * nr + j) = sk.mass(i, j);
            }
        for (std::size_t l = 0; l < na; ++l) {
            if (coupling[k][l] == 0.0) continue;
            const ModeSystem& sl = per_mode.at(angular[l].mode).second;
            const LD c = kappa * coupling[k][l];
            for (std::size_t i = 0; i < nr; ++i) {
                if (sk.trace[i] == 0) continue;
                for (std::size_t j = 0; j < nr; ++j) a(k * nr + i, l * nr + j) -= c * sk.trace[i] * sl.trace[j];
            }
        }
    }
    auto [mu, c] = lowest_eigenpair(a, m);

    // Normalise to unit weighted L^2 norm on the half-sphere and fix the sign
    // by the equator trace (its tau-average for several modes).
    LD trace = 0;
    for (std::size_t k = 0; k < na; ++k) {
        if (angular[k].mode != 0) continue;
        const ModeSystem& sk = per_mode.at(0).second;
        for (std::size_t i = 0; i < nr; ++i) trace += c[k * nr + i] * sk.trace[i];
    }
    LD scale = 1 / std::sqrt(LD(sphere_area(N)));
    if (trace < 0) scale = -scale;
    SolveOutput out;
    out.mu1 = static_cast<double>(mu);
    out.trace = static_cast<double>(trace * scale);
    out.coeffs.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = static_cast<double>(c[i] * scale);

    auto coeffs = out.coeffs;
    out.eigenfunction = [disc, coeffs, nr](double u, double tau) {
        const LD x = LD(u) * u;
        std::vector<LD> vals;
        LD total = 0;
        std::shared_ptr<const RadialBasis> last;
        for (std::size_t k = 0; k < disc.angular.size(); ++k) {
            if (disc.radial[k] != last) {
                disc.radial[k]->values(x, vals);
                last = disc.radial[k];
            }
            LD radial = 0;
            for (std::size_t i = 0; i < nr; ++i) radial += coeffs[k * nr + i] * vals[i];
            total += radial * disc.angular[k](tau);
        }
        return static_cast<double>(total);
    };
    return out;
}

std::vector<AngularFunction> circle_functions(int modes) {
    std::vector<AngularFunction> out{{0, false}};
    for (int m = 1; m <= modes; ++m) {
        out.push_back({m, false});
        out.push_back({m, true});
    }
    return out;
}

// (1/2pi) int_0^{2pi} a e_k e_l dtau by the trapezoidal rule, exact for the
// trigonometric polynomials involved.
std::vector<std::vector<double>> coupling_matrix(const CouplingDescriptor& a, const std::vector<AngularFunction>& fns) {
    int top = 0;
    for (const auto& f : fns) top = std::max(top, f.mode);
    const std::size_t points = static_cast<std::size_t>(4 * top + 2 * a.bandwidth() + 8);
    std::vector<double> av(points);
    for (std::size_t q = 0; q < points; ++q) av[q] = a.evaluate(2.0 * std::numbers::pi * q / points);
    const std::size_t n = fns.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
            double sum = 0;
            for (std::size_t q = 0; q < points; ++q) {
                const double t = 2.0 * std::numbers::pi * q / points;
                sum += av[q] * fns[k](t) * fns[l](t);
            }
            const double v = sum / points;
            c[k][l] = c[l][k] = std::abs(v) < 1e-15 * (std::abs(a.mean()) + 1) ? 0.0 : v;
        }
    return c;
}

Mu1Result finish(const SolveOutput& fine, const SolveOutput& coarse, double extra_error, const SpectralConfig& cfg) {
    Mu1Result r;
    r.mu1 = fine.mu1;
    r.coeffs = fine.coeffs;
    r.trace = fine.trace;
    r.eigenfunction = fine.eigenfunction;
    r.est_error = std::max(std::abs(fine.mu1 - coarse.mu1), extra_error);
    r.converged = std::isfinite(r.mu1) && r.est_error < cfg.tolerance;
    r.basis_size = cfg.basis_size;
    return r;
}

std::size_t coarse_size(std::size_t k) { return std::max<std::size_t>(kSingular + 1, k / 2); }

}  // namespace

void SpectralConfig::validate() const {
    if (basis_size < 4) throw RangeError("basis_size must be at least 4");
    if (basis_size > 400) throw RangeError("basis_size above 400 is outside the supported scale");
    if (quad_points != 0 && quad_points < 2 * basis_size + 8) throw RangeError("quad_points must be >= 2*basis_size + 8");
    if (!(tolerance > 0.0)) throw RangeError("tolerance must be positive");
}

std::size_t SpectralConfig::effective_quad_points() const {
    return quad_points == 0 ? 2 * basis_size + 8 : quad_points;
}

CouplingDescriptor CouplingDescriptor::constant(double value) {
    if (!std::isfinite(value)) throw RangeError("coupling must be finite");
    CouplingDescriptor c;
    c.value_ = value;
    return c;
}

CouplingDescriptor CouplingDescriptor::fourier(const std::map<int, std::complex<double>>& coeffs) {
    CouplingDescriptor c;
    c.constant_ = false;
    double scale = 0;
    for (const auto& [k, v] : coeffs) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw RangeError("Fourier coefficient not finite");
        scale = std::max(scale, std::abs(v));
    }
    const double tol = 1e-12 * std::max(1.0, scale);
    for (const auto& [k, v] : coeffs) {
        if (k == 0 && std::abs(v.imag()) > tol) throw RangeError("Fourier coefficient c_0 must be real");
        auto partner = coeffs.find(-k);
        if (partner != coeffs.end() && std::abs(partner->second - std::conj(v)) > tol)
            throw RangeError("Fourier coefficients are not Hermitian (c_{-k} != conj(c_k))");
    }
    for (const auto& [k, v] : coeffs) {
        if (v == std::complex<double>(0.0)) continue;
        if (k == 0) {
            c.coeffs_[0] = {v.real(), 0.0};
        } else {
            c.coeffs_[k] = v;
            c.coeffs_[-k] = std::conj(v);
        }
    }
    c.value_ = c.coefficient(0).real();
    return c;
}

CouplingDescriptor CouplingDescriptor::load_fourier_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open Fourier coupling file: " + path);
    std::map<int, std::complex<double>> coeffs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        ss.imbue(std::locale::classic());
        int k;
        double re, im;
        if (!(ss >> k)) continue;
        if (!(ss >> re >> im)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected \"k re im\"");
        if (coeffs.count(k)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate mode");
        coeffs[k] = {re, im};
    }
    return fourier(coeffs);
}

double CouplingDescriptor::mean() const { return value_; }

int CouplingDescriptor::bandwidth() const noexcept { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

std::complex<double> CouplingDescriptor::coefficient(int k) const {
    if (constant_) return k == 0 ? std::complex<double>(value_) : std::complex<double>(0.0);
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? std::complex<double>(0.0) : it->second;
}

double CouplingDescriptor::evaluate(double tau) const {
    if (constant_) return value_;
    double v = coefficient(0).real();
    for (const auto& [k, c] : coeffs_)
        if (k > 0) v += 2.0 * (c.real() * std::cos(k * tau) - c.imag() * std::sin(k * tau));
    return v;
}

std::string CouplingDescriptor::describe() const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    if (constant_) {
        os << "const:" << value_;
    } else {
        os << "fourier[";
        bool first = true;
        for (const auto& [k, c] : coeffs_) {
            if (k < 0) continue;
            os << (first ? "" : ";") << k << ':' << c.real() << ',' << c.imag();
            first = false;
        }
        os << ']';
    }
    return os.str();
}

double sphere_area(int N) {
    const double h = 0.5 * N;
    return 2.0 * std::pow(std::numbers::pi, h) / specfun::gamma(h);
}

void check_problem(int N, double s) {
    if (N < 1) throw RangeError("dimension must be >= 1");
    specfun::check_order_s(s);
    if (!(N > 2.0 * s)) throw RangeError("need N > 2s");
}

Mu1Result mu1_constant(int N, double s, double a, const SpectralConfig& cfg) {
    check_problem(N, s);
    cfg.validate();
    if (!std::isfinite(a)) throw RangeError("coupling must be finite");
    const std::vector<AngularFunction> zonal{{0, false}};
    const std::vector<std::vector<double>> c{{a}};
    const std::size_t nq = cfg.effective_quad_points();
    auto fine = solve(N, s, zonal, c, cfg.basis_size, nq);
    auto coarse = solve(N, s, zonal, c, coarse_size(cfg.basis_size), nq);
    return finish(fine, coarse, 0.0, cfg);
}

Mu1Result mu1_fourier(double s, const CouplingDescriptor& coupling, const SpectralConfig& cfg) {
    check_problem(2, s);
    cfg.validate();
    const int band = coupling.bandwidth();
    const int modes =
        cfg.fourier_modes != 0 ? static_cast<int>(cfg.fourier_modes) : std::clamp(6 * band, 2, 12);
    // Keep the dense system at desk scale.
    const std::size_t angular_count = 2 * static_cast<std::size_t>(modes) + 1;
    const std::size_t radial =
        std::min(cfg.basis_size, std::max<std::size_t>(16, 400 / angular_count));
    const std::size_t nq = std::max(cfg.effective_quad_points(), 2 * radial + 8);

    const auto fns = circle_functions(modes);
    const auto c = coupling_matrix(coupling, fns);
    auto fine = solve(2, s, fns, c, radial, nq);
    auto coarse = solve(2, s, fns, c, coarse_size(radial), nq);
    // Mode-truncation estimate: drop the outermost band of coupled modes.
    double mode_error = 0.0;
    if (band > 0 && modes > band) {
        const auto fns_less = circle_functions(modes - band);
        auto trunc = solve(2, s, fns_less, coupling_matrix(coupling, fns_less), radial, nq);
        mode_error = std::abs(trunc.mu1 - fine.mu1);
    }
    SpectralConfig used = cfg;
    used.basis_size = radial;
    return finish(fine, coarse, mode_error, used);
}

Mu1Result mu1(int N, double s, const CouplingDescriptor& coupling, const SpectralConfig& cfg) {
    if (coupling.is_constant()) return mu1_constant(N, s, coupling.mean(), cfg);
    if (N != 2) throw RangeError("Fourier couplings are supported only for N = 2");
    return mu1_fourier(s, coupling, cfg);
}

double lambda_of_alpha(int N, double s, double alpha) {
    check_problem(N, s);
    const double top = 0.5 * (N - 2.0 * s);
    if (!(alpha > 0.0 && alpha < top)) throw RangeError("alpha must lie in (0, (N-2s)/2)");
    using specfun::gamma;
    return std::pow(2.0, 2.0 * s) * gamma((N + 2 * s + 2 * alpha) / 4) / gamma((N - 2 * s - 2 * alpha) / 4) *
           gamma((N + 2 * s - 2 * alpha) / 4) / gamma((N - 2 * s + 2 * alpha) / 4);
}

double lambda_endpoint(int N, double s) {
    check_problem(N, s);
    const double r = specfun::gamma((N + 2 * s) / 4) / specfun::gamma((N - 2 * s) / 4);
    return std::pow(2.0, 2.0 * s) * r * r;
}

double alpha_of_lambda(int N, double s, double lam) {
    const double top_lam = lambda_endpoint(N, s);
    if (!(lam > 0.0 && lam < top_lam)) throw RangeError("lambda must lie in (0, lambda(0+))");
    const double top = 0.5 * (N - 2.0 * s);
    auto f = [&](double alpha) {
        if (alpha <= 0.0) return top_lam - lam;
        if (alpha >= top) return -lam;
        return lambda_of_alpha(N, s, alpha) - lam;
    };
    std::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, top, top_lam - lam, -lam,
                                                      boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (lo + hi);
}

double critical_coupling(int N, double s) {
    check_problem(N, s);
    if (!(N > 4.0 * s)) throw RangeError("critical coupling needs N > 4s");
    return std::pow(2.0, 2.0 * s) * specfun::gamma((N + 4 * s) / 4) / specfun::gamma((N - 4 * s) / 4);
}

}  // namespace spectral_hardy::angular
