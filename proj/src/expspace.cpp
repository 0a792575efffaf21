#include "bernstein/expspace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <tuple>
#include <utility>

namespace bernstein {

namespace {

double int_pow(double v, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= v;
    return r;
}

std::complex<double> int_pow(std::complex<double> v, int e) {
    std::complex<double> r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= v;
    return r;
}

// power * (power-1) * ... * (power-terms+1)
double falling_factorial(int power, int terms) {
    double r = 1.0;
    for (int t = 0; t < terms; ++t) r *= static_cast<double>(power - t);
    return r;
}

}  // namespace

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
        std::ostringstream msg;
        msg << "interval requires finite a < b, got [" << a_ << ", " << b_ << "]";
        throw PreconditionFailed(msg.str());
    }
}

Spectrum::Spectrum(std::vector<SpectrumEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw PreconditionFailed("spectrum: at least one eigenvalue required");
    for (const auto& e : entries_) {
        if (!std::isfinite(e.re) || !std::isfinite(e.im)) {
            throw PreconditionFailed("spectrum: eigenvalues must be finite");
        }
        if (e.mult < 1) throw PreconditionFailed("spectrum: multiplicities must be positive");
    }
    std::sort(entries_.begin(), entries_.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
        return std::make_tuple(x.re, std::abs(x.im), x.im) <
               std::make_tuple(y.re, std::abs(y.im), y.im);
    });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i - 1].re == entries_[i].re && entries_[i - 1].im == entries_[i].im) {
            throw PreconditionFailed(
                "spectrum: duplicate eigenvalue entry; encode repetition via mult");
        }
    }
    for (const auto& e : entries_) {
        if (e.im == 0.0) continue;
        const int partner = multiplicity(e.re, -e.im);
        if (partner != e.mult) {
            std::ostringstream msg;
            msg << "eigenvalue " << e.re << (e.im >= 0 ? "+" : "-") << std::abs(e.im)
                << "i needs a conjugate partner of equal multiplicity";
            throw ConjugationViolation(msg.str());
        }
    }
    dimension_ = 0;
    for (const auto& e : entries_) dimension_ += e.mult;
    if (dimension_ < 2) {
        throw PreconditionFailed("spectrum: total multiplicity must be at least 2");
    }
}

double Spectrum::max_imag() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.im));
    return m;
}

int Spectrum::multiplicity(double re, double im) const noexcept {
    for (const auto& e : entries_) {
        if (e.re == re && e.im == im) return e.mult;
    }
    return 0;
}

std::vector<RealBasisFunction> build_space(const Spectrum& spectrum) {
    std::vector<RealBasisFunction> out;
    out.reserve(static_cast<std::size_t>(spectrum.dimension()));
    // Entries are already sorted by (re, |im|, im); negative-im entries are
    // realized together with their positive partner.
    for (const auto& e : spectrum.entries()) {
        if (e.im < 0.0) continue;
        if (e.im == 0.0) {
            for (int j = 0; j < e.mult; ++j) {
                out.push_back({RealBasisFunction::Kind::PolyExp, j, e.re, 0.0});
            }
        } else {
            for (int j = 0; j < e.mult; ++j) {
                out.push_back({RealBasisFunction::Kind::PolyExpCos, j, e.re, e.im});
                out.push_back({RealBasisFunction::Kind::PolyExpSin, j, e.re, e.im});
            }
        }
    }
    return out;
}

double RealBasisFunction::deriv(double x, int order) const {
    // Leibniz on x^power * core(x); core differentiates through powers of
    // lambda = alpha + i*beta, so every term is closed-form.
    double total = 0.0;
    const int top = std::min(order, power);
    for (int i = 0; i <= top; ++i) {
        const double poly_part = falling_factorial(power, i) * int_pow(x, power - i);
        const int core_order = order - i;
        double core = 0.0;
        if (kind == Kind::PolyExp) {
            core = int_pow(alpha, core_order) * std::exp(alpha * x);
        } else {
            const std::complex<double> lambda{alpha, beta};
            const std::complex<double> w =
                int_pow(lambda, core_order) * std::exp(std::complex<double>{alpha * x, beta * x});
            core = (kind == Kind::PolyExpCos) ? w.real() : w.imag();
        }
        total += binomial(order, i) * poly_part * core;
    }
    return total;
}

Space::Space(Spectrum spectrum)
    : spectrum_(std::move(spectrum)), functions_(build_space(spectrum_)) {}

std::shared_ptr<const Space> Space::make(Spectrum spectrum) {
    return std::make_shared<const Space>(std::move(spectrum));
}

double Space::deriv(std::size_t i, double x, int order) const {
    return functions_.at(i).deriv(x, order);
}

std::size_t Space::find(RealBasisFunction::Kind kind, int power, double alpha,
                        double beta) const noexcept {
    for (std::size_t i = 0; i < functions_.size(); ++i) {
        const auto& f = functions_[i];
        if (f.kind == kind && f.power == power && f.alpha == alpha && f.beta == beta) return i;
    }
    return npos;
}

SpaceElement::SpaceElement(std::shared_ptr<const Space> space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
    if (!space_) throw PreconditionFailed("space element: null space");
    if (coeffs_.size() != space_->size()) {
        std::ostringstream msg;
        msg << "space element: " << coeffs_.size() << " coefficients for a space of dimension "
            << space_->size();
        throw PreconditionFailed(msg.str());
    }
}

double SpaceElement::deriv(double x, int order) const {
    double total = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0.0) continue;
        total += coeffs_[i] * space_->deriv(i, x, order);
    }
    return total;
}

namespace {

void require_same_space(const SpaceElement& lhs, const SpaceElement& rhs) {
    if (lhs.space() != rhs.space()) {
        throw PreconditionFailed("space elements belong to different spaces");
    }
}

}  // namespace

SpaceElement& SpaceElement::operator+=(const SpaceElement& rhs) {
    require_same_space(*this, rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

SpaceElement& SpaceElement::operator-=(const SpaceElement& rhs) {
    require_same_space(*this, rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

SpaceElement& SpaceElement::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

double binomial(int n, int k) noexcept {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<double>(n - k + i);
        r /= static_cast<double>(i);
    }
    return r;
}

double quotient_deriv(const SpaceElement& f, const SpaceElement& g, double x, int order,
                      double denom_floor) {
    const double gx = g.deriv(x, 0);
    if (std::abs(gx) < denom_floor) {
        std::ostringstream msg;
        msg << "quotient derivative: denominator " << gx << " at x = " << x
            << " is below the floor " << denom_floor;
        throw DivisionByZero(msg.str());
    }
    std::vector<double> q(static_cast<std::size_t>(order) + 1);
    q[0] = f.deriv(x, 0) / gx;
    for (int m = 1; m <= order; ++m) {
        double s = f.deriv(x, m);
        for (int j = 1; j <= m; ++j) {
            s -= binomial(m, j) * g.deriv(x, j) * q[static_cast<std::size_t>(m - j)];
        }
        q[static_cast<std::size_t>(m)] = s / gx;
    }
    return q[static_cast<std::size_t>(order)];
}

double mn_bound(const Spectrum& spectrum) noexcept {
    const double m = spectrum.max_imag();
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 3.14159265358979323846 / m;
}

namespace {

// Zero count of one sample on a grid: runs of near-zero points count once
// when the sign flips across them (or at the boundary), twice when the sign
// is preserved but the first derivative flips (a tangency); plain sign flips
// between solidly nonzero neighbours count once.
int count_zeros(const std::vector<double>& values, const std::vector<double>& derivs,
                double near_zero_tol) {
    const std::size_t n = values.size();
    int zeros = 0;
    int prev_sign = 0;  // sign of the last solidly nonzero value seen
    std::size_t i = 0;
    while (i < n) {
        if (std::abs(values[i]) <= near_zero_tol) {
            const std::size_t run_start = i;
            while (i < n && std::abs(values[i]) <= near_zero_tol) ++i;
            const bool at_boundary = (run_start == 0) || (i == n);
            const int next_sign = (i < n) ? (values[i] > 0.0 ? 1 : -1) : 0;
            if (at_boundary) {
                zeros += 1;
            } else if (prev_sign != 0 && next_sign != 0 && prev_sign != next_sign) {
                zeros += 1;
            } else {
                // Same sign on both sides: a tangency iff the slope flips.
                const double d_before = derivs[run_start == 0 ? 0 : run_start - 1];
                const double d_after = derivs[i < n ? i : n - 1];
                if (d_before * d_after < 0.0) zeros += 2;
            }
            if (next_sign != 0) prev_sign = next_sign;
            continue;
        }
        const int sign = values[i] > 0.0 ? 1 : -1;
        if (prev_sign != 0 && sign != prev_sign) zeros += 1;
        prev_sign = sign;
        ++i;
    }
    return zeros;
}

}  // namespace

EctReport verify_ect_heuristic(const Spectrum& spectrum, const Interval& iv, int trials,
                               int grid_points, std::uint64_t seed) {
    const int dim = spectrum.dimension();
    if (trials < 1) throw PreconditionFailed("ect heuristic: trials must be >= 1");
    if (grid_points < 10 * dim) {
        throw PreconditionFailed("ect heuristic: grid must have at least 10*(n+1) points");
    }

    const auto space = Space::make(spectrum);
    std::vector<double> xs(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        xs[static_cast<std::size_t>(i)] =
            iv.a + iv.length() * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    }

    EctReport report;
    report.allowed_zeros = dim - 1;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> coeffs(static_cast<std::size_t>(dim));
    std::vector<double> values(xs.size());
    std::vector<double> derivs(xs.size());

    for (int trial = 0; trial < trials; ++trial) {
        double norm2 = 0.0;
        for (double& c : coeffs) {
            c = gauss(rng);
            norm2 += c * c;
        }
        if (norm2 == 0.0) continue;
        const double inv_norm = 1.0 / std::sqrt(norm2);
        for (double& c : coeffs) c *= inv_norm;

        const SpaceElement sample(space, coeffs);
        double scale = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            values[i] = sample.deriv(xs[i], 0);
            derivs[i] = sample.deriv(xs[i], 1);
            scale = std::max(scale, std::abs(values[i]));
        }
        if (scale == 0.0) continue;

        const int zeros = count_zeros(values, derivs, 1e-9 * scale);
        if (zeros > report.worst_zeros) {
            report.worst_zeros = zeros;
            if (zeros > report.allowed_zeros) {
                report.ok = false;
                report.witness = coeffs;
            }
        }
    }
    return report;
}

}  // namespace bernstein
