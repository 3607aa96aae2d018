#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idl/errors.hpp"
#include "idl/quadrature.hpp"

namespace idl {

// Dense symmetric matrix, used for the localized-damping mass matrices K_omega.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    void matvec(std::span<const double> v, std::span<double> out) const {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += at(i, j) * v[j];
            out[i] = s;
        }
    }

    double quadratic_form(std::span<const double> v) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += at(i, j) * v[j];
            s += v[i] * row;
        }
        return s;
    }
};

// The pair (u, u_t) in modal coordinates.
struct SystemState {
    double time = 0.0;
    std::vector<double> position;
    std::vector<double> velocity;
};

// Monotone feedback with slopes pinned between lower_slope and upper_slope:
// g(s) = (A+B)/2 * s + (B-A)/2 * tanh(s). Reduces to g(s) = A*s when A == B.
class FeedbackG {
public:
    FeedbackG(double lower_slope, double upper_slope)
        : lower_(lower_slope), upper_(upper_slope) {
        if (lower_ <= 0.0) throw NonPositive("feedback: lower slope must be positive");
        if (upper_ < lower_) throw SlopeOrder("feedback: upper slope below lower slope");
    }

    double lower_slope() const { return lower_; }
    double upper_slope() const { return upper_; }
    bool is_identity() const { return lower_ == 1.0 && upper_ == 1.0; }

    double operator()(double s) const {
        return 0.5 * (lower_ + upper_) * s + 0.5 * (upper_ - lower_) * std::tanh(s);
    }

    void apply(std::span<const double> v, std::span<double> out) const {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (*this)(v[i]);
    }

private:
    double lower_, upper_;
};

inline std::vector<double> eval_feedback_g(const FeedbackG& g, std::span<const double> v) {
    std::vector<double> out(v.size());
    g.apply(v, out);
    return out;
}

// Spectral realization of the coercive operator A: eigenvalues plus, for the
// 1-D Dirichlet preset, eigenfunctions phi_k(x) = sqrt(2/L) sin(k pi x / L)
// tabulated on a composite Gauss-Legendre grid.
class SpectralOperator {
public:
    static SpectralOperator dirichlet_1d(int mode_count, double length,
                                         int nodes_per_wavelength = 8) {
        if (mode_count < 1) throw EmptySpectrum("operator: mode count must be >= 1");
        if (length <= 0.0) throw NonPositive("operator: domain length must be positive");
        SpectralOperator op;
        op.length_ = length;
        op.nodes_per_wavelength_ = nodes_per_wavelength;
        op.eigenvalues_.resize(mode_count);
        for (int k = 0; k < mode_count; ++k) {
            double kk = (k + 1) * M_PI / length;
            op.eigenvalues_[k] = kk * kk;
        }
        op.quadrature_ = op.grid_for(0.0, length);
        op.tabulate_eigenfunctions();
        return op;
    }

    static SpectralOperator custom(std::vector<double> eigenvalues) {
        if (eigenvalues.empty()) throw EmptySpectrum("operator: empty eigenvalue list");
        for (double ev : eigenvalues) {
            if (!(ev > 0.0))
                throw NonPositiveEigenvalue("operator: eigenvalue " + std::to_string(ev) +
                                            " violates coercivity");
        }
        std::sort(eigenvalues.begin(), eigenvalues.end());
        SpectralOperator op;
        op.eigenvalues_ = std::move(eigenvalues);
        return op;
    }

    int mode_count() const { return static_cast<int>(eigenvalues_.size()); }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    double poincare_lambda1() const { return eigenvalues_.front(); }
    double lambda_max() const { return eigenvalues_.back(); }

    bool has_geometry() const { return quadrature_.has_value(); }

    double length() const {
        require_geometry();
        return length_;
    }

    const Quadrature& quadrature() const {
        require_geometry();
        return *quadrature_;
    }

    double eigenfunction(int k, double x) const {
        require_geometry();
        return std::sqrt(2.0 / length_) * std::sin((k + 1) * M_PI * x / length_);
    }

    // phi_k at quadrature node i.
    double phi(int k, std::size_t i) const { return phi_[static_cast<std::size_t>(k) * quadrature_->nodes.size() + i]; }

    // Evaluates u(x_i) = sum_k a_k phi_k(x_i) on the quadrature grid.
    std::vector<double> grid_values(std::span<const double> coeffs) const {
        require_geometry();
        check_dimension(coeffs.size());
        const std::size_t q = quadrature_->nodes.size();
        std::vector<double> u(q, 0.0);
        for (int k = 0; k < mode_count(); ++k) {
            const double ak = coeffs[k];
            if (ak == 0.0) continue;
            for (std::size_t i = 0; i < q; ++i) u[i] += ak * phi(k, i);
        }
        return u;
    }

    // K_omega[j][k] = integral over (a, b) of phi_j phi_k.
    Matrix region_mass_matrix(double a, double b) const {
        require_geometry();
        if (!(0.0 <= a && a < b && b <= length_))
            throw Error("operator: region must satisfy 0 <= a < b <= L");
        const double frac = (b - a) / length_;
        const int pts = std::max(32, static_cast<int>(std::ceil(
                                         nodes_per_wavelength_ * mode_count() / 2.0 * frac)));
        Quadrature sub = composite_gauss_legendre(a, b, pts);
        const int n = mode_count();
        Matrix K(n);
        for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
            const double x = sub.nodes[i];
            const double w = sub.weights[i];
            for (int j = 0; j < n; ++j) {
                const double pj = eigenfunction(j, x);
                for (int k = j; k < n; ++k) K.at(j, k) += w * pj * eigenfunction(k, x);
            }
        }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < j; ++k) K.at(j, k) = K.at(k, j);
        return K;
    }

    void check_dimension(std::size_t d) const {
        if (d != eigenvalues_.size())
            throw DimensionMismatch("operator: vector has dimension " + std::to_string(d) +
                                    ", expected " + std::to_string(eigenvalues_.size()));
    }

private:
    std::vector<double> eigenvalues_;
    double length_ = 0.0;
    int nodes_per_wavelength_ = 8;
    std::optional<Quadrature> quadrature_;
    std::vector<double> phi_;  // mode-major table at quadrature nodes

    Quadrature grid_for(double a, double b) const {
        // mode N has N/2 wavelengths in the domain
        const int pts = std::max(32, static_cast<int>(std::ceil(
                                         nodes_per_wavelength_ * mode_count() / 2.0)));
        return composite_gauss_legendre(a, b, pts);
    }

    void tabulate_eigenfunctions() {
        const std::size_t q = quadrature_->nodes.size();
        phi_.resize(static_cast<std::size_t>(mode_count()) * q);
        for (int k = 0; k < mode_count(); ++k)
            for (std::size_t i = 0; i < q; ++i)
                phi_[static_cast<std::size_t>(k) * q + i] = eigenfunction(k, quadrature_->nodes[i]);
    }

    void require_geometry() const {
        if (!quadrature_)
            throw MissingGeometry("operator: custom spectrum carries no spatial grid");
    }
};

struct NormSet {
    double v_sq_position = 0.0;  // ||u||_V^2 = sum lambda_k a_k^2
    double h_sq_position = 0.0;  // ||u||_H^2
    double h_sq_velocity = 0.0;  // ||u_t||_H^2
};

inline NormSet norms(const SpectralOperator& op, const SystemState& state) {
    op.check_dimension(state.position.size());
    op.check_dimension(state.velocity.size());
    NormSet ns;
    for (int k = 0; k < op.mode_count(); ++k) {
        ns.v_sq_position += op.eigenvalues()[k] * state.position[k] * state.position[k];
        ns.h_sq_position += state.position[k] * state.position[k];
        ns.h_sq_velocity += state.velocity[k] * state.velocity[k];
    }
    return ns;
}

// ||v||_W^2 realized as v^T K v; the distributed case (W = H) passes K = nullptr.
inline double w_norm_sq(const Matrix* K, std::span<const double> v) {
    if (!K) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    }
    if (K->n != static_cast<int>(v.size()))
        throw DimensionMismatch("w_norm: mask dimension mismatch");
    return K->quadratic_form(v);
}

struct NonlinearityEval {
    std::vector<double> modal_force;  // projection of f(u) = -|u|^p u
    double functional = 0.0;          // F(u) = integral of -|u|^{p+2}/(p+2), always <= 0
};

inline NonlinearityEval eval_nonlinearity(const SpectralOperator& op,
                                          std::span<const double> position, double p) {
    if (p < 0.0) throw NonPositive("nonlinearity: exponent p must be >= 0");
    if (!op.has_geometry())
        throw MissingGeometry("nonlinearity: pointwise evaluation needs a spatial grid");
    op.check_dimension(position.size());
    const Quadrature& quad = op.quadrature();
    const std::vector<double> u = op.grid_values(position);
    NonlinearityEval out;
    out.modal_force.assign(position.size(), 0.0);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        const double ui = u[i];
        const double mag = std::abs(ui);
        const double fu = ui == 0.0 ? 0.0 : -std::pow(mag, p) * ui;
        const double w = quad.weights[i];
        out.functional += w * (ui == 0.0 ? 0.0 : -std::pow(mag, p + 2.0) / (p + 2.0));
        if (fu != 0.0) {
            for (int k = 0; k < op.mode_count(); ++k) out.modal_force[k] += w * fu * op.phi(k, i);
        }
    }
    return out;
}

}  // namespace idl
