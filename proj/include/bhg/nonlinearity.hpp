#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace bhg {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scalar nonlinearity g with primitive G, G(0) = 0.
///
/// Subclasses must provide G and g. Everything else has a generic
/// implementation (finite differences, adaptive quadrature) that built-in
/// models override with closed forms. Sign convention of the split:
/// g_plus(s) = max(g, 0) for s >= 0 and min(g, 0) for s < 0, so that
/// G_plus(s) = int_0^s g_plus >= 0, and g_minus = g_plus - g.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string name() const = 0;
    virtual double G(double s) const = 0;
    virtual double g(double s) const = 0;
    virtual double dg(double s) const;

    virtual double G_plus(double s) const;
    // int_0^s phi_eps(t) g_minus(t) dt with phi_eps(t) = min(1, (|t|/eps)^k)
    virtual double G_minus_eps(double s, double eps, double k) const;

    // Throws std::invalid_argument when the model is unusable in dimension N.
    virtual void validate(int N) const;
    // A point where G > 0, if known in closed form.
    virtual std::optional<double> positivity_witness() const { return std::nullopt; }

    double g_plus(double s) const;
    double g_minus(double s) const;

    // Generic quadrature routes, exposed so closed forms can be cross-checked.
    double G_plus_quadrature(double s) const;
    double G_minus_eps_quadrature(double s, double eps, double k) const;
};

/// G(s) = s^2 log|s|
class LogModel final : public Model {
public:
    std::string name() const override { return "log"; }
    double G(double s) const override;
    double g(double s) const override;
    double dg(double s) const override;
    double G_plus(double s) const override;
    double G_minus_eps(double s, double eps, double k) const override;
    std::optional<double> positivity_witness() const override;
};

/// G(s) = |s|^p / p - mu s^2 / 2
class PowerMassModel final : public Model {
public:
    PowerMassModel(double p, double mu);
    std::string name() const override { return "power_mass"; }
    double p() const { return p_; }
    double mu() const { return mu_; }
    double G(double s) const override;
    double g(double s) const override;
    double dg(double s) const override;
    double G_plus(double s) const override;
    double G_minus_eps(double s, double eps, double k) const override;
    void validate(int N) const override;
    std::optional<double> positivity_witness() const override;

private:
    double p_;
    double mu_;
    double b_;  // sign change of g on (0, inf)
};

/// Evaluator bundle: a model together with the dimension fixing 2** = 2N/(N-4).
class Nonlinearity {
public:
    Nonlinearity(int N, std::shared_ptr<const Model> model);
    static Nonlinearity logarithmic(int N);
    static Nonlinearity power_mass(int N, double p, double mu);

    int dimension() const { return N_; }
    double critical() const { return crit_; }
    // exponent 2** - 1 of the cutoff phi_eps
    double cutoff_exponent() const { return crit_ - 1.0; }
    const Model& model() const { return *model_; }
    bool is_log() const;
    std::string describe() const;

private:
    int N_;
    double crit_;
    std::shared_ptr<const Model> model_;
};

double eval_G(const Nonlinearity& nl, double s);
double eval_g(const Nonlinearity& nl, double s);
double eval_dg(const Nonlinearity& nl, double s);
double eval_G_plus(const Nonlinearity& nl, double s);
double eval_G_minus(const Nonlinearity& nl, double s);

/// Throws std::invalid_argument unless 0 < eps < 1.
double eval_phi_eps(const Nonlinearity& nl, double eps, double s);
double eval_G_minus_eps(const Nonlinearity& nl, double eps, double s);
/// G_plus - G_minus_eps; with eps empty this is G itself.
double eval_G_eps(const Nonlinearity& nl, std::optional<double> eps, double s);
/// g_plus - phi_eps g_minus; with eps empty this is g itself.
double eval_g_eps(const Nonlinearity& nl, std::optional<double> eps, double s);
/// derivative of eval_g_eps in s
double eval_dg_eps(const Nonlinearity& nl, std::optional<double> eps, double s);

/// Sampled diagnostic for the growth conditions. Finite sampling can only
/// falsify the asymptotic conditions, never certify them.
struct GrowthReport {
    int sample_count = 0;
    double s_min = 0.0;
    double s_max = 0.0;
    // |g(s)| <= c (1 + |s|^{2**-1}) on the samples
    double c_bound = 0.0;
    bool bounded_ok = false;
    // sup of G_plus(s)/|s|^{2**} over the lowest and highest sample decades
    double ratio_near_zero = 0.0;
    double ratio_near_infinity = 0.0;
    bool small_ok = false;
    bool large_ok = false;
    std::optional<double> witness;  // xi_0 with G(xi_0) > 0
    double G_at_witness = 0.0;
    bool positive_ok = false;

    bool all_ok() const { return bounded_ok && small_ok && large_ok && positive_ok; }
};

GrowthReport check_growth_conditions(const Nonlinearity& nl, int sample_count);

}  // namespace bhg
