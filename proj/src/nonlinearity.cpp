#include "bhg/nonlinearity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bhg/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

namespace bhg {

namespace {

constexpr double kQuadTol = 1e-12;

// int_a^b f with a <= b by globally adaptive Gauss-Kronrod bisection; pieces
// whose estimate is at roundoff level are not split. Throws when the summed
// estimate misses max(1e-12, 1e-12 * int |f|).
template <class F>
double adaptive(F f, double a, double b) {
    if (b <= a) return 0.0;
    struct Piece {
        double a, b, v, err, l1;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    auto rule = [&](double lo, double hi) {
        Piece p{lo, hi, 0.0, 0.0, 0.0};
        p.v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &p.err, &p.l1);
        if (p.err <= 64.0 * std::numeric_limits<double>::epsilon() * p.l1) p.err = 0.0;
        return p;
    };
    std::priority_queue<Piece> heap;
    heap.push(rule(a, b));
    double err = heap.top().err, l1 = heap.top().l1;
    constexpr int kMaxPieces = 4000;
    for (int n = 1; n < kMaxPieces && err > 1e-3 * kQuadTol * std::max(1.0, l1); ++n) {
        const Piece p = heap.top();
        if (p.err == 0.0) break;
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            heap.push(Piece{p.a, p.b, p.v, 0.0, p.l1});
            continue;
        }
        const Piece left = rule(p.a, m), right = rule(m, p.b);
        err += left.err + right.err - p.err;
        l1 += left.l1 + right.l1 - p.l1;
        heap.push(left);
        heap.push(right);
    }
    double v = 0.0;
    err = 0.0;
    l1 = 0.0;
    for (; !heap.empty(); heap.pop()) {
        v += heap.top().v;
        err += heap.top().err;
        l1 += heap.top().l1;
    }
    if (!std::isfinite(v) || err > kQuadTol * std::max(1.0, l1))
        throw QuadratureError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "], error estimate " + std::to_string(err));
    return v;
}

// int_0^s f, splitting at the given interior magnitudes.
template <class F>
double signed_integral(F f, double s, std::vector<double> breaks) {
    const double x = std::abs(s);
    std::vector<double> pts{0.0};
    std::sort(breaks.begin(), breaks.end());
    for (double b : breaks)
        if (b > 0.0 && b < x) pts.push_back(b);
    pts.push_back(x);
    double acc = 0.0;
    if (s >= 0.0) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += adaptive(f, pts[i], pts[i + 1]);
        return acc;
    }
    auto mirrored = [&](double t) { return f(-t); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += adaptive(mirrored, pts[i], pts[i + 1]);
    // int_0^s f(t) dt = -int_0^{|s|} f(-t) dt
    return -acc;
}

// magnitudes in (0, |s|) where g changes sign on the side of s, located by a
// log-spaced scan and bisection
template <class G>
std::vector<double> sign_changes(G g, double s) {
    const double x = std::abs(s), side = s < 0.0 ? -1.0 : 1.0;
    std::vector<double> out;
    if (!(x > 0.0)) return out;
    constexpr int kScan = 256;
    const double lo = x * 1e-12;
    double a = lo, ga = g(side * a);
    for (int j = 1; j <= kScan; ++j) {
        const double b = j == kScan ? x : lo * std::pow(x / lo, double(j) / kScan);
        const double gb = g(side * b);
        if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
            double l = a, r = b, gl = ga;
            for (int it = 0; it < 200 && r - l > 4.0 * std::numeric_limits<double>::epsilon() * r; ++it) {
                const double m = 0.5 * (l + r), gm = g(side * m);
                if ((gm < 0.0) == (gl < 0.0) && gm != 0.0) {
                    l = m;
                    gl = gm;
                } else {
                    r = m;
                }
            }
            if (r < x) out.push_back(r);
        }
        a = b;
        ga = gb;
    }
    return out;
}

double phi(double eps, double k, double s) {
    const double x = std::abs(s);
    return x >= eps ? 1.0 : std::pow(x / eps, k);
}

}  // namespace

double Model::dg(double s) const {
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    return (g(s + h) - g(s - h)) / (2.0 * h);
}

double Model::g_plus(double s) const {
    const double v = g(s);
    return s >= 0.0 ? std::max(v, 0.0) : std::min(v, 0.0);
}

double Model::g_minus(double s) const { return g_plus(s) - g(s); }

double Model::G_plus(double s) const { return G_plus_quadrature(s); }

double Model::G_minus_eps(double s, double eps, double k) const {
    return G_minus_eps_quadrature(s, eps, k);
}

void Model::validate(int) const {}

double Model::G_plus_quadrature(double s) const {
    return signed_integral([this](double t) { return g_plus(t); }, s,
                           sign_changes([this](double t) { return g(t); }, s));
}

double Model::G_minus_eps_quadrature(double s, double eps, double k) const {
    auto breaks = sign_changes([this](double t) { return g(t); }, s);
    breaks.push_back(eps);
    return signed_integral([&](double t) { return phi(eps, k, t) * g_minus(t); }, s, breaks);
}

// ---- logarithmic model -------------------------------------------------

namespace {
const double kLogA = std::exp(-0.5);  // sign change of g on (0, inf)
}

double LogModel::G(double s) const { return s == 0.0 ? 0.0 : s * s * std::log(std::abs(s)); }

double LogModel::g(double s) const {
    return s == 0.0 ? 0.0 : 2.0 * s * std::log(std::abs(s)) + s;
}

double LogModel::dg(double s) const {
    return 2.0 * std::log(std::max(std::abs(s), 1e-300)) + 3.0;
}

double LogModel::G_plus(double s) const {
    const double x = std::abs(s);
    return x > kLogA ? x * x * std::log(x) + 0.5 / std::numbers::e : 0.0;
}

double LogModel::G_minus_eps(double s, double eps, double k) const {
    const double x = std::abs(s);
    double acc = 0.0;
    const double m1 = std::min({x, eps, kLogA});
    if (m1 > 0.0) {
        // eps^{-k} int_0^{m1} t^k (-2 t log t - t) dt
        const double q = k + 2.0;
        const double lm = std::log(m1);
        acc -= std::pow(m1 / eps, k) * m1 * m1 * (2.0 * (lm / q - 1.0 / (q * q)) + 1.0 / q);
    }
    const double m2 = std::min(x, kLogA);
    if (eps < m2) acc -= m2 * m2 * std::log(m2) - eps * eps * std::log(eps);
    return acc;
}

std::optional<double> LogModel::positivity_witness() const { return std::numbers::e; }

// ---- power-mass model --------------------------------------------------

PowerMassModel::PowerMassModel(double p, double mu) : p_(p), mu_(mu) {
    if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("power_mass: p must exceed 2");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("power_mass: mu must be positive");
    b_ = std::pow(mu, 1.0 / (p - 2.0));
}

double PowerMassModel::G(double s) const {
    const double x = std::abs(s);
    return std::pow(x, p_) / p_ - 0.5 * mu_ * x * x;
}

double PowerMassModel::g(double s) const {
    const double x = std::abs(s);
    return std::copysign(std::pow(x, p_ - 1.0), s) - mu_ * s;
}

double PowerMassModel::dg(double s) const {
    return (p_ - 1.0) * std::pow(std::abs(s), p_ - 2.0) - mu_;
}

double PowerMassModel::G_plus(double s) const {
    const double x = std::abs(s);
    return x > b_ ? G(x) - G(b_) : 0.0;
}

double PowerMassModel::G_minus_eps(double s, double eps, double k) const {
    const double x = std::abs(s);
    double acc = 0.0;
    const double m1 = std::min({x, eps, b_});
    if (m1 > 0.0) {
        // eps^{-k} int_0^{m1} t^k (mu t - t^{p-1}) dt
        acc += std::pow(m1 / eps, k) *
               (mu_ * m1 * m1 / (k + 2.0) - std::pow(m1, p_) / (k + p_));
    }
    const double m2 = std::min(x, b_);
    if (eps < m2) {
        auto F = [this](double t) { return 0.5 * mu_ * t * t - std::pow(t, p_) / p_; };
        acc += F(m2) - F(eps);
    }
    return acc;
}

void PowerMassModel::validate(int N) const {
    const double crit = critical_exponent(N);
    if (!(p_ < crit)) {
        std::ostringstream os;
        os << "power_mass: p = " << p_ << " must be below the critical exponent " << crit
           << " for N = " << N;
        throw std::invalid_argument(os.str());
    }
}

std::optional<double> PowerMassModel::positivity_witness() const {
    // G(s) > 0 iff s > (p mu / 2)^{1/(p-2)}; report the next power of two
    const double threshold = std::pow(0.5 * p_ * mu_, 1.0 / (p_ - 2.0));
    return std::exp2(std::floor(std::log2(threshold)) + 1.0);
}

// ---- bundle --------------------------------------------------------------

Nonlinearity::Nonlinearity(int N, std::shared_ptr<const Model> model)
    : N_(N), crit_(critical_exponent(N)), model_(std::move(model)) {
    if (!model_) throw std::invalid_argument("Nonlinearity: null model");
    model_->validate(N);
}

Nonlinearity Nonlinearity::logarithmic(int N) {
    return Nonlinearity(N, std::make_shared<LogModel>());
}

Nonlinearity Nonlinearity::power_mass(int N, double p, double mu) {
    return Nonlinearity(N, std::make_shared<PowerMassModel>(p, mu));
}

bool Nonlinearity::is_log() const { return dynamic_cast<const LogModel*>(model_.get()) != nullptr; }

std::string Nonlinearity::describe() const {
    std::ostringstream os;
    if (auto* pm = dynamic_cast<const PowerMassModel*>(model_.get()))
        os << "power_mass(p=" << pm->p() << ", mu=" << pm->mu() << ")";
    else
        os << model_->name();
    return os.str();
}

double eval_G(const Nonlinearity& nl, double s) { return nl.model().G(s); }
double eval_g(const Nonlinearity& nl, double s) { return nl.model().g(s); }
double eval_dg(const Nonlinearity& nl, double s) { return nl.model().dg(s); }
double eval_G_plus(const Nonlinearity& nl, double s) { return nl.model().G_plus(s); }
double eval_G_minus(const Nonlinearity& nl, double s) {
    return nl.model().G_plus(s) - nl.model().G(s);
}

namespace {
void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}
}  // namespace

double eval_phi_eps(const Nonlinearity& nl, double eps, double s) {
    check_eps(eps);
    return phi(eps, nl.cutoff_exponent(), s);
}

double eval_G_minus_eps(const Nonlinearity& nl, double eps, double s) {
    check_eps(eps);
    return nl.model().G_minus_eps(s, eps, nl.cutoff_exponent());
}

double eval_G_eps(const Nonlinearity& nl, std::optional<double> eps, double s) {
    if (!eps) return nl.model().G(s);
    return nl.model().G_plus(s) - eval_G_minus_eps(nl, *eps, s);
}

double eval_g_eps(const Nonlinearity& nl, std::optional<double> eps, double s) {
    const Model& m = nl.model();
    if (!eps) return m.g(s);
    check_eps(*eps);
    return m.g_plus(s) - phi(*eps, nl.cutoff_exponent(), s) * m.g_minus(s);
}

double eval_dg_eps(const Nonlinearity& nl, std::optional<double> eps, double s) {
    const Model& m = nl.model();
    const double d = m.dg(s);
    if (!eps) return d;
    check_eps(*eps);
    const double k = nl.cutoff_exponent();
    const double x = std::abs(s);
    const double dplus = m.g_plus(s) != 0.0 ? d : 0.0;
    const double dminus = dplus - d;
    const double ph = phi(*eps, k, s);
    const double dph = x < *eps ? std::copysign(k * std::pow(x / *eps, k - 1.0) / *eps, s) : 0.0;
    return dplus - dph * m.g_minus(s) - ph * dminus;
}

GrowthReport check_growth_conditions(const Nonlinearity& nl, int sample_count) {
    if (sample_count < 100) throw std::invalid_argument("growth check needs at least 100 samples");
    const Model& m = nl.model();
    const double crit = nl.critical();
    const double k = crit - 1.0;

    GrowthReport rep;
    rep.sample_count = sample_count;
    rep.s_min = 1e-8;
    rep.s_max = 1e8;
    std::vector<double> s(sample_count);
    for (int j = 0; j < sample_count; ++j) s[j] = std::pow(10.0, -8.0 + 16.0 * j / (sample_count - 1));

    std::vector<double> bound(sample_count), ratio(sample_count);
    for (int j = 0; j < sample_count; ++j) {
        const double gmax = std::max(std::abs(m.g(s[j])), std::abs(m.g(-s[j])));
        bound[j] = gmax / (1.0 + std::pow(s[j], k));
        const double gp = std::max(m.G_plus(s[j]), m.G_plus(-s[j]));
        ratio[j] = gp / std::pow(s[j], crit);
        rep.c_bound = std::max(rep.c_bound, bound[j]);
    }
    const int last = sample_count - 1;
    // a limit condition passes when the ratio is negligible at the extreme
    // sample or still falling towards it
    auto trend_ok = [](double extreme, double inner) { return extreme <= 1e-12 || extreme < inner; };
    rep.bounded_ok = std::isfinite(rep.c_bound) && trend_ok(bound[last], bound[last - 1] * (1.0 + 1e-12));

    const int decade = std::max(1, (sample_count - 1) / 16);
    for (int j = 0; j <= decade; ++j) rep.ratio_near_zero = std::max(rep.ratio_near_zero, ratio[j]);
    for (int j = last - decade; j <= last; ++j)
        rep.ratio_near_infinity = std::max(rep.ratio_near_infinity, ratio[j]);
    rep.small_ok = trend_ok(ratio[0], ratio[1]);
    rep.large_ok = trend_ok(ratio[last], ratio[last - 1]);

    rep.witness = m.positivity_witness();
    if (!rep.witness) {
        for (int j = 0; j < sample_count && !rep.witness; ++j) {
            if (m.G(s[j]) > 0.0) rep.witness = s[j];
            else if (m.G(-s[j]) > 0.0) rep.witness = -s[j];
        }
    }
    if (rep.witness) {
        rep.G_at_witness = m.G(*rep.witness);
        rep.positive_ok = rep.G_at_witness > 0.0;
    }
    return rep;
}

}  // namespace bhg
