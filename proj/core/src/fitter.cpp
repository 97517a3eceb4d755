#include "faigp/fitter.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "faigp/canonical.hpp"

namespace faigp {

namespace {
    // Factors of a product carry coefficient 1; their scale lives on the
    // product node, so they are not free parameters.
    void CollectSlots(Program& p, std::vector<double*>& out, bool factors = false)
    {
        for (auto& n : p.Nodes) {
            if (!factors) {
                out.push_back(&n.Coeff);
            }
            if (n.HasSubprogram()) {
                CollectSlots(n.Subprogram(), out, n.Op == OperatorKind::Prod);
            }
        }
    }

    constexpr double kInitialDamping = 1e-3;
    constexpr double kMaxDamping = 1e12;
    constexpr double kRelativeStep = 1e-6;

    class Residuals {
    public:
        Residuals(Program const& p, DataView data, std::span<double const> y, std::vector<std::size_t> const& selected)
            : program_(p)
            , data_(data)
            , y_(y)
            , prediction_(y.size())
        {
            auto slots = CoefficientSlots(program_);
            for (auto i : selected) {
                slots_.push_back(slots.at(i));
            }
        }

        [[nodiscard]] auto Size() const -> Eigen::Index { return static_cast<Eigen::Index>(slots_.size()); }

        [[nodiscard]] auto Get() const -> Eigen::VectorXd
        {
            Eigen::VectorXd c(Size());
            for (Eigen::Index i = 0; i < Size(); ++i) {
                c[i] = *slots_[static_cast<std::size_t>(i)];
            }
            return c;
        }

        void Set(Eigen::VectorXd const& c)
        {
            for (Eigen::Index i = 0; i < Size(); ++i) {
                *slots_[static_cast<std::size_t>(i)] = c[i];
            }
        }

        // r = y - f(c)
        auto operator()(Eigen::VectorXd const& c) -> Eigen::VectorXd
        {
            Set(c);
            EvaluateInto(program_, data_, prediction_);
            Eigen::VectorXd r(static_cast<Eigen::Index>(y_.size()));
            for (std::size_t i = 0; i < y_.size(); ++i) {
                r[static_cast<Eigen::Index>(i)] = y_[i] - prediction_[i];
            }
            return r;
        }

        [[nodiscard]] auto Current() const -> Program const& { return program_; }

    private:
        Program program_;
        DataView data_;
        std::span<double const> y_;
        std::vector<double> prediction_;
        std::vector<double*> slots_;
    };

    auto SquaredSum(Eigen::VectorXd const& r) -> double
    {
        auto s = r.squaredNorm();
        return std::isfinite(s) ? s : HUGE_VAL;
    }

    auto Jacobian(Residuals& residuals, Eigen::VectorXd const& c, Eigen::Index rows) -> Eigen::MatrixXd
    {
        // Jacobian of the model f = y - r.
        Eigen::MatrixXd jac(rows, c.size());
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            auto const h = kRelativeStep * std::max(1.0, std::abs(c[k]));
            Eigen::VectorXd plus = c;
            Eigen::VectorXd minus = c;
            plus[k] += h;
            minus[k] -= h;
            jac.col(k) = (residuals(minus) - residuals(plus)) / (2.0 * h);
        }
        for (Eigen::Index i = 0; i < jac.size(); ++i) {
            if (!std::isfinite(jac.data()[i])) {
                jac.data()[i] = 0.0;
            }
        }
        return jac;
    }
} // namespace

auto CoefficientSlots(Program& p) -> std::vector<double*>
{
    std::vector<double*> out;
    CollectSlots(p, out);
    return out;
}

auto PerturbCoefficients(Program p, FitConfig const& cfg, Rng& rng, ExponentRange range) -> Program
{
    bool changed = false;
    for (auto* c : CoefficientSlots(p)) {
        if (Bernoulli(rng, cfg.PerturbProb)) {
            auto const delta = cfg.PerturbLo == cfg.PerturbHi ? cfg.PerturbLo : Uniform(rng, cfg.PerturbLo, cfg.PerturbHi);
            *c += delta;
            changed = changed || delta != 0.0;
        }
    }
    return changed ? Canonicalize(std::move(p), range) : p;
}

auto LmFitSelected(Program const& p, DataView data, std::span<double const> y, std::vector<std::size_t> const& selected,
    std::size_t maxCalls) -> FitResult
{
    FitResult result;
    result.Fitted = p;
    result.Selected = selected.size();

    Residuals residuals(p, data, y, selected);
    Eigen::VectorXd coeffs = residuals.Get();
    Eigen::VectorXd r = residuals(coeffs);
    auto sse = SquaredSum(r);
    result.InitialSse = sse;
    result.FinalSse = sse;
    if (!std::isfinite(sse)) {
        result.Degenerate = true;
        return result;
    }
    if (selected.empty() || maxCalls == 0) {
        return result;
    }

    auto const rows = static_cast<Eigen::Index>(y.size());
    double damping = kInitialDamping;
    bool refresh = true;
    Eigen::MatrixXd jac;
    Eigen::MatrixXd normal;
    Eigen::VectorXd gradient;

    while (result.Calls < maxCalls && sse > 0.0) {
        if (refresh) {
            jac = Jacobian(residuals, coeffs, rows);
            normal = jac.transpose() * jac;
            gradient = jac.transpose() * r;
            refresh = false;
        }
        Eigen::MatrixXd damped = normal;
        for (Eigen::Index k = 0; k < damped.rows(); ++k) {
            auto const d = normal(k, k) > 0.0 ? normal(k, k) : 1.0;
            damped(k, k) += damping * d;
        }
        Eigen::VectorXd step = damped.ldlt().solve(gradient);
        if (!step.allFinite()) {
            break;
        }
        if (step.norm() <= 1e-15 * (coeffs.norm() + 1e-15)) {
            break;
        }
        Eigen::VectorXd trial = coeffs + step;
        Eigen::VectorXd trialR = residuals(trial);
        ++result.Calls;
        auto const trialSse = SquaredSum(trialR);
        if (trialSse < sse) {
            coeffs = std::move(trial);
            r = std::move(trialR);
            sse = trialSse;
            damping = std::max(damping / 10.0, 1e-15);
            refresh = true;
        } else {
            damping *= 10.0;
            if (damping > kMaxDamping) {
                break;
            }
        }
    }

    residuals.Set(coeffs);
    result.Fitted = residuals.Current();
    result.FinalSse = sse;
    return result;
}

auto LmFit(Program const& p, DataView data, std::span<double const> y, FitConfig const& cfg, Rng& rng) -> FitResult
{
    Program copy = p;
    auto const count = CoefficientSlots(copy).size();
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < count; ++i) {
        if (Bernoulli(rng, cfg.FitProb)) {
            selected.push_back(i);
        }
    }
    return LmFitSelected(p, data, y, selected, cfg.MaxCalls);
}

} // namespace faigp
