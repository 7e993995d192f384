#include "collabnet/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "collabnet/error.hpp"
#include "collabnet/simd/kernels.hpp"

namespace collabnet::lmm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// 1 - R^2 of a column regressed on the earlier ones, below which it is collinear
constexpr double kCollinearTol = 1e-10;
// psi scan range for locating the optimum
constexpr double kPsiGridLo = 1e-8;
constexpr double kPsiGridHi = 1e6;
constexpr int kPsiGridPoints = 57;

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string quoted_list(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) {
        if (!s.empty()) s += ", ";
        s += "'" + n + "'";
    }
    return s;
}

}  // namespace

ModelFrame ModelFrame::from_observations(std::span<const ComboObservation> obs) {
    ModelFrame f;
    auto& y = f.columns["log_fwci"];
    auto& cc = f.columns["country_count"];
    auto& pc = f.columns["publication_count"];
    auto& yr = f.columns["year"];
    auto& mf = f.columns["mean_fwci"];
    for (const auto& o : obs) {
        f.groups.push_back(o.combo_id());
        y.push_back(o.log_fwci);
        cc.push_back(static_cast<double>(o.country_count));
        pc.push_back(static_cast<double>(o.publication_count));
        yr.push_back(static_cast<double>(o.year));
        mf.push_back(o.mean_fwci);
    }
    return f;
}

ProfiledDeviance::ProfiledDeviance(const ModelFrame& frame, const LmmSpec& spec) : method_(spec.method) {
    const std::size_t n = frame.rows();
    auto column = [&](const std::string& name) -> const std::vector<double>& {
        auto it = frame.columns.find(name);
        if (it == frame.columns.end()) throw ValidationError("model column '" + name + "' is missing");
        if (it->second.size() != n)
            throw ValidationError("model column '" + name + "' has " + std::to_string(it->second.size()) +
                                  " rows, expected " + std::to_string(n));
        for (double v : it->second)
            if (!std::isfinite(v)) throw ValidationError("model column '" + name + "' has a non-finite value");
        return it->second;
    };

    const auto& y_in = column(spec.response);
    std::vector<const std::vector<double>*> x_in;
    if (spec.intercept) terms_.push_back("intercept");
    for (const auto& name : spec.fixed) {
        if (std::find(terms_.begin(), terms_.end(), name) != terms_.end())
            throw ValidationError("fixed effect '" + name + "' listed twice");
        x_in.push_back(&column(name));
        terms_.push_back(name);
    }
    const std::size_t p = terms_.size();
    if (p == 0) throw ValidationError("model has no fixed effects");
    if (n < 5) throw ValidationError("need at least 5 observations, got " + std::to_string(n));
    if (n < p + 2)
        throw ValidationError("need at least " + std::to_string(p + 2) + " observations (fixed effects + 2), got " +
                              std::to_string(n));

    // canonical row order
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (frame.groups[a] != frame.groups[b]) return frame.groups[a] < frame.groups[b];
        for (const auto* col : x_in)
            if ((*col)[a] != (*col)[b]) return (*col)[a] < (*col)[b];
        return y_in[a] < y_in[b];
    });

    n_ = n;
    x_raw_.assign(p, std::vector<double>(n));
    y_.resize(n);
    const std::size_t off = spec.intercept ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = order[i];
        y_[i] = y_in[r];
        if (spec.intercept) x_raw_[0][i] = 1.0;
        for (std::size_t j = 0; j < x_in.size(); ++j) x_raw_[j + off][i] = (*x_in[j])[r];
    }

    center_.assign(p, 0.0);
    scale_.assign(p, 1.0);
    for (std::size_t j = off; j < p; ++j) {
        const auto& x = x_raw_[j];
        double m = 0.0;
        if (spec.intercept) m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : x) ss += (v - m) * (v - m);
        const double s = std::sqrt(ss / static_cast<double>(n));
        if (!(s > 0.0)) {
            if (spec.intercept)
                throw ValidationError("rank-deficient design: column '" + terms_[j] +
                                      "' is constant and collinear with 'intercept'");
            throw ValidationError("rank-deficient design: column '" + terms_[j] + "' is all zeros");
        }
        center_[j] = m;
        scale_[j] = s;
        log_scale_sum_ += std::log(s);
    }

    auto z = [&](std::size_t j, std::size_t i) { return (x_raw_[j][i] - center_[j]) / scale_[j]; };

    ztz_.assign(p * p, 0.0);
    zty_.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            const double za = z(a, i);
            zty_[a] += za * y_[i];
            for (std::size_t b = a; b < p; ++b) ztz_[a * p + b] += za * z(b, i);
        }
        yty_ += y_[i] * y_[i];
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) ztz_[a * p + b] = ztz_[b * p + a];

    // Sequential collinearity check on the scaled cross-product matrix.
    MatrixXd c(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) c(a, b) = ztz_[a * p + b] / static_cast<double>(n);
    for (std::size_t j = 1; j < p; ++j) {
        MatrixXd prev = c.topLeftCorner(j, j);
        VectorXd cross = c.block(0, j, j, 1);
        VectorXd coef = prev.ldlt().solve(cross);
        const double resid = c(j, j) - cross.dot(coef);
        if (resid / c(j, j) < kCollinearTol) {
            std::vector<std::string> with;
            for (std::size_t k = 0; k < j; ++k)
                if (std::abs(coef(k)) > 1e-8) with.push_back(terms_[k]);
            throw ValidationError("rank-deficient design: column '" + terms_[j] + "' is collinear with " +
                                  quoted_list(with));
        }
    }

    // groups: rows are contiguous per group in canonical order
    group_of_row_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& g = frame.groups[order[i]];
        if (group_names_.empty() || group_names_.back() != g) {
            group_names_.push_back(g);
            group_size_.push_back(0.0);
            group_ysum_.push_back(0.0);
        }
        group_of_row_[i] = group_names_.size() - 1;
        group_size_.back() += 1.0;
        group_ysum_.back() += y_[i];
    }
    const std::size_t groups = group_names_.size();
    group_zsum_.assign(p, std::vector<double>(groups, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) group_zsum_[j][group_of_row_[i]] += z(j, i);
    for (double s : group_size_) ++size_histogram_[static_cast<std::size_t>(s)];
}

std::size_t ProfiledDeviance::largest_group() const {
    return size_histogram_.empty() ? 0 : size_histogram_.rbegin()->first;
}

ProfiledDeviance::Solution ProfiledDeviance::solve(double psi) const {
    if (!(psi >= 0.0) || !std::isfinite(psi)) throw ValidationError("variance ratio must be finite and >= 0");
    const std::size_t p = terms_.size();
    const std::size_t groups = group_names_.size();

    std::vector<double> weight(groups);
    simd::shrinkage_weights(group_size_, psi, weight);

    MatrixXd a(p, p);
    VectorXd b(p);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = r; s < p; ++s) {
            a(r, s) = ztz_[r * p + s] - simd::weighted_dot(weight, group_zsum_[r], group_zsum_[s]);
            a(s, r) = a(r, s);
        }
        b(r) = zty_[r] - simd::weighted_dot(weight, group_zsum_[r], group_ysum_);
    }
    const double q = yty_ - simd::weighted_dot(weight, group_ysum_, group_ysum_);

    Eigen::LLT<MatrixXd> llt(a);
    Solution sol;
    if (llt.info() != Eigen::Success) {
        sol.deviance = std::numeric_limits<double>::infinity();
        return sol;
    }
    const VectorXd beta_z = llt.solve(b);
    const double resid = q - b.dot(beta_z);
    if (!(resid > 0.0)) throw ValidationError("residual variance is zero: the model fits the data exactly");

    double log_det_h = 0.0;
    for (const auto& [size, count] : size_histogram_)
        log_det_h += static_cast<double>(count) * std::log1p(static_cast<double>(size) * psi);

    const double n = static_cast<double>(n_);
    if (method_ == Estimation::ML) {
        sol.sigma2 = resid / n;
        sol.deviance = n * (1.0 + std::log(kTwoPi * sol.sigma2)) + log_det_h;
    } else {
        const double dof = n - static_cast<double>(p);
        sol.sigma2 = resid / dof;
        const MatrixXd l = llt.matrixL();
        double log_det_a = 0.0;
        for (std::size_t j = 0; j < p; ++j) log_det_a += 2.0 * std::log(l(j, j));
        sol.deviance = dof * (1.0 + std::log(kTwoPi * sol.sigma2)) + log_det_h + log_det_a + 2.0 * log_scale_sum_;
    }

    // back to the raw scale: beta = T beta_z
    MatrixXd t = MatrixXd::Zero(p, p);
    for (std::size_t j = 0; j < p; ++j) t(j, j) = 1.0 / scale_[j];
    if (!terms_.empty() && terms_[0] == "intercept")
        for (std::size_t j = 1; j < p; ++j) t(0, j) = -center_[j] / scale_[j];
    const VectorXd beta = t * beta_z;
    const MatrixXd cov = t * (sol.sigma2 * llt.solve(MatrixXd::Identity(p, p))) * t.transpose();

    sol.beta.assign(beta.data(), beta.data() + p);
    sol.cov.assign(p, std::vector<double>(p));
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t s = 0; s < p; ++s) sol.cov[r][s] = cov(r, s);
    return sol;
}

std::map<std::string, GroupEffect> ProfiledDeviance::group_effects(const std::vector<double>& beta, double psi) const {
    const std::size_t groups = group_names_.size();
    std::vector<double> resid_sum(groups, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) fitted += x_raw_[j][i] * beta[j];
        resid_sum[group_of_row_[i]] += y_[i] - fitted;
    }
    std::map<std::string, GroupEffect> out;
    for (std::size_t g = 0; g < groups; ++g) {
        GroupEffect e;
        e.size = static_cast<std::size_t>(group_size_[g]);
        e.mean_residual = resid_sum[g] / group_size_[g];
        const double shrink = psi * group_size_[g] / (1.0 + psi * group_size_[g]);
        e.blup = shrink * e.mean_residual;
        out.emplace(group_names_[g], e);
    }
    return out;
}

LmmFit fit(const ModelFrame& frame, const LmmSpec& spec) {
    ProfiledDeviance dev(frame, spec);
    LmmFit out;

    double psi = 0.0;
    if (dev.largest_group() <= 1) {
        out.warnings.push_back(
            "every group has a single observation: random-intercept and residual variance are not separately "
            "identifiable; reporting sigma_u2 = 0");
    } else {
        const double lo = std::log(kPsiGridLo), hi = std::log(kPsiGridHi);
        const double step = (hi - lo) / (kPsiGridPoints - 1);
        std::vector<double> grid(kPsiGridPoints);
        int best = 0;
        for (int k = 0; k < kPsiGridPoints; ++k) {
            grid[k] = dev(std::exp(lo + step * k));
            if (grid[k] < grid[best]) best = k;
        }
        const double a = lo + step * std::max(best - 1, 0);
        const double b = lo + step * std::min(best + 1, kPsiGridPoints - 1);
        auto objective = [&](double theta) { return dev(std::exp(theta)); };
        auto [theta, value] =
            boost::math::tools::brent_find_minima(objective, a, b, std::numeric_limits<double>::digits);
        psi = std::exp(theta);
        if (grid[best] < value) psi = std::exp(lo + step * best);
        // boundary: keep psi = 0 whenever it is at least as good
        if (dev(0.0) <= dev(psi)) psi = 0.0;
        if (best == kPsiGridPoints - 1)
            out.warnings.push_back("variance ratio reached the upper end of the search range");
    }

    const auto sol = dev.solve(psi);
    out.terms = dev.terms();
    out.beta = sol.beta;
    for (std::size_t j = 0; j < sol.beta.size(); ++j) out.se.push_back(std::sqrt(sol.cov[j][j]));
    out.psi = psi;
    out.sigma2 = sol.sigma2;
    out.sigma_u2 = psi * sol.sigma2;
    out.deviance = sol.deviance;
    out.loglik = -0.5 * sol.deviance;
    out.aic = 2.0 * static_cast<double>(out.parameter_count()) - 2.0 * out.loglik;
    out.n = dev.observations();
    out.n_groups = dev.group_count();
    out.method = spec.method;
    out.groups = dev.group_effects(sol.beta, psi);
    return out;
}

LmmFit fit(std::span<const ComboObservation> obs, const LmmSpec& spec) {
    return fit(ModelFrame::from_observations(obs), spec);
}

double predict(const LmmFit& fit, const std::map<std::string, double>& row, const std::optional<std::string>& group) {
    double y = 0.0;
    for (std::size_t j = 0; j < fit.terms.size(); ++j) {
        if (fit.terms[j] == "intercept") {
            y += fit.beta[j];
            continue;
        }
        auto it = row.find(fit.terms[j]);
        if (it == row.end()) throw ValidationError("prediction row is missing column '" + fit.terms[j] + "'");
        y += fit.beta[j] * it->second;
    }
    if (group) {
        auto g = fit.groups.find(*group);
        if (g != fit.groups.end()) y += g->second.blup;
    }
    return y;
}

double predict(const LmmFit& fit, const ComboObservation& obs) {
    return predict(fit,
                   {{"country_count", static_cast<double>(obs.country_count)},
                    {"publication_count", static_cast<double>(obs.publication_count)},
                    {"year", static_cast<double>(obs.year)}},
                   obs.combo_id());
}

}  // namespace collabnet::lmm
