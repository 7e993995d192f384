#pragma once

// Random-intercept linear mixed model
//
//   y_gi = x_gi' beta + u_g + e_gi,   u_g ~ N(0, sigma_u2),  e_gi ~ N(0, sigma2)
//
// fitted by maximum likelihood (or REML) on the variance ratio
// psi = sigma_u2 / sigma2. Given psi, beta and sigma2 have closed forms, so
// the optimizer is one-dimensional. Everything a psi evaluation needs is
// reduced to per-group sums, making it linear in the number of groups.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collabnet/impact.hpp"

namespace collabnet::lmm {

enum class Estimation { ML, REML };

struct LmmSpec {
    std::string response = "log_fwci";
    std::vector<std::string> fixed = {"country_count", "publication_count", "year"};
    bool intercept = true;
    Estimation method = Estimation::ML;
};

/// Column-oriented model data with one grouping label per row.
struct ModelFrame {
    std::vector<std::string> groups;
    std::map<std::string, std::vector<double>> columns;

    std::size_t rows() const { return groups.size(); }

    /// Columns log_fwci, country_count, publication_count, year, mean_fwci;
    /// groups are combo ids.
    static ModelFrame from_observations(std::span<const ComboObservation> obs);
};

struct GroupEffect {
    std::size_t size = 0;
    double mean_residual = 0.0;  // mean of y - x'beta over the group
    double blup = 0.0;           // sigma_u2 / (sigma_u2 + sigma2 / size) * mean_residual
};

struct LmmFit {
    std::vector<std::string> terms;  // "intercept" first when present
    std::vector<double> beta;
    std::vector<double> se;
    double sigma_u2 = 0.0;
    double sigma2 = 0.0;
    double psi = 0.0;
    /// -2 log-likelihood (ML) or -2 restricted log-likelihood (REML).
    double deviance = 0.0;
    double loglik = 0.0;
    /// 2k - 2 loglik with k = fixed effects + 2.
    double aic = 0.0;
    std::size_t n = 0;
    std::size_t n_groups = 0;
    Estimation method = Estimation::ML;
    std::vector<std::string> warnings;
    std::map<std::string, GroupEffect> groups;

    std::size_t parameter_count() const { return beta.size() + 2; }
};

/// The profiled criterion as a function of psi, built once per data set.
class ProfiledDeviance {
public:
    /// Validates columns, sizes and rank. Throws ValidationError naming the
    /// offending columns.
    ProfiledDeviance(const ModelFrame& frame, const LmmSpec& spec);

    struct Solution {
        std::vector<double> beta;            // raw (unstandardized) scale
        std::vector<std::vector<double>> cov;  // covariance of beta
        double sigma2 = 0.0;
        double deviance = 0.0;
    };

    double operator()(double psi) const { return solve(psi).deviance; }
    Solution solve(double psi) const;

    std::size_t observations() const { return n_; }
    std::size_t fixed_effects() const { return terms_.size(); }
    std::size_t group_count() const { return group_names_.size(); }
    std::size_t largest_group() const;
    const std::vector<std::string>& terms() const { return terms_; }
    Estimation method() const { return method_; }

    /// Per-group residual means and BLUPs for a given solution.
    std::map<std::string, GroupEffect> group_effects(const std::vector<double>& beta, double psi) const;

private:
    Estimation method_;
    std::size_t n_ = 0;
    std::vector<std::string> terms_;
    std::vector<double> center_, scale_;  // z = (x - center) / scale
    double log_scale_sum_ = 0.0;

    // rows in canonical order (by group, then values) so sums do not depend
    // on input order
    std::vector<std::vector<double>> x_raw_;  // [term][row], canonical order
    std::vector<double> y_;

    std::vector<std::string> group_names_;
    std::vector<std::size_t> group_of_row_;
    std::vector<double> group_size_;
    std::vector<std::vector<double>> group_zsum_;  // [term][group]
    std::vector<double> group_ysum_;
    std::map<std::size_t, std::size_t> size_histogram_;

    std::vector<double> ztz_;  // p x p row-major
    std::vector<double> zty_;
    double yty_ = 0.0;
};

/// Fits the model. psi is located by a log-spaced grid scan followed by
/// Brent refinement; psi = 0 is kept when it is at least as good, so
/// boundary fits report sigma_u2 = 0 exactly. When every group has one
/// row the variance split is unidentifiable: sigma_u2 = 0 and a warning.
LmmFit fit(const ModelFrame& frame, const LmmSpec& spec = {});
LmmFit fit(std::span<const ComboObservation> obs, const LmmSpec& spec = {});

/// Fixed-effect prediction x'beta, plus the group's BLUP when `group` is a
/// group seen in fitting. Missing predictor columns throw ValidationError.
double predict(const LmmFit& fit, const std::map<std::string, double>& row,
               const std::optional<std::string>& group = std::nullopt);
double predict(const LmmFit& fit, const ComboObservation& obs);

// --- reporting -------------------------------------------------------------

struct LabeledFit {
    std::string label;
    LmmFit fit;
};

/// Two-sided normal-approximation p-value for z.
double normal_two_sided_p(double z);
/// "***" p < 0.001, "**" p < 0.01, "*" p < 0.05, else "".
std::string significance_stars(double p);
/// Three decimals for |x| >= 0.01, two significant digits below; trailing zeros dropped.
std::string format_number(double x);
/// e.g. "0.139*** (0.003)"
std::string format_estimate(double estimate, double se);

/// Aligned plain-text table: one column per fit; rows Intercept, Country
/// Count, Publication Count, Year, Random Effect, Residual, AIC, N.
std::string render_report(std::span<const LabeledFit> fits);
/// Long form `model,quantity,estimate,se,p_value`.
std::string report_csv(std::span<const LabeledFit> fits);

}  // namespace collabnet::lmm
