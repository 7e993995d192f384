#include <algorithm>
#include <cmath>

#include "collabnet/format.hpp"
#include "collabnet/lmm.hpp"

namespace collabnet::lmm {

namespace {

std::string display_name(const std::string& term) {
    if (term == "intercept") return "Intercept";
    if (term == "country_count") return "Country Count";
    if (term == "publication_count") return "Publication Count";
    if (term == "year") return "Year";
    return term;
}

std::string trim_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

}  // namespace

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

std::string format_number(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? "0" : format_real(x);
    const double mag = std::abs(x);
    int decimals = 3;
    if (mag < 0.01) decimals = static_cast<int>(std::ceil(-std::log10(mag))) + 1;
    return trim_zeros(format_fixed(x, decimals));
}

std::string format_estimate(double estimate, double se) {
    const double p = se > 0.0 ? normal_two_sided_p(estimate / se) : 1.0;
    return format_number(estimate) + significance_stars(p) + " (" + format_number(se) + ")";
}

std::string render_report(std::span<const LabeledFit> fits) {
    std::vector<std::string> terms;
    for (const auto& lf : fits)
        for (const auto& t : lf.fit.terms)
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{""};
    for (const auto& lf : fits) header.push_back(lf.label);
    table.push_back(header);
    for (const auto& t : terms) {
        std::vector<std::string> row{display_name(t)};
        for (const auto& lf : fits) {
            auto it = std::find(lf.fit.terms.begin(), lf.fit.terms.end(), t);
            if (it == lf.fit.terms.end()) {
                row.emplace_back();
                continue;
            }
            const auto j = static_cast<std::size_t>(it - lf.fit.terms.begin());
            row.push_back(format_estimate(lf.fit.beta[j], lf.fit.se[j]));
        }
        table.push_back(row);
    }
    auto add_row = [&](const std::string& name, auto value) {
        std::vector<std::string> row{name};
        for (const auto& lf : fits) row.push_back(value(lf.fit));
        table.push_back(row);
    };
    add_row("Random Effect", [](const LmmFit& f) { return format_number(f.sigma_u2); });
    add_row("Residual", [](const LmmFit& f) { return format_number(f.sigma2); });
    add_row("AIC", [](const LmmFit& f) { return format_number(f.aic); });
    add_row("N", [](const LmmFit& f) { return std::to_string(f.n); });

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

    std::string out = "Mixed effects regression, dependent variable = ln(FWCI + 0.1)\n";
    for (const auto& row : table) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0) line += row[c] + std::string(width[c] - row[c].size(), ' ');
            else line += "  " + std::string(width[c] - row[c].size(), ' ') + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    out += "Standard errors in parentheses; * p<0.05, ** p<0.01, *** p<0.001 (normal approximation)\n";
    for (const auto& lf : fits)
        for (const auto& w : lf.fit.warnings) out += "warning [" + lf.label + "]: " + w + "\n";
    return out;
}

std::string report_csv(std::span<const LabeledFit> fits) {
    std::string out = "model,quantity,estimate,se,p_value\n";
    for (const auto& lf : fits) {
        const auto& f = lf.fit;
        const std::string model = csv_field(lf.label);
        for (std::size_t j = 0; j < f.terms.size(); ++j) {
            const double p = f.se[j] > 0.0 ? normal_two_sided_p(f.beta[j] / f.se[j]) : 1.0;
            out += model + "," + f.terms[j] + "," + format_real(f.beta[j]) + "," + format_real(f.se[j]) + "," +
                   format_real(p) + "\n";
        }
        out += model + ",random_effect," + format_real(f.sigma_u2) + ",,\n";
        out += model + ",residual," + format_real(f.sigma2) + ",,\n";
        out += model + ",loglik," + format_real(f.loglik) + ",,\n";
        out += model + ",aic," + format_real(f.aic) + ",,\n";
        out += model + ",n," + std::to_string(f.n) + ",,\n";
        out += model + ",groups," + std::to_string(f.n_groups) + ",,\n";
    }
    return out;
}

}  // namespace collabnet::lmm
