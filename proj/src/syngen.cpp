#include "collabnet/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "collabnet/countries.hpp"
#include "collabnet/error.hpp"
#include "collabnet/format.hpp"
#include "collabnet/philox.hpp"

namespace collabnet {

namespace {

enum Purpose : std::uint32_t {
    kYear = 0,
    kJournal = 1,
    kSize = 2,
    kDoctype = 3,
    kCountryBase = 4,
    kCitations = 100,
};

template <class Weights>
std::size_t pick(double u, const Weights& w, double total) {
    double target = u * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (target < w[i]) return i;
        target -= w[i];
    }
    // Rounding can leave target just past the last positive weight.
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i] > 0.0) return i;
    return 0;
}

}  // namespace

double CitationModel::mean_for(const CellKey& cell, std::size_t country_count) const {
    auto it = cell_means.find(cell);
    const double base = it == cell_means.end() ? default_mean : it->second;
    return base * std::exp(collab_boost * (static_cast<double>(country_count) - 1.0));
}

std::int64_t negative_binomial_quantile(double u, double mean, double r) {
    if (!(mean > 0.0)) return 0;
    const double p = r / (r + mean);
    double pmf = std::exp(r * std::log(p));
    double cdf = pmf;
    std::int64_t k = 0;
    const double q = 1.0 - p;
    while (cdf <= u) {
        pmf *= (static_cast<double>(k) + r) / (static_cast<double>(k) + 1.0) * q;
        ++k;
        if (pmf == 0.0 && static_cast<double>(k) > mean) break;
        cdf += pmf;
    }
    return k;
}

void GenConfig::validate() const {
    if (n_countries < 2) throw ValidationError("n_countries must be at least 2");
    if (n_countries > country_universe().size())
        throw ValidationError("n_countries exceeds the " + std::to_string(country_universe().size()) +
                              " known country codes");
    if (n_papers < 1) throw ValidationError("n_papers must be at least 1");
    if (n_papers > 0xFFFFFFFFull) throw ValidationError("n_papers exceeds 2^32 - 1");
    if (years.empty()) throw ValidationError("years must not be empty");
    for (int y : years)
        if (y < 1900 || y > 2100) throw ValidationError("year out of range [1900, 2100]: " + std::to_string(y));
    if (countries_per_paper.empty()) throw ValidationError("countries_per_paper is empty");
    double total = 0.0;
    for (auto [k, p] : countries_per_paper) {
        if (k < 1) throw ValidationError("countries_per_paper support must be >= 1");
        if (!(p > 0.0)) throw ValidationError("countries_per_paper probabilities must be positive");
        if (static_cast<std::size_t>(k) > n_countries)
            throw ValidationError("countries_per_paper support " + std::to_string(k) + " exceeds n_countries " +
                                  std::to_string(n_countries));
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("countries_per_paper must sum to 1");
    if (!(attachment_strength >= 0.0) || !std::isfinite(attachment_strength))
        throw ValidationError("attachment_strength must be a finite value >= 0");
    if (journals.empty()) throw ValidationError("at least one journal is required");
    for (const auto& j : journals) {
        if (j.name.empty() || j.field.empty()) throw ValidationError("journal name and field must be non-empty");
        if (!(j.weight > 0.0)) throw ValidationError("journal weights must be positive");
    }
    if (doctypes.empty()) throw ValidationError("at least one doctype is required");
    double dt = 0.0;
    for (const auto& d : doctypes) {
        if (d.name.empty() || !(d.probability > 0.0)) throw ValidationError("doctype entries need a name and p > 0");
        dt += d.probability;
    }
    if (std::abs(dt - 1.0) > 1e-12) throw ValidationError("doctype probabilities must sum to 1");
    if (!(citations.dispersion > 0.0)) throw ValidationError("citation dispersion must be positive");
    if (!(citations.default_mean > 0.0)) throw ValidationError("citation default_mean must be positive");
    for (const auto& [cell, m] : citations.cell_means)
        if (!(m > 0.0)) throw ValidationError("citation cell means must be positive");
}

GenConfig default_gen_config() {
    GenConfig c;
    c.journals = {
        {"Astrophysical Journal", "Physics", 1.0},
        {"Journal of Virology", "Biology", 1.0},
        {"Bulletin of The Seismological Society of America", "Geoscience", 1.0},
        {"Macromolecules", "Engineering", 1.0},
        {"Geoderma", "Agriculture", 1.0},
        {"Journal of Symbolic Logic", "Mathematics", 1.0},
        {"Synthetic Multidisciplinary Letters", "Multidisciplinary", 1.0},
    };
    const std::map<std::string, double> field_mean{
        {"Agriculture", 5.0}, {"Biology", 9.0},     {"Engineering", 7.0},       {"Geoscience", 6.0},
        {"Mathematics", 2.5}, {"Physics", 8.0},     {"Multidisciplinary", 4.0},
    };
    for (const auto& [field, m] : field_mean)
        for (int y : c.years) {
            const double age = static_cast<double>(c.years.back() - y + 3);
            c.citations.cell_means[{field, y, "article"}] = m * age / 3.0;
            c.citations.cell_means[{field, y, "review"}] = 2.0 * m * age / 3.0;
        }
    return c;
}

GenResult generate(const GenConfig& config) {
    config.validate();
    const Philox4x32::Key key{static_cast<std::uint32_t>(config.seed),
                              static_cast<std::uint32_t>(config.seed >> 32)};
    auto draw = [&](std::size_t paper, std::uint32_t purpose, std::uint32_t slot = 0) {
        return Philox4x32::uniform({static_cast<std::uint32_t>(paper), purpose, slot, 0u}, key);
    };

    GenResult out;
    const auto universe = country_universe();
    for (std::size_t i = 0; i < config.n_countries; ++i) out.countries.emplace_back(universe[i]);
    out.participation.assign(config.n_countries, 0);

    std::vector<double> journal_w;
    for (const auto& j : config.journals) journal_w.push_back(j.weight);
    const double journal_total = std::accumulate(journal_w.begin(), journal_w.end(), 0.0);
    std::vector<int> sizes;
    std::vector<double> size_w;
    for (auto [k, p] : config.countries_per_paper) {
        sizes.push_back(k);
        size_w.push_back(p);
    }
    std::vector<double> doctype_w;
    for (const auto& d : config.doctypes) doctype_w.push_back(d.probability);

    int width = 6;
    for (std::size_t n = config.n_papers; n >= 1000000; n /= 10) ++width;

    const SpecialtyMap map = SpecialtyMap::bundled();
    std::vector<double> weights(config.n_countries);
    std::vector<char> taken(config.n_countries);
    out.records.reserve(config.n_papers);
    out.truth.reserve(config.n_papers);
    for (std::size_t i = 0; i < config.n_papers; ++i) {
        TruthRow t;
        char buf[32];
        std::snprintf(buf, sizeof buf, "P%0*zu", width, i + 1);
        t.id = buf;
        t.year = config.years[std::min(config.years.size() - 1,
                                       static_cast<std::size_t>(draw(i, kYear) * config.years.size()))];
        const auto& journal = config.journals[pick(draw(i, kJournal), journal_w, journal_total)];
        t.journal = journal.name;
        const int size = sizes[pick(draw(i, kSize), size_w, 1.0)];
        t.doctype = config.doctypes[pick(draw(i, kDoctype), doctype_w, 1.0)].name;

        std::fill(taken.begin(), taken.end(), 0);
        for (std::size_t c = 0; c < config.n_countries; ++c)
            weights[c] = std::pow(static_cast<double>(out.participation[c]) + 1.0, config.attachment_strength);
        std::vector<std::size_t> chosen;
        for (int j = 0; j < size; ++j) {
            double total = 0.0;
            for (std::size_t c = 0; c < config.n_countries; ++c) total += taken[c] ? 0.0 : weights[c];
            double target = draw(i, kCountryBase + static_cast<std::uint32_t>(j)) * total;
            std::size_t pickc = config.n_countries;
            std::size_t last_free = 0;
            for (std::size_t c = 0; c < config.n_countries; ++c) {
                if (taken[c]) continue;
                last_free = c;
                if (target < weights[c]) {
                    pickc = c;
                    break;
                }
                target -= weights[c];
            }
            if (pickc == config.n_countries) pickc = last_free;
            taken[pickc] = 1;
            chosen.push_back(pickc);
        }
        for (auto c : chosen) {
            ++out.participation[c];
            t.countries.push_back(out.countries[c]);
        }

        t.citation_mean = config.citations.mean_for({journal.field, t.year, t.doctype}, chosen.size());
        t.citations = negative_binomial_quantile(draw(i, kCitations), t.citation_mean, config.citations.dispersion);

        PublicationRecord r;
        r.id = t.id;
        r.year = t.year;
        r.journal = t.journal;
        r.field = journal.field;
        r.doctype = t.doctype;
        r.countries = t.countries;
        std::sort(r.countries.begin(), r.countries.end());
        r.citations = t.citations;
        r.specialty = map.resolve(r.journal);
        out.records.push_back(std::move(r));
        out.truth.push_back(std::move(t));
    }
    return out;
}

std::string GenResult::to_jsonl() const { return Corpus(records).to_jsonl(); }

std::string GenResult::truth_csv() const {
    std::string out = "id,year,journal,doctype,size,countries,citation_mean,citations\n";
    for (const auto& t : truth) {
        std::string joined;
        for (const auto& c : t.countries) joined += (joined.empty() ? "" : "-") + c;
        out += csv_field(t.id) + "," + std::to_string(t.year) + "," + csv_field(t.journal) + "," +
               csv_field(t.doctype) + "," + std::to_string(t.countries.size()) + "," + joined + "," +
               format_real(t.citation_mean) + "," + std::to_string(t.citations) + "\n";
    }
    return out;
}

}  // namespace collabnet
