#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "collabnet/corpus.hpp"
#include "collabnet/impact.hpp"

namespace collabnet {

struct JournalSpec {
    std::string name;
    std::string field;
    double weight = 1.0;
};

struct DoctypeSpec {
    std::string name;
    double probability = 0.0;
};

/// Negative-binomial citation counts. The cell mean is taken from
/// `cell_means` (falling back to `default_mean`) and scaled by
/// exp(collab_boost * (countries - 1)).
struct CitationModel {
    double default_mean = 6.0;
    std::map<CellKey, double> cell_means;
    double dispersion = 2.0;  // NB size parameter r; variance = mu + mu^2/r
    double collab_boost = 0.1;

    double mean_for(const CellKey& cell, std::size_t country_count) const;
};

struct GenConfig {
    std::uint64_t seed = 42;
    std::size_t n_countries = 120;
    std::size_t n_papers = 20000;
    std::vector<int> years{2008, 2013};
    std::map<int, double> countries_per_paper{{1, 0.55}, {2, 0.30}, {3, 0.10}, {4, 0.05}};
    double attachment_strength = 1.0;
    std::vector<JournalSpec> journals;
    std::vector<DoctypeSpec> doctypes{{"article", 0.9}, {"review", 0.1}};
    CitationModel citations;

    /// Throws ValidationError describing the first problem found.
    void validate() const;
};

/// One journal per specialty taken from the bundled map plus one unmapped
/// journal, with per-cell citation means varying by field and doctype.
GenConfig default_gen_config();

/// Everything drawn for one paper, countries in draw order.
struct TruthRow {
    std::string id;
    int year = 0;
    std::string journal;
    std::string doctype;
    std::vector<std::string> countries;
    double citation_mean = 0.0;
    std::int64_t citations = 0;
};

struct GenResult {
    std::vector<PublicationRecord> records;  // id order == draw order
    std::vector<TruthRow> truth;
    /// Papers each country took part in, indexed like the country list.
    std::vector<std::string> countries;
    std::vector<std::int64_t> participation;

    /// Records in the corpus JSONL format.
    std::string to_jsonl() const;
    /// `id,year,journal,doctype,size,countries,citation_mean,citations`,
    /// countries '-'-joined in draw order.
    std::string truth_csv() const;
};

/// Deterministic in `config`: every draw is a Philox block addressed by
/// (paper index, purpose, slot) under a key derived from the seed.
GenResult generate(const GenConfig& config);

/// NB(r, mu) quantile at u in [0, 1), by cumulative inversion.
std::int64_t negative_binomial_quantile(double u, double mean, double r);

}  // namespace collabnet
