#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/corpus.hpp"

namespace collabnet {

/// Normalization cell for citation counts.
struct CellKey {
    std::string field;
    int year = 0;
    std::string doctype;

    auto operator<=>(const CellKey&) const = default;
};

CellKey cell_of(const PublicationRecord& r);

struct FwciBaseline {
    CellKey key;
    double mean_citations = 0.0;
    std::size_t count = 0;
    /// False when every paper in the cell is uncited.
    bool usable = false;
};

class BaselineTable {
public:
    const FwciBaseline* find(const CellKey& key) const;
    const std::map<CellKey, FwciBaseline>& cells() const { return cells_; }
    void insert(FwciBaseline b);

private:
    std::map<CellKey, FwciBaseline> cells_;
};

/// Mean citations per (field, year, doctype) over the corpus itself.
/// Throws ValidationError on an empty corpus.
BaselineTable compute_baselines(const Corpus& corpus);
BaselineTable compute_baselines(std::span<const PublicationRecord> records);

/// citations / cell mean; nullopt when the cell is missing or unusable.
std::optional<double> try_fwci(const PublicationRecord& r, const BaselineTable& baselines);
/// As try_fwci, but throws ValidationError naming the cell.
double fwci(const PublicationRecord& r, const BaselineTable& baselines);

/// All papers sharing one exact country set in one year.
struct ComboObservation {
    std::vector<std::string> combo;  // sorted, duplicate-free
    int year = 0;
    std::size_t country_count = 0;
    std::size_t publication_count = 0;
    double mean_fwci = 0.0;
    double log_fwci = 0.0;  // ln(mean_fwci + 0.1)

    /// Codes joined with '-', e.g. "CN-DE-US".
    std::string combo_id() const;
};

inline constexpr double kLogFwciOffset = 0.1;

struct Exclusion {
    std::string id;
    std::string reason;
};

struct ObservationSet {
    std::vector<ComboObservation> observations;  // sorted by (combo_id, year)
    std::vector<Exclusion> excluded;
};

/// Aggregates multi-country records into one observation per (combo, year).
/// Single-country records are skipped; records without a usable baseline are
/// listed in `excluded`.
ObservationSet build_observations(std::span<const PublicationRecord> records, const BaselineTable& baselines);

/// `combo_id,year,country_count,publication_count,mean_fwci,log_fwci`
std::string observations_to_csv(std::span<const ComboObservation> obs);
std::vector<ComboObservation> observations_from_csv(std::string_view csv);

}  // namespace collabnet
