#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace collabnet {

inline constexpr std::string_view kOtherSpecialty = "other";

/// The six specialty labels followed by "other".
const std::vector<std::string>& specialty_universe();

/// One publication. `countries` is sorted and duplicate-free.
struct PublicationRecord {
    std::string id;
    int year = 0;
    std::string journal;
    std::string specialty;
    std::string field;
    std::string doctype;
    std::vector<std::string> countries;
    std::int64_t citations = 0;

    bool operator==(const PublicationRecord&) const = default;
};

/// Journal name -> specialty label. Lookup is exact after lowercasing and
/// whitespace collapsing.
class SpecialtyMap {
public:
    SpecialtyMap() = default;

    /// The journal lists the six specialties were originally defined by.
    static SpecialtyMap bundled();

    /// Two-column CSV `journal,specialty` with an optional header row.
    /// Duplicate journals (after normalization) and labels outside
    /// specialty_universe() are rejected.
    static SpecialtyMap from_csv(std::string_view text);

    void add(std::string_view journal, std::string_view specialty);

    /// Specialty label for `journal`, or "other" when unmapped.
    std::string resolve(std::string_view journal) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;  // normalized journal -> label
};

struct Rejection {
    std::string id;
    std::string reason;
};

struct IngestReport {
    std::size_t input_count = 0;
    std::size_t accepted = 0;
    /// Accepted records that overwrote an earlier record with the same id.
    std::size_t replaced = 0;
    std::vector<Rejection> rejections;

    /// `id,reason` rows with a header line.
    std::string to_csv() const;
};

/// An immutable, id-sorted collection of validated records.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<PublicationRecord> records);

    const std::vector<PublicationRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    /// Sorted distinct years present.
    std::vector<int> years() const;
    /// Sorted distinct specialty labels present.
    std::vector<std::string> specialties() const;

    /// Canonical JSON lines, one record per line in id order.
    std::string to_jsonl() const;
    /// Reads a corpus previously written by to_jsonl(). Any invalid line is
    /// an error here; use ingest() for untrusted input.
    static Corpus from_jsonl(std::string_view text);

private:
    std::vector<PublicationRecord> records_;
};

struct IngestResult {
    Corpus corpus;
    IngestReport report;
};

/// Parses newline-delimited JSON records. Malformed or invalid lines are
/// rejected with a reason; blank lines are skipped. Later duplicates of an id
/// replace earlier ones. Specialties come from `map`, never from the record.
IngestResult ingest(std::string_view jsonl, const SpecialtyMap& map);

/// As above, reading from a file. An unreadable file throws ValidationError.
IngestResult ingest_file(const std::string& path, const SpecialtyMap& map);

/// Records with the given specialty and year, in id order. An unknown
/// specialty label throws ValidationError listing the valid ones.
std::vector<PublicationRecord> filter(const Corpus& corpus, std::string_view specialty, int year);

}  // namespace collabnet
