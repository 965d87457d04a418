#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfda/composition.hpp"
#include "cfda/smoothing.hpp"

namespace cfda {

enum class Sex { male, female };

std::string to_string(Sex sex);

/// The eight broad cause-of-death classes tracked across ICD revisions 7-10.
enum class CauseClass { INF, END, CIRC, NEOP, LUNG, RESP, DIG, EXT };

inline constexpr int kCauseClassCount = 8;

std::string to_string(CauseClass c);
const std::vector<std::string>& cause_class_names();

struct DeathRecord {
    std::string country;
    int year = 0;
    Sex sex = Sex::male;
    int icd_revision = 0;  // 7..10
    std::string cause_code;
    std::string age_group;  // source token, e.g. "40-44"
    std::int64_t deaths = 0;
};

/// Inclusive ICD code range. Codes compare as (letter prefix, digit string
/// right-padded) so "C341" falls inside "C33-C34" and "A050" inside
/// "A044-A060".
class CodePattern {
  public:
    explicit CodePattern(const std::string& pattern);

    bool matches(const std::string& code) const;
    const std::string& text() const { return text_; }

  private:
    std::string text_;
    std::string letters_lo_, digits_lo_;
    std::string letters_hi_, digits_hi_;
};

/// Revision-specific code ranges mapping to cause classes. Entries with
/// higher priority win on overlap (the lung ranges sit inside the neoplasm
/// ranges); equal-priority overlap with different classes is a mapping bug.
class CauseMap {
  public:
    struct Entry {
        int revision = 0;
        CodePattern pattern;
        std::optional<CauseClass> cause;  // nullopt = explicit exclusion
        int priority = 0;
    };

    void add(int revision, const std::string& pattern, std::optional<CauseClass> cause,
             int priority);

    /// Highest-priority match, nullopt when unmatched or explicitly excluded.
    /// Throws AmbiguousCode on same-priority conflicting matches and
    /// UnknownRevision outside 7..10.
    std::optional<CauseClass> classify_code(int revision, const std::string& code) const;

    /// `revision,pattern,class,priority` rows; '#' comments allowed.
    static CauseMap load(std::istream& is);
    static CauseMap load(const std::filesystem::path& path);

    const std::vector<Entry>& entries() const { return entries_; }

  private:
    std::vector<Entry> entries_;
};

/// Country/revision-scoped reclassification checked before the cause map;
/// rules apply in file order, first match wins. Country "*" matches all.
struct AdjustmentRule {
    std::string country;
    int revision = 0;
    CodePattern pattern;
    std::optional<CauseClass> cause;
};

std::vector<AdjustmentRule> load_adjustments(std::istream& is);
std::vector<AdjustmentRule> load_adjustments(const std::filesystem::path& path);

std::optional<CauseClass> classify(const DeathRecord& record, const CauseMap& map,
                                   const std::vector<AdjustmentRule>& adjustments);

/// Declares how the input CSV columns map onto record fields. Loaded from a
/// `key = value` sidecar: country/year/sex/revision/cause name the columns,
/// `age.<token> = <column>` declares one deaths column per age band, and
/// optional `sex.<token>` / `revision.<token>` remap cell values.
struct ColumnMap {
    std::string country_column;
    std::string year_column;
    std::string sex_column;
    std::string revision_column;
    std::string cause_column;
    std::vector<std::pair<std::string, std::string>> age_columns;  // token -> column
    std::map<std::string, Sex> sex_tokens = {{"1", Sex::male}, {"2", Sex::female}};
    std::map<std::string, int> revision_tokens;

    static ColumnMap load(std::istream& is);
    static ColumnMap load(const std::filesystem::path& path);
};

struct RejectRow {
    std::size_t line = 0;
    std::string reason;
    std::string content;
};

struct ParseResult {
    std::vector<DeathRecord> records;
    std::vector<RejectRow> rejects;
};

/// One DeathRecord per (row x age band); rows with malformed cells go to the
/// rejects report in full. Empty deaths cells are skipped.
ParseResult parse_records(std::istream& is, const ColumnMap& columns);

struct ConservationRow {
    std::string country;
    Sex sex = Sex::male;
    int year = 0;
    std::array<std::int64_t, kCauseClassCount> by_class{};
    std::int64_t excluded = 0;
    std::int64_t total = 0;
};

struct BuildOptions {
    int age_low = 40;
    int age_high = 64;
    double pseudocount = 0.5;
    /// Open-ended age bands ("85+") take this nominal upper bound for the
    /// pro-rata weight when they straddle the window.
    int open_age_cap = 120;
    /// Keep only these countries when non-empty.
    std::vector<std::string> countries;
};

struct SexSample {
    std::vector<FunctionalComposition> compositions;  // id = country
    std::vector<MissingMask> masks;                   // aligned with compositions
};

struct IngestResult {
    std::map<Sex, SexSample> by_sex;
    std::vector<ConservationRow> conservation;
    std::vector<std::string> warnings;  // e.g. partial age coverage notes
};

/// Aggregates classified deaths over ages intersecting the window, applies
/// pro-rata weights to straddling bands, flags years without usable data,
/// and closes each observed column into a composition. Masked columns hold a
/// uniform placeholder until imputation.
IngestResult build_compositions(const std::vector<DeathRecord>& records,
                                const CauseMap& map,
                                const std::vector<AdjustmentRule>& adjustments,
                                const TimeGrid& grid, const BuildOptions& opts = {});

void write_rejects(std::ostream& os, const std::vector<RejectRow>& rejects);
void write_conservation(std::ostream& os, const std::vector<ConservationRow>& rows);

}  // namespace cfda
