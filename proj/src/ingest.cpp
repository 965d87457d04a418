#include "cfda/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

#include "cfda/csv.hpp"

namespace cfda {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

constexpr std::size_t kDigitWidth = 6;

/// Splits an ICD code into (letter prefix, digit body). Dots and spaces are
/// dropped; "C34.1" and "C341" compare equal.
std::pair<std::string, std::string> code_key(const std::string& raw) {
    std::string letters, digits;
    for (char c : upper(trim(raw))) {
        if (std::isalpha(static_cast<unsigned char>(c)) && digits.empty()) {
            letters += c;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
        }
    }
    return {letters, digits};
}

std::string pad(const std::string& digits, char fill) {
    std::string padded = digits;
    padded.resize(kDigitWidth, fill);
    return padded;
}

/// stoi that rejects trailing garbage ("20x0" is not a year).
std::optional<int> parse_int_strict(const std::string& s) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<CauseClass> parse_cause_class(const std::string& token) {
    const std::string t = upper(trim(token));
    if (t == "EXCLUDE" || t == "EXCLUDED") return std::nullopt;
    const auto& names = cause_class_names();
    for (int i = 0; i < kCauseClassCount; ++i) {
        if (t == names[static_cast<std::size_t>(i)]) {
            return static_cast<CauseClass>(i);
        }
    }
    throw DataError("unknown cause class '" + token + "'");
}

void check_revision(int revision, const char* what) {
    if (revision < 7 || revision > 10) {
        throw UnknownRevision(std::string(what) + ": ICD revision " +
                              std::to_string(revision) + " is outside 7..10");
    }
}

struct AgeWeight {
    double weight = 0.0;
    bool partial = false;  // band straddles the window boundary
};

AgeWeight age_window_weight(const std::string& token, const BuildOptions& opts) {
    const std::string t = trim(token);
    if (t.empty()) {
        throw DataError("empty age band token");
    }
    int lo = 0, hi = 0;
    bool open_ended = false;
    const auto dash = t.find('-');
    try {
        if (!t.empty() && t.back() == '+') {
            lo = std::stoi(t.substr(0, t.size() - 1));
            hi = opts.open_age_cap;
            open_ended = true;
        } else if (dash != std::string::npos) {
            lo = std::stoi(t.substr(0, dash));
            hi = std::stoi(t.substr(dash + 1));
        } else {
            lo = std::stoi(t);
            hi = lo;
        }
    } catch (const std::exception&) {
        throw DataError("cannot parse age band '" + token + "'");
    }
    if (hi < lo) {
        throw DataError("age band '" + token + "' has upper bound below lower bound");
    }
    const int in_lo = std::max(lo, opts.age_low);
    const int in_hi = std::min(hi, opts.age_high);
    const int inside = std::max(0, in_hi - in_lo + 1);
    const int width = hi - lo + 1;
    AgeWeight w;
    w.weight = static_cast<double>(inside) / static_cast<double>(width);
    w.partial = inside > 0 && (inside < width || open_ended);
    return w;
}

}  // namespace

std::string to_string(Sex sex) {
    return sex == Sex::male ? "male" : "female";
}

std::string to_string(CauseClass c) {
    return cause_class_names()[static_cast<std::size_t>(c)];
}

const std::vector<std::string>& cause_class_names() {
    static const std::vector<std::string> names = {"INF",  "END",  "CIRC", "NEOP",
                                                   "LUNG", "RESP", "DIG",  "EXT"};
    return names;
}

CodePattern::CodePattern(const std::string& pattern) : text_(trim(pattern)) {
    if (text_.empty()) {
        throw DataError("empty ICD code pattern");
    }
    std::string lo = text_, hi = text_;
    // Ranges use "--" (Table-style) or a single dash between code tokens.
    const auto double_dash = text_.find("--");
    if (double_dash != std::string::npos) {
        lo = text_.substr(0, double_dash);
        hi = text_.substr(double_dash + 2);
    } else {
        const auto dash = text_.find('-');
        if (dash != std::string::npos) {
            lo = text_.substr(0, dash);
            hi = text_.substr(dash + 1);
        }
    }
    auto [l_lo, d_lo] = code_key(lo);
    auto [l_hi, d_hi] = code_key(hi);
    if (l_lo.empty() && d_lo.empty()) {
        throw DataError("cannot parse ICD pattern '" + pattern + "'");
    }
    letters_lo_ = l_lo;
    digits_lo_ = pad(d_lo, '0');
    letters_hi_ = l_hi;
    digits_hi_ = pad(d_hi, '9');
}

bool CodePattern::matches(const std::string& code) const {
    const auto [letters, digits] = code_key(code);
    if (letters.empty() && digits.empty()) return false;
    const std::string padded = pad(digits, '0');
    const auto key = std::tie(letters, padded);
    const auto lo = std::tie(letters_lo_, digits_lo_);
    const auto hi = std::tie(letters_hi_, digits_hi_);
    return lo <= key && key <= hi;
}

void CauseMap::add(int revision, const std::string& pattern,
                   std::optional<CauseClass> cause, int priority) {
    check_revision(revision, "CauseMap");
    entries_.push_back(Entry{revision, CodePattern(pattern), cause, priority});
}

std::optional<CauseClass> CauseMap::classify_code(int revision,
                                                  const std::string& code) const {
    check_revision(revision, "classify_code");
    const Entry* best = nullptr;
    for (const auto& entry : entries_) {
        if (entry.revision != revision || !entry.pattern.matches(code)) continue;
        if (!best || entry.priority > best->priority) {
            best = &entry;
        } else if (entry.priority == best->priority && entry.cause != best->cause) {
            throw AmbiguousCode("code '" + code + "' (ICD-" + std::to_string(revision) +
                                ") matches '" + best->pattern.text() + "' and '" +
                                entry.pattern.text() + "' at equal priority");
        }
    }
    return best ? best->cause : std::nullopt;
}

CauseMap CauseMap::load(std::istream& is) {
    CauseMap map;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "revision,pattern,class,priority") {
                throw HeaderMismatch("cause map: expected header "
                                     "'revision,pattern,class,priority'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = csv::split_line(t);
        if (fields.size() != 4) {
            throw DataError("cause map line " + std::to_string(line_no) +
                            ": expected 4 fields");
        }
        try {
            map.add(std::stoi(fields[0]), fields[1], parse_cause_class(fields[2]),
                    std::stoi(fields[3]));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw DataError("cause map line " + std::to_string(line_no) +
                            ": cannot parse '" + t + "'");
        }
    }
    if (!header_seen) {
        throw HeaderMismatch("cause map: missing header");
    }
    return map;
}

CauseMap CauseMap::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw DataError("cannot open cause map '" + path.string() + "'");
    }
    return load(is);
}

std::vector<AdjustmentRule> load_adjustments(std::istream& is) {
    std::vector<AdjustmentRule> rules;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "country,revision,pattern,class") {
                throw HeaderMismatch("adjustments: expected header "
                                     "'country,revision,pattern,class'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = csv::split_line(t);
        if (fields.size() != 4) {
            throw DataError("adjustments line " + std::to_string(line_no) +
                            ": expected 4 fields");
        }
        try {
            const int revision = std::stoi(fields[1]);
            check_revision(revision, "adjustments");
            rules.push_back(AdjustmentRule{upper(fields[0]), revision,
                                           CodePattern(fields[2]),
                                           parse_cause_class(fields[3])});
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw DataError("adjustments line " + std::to_string(line_no) +
                            ": cannot parse '" + t + "'");
        }
    }
    if (!header_seen) {
        throw HeaderMismatch("adjustments: missing header");
    }
    return rules;
}

std::vector<AdjustmentRule> load_adjustments(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw DataError("cannot open adjustments '" + path.string() + "'");
    }
    return load_adjustments(is);
}

std::optional<CauseClass> classify(const DeathRecord& record, const CauseMap& map,
                                   const std::vector<AdjustmentRule>& adjustments) {
    check_revision(record.icd_revision, "classify");
    const std::string country = upper(record.country);
    for (const auto& rule : adjustments) {
        if (rule.revision != record.icd_revision) continue;
        if (rule.country != "*" && rule.country != country) continue;
        if (rule.pattern.matches(record.cause_code)) {
            return rule.cause;
        }
    }
    return map.classify_code(record.icd_revision, record.cause_code);
}

ColumnMap ColumnMap::load(std::istream& is) {
    ColumnMap columns;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("column map line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("column map line " + std::to_string(line_no) +
                              ": empty key or value");
        }
        if (key == "country") {
            columns.country_column = value;
        } else if (key == "year") {
            columns.year_column = value;
        } else if (key == "sex") {
            columns.sex_column = value;
        } else if (key == "revision") {
            columns.revision_column = value;
        } else if (key == "cause") {
            columns.cause_column = value;
        } else if (key.rfind("age.", 0) == 0) {
            columns.age_columns.emplace_back(key.substr(4), value);
        } else if (key.rfind("sex.", 0) == 0) {
            const std::string v = upper(value);
            if (v == "MALE" || v == "M") {
                columns.sex_tokens[key.substr(4)] = Sex::male;
            } else if (v == "FEMALE" || v == "F") {
                columns.sex_tokens[key.substr(4)] = Sex::female;
            } else {
                throw ConfigError("column map: sex token must map to male/female");
            }
        } else if (key.rfind("revision.", 0) == 0) {
            int rev = 0;
            try {
                rev = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("column map: revision token must map to an integer");
            }
            check_revision(rev, "column map");
            columns.revision_tokens[key.substr(9)] = rev;
        } else {
            throw ConfigError("column map line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    if (columns.country_column.empty() || columns.year_column.empty() ||
        columns.sex_column.empty() || columns.revision_column.empty() ||
        columns.cause_column.empty() || columns.age_columns.empty()) {
        throw ConfigError(
            "column map must declare country, year, sex, revision, cause and at "
            "least one age.<band> column");
    }
    return columns;
}

ColumnMap ColumnMap::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw DataError("cannot open column map '" + path.string() + "'");
    }
    return load(is);
}

ParseResult parse_records(std::istream& is, const ColumnMap& columns) {
    std::string line;
    if (!std::getline(is, line)) {
        throw HeaderMismatch("input: empty file, expected a header row");
    }
    const auto header = csv::split_line(line);
    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        col_index[header[i]] = i;
    }
    const auto require_column = [&](const std::string& name) {
        const auto it = col_index.find(name);
        if (it == col_index.end()) {
            throw HeaderMismatch("input: declared column '" + name +
                                 "' not found in header");
        }
        return it->second;
    };
    const std::size_t country_at = require_column(columns.country_column);
    const std::size_t year_at = require_column(columns.year_column);
    const std::size_t sex_at = require_column(columns.sex_column);
    const std::size_t revision_at = require_column(columns.revision_column);
    const std::size_t cause_at = require_column(columns.cause_column);
    std::vector<std::pair<std::string, std::size_t>> age_at;
    for (const auto& [token, column] : columns.age_columns) {
        age_at.emplace_back(token, require_column(column));
    }

    ParseResult result;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = csv::split_line(line);
        const auto reject = [&](const std::string& reason) {
            result.rejects.push_back(RejectRow{line_no, reason, line});
        };
        std::size_t needed = std::max({country_at, year_at, sex_at, revision_at, cause_at});
        for (const auto& [token, at] : age_at) needed = std::max(needed, at);
        if (fields.size() <= needed) {
            reject("too few fields");
            continue;
        }

        DeathRecord base;
        base.country = upper(fields[country_at]);
        base.cause_code = trim(fields[cause_at]);
        if (base.country.empty()) {
            reject("empty country");
            continue;
        }
        if (base.cause_code.empty()) {
            reject("empty cause code");
            continue;
        }
        if (const auto year = parse_int_strict(fields[year_at])) {
            base.year = *year;
        } else {
            reject("cannot parse year '" + fields[year_at] + "'");
            continue;
        }

        const auto sex_it = columns.sex_tokens.find(fields[sex_at]);
        if (sex_it == columns.sex_tokens.end()) {
            reject("unknown sex token '" + fields[sex_at] + "'");
            continue;
        }
        base.sex = sex_it->second;

        const std::string rev_token = trim(fields[revision_at]);
        const auto rev_it = columns.revision_tokens.find(rev_token);
        if (rev_it != columns.revision_tokens.end()) {
            base.icd_revision = rev_it->second;
        } else if (const auto rev = parse_int_strict(rev_token)) {
            base.icd_revision = *rev;
        } else {
            reject("cannot parse ICD revision '" + rev_token + "'");
            continue;
        }
        if (base.icd_revision < 7 || base.icd_revision > 10) {
            reject("unsupported ICD revision '" + rev_token + "'");
            continue;
        }

        // All age cells must parse before any record of the row is emitted.
        std::vector<DeathRecord> row_records;
        bool row_ok = true;
        for (const auto& [token, at] : age_at) {
            const std::string cell = trim(fields[at]);
            if (cell.empty()) continue;
            std::int64_t deaths = 0;
            try {
                std::size_t pos = 0;
                deaths = std::stoll(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                reject("cannot parse deaths '" + cell + "' in age band " + token);
                row_ok = false;
                break;
            }
            if (deaths < 0) {
                reject("negative deaths in age band " + token);
                row_ok = false;
                break;
            }
            DeathRecord rec = base;
            rec.age_group = token;
            rec.deaths = deaths;
            row_records.push_back(std::move(rec));
        }
        if (row_ok) {
            for (auto& rec : row_records) {
                result.records.push_back(std::move(rec));
            }
        }
    }
    return result;
}

IngestResult build_compositions(const std::vector<DeathRecord>& records,
                                const CauseMap& map,
                                const std::vector<AdjustmentRule>& adjustments,
                                const TimeGrid& grid, const BuildOptions& opts) {
    const Eigen::Index t_count = grid.size();
    const auto grid_index = [&](int year) -> std::optional<Eigen::Index> {
        for (Eigen::Index i = 0; i < t_count; ++i) {
            if (std::abs(grid.points()(i) - static_cast<double>(year)) < 1e-9) {
                return i;
            }
        }
        return std::nullopt;
    };
    const auto selected = [&](const std::string& country) {
        if (opts.countries.empty()) return true;
        return std::find(opts.countries.begin(), opts.countries.end(), country) !=
               opts.countries.end();
    };

    struct Key {
        std::string country;
        Sex sex;
        bool operator<(const Key& other) const {
            return std::tie(country, sex) < std::tie(other.country, other.sex);
        }
    };
    std::map<Key, Eigen::MatrixXd> weighted;  // D x T weighted deaths
    std::map<std::tuple<std::string, Sex, int>, ConservationRow> conservation;
    std::map<std::string, AgeWeight> weight_cache;
    std::vector<std::string> warnings;

    for (const auto& record : records) {
        const std::string country = upper(record.country);
        if (!selected(country)) continue;

        const std::optional<CauseClass> cause = classify(record, map, adjustments);

        auto [cons_it, cons_new] = conservation.try_emplace(
            std::make_tuple(country, record.sex, record.year));
        ConservationRow& row = cons_it->second;
        if (cons_new) {
            row.country = country;
            row.sex = record.sex;
            row.year = record.year;
        }
        row.total += record.deaths;
        if (cause) {
            row.by_class[static_cast<std::size_t>(*cause)] += record.deaths;
        } else {
            row.excluded += record.deaths;
        }

        const auto gi = grid_index(record.year);
        if (!gi) continue;  // outside the analysis window

        auto [w_it, w_new] = weight_cache.try_emplace(record.age_group);
        if (w_new) {
            w_it->second = age_window_weight(record.age_group, opts);
            if (w_it->second.partial) {
                warnings.push_back("age band '" + record.age_group +
                                   "' straddles the " + std::to_string(opts.age_low) +
                                   "-" + std::to_string(opts.age_high) +
                                   " window; pro-rata weight " +
                                   csv::format_double(w_it->second.weight) + " applied");
            }
        }
        const double weight = w_it->second.weight;

        const Key key{country, record.sex};
        auto acc_it =
            weighted.try_emplace(key, Eigen::MatrixXd::Zero(kCauseClassCount, t_count))
                .first;
        if (weight > 0.0 && cause) {
            acc_it->second(static_cast<Eigen::Index>(*cause), *gi) +=
                weight * static_cast<double>(record.deaths);
        }
        // A year counts as observed only if the window receives any deaths.
    }

    // Observed = positive weighted total for that column.
    IngestResult result;
    result.warnings = std::move(warnings);
    for (auto& [key, matrix] : weighted) {
        std::vector<bool> missing(t_count, false);
        Eigen::Index n_missing = 0;
        for (Eigen::Index i = 0; i < t_count; ++i) {
            if (matrix.col(i).sum() <= 0.0) {
                missing[static_cast<std::size_t>(i)] = true;
                ++n_missing;
            }
        }
        const double observed_fraction =
            static_cast<double>(t_count - n_missing) / static_cast<double>(t_count);
        if (observed_fraction < kObservedFractionGuard) {
            throw MissingYearBeyondGuard(
                key.country + " (" + to_string(key.sex) + "): only " +
                csv::format_double(observed_fraction * 100.0) +
                "% of grid years observed");
        }

        // Masked columns get a uniform placeholder so the composition stays
        // valid until imputation replaces them.
        ClosureOptions copts;
        copts.pseudocount = opts.pseudocount;
        Eigen::MatrixXd parts(kCauseClassCount, t_count);
        for (Eigen::Index i = 0; i < t_count; ++i) {
            if (missing[static_cast<std::size_t>(i)]) {
                parts.col(i).setConstant(1.0 / kCauseClassCount);
            } else {
                parts.col(i) = close_vector(matrix.col(i), copts);
            }
        }
        auto& sample = result.by_sex[key.sex];
        sample.compositions.emplace_back(grid, std::move(parts), cause_class_names(),
                                         key.country);
        sample.masks.push_back(MissingMask{key.country, std::move(missing)});
    }

    for (auto& [key, row] : conservation) {
        result.conservation.push_back(std::move(row));
    }
    return result;
}

void write_rejects(std::ostream& os, const std::vector<RejectRow>& rejects) {
    os << "line,reason,content\n";
    for (const auto& r : rejects) {
        std::string content = r.content;
        std::replace(content.begin(), content.end(), ',', ';');
        os << r.line << ',' << r.reason << ',' << content << '\n';
    }
}

void write_conservation(std::ostream& os, const std::vector<ConservationRow>& rows) {
    os << "country,sex,year";
    for (const auto& name : cause_class_names()) os << ',' << name;
    os << ",excluded,total,balanced\n";
    for (const auto& row : rows) {
        std::int64_t classified = 0;
        for (std::int64_t v : row.by_class) classified += v;
        os << row.country << ',' << to_string(row.sex) << ',' << row.year;
        for (std::int64_t v : row.by_class) os << ',' << v;
        os << ',' << row.excluded << ',' << row.total << ','
           << ((classified + row.excluded == row.total) ? "yes" : "NO") << '\n';
    }
}

}  // namespace cfda
