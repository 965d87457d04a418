#include "cfda/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cfda::csv {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw DataError(std::string(what) + ": cannot parse number '" + field + "'");
    }
}

void expect_header(std::istream& is, const std::string& expected, const char* what) {
    std::string line;
    if (!std::getline(is, line)) {
        throw DataError(std::string(what) + ": empty file");
    }
    if (trim(line) != expected) {
        throw DataError(std::string(what) + ": expected header '" + expected +
                        "', found '" + trim(line) + "'");
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw DataError("cannot open '" + path.string() + "' for reading");
    }
    return is;
}

/// Long-format rows grouped back into per-id matrices, preserving the file's
/// id and part order, with the year axis sorted.
struct LongTable {
    std::vector<std::string> ids;
    std::vector<std::string> parts;
    std::vector<double> years;
    // value[id][part][year]
    std::map<std::string, std::map<std::string, std::map<double, double>>> cells;
};

LongTable read_long_format(std::istream& is, const char* what) {
    expect_header(is, "id,part,year,value", what);
    LongTable table;
    std::set<std::string> seen_ids, seen_parts;
    std::set<double> seen_years;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 4) {
            throw DataError(std::string(what) + ": malformed row '" + line + "'");
        }
        const double year = parse_double(fields[2], what);
        const double value = parse_double(fields[3], what);
        if (seen_ids.insert(fields[0]).second) table.ids.push_back(fields[0]);
        if (seen_parts.insert(fields[1]).second) table.parts.push_back(fields[1]);
        seen_years.insert(year);
        table.cells[fields[0]][fields[1]][year] = value;
    }
    table.years.assign(seen_years.begin(), seen_years.end());
    return table;
}

Eigen::MatrixXd table_matrix(const LongTable& table, const std::string& id,
                             const char* what) {
    const auto& by_part = table.cells.at(id);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(table.parts.size()),
                      static_cast<Eigen::Index>(table.years.size()));
    for (std::size_t d = 0; d < table.parts.size(); ++d) {
        const auto part_it = by_part.find(table.parts[d]);
        if (part_it == by_part.end()) {
            throw DataError(std::string(what) + ": id '" + id + "' missing part '" +
                            table.parts[d] + "'");
        }
        for (std::size_t i = 0; i < table.years.size(); ++i) {
            const auto year_it = part_it->second.find(table.years[i]);
            if (year_it == part_it->second.end()) {
                throw DataError(std::string(what) + ": id '" + id + "' part '" +
                                table.parts[d] + "' missing year " +
                                format_double(table.years[i]));
            }
            m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) =
                year_it->second;
        }
    }
    return m;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

void write_compositions(std::ostream& os,
                        const std::vector<FunctionalComposition>& sample) {
    os << "id,part,year,value\n";
    for (const auto& f : sample) {
        for (Eigen::Index d = 0; d < f.n_parts(); ++d) {
            const std::string part = f.part_names().empty()
                                         ? "part" + std::to_string(d + 1)
                                         : f.part_names()[d];
            for (Eigen::Index i = 0; i < f.n_points(); ++i) {
                os << f.id() << ',' << part << ',' << format_double(f.grid().points()(i))
                   << ',' << format_double(f.parts()(d, i)) << '\n';
            }
        }
    }
}

void write_compositions(const std::filesystem::path& path,
                        const std::vector<FunctionalComposition>& sample) {
    auto os = open_output(path);
    write_compositions(os, sample);
}

std::vector<FunctionalComposition> read_compositions(std::istream& is) {
    const LongTable table = read_long_format(is, "compositions");
    std::vector<FunctionalComposition> out;
    if (table.ids.empty()) return out;
    TimeGrid grid{Eigen::Map<const Eigen::VectorXd>(table.years.data(),
                                                    static_cast<Eigen::Index>(
                                                        table.years.size()))};
    for (const auto& id : table.ids) {
        out.emplace_back(grid, table_matrix(table, id, "compositions"), table.parts, id);
    }
    return out;
}

std::vector<FunctionalComposition> read_compositions(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_compositions(is);
}

void write_clr_curves(std::ostream& os, const std::vector<ClrCurve>& curves) {
    os << "id,part,year,value\n";
    for (const auto& u : curves) {
        for (Eigen::Index d = 0; d < u.n_parts(); ++d) {
            const std::string part = u.part_names().empty()
                                         ? "part" + std::to_string(d + 1)
                                         : u.part_names()[d];
            for (Eigen::Index i = 0; i < u.n_points(); ++i) {
                os << u.id() << ",clr_" << part << ','
                   << format_double(u.grid().points()(i)) << ','
                   << format_double(u.coords()(d, i)) << '\n';
            }
        }
    }
}

std::vector<ClrCurve> read_clr_curves(std::istream& is) {
    const LongTable table = read_long_format(is, "clr curves");
    std::vector<ClrCurve> out;
    if (table.ids.empty()) return out;
    TimeGrid grid{Eigen::Map<const Eigen::VectorXd>(table.years.data(),
                                                    static_cast<Eigen::Index>(
                                                        table.years.size()))};
    std::vector<std::string> names;
    for (const auto& part : table.parts) {
        names.push_back(part.rfind("clr_", 0) == 0 ? part.substr(4) : part);
    }
    for (const auto& id : table.ids) {
        out.emplace_back(grid, table_matrix(table, id, "clr curves"), names, id);
    }
    return out;
}

void write_eigenvalues(std::ostream& os, const EigenSystem& eig) {
    os << "component,eigenvalue,fev,cumulative_fev\n";
    double cumulative = 0.0;
    for (Eigen::Index k = 0; k < eig.n_components(); ++k) {
        cumulative += eig.fev[k];
        os << (k + 1) << ',' << format_double(eig.eigenvalues[k]) << ','
           << format_double(eig.fev[k]) << ',' << format_double(cumulative) << '\n';
    }
}

namespace {

template <typename Curves>
void write_component_curves(std::ostream& os, const Curves& curves,
                            const auto& matrix_of) {
    os << "component,part,year,value\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& curve = curves[k];
        const auto& m = matrix_of(curve);
        for (Eigen::Index d = 0; d < m.rows(); ++d) {
            const std::string part = curve.part_names().empty()
                                         ? "part" + std::to_string(d + 1)
                                         : curve.part_names()[d];
            for (Eigen::Index i = 0; i < m.cols(); ++i) {
                os << (k + 1) << ',' << part << ','
                   << format_double(curve.grid().points()(i)) << ','
                   << format_double(m(d, i)) << '\n';
            }
        }
    }
}

}  // namespace

void write_clr_eigenfunctions(std::ostream& os, const EigenSystem& eig) {
    write_component_curves(os, eig.clr_eigenfunctions,
                           [](const ClrCurve& c) -> const Eigen::MatrixXd& {
                               return c.coords();
                           });
}

void write_simplex_eigenfunctions(std::ostream& os, const EigenSystem& eig) {
    write_component_curves(os, eig.simplex_eigenfunctions,
                           [](const FunctionalComposition& c) -> const Eigen::MatrixXd& {
                               return c.parts();
                           });
}

std::vector<ClrCurve> read_eigenfunction_curves(std::istream& is,
                                                const TimeGrid* grid_hint) {
    expect_header(is, "component,part,year,value", "eigenfunctions");
    std::map<int, std::map<std::string, std::map<double, double>>> cells;
    std::vector<std::string> parts;
    std::set<std::string> seen_parts;
    std::set<double> years;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 4) {
            throw DataError("eigenfunctions: malformed row '" + line + "'");
        }
        const int component = static_cast<int>(parse_double(fields[0], "eigenfunctions"));
        const double year = parse_double(fields[2], "eigenfunctions");
        const double value = parse_double(fields[3], "eigenfunctions");
        if (seen_parts.insert(fields[1]).second) parts.push_back(fields[1]);
        years.insert(year);
        cells[component][fields[1]][year] = value;
    }
    if (cells.empty()) return {};

    std::vector<double> year_axis(years.begin(), years.end());
    TimeGrid grid = grid_hint
                        ? *grid_hint
                        : TimeGrid(Eigen::Map<const Eigen::VectorXd>(
                              year_axis.data(),
                              static_cast<Eigen::Index>(year_axis.size())));
    std::vector<ClrCurve> out;
    for (const auto& [component, by_part] : cells) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(parts.size()),
                          static_cast<Eigen::Index>(year_axis.size()));
        for (std::size_t d = 0; d < parts.size(); ++d) {
            const auto& by_year = by_part.at(parts[d]);
            for (std::size_t i = 0; i < year_axis.size(); ++i) {
                m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) =
                    by_year.at(year_axis[i]);
            }
        }
        out.emplace_back(grid, std::move(m), parts,
                         "pc" + std::to_string(component));
    }
    return out;
}

void write_scores(std::ostream& os, const ScoreMatrix& scores) {
    os << "id,component,score\n";
    for (Eigen::Index i = 0; i < scores.n(); ++i) {
        for (Eigen::Index k = 0; k < scores.k(); ++k) {
            os << scores.ids[i] << ',' << (k + 1) << ','
               << format_double(scores.values(i, k)) << '\n';
        }
    }
}

ScoreMatrix read_scores(std::istream& is) {
    expect_header(is, "id,component,score", "scores");
    std::vector<std::string> ids;
    std::set<std::string> seen;
    std::map<std::string, std::map<int, double>> cells;
    int max_component = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 3) {
            throw DataError("scores: malformed row '" + line + "'");
        }
        const int component = static_cast<int>(parse_double(fields[1], "scores"));
        const double value = parse_double(fields[2], "scores");
        if (seen.insert(fields[0]).second) ids.push_back(fields[0]);
        cells[fields[0]][component] = value;
        max_component = std::max(max_component, component);
    }
    ScoreMatrix sm;
    sm.ids = ids;
    sm.values.resize(static_cast<Eigen::Index>(ids.size()), max_component);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& by_component = cells.at(ids[i]);
        for (int k = 1; k <= max_component; ++k) {
            const auto it = by_component.find(k);
            if (it == by_component.end()) {
                throw DataError("scores: id '" + ids[i] + "' missing component " +
                                std::to_string(k));
            }
            sm.values(static_cast<Eigen::Index>(i), k - 1) = it->second;
        }
    }
    for (int k = 1; k <= max_component; ++k) {
        sm.component_labels.push_back("PC" + std::to_string(k));
    }
    return sm;
}

ScoreMatrix read_scores(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_scores(is);
}

void write_cluster_report(std::ostream& os, const std::vector<std::string>& ids,
                          const ClusterResult& result) {
    os << "id,label,silhouette\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        os << ids[i] << ',' << result.labels[i] << ','
           << format_double(result.per_point_silhouette[i]) << '\n';
    }
}

void write_selection_table(std::ostream& os, const SelectionTable& table) {
    os << "G,silhouette_mean,vote_share\n";
    for (const auto& row : table.rows) {
        os << row.g << ',' << format_double(row.silhouette_mean) << ','
           << format_double(row.vote_share) << '\n';
    }
}

void write_masks(std::ostream& os, const std::vector<MissingMask>& masks,
                 const TimeGrid& grid) {
    os << "id,year\n";
    for (const auto& mask : masks) {
        for (std::size_t i = 0; i < mask.missing.size(); ++i) {
            if (mask.missing[i]) {
                os << mask.id << ','
                   << format_double(grid.points()(static_cast<Eigen::Index>(i))) << '\n';
            }
        }
    }
}

std::vector<MissingMask> read_masks(std::istream& is,
                                    const std::vector<std::string>& ids,
                                    const TimeGrid& grid) {
    expect_header(is, "id,year", "masks");
    std::map<std::string, std::vector<bool>> flags;
    for (const auto& id : ids) {
        flags[id] = std::vector<bool>(grid.size(), false);
    }
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 2) {
            throw DataError("masks: malformed row '" + line + "'");
        }
        const auto it = flags.find(fields[0]);
        if (it == flags.end()) continue;  // mask for an id outside this sample
        const double year = parse_double(fields[1], "masks");
        bool found = false;
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            if (std::abs(grid.points()(i) - year) < 1e-9) {
                it->second[static_cast<std::size_t>(i)] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw DataError("masks: year " + fields[1] + " not on the grid");
        }
    }
    std::vector<MissingMask> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        out.push_back(MissingMask{id, flags.at(id)});
    }
    return out;
}

}  // namespace cfda::csv
