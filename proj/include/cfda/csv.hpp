#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfda/cfpca.hpp"
#include "cfda/clustering.hpp"
#include "cfda/composition.hpp"
#include "cfda/smoothing.hpp"

namespace cfda::csv {

/// Stable numeric formatting for artifact files: 15 significant digits with
/// trailing zeros trimmed, so identical values always print identically.
std::string format_double(double value);

/// Minimal field splitter for the comma-separated artifact and input files.
/// Fields are trimmed; quoting is not interpreted.
std::vector<std::string> split_line(const std::string& line);

// --- compositions: long format `id,part,year,value` ---

void write_compositions(std::ostream& os,
                        const std::vector<FunctionalComposition>& sample);
void write_compositions(const std::filesystem::path& path,
                        const std::vector<FunctionalComposition>& sample);
std::vector<FunctionalComposition> read_compositions(std::istream& is);
std::vector<FunctionalComposition> read_compositions(const std::filesystem::path& path);

// --- clr curves: same layout with `clr_` prefixed part names ---

void write_clr_curves(std::ostream& os, const std::vector<ClrCurve>& curves);
std::vector<ClrCurve> read_clr_curves(std::istream& is);

// --- eigen system: `component,eigenvalue,fev,cumulative_fev` and
//     `component,part,year,value` for the eigenfunctions ---

void write_eigenvalues(std::ostream& os, const EigenSystem& eig);
void write_clr_eigenfunctions(std::ostream& os, const EigenSystem& eig);
void write_simplex_eigenfunctions(std::ostream& os, const EigenSystem& eig);
std::vector<ClrCurve> read_eigenfunction_curves(std::istream& is, const TimeGrid* grid_hint = nullptr);

// --- scores: `id,component,score` ---

void write_scores(std::ostream& os, const ScoreMatrix& scores);
ScoreMatrix read_scores(std::istream& is);
ScoreMatrix read_scores(const std::filesystem::path& path);

// --- clustering artifacts ---

void write_cluster_report(std::ostream& os, const std::vector<std::string>& ids,
                          const ClusterResult& result);
void write_selection_table(std::ostream& os, const SelectionTable& table);

// --- missing-year masks: `id,year` rows listing masked years ---

void write_masks(std::ostream& os, const std::vector<MissingMask>& masks,
                 const TimeGrid& grid);
std::vector<MissingMask> read_masks(std::istream& is,
                                    const std::vector<std::string>& ids,
                                    const TimeGrid& grid);

}  // namespace cfda::csv
