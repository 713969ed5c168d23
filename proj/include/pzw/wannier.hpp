#ifndef PZW_WANNIER_HPP
#define PZW_WANNIER_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pzw/linalg.hpp"

namespace pzw {

// One hopping matrix element h_{mn}(R) = <m 0|H|n R>, in eV.
// Indices are 1-based on disk and 0-based here; conversion happens at the
// parse/write boundary only.
struct HoppingEntry {
    std::array<int, 3> cell_offset{};
    int m = 0, n = 0;
    cplx value;
};

// Position matrix element <m 0|r|n R>, one complex value per Cartesian
// component, in Angstrom.
struct PositionEntry {
    std::array<int, 3> cell_offset{};
    int m = 0, n = 0;
    std::array<cplx, 3> value{};
};

struct HrMetadata {
    int num_wann = 0;
    int nrpts = 0;
    std::vector<int> degeneracies;
};

struct WannierModel {
    int num_orbitals_per_cell = 0;
    double lattice_constant = 0.0;  // Angstrom
    std::vector<HoppingEntry> hoppings;
    std::vector<PositionEntry> positions;
    int coupling_range = 0;  // max |cell offset| retained

    // Throws ConfigError on bad orbital indices, missing Hermitian partners,
    // or a non-Hermitian intra-cell position block.
    void validate() const;
};

struct ParsedHr {
    std::vector<HoppingEntry> entries;  // values already divided by degeneracy
    HrMetadata metadata;
};

ParsedHr parse_hr(std::istream& in);
std::vector<PositionEntry> parse_r(std::istream& in);

std::string write_hr(const WannierModel& model);
std::string write_r(const WannierModel& model);

// Two-band SSH-like surrogate for trans-polyacetylene: a = 2.496 A,
// intra-cell hopping t1 = -2.45 eV, inter-cell hopping t2 = -1.61 eV
// (extended-chain band gap 2|t1 - t2| = 1.68 eV), sites at 0 and a/2
// along the chain axis.
WannierModel builtin_tpa_model();

WannierModel load_model(const std::string& hr_path, const std::string& r_path,
                        double lattice_constant);

} // namespace pzw

#endif
