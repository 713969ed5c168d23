#include "pzw/wannier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "pzw/errors.hpp"

namespace pzw {

namespace {

struct LineReader {
    std::istream& in;
    int line_no = 0;

    // Returns false at end of stream; skips nothing (blank lines are errors
    // where a data line is expected, so the caller decides).
    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    }
};

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

long parse_int(const std::string& tok, int line_no) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError("line " + std::to_string(line_no) + ": expected integer, got '" + tok + "'");
    return v;
}

double parse_real(const std::string& tok, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": expected number, got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError("line " + std::to_string(line_no) + ": expected number, got '" + tok + "'");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ParsedHr parse_hr(std::istream& in) {
    LineReader rd{in};
    std::string line;

    if (!rd.next(line)) throw ParseError("empty file: expected comment line");
    if (!rd.next(line)) throw ParseError("truncated file: expected num_wann line");
    const auto nw_toks = tokenize(line);
    if (nw_toks.size() != 1)
        throw ParseError("line " + std::to_string(rd.line_no) + ": expected a single num_wann integer");
    const int num_wann = int(parse_int(nw_toks[0], rd.line_no));
    if (num_wann < 1) throw ParseError("num_wann must be >= 1");

    if (!rd.next(line)) throw ParseError("truncated file: expected nrpts line");
    const auto np_toks = tokenize(line);
    if (np_toks.size() != 1)
        throw ParseError("line " + std::to_string(rd.line_no) + ": expected a single nrpts integer");
    const int nrpts = int(parse_int(np_toks[0], rd.line_no));
    if (nrpts < 1) throw ParseError("nrpts must be >= 1");

    // Degeneracies, 15 per line.
    std::vector<int> degeneracies;
    degeneracies.reserve(std::size_t(nrpts));
    const int deg_lines = (nrpts + 14) / 15;
    for (int l = 0; l < deg_lines; ++l) {
        if (!rd.next(line))
            throw ParseError("truncated file: expected " + std::to_string(deg_lines) +
                             " degeneracy lines, got " + std::to_string(l));
        const int expected = std::min(15, nrpts - l * 15);
        const auto toks = tokenize(line);
        if (int(toks.size()) != expected)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected " +
                             std::to_string(expected) + " degeneracies, found " +
                             std::to_string(toks.size()));
        for (const auto& t : toks) {
            const long d = parse_int(t, rd.line_no);
            if (d < 1)
                throw ParseError("line " + std::to_string(rd.line_no) + ": degeneracy must be >= 1");
            degeneracies.push_back(int(d));
        }
    }

    const long n_data = long(nrpts) * num_wann * num_wann;
    std::vector<HoppingEntry> entries;
    entries.reserve(std::size_t(n_data));
    const long per_block = long(num_wann) * num_wann;
    for (long k = 0; k < n_data; ++k) {
        if (!rd.next(line))
            throw ParseError("truncated file: expected " + std::to_string(n_data) +
                             " data lines, got " + std::to_string(k));
        const auto toks = tokenize(line);
        if (toks.size() != 7)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 7 columns, found " +
                             std::to_string(toks.size()));
        HoppingEntry e;
        for (int c = 0; c < 3; ++c) e.cell_offset[std::size_t(c)] = int(parse_int(toks[std::size_t(c)], rd.line_no));
        e.m = int(parse_int(toks[3], rd.line_no)) - 1;
        e.n = int(parse_int(toks[4], rd.line_no)) - 1;
        if (e.m < 0 || e.m >= num_wann || e.n < 0 || e.n >= num_wann)
            throw ParseError("line " + std::to_string(rd.line_no) + ": orbital index out of range");
        const double re = parse_real(toks[5], rd.line_no);
        const double im = parse_real(toks[6], rd.line_no);
        const int block = int(k / per_block);
        const double deg = double(degeneracies[std::size_t(block)]);
        e.value = cplx(re, im) / deg;
        // All lines of one R-block must share the same cell offset.
        if (k % per_block != 0) {
            const auto& first = entries[std::size_t(block) * std::size_t(per_block)];
            if (e.cell_offset != first.cell_offset)
                throw ParseError("line " + std::to_string(rd.line_no) +
                                 ": cell offset differs within an R-point block");
        }
        entries.push_back(e);
    }

    return ParsedHr{std::move(entries), HrMetadata{num_wann, nrpts, std::move(degeneracies)}};
}

std::vector<PositionEntry> parse_r(std::istream& in) {
    LineReader rd{in};
    std::string line;

    if (!rd.next(line)) throw ParseError("empty file: expected comment line");
    if (!rd.next(line)) throw ParseError("truncated file: expected num_wann line");
    const auto nw_toks = tokenize(line);
    if (nw_toks.size() != 1)
        throw ParseError("line " + std::to_string(rd.line_no) + ": expected a single num_wann integer");
    const int num_wann = int(parse_int(nw_toks[0], rd.line_no));
    if (num_wann < 1) throw ParseError("num_wann must be >= 1");

    std::vector<PositionEntry> entries;
    while (rd.next(line)) {
        const auto toks = tokenize(line);
        if (toks.size() != 11)
            throw ParseError("line " + std::to_string(rd.line_no) + ": expected 11 columns, found " +
                             std::to_string(toks.size()));
        PositionEntry e;
        for (int c = 0; c < 3; ++c) e.cell_offset[std::size_t(c)] = int(parse_int(toks[std::size_t(c)], rd.line_no));
        e.m = int(parse_int(toks[3], rd.line_no)) - 1;
        e.n = int(parse_int(toks[4], rd.line_no)) - 1;
        if (e.m < 0 || e.m >= num_wann || e.n < 0 || e.n >= num_wann)
            throw ParseError("line " + std::to_string(rd.line_no) + ": orbital index out of range");
        for (int c = 0; c < 3; ++c)
            e.value[std::size_t(c)] = cplx(parse_real(toks[std::size_t(5 + 2 * c)], rd.line_no),
                                           parse_real(toks[std::size_t(6 + 2 * c)], rd.line_no));
        entries.push_back(e);
    }
    return entries;
}

void WannierModel::validate() const {
    if (num_orbitals_per_cell < 1) throw ConfigError("model must have at least one orbital per cell");
    if (!(lattice_constant > 0.0)) throw ConfigError("lattice constant must be positive");

    const int nw = num_orbitals_per_cell;
    auto check_indices = [&](int m, int n) {
        if (m < 0 || m >= nw || n < 0 || n >= nw)
            throw ConfigError("orbital index out of range in model entry");
    };

    // Hermiticity closure of the hopping set: the partner of (R, m, n, v)
    // is (-R, n, m, conj v).
    std::map<std::tuple<int, int, int, int, int>, cplx> table;
    for (const auto& h : hoppings) {
        check_indices(h.m, h.n);
        table[{h.cell_offset[0], h.cell_offset[1], h.cell_offset[2], h.m, h.n}] = h.value;
    }
    for (const auto& h : hoppings) {
        const auto it = table.find({-h.cell_offset[0], -h.cell_offset[1], -h.cell_offset[2], h.n, h.m});
        if (it == table.end() || std::abs(it->second - std::conj(h.value)) > 1e-9)
            throw ConfigError("hopping set is not Hermitian-closed");
    }

    for (const auto& p : positions) {
        check_indices(p.m, p.n);
        if (p.cell_offset == std::array<int, 3>{0, 0, 0}) {
            // Intra-cell block Hermitian per component.
            bool found = false;
            for (const auto& q : positions) {
                if (q.cell_offset == p.cell_offset && q.m == p.n && q.n == p.m) {
                    for (int c = 0; c < 3; ++c)
                        if (std::abs(q.value[std::size_t(c)] - std::conj(p.value[std::size_t(c)])) > 1e-9)
                            throw ConfigError("intra-cell position block is not Hermitian");
                    found = true;
                }
            }
            if (!found && p.m != p.n) throw ConfigError("intra-cell position block is not Hermitian-closed");
        }
    }
}

std::string write_hr(const WannierModel& model) {
    model.validate();
    const int nw = model.num_orbitals_per_cell;

    // Group entries by R, dense num_wann^2 block per R-point.
    std::map<std::array<int, 3>, std::vector<cplx>> blocks;
    for (const auto& h : model.hoppings) {
        auto& blk = blocks[h.cell_offset];
        if (blk.empty()) blk.assign(std::size_t(nw) * std::size_t(nw), cplx(0.0));
        blk[std::size_t(h.m) + std::size_t(h.n) * std::size_t(nw)] += h.value;
    }
    if (blocks.empty()) throw ConfigError("model has no hoppings to write");

    std::ostringstream out;
    out << "written by pzw\n";
    out << nw << "\n";
    out << blocks.size() << "\n";
    std::size_t col = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        out << "    1";
        if (++col == 15 || k + 1 == blocks.size()) {
            out << "\n";
            col = 0;
        }
    }
    for (const auto& [off, blk] : blocks) {
        for (int n = 0; n < nw; ++n)
            for (int m = 0; m < nw; ++m) {
                const cplx v = blk[std::size_t(m) + std::size_t(n) * std::size_t(nw)];
                out << off[0] << " " << off[1] << " " << off[2] << " " << (m + 1) << " " << (n + 1)
                    << " " << fmt(v.real()) << " " << fmt(v.imag()) << "\n";
            }
    }
    return out.str();
}

std::string write_r(const WannierModel& model) {
    model.validate();
    const int nw = model.num_orbitals_per_cell;

    std::map<std::array<int, 3>, std::vector<std::array<cplx, 3>>> blocks;
    for (const auto& p : model.positions) {
        auto& blk = blocks[p.cell_offset];
        if (blk.empty()) blk.assign(std::size_t(nw) * std::size_t(nw), std::array<cplx, 3>{});
        blk[std::size_t(p.m) + std::size_t(p.n) * std::size_t(nw)] = p.value;
    }

    std::ostringstream out;
    out << "written by pzw\n";
    out << nw << "\n";
    for (const auto& [off, blk] : blocks) {
        for (int n = 0; n < nw; ++n)
            for (int m = 0; m < nw; ++m) {
                const auto& v = blk[std::size_t(m) + std::size_t(n) * std::size_t(nw)];
                out << off[0] << " " << off[1] << " " << off[2] << " " << (m + 1) << " " << (n + 1);
                for (int c = 0; c < 3; ++c)
                    out << " " << fmt(v[std::size_t(c)].real()) << " " << fmt(v[std::size_t(c)].imag());
                out << "\n";
            }
    }
    return out.str();
}

WannierModel builtin_tpa_model() {
    constexpr double a = 2.496;   // Angstrom
    constexpr double t1 = -2.45;  // eV, intra-cell
    constexpr double t2 = -1.61;  // eV, inter-cell

    WannierModel m;
    m.num_orbitals_per_cell = 2;
    m.lattice_constant = a;
    m.coupling_range = 1;

    auto add_block = [&](int rx, cplx h00, cplx h10, cplx h01, cplx h11) {
        m.hoppings.push_back({{rx, 0, 0}, 0, 0, h00});
        m.hoppings.push_back({{rx, 0, 0}, 1, 0, h10});
        m.hoppings.push_back({{rx, 0, 0}, 0, 1, h01});
        m.hoppings.push_back({{rx, 0, 0}, 1, 1, h11});
    };
    // h_{mn}(R) = <m 0|H|n R>: t1 couples the two sites of one cell, t2
    // couples site 1 of cell 0 to site 0 of cell +1.
    add_block(-1, 0.0, t2, 0.0, 0.0);
    add_block(0, 0.0, t1, t1, 0.0);
    add_block(1, 0.0, 0.0, t2, 0.0);

    // Sites at 0 and a/2 along the chain axis; off-diagonal elements zero.
    m.positions.push_back({{0, 0, 0}, 0, 0, {cplx(0.0), cplx(0.0), cplx(0.0)}});
    m.positions.push_back({{0, 0, 0}, 1, 0, {cplx(0.0), cplx(0.0), cplx(0.0)}});
    m.positions.push_back({{0, 0, 0}, 0, 1, {cplx(0.0), cplx(0.0), cplx(0.0)}});
    m.positions.push_back({{0, 0, 0}, 1, 1, {cplx(a / 2), cplx(0.0), cplx(0.0)}});

    m.validate();
    return m;
}

WannierModel load_model(const std::string& hr_path, const std::string& r_path,
                        double lattice_constant) {
    std::ifstream hr(hr_path);
    if (!hr) throw ConfigError("cannot open hr file: " + hr_path);
    auto parsed = parse_hr(hr);

    std::ifstream rf(r_path);
    if (!rf) throw ConfigError("cannot open r file: " + r_path);
    auto positions = parse_r(rf);

    WannierModel m;
    m.num_orbitals_per_cell = parsed.metadata.num_wann;
    m.lattice_constant = lattice_constant;
    m.hoppings = std::move(parsed.entries);
    m.positions = std::move(positions);
    int range = 0;
    for (const auto& h : m.hoppings)
        range = std::max({range, std::abs(h.cell_offset[0]), std::abs(h.cell_offset[1]),
                          std::abs(h.cell_offset[2])});
    m.coupling_range = range;
    m.validate();
    return m;
}

} // namespace pzw
