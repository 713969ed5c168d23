#include "pzw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "pzw/errors.hpp"

namespace pzw {

void ChainGeometry::validate() const {
    if (n_cells < 2) throw ConfigError("n_cells must be >= 2");
    if (!(gamma >= 1.0)) throw ConfigError("gamma must be >= 1");
    if (origin_shift[2] != 0.0) throw ConfigError("chain must lie in the z = 0 plane");
}

BandedMatrix assemble_matter_hamiltonian(const WannierModel& model, const ChainGeometry& geom) {
    model.validate();
    geom.validate();
    if (geom.n_cells < model.coupling_range)
        std::cerr << "warning: n_cells (" << geom.n_cells << ") smaller than coupling range ("
                  << model.coupling_range << "); couplings truncated at the chain ends\n";

    const int nw = model.num_orbitals_per_cell;
    const int nc = geom.n_cells;
    const std::size_t dim = std::size_t(nw) * std::size_t(nc);
    const int hb = model.coupling_range * nw + (nw - 1);
    BandedMatrix h(dim, hb);

    for (const auto& e : model.hoppings) {
        if (e.cell_offset[1] != 0 || e.cell_offset[2] != 0)
            throw ConfigError("1-D chain model must have cell offsets along the first axis only");
        const int dr = e.cell_offset[0];
        for (int c = 0; c < nc; ++c) {
            const int c2 = c + dr;
            if (c2 < 0 || c2 >= nc) continue;  // open boundary: drop
            // h_{mn}(R) = <m, cell c | H | n, cell c + R>
            h.add(std::size_t(c) * std::size_t(nw) + std::size_t(e.m),
                  std::size_t(c2) * std::size_t(nw) + std::size_t(e.n), e.value);
        }
    }

    if (h.hermiticity_defect() > 1e-12)
        throw ConfigError("assembled matter Hamiltonian is not Hermitian");
    return h;
}

PositionOperator assemble_position_operator(const WannierModel& model, const ChainGeometry& geom,
                                            bool include_intercell) {
    model.validate();
    geom.validate();

    const int nw = model.num_orbitals_per_cell;
    const int nc = geom.n_cells;
    const std::size_t dim = std::size_t(nw) * std::size_t(nc);

    int pos_range = 0;
    if (include_intercell)
        for (const auto& p : model.positions) pos_range = std::max(pos_range, std::abs(p.cell_offset[0]));
    const int hb = pos_range * nw + (nw - 1);

    PositionOperator op;
    op.geom = geom;
    op.scaled_cell_length = geom.gamma * model.lattice_constant;
    op.chain = BandedMatrix(dim, hb);

    // Lattice part: R delta_mn delta_RR'.
    for (int c = 0; c < nc; ++c)
        for (int m = 0; m < nw; ++m) {
            const std::size_t i = std::size_t(c) * std::size_t(nw) + std::size_t(m);
            op.chain.add(i, i, model.lattice_constant * double(c));
        }

    // Wannier-center part: <m 0|s|n R>, chain coordinate = first component.
    for (const auto& p : model.positions) {
        if (p.cell_offset[1] != 0 || p.cell_offset[2] != 0)
            throw ConfigError("1-D chain model must have cell offsets along the first axis only");
        const int dr = p.cell_offset[0];
        if (!include_intercell && dr != 0) continue;
        for (int c = 0; c < nc; ++c) {
            const int c2 = c + dr;
            if (c2 < 0 || c2 >= nc) continue;
            op.chain.add(std::size_t(c) * std::size_t(nw) + std::size_t(p.m),
                         std::size_t(c2) * std::size_t(nw) + std::size_t(p.n), p.value[0]);
        }
    }

    // Scale afterwards so that gamma multiplies every assembled entry
    // exactly, independent of how many terms it accumulated.
    if (geom.gamma != 1.0)
        for (int d = -hb; d <= hb; ++d) {
            cplx* dg = op.chain.diagonal(d);
            const std::size_t lo = std::size_t(std::max(0, -d));
            const std::size_t hi = dim - std::size_t(std::max(0, d));
            for (std::size_t i = lo; i < hi; ++i) dg[i] *= geom.gamma;
        }

    if (op.chain.hermiticity_defect() > 1e-12)
        throw ConfigError("assembled position operator is not Hermitian");
    return op;
}

BandedMatrix PositionOperator::component(int xi) const {
    const double st = std::sin(geom.tilt_theta);
    const double ct = std::cos(geom.tilt_theta);
    const double scale = xi == 0 ? st : (xi == 1 ? ct : 0.0);
    const double shift = geom.origin_shift[std::size_t(xi)];

    BandedMatrix out(chain.dim(), chain.half_bandwidth());
    for (int d = -chain.half_bandwidth(); d <= chain.half_bandwidth(); ++d) {
        const cplx* src = chain.diagonal(d);
        cplx* dst = out.diagonal(d);
        const std::size_t lo = std::size_t(std::max(0, -d));
        const std::size_t hi = chain.dim() - std::size_t(std::max(0, d));
        for (std::size_t i = lo; i < hi; ++i) dst[i] = scale * src[i];
    }
    for (std::size_t i = 0; i < chain.dim(); ++i) out.add(i, i, shift);
    return out;
}

namespace {

// Sorts one diagonalized block: ascending eigenvalue, deterministic
// tie-break via canonicalize_eigenvectors.
EigenSystem diag_block(const Matrix& block) {
    EigenSystem es = hermitian_eigen(block);
    canonicalize_eigenvectors(es);
    return es;
}

} // namespace

ModifiedBasis diagonalize_position(const PositionOperator& pos, bool include_intercell) {
    const auto& geom = pos.geom;
    ModifiedBasis basis;
    basis.n_cells = geom.n_cells;
    basis.sin_theta = std::sin(geom.tilt_theta);
    basis.cos_theta = std::cos(geom.tilt_theta);
    basis.origin = geom.origin_shift;

    const std::size_t dim = pos.chain.dim();
    basis.orbitals_per_cell = int(dim) / geom.n_cells;
    const int nw = basis.orbitals_per_cell;

    if (include_intercell) {
        basis.global = true;
        EigenSystem es = diag_block(pos.chain.dense());
        basis.global_unitary = std::move(es.vectors);
        basis.chain_coords = std::move(es.values);
    } else {
        basis.global = false;
        // One intra-cell block serves every cell; take cell 0 minus its
        // lattice offset (zero for cell 0).
        Matrix block{std::size_t(nw), std::size_t(nw)};
        for (int m = 0; m < nw; ++m)
            for (int n = 0; n < nw; ++n) block(std::size_t(m), std::size_t(n)) = pos.chain.at(std::size_t(m), std::size_t(n));
        EigenSystem es = diag_block(block);
        basis.cell_unitary = std::move(es.vectors);
        // Chain coordinate of state (c, a) = gamma * c * a_lattice + d_a,
        // d_a the (gamma-scaled) intra-cell block eigenvalues.
        basis.chain_coords.resize(dim);
        for (int c = 0; c < geom.n_cells; ++c)
            for (int a = 0; a < nw; ++a)
                basis.chain_coords[std::size_t(c) * std::size_t(nw) + std::size_t(a)] =
                    double(c) * pos.scaled_cell_length + es.values[std::size_t(a)];
    }
    return basis;
}

Matrix ModifiedBasis::full_unitary() const {
    if (global) return global_unitary;
    const std::size_t nw = std::size_t(orbitals_per_cell);
    Matrix u(dim(), dim());
    for (int c = 0; c < n_cells; ++c)
        for (std::size_t a = 0; a < nw; ++a)
            for (std::size_t m = 0; m < nw; ++m)
                u(std::size_t(c) * nw + m, std::size_t(c) * nw + a) = cell_unitary(m, a);
    return u;
}

void MatterOperator::apply(const cplx* x, cplx* y, std::size_t ncols, std::size_t ld) const {
    if (!dense) {
        banded.apply(x, y, ncols, ld);
        return;
    }
    const std::size_t n = full.rows();
    for (std::size_t c = 0; c < ncols; ++c) {
        const cplx* xc = x + c * ld;
        cplx* yc = y + c * ld;
        std::fill(yc, yc + n, cplx(0.0));
        for (std::size_t k = 0; k < n; ++k) {
            const cplx xk = xc[k];
            if (xk == cplx(0.0)) continue;
            const cplx* acol = full.col(k);
            for (std::size_t i = 0; i < n; ++i) yc[i] += acol[i] * xk;
        }
    }
}

MatterOperator to_modified_basis(const BandedMatrix& h_wannier, const ModifiedBasis& basis) {
    MatterOperator out;
    if (basis.global) {
        out.dense = true;
        out.full = adjoint_multiply(basis.global_unitary,
                                    multiply(h_wannier.dense(), basis.global_unitary));
        return out;
    }

    const std::size_t nw = std::size_t(basis.orbitals_per_cell);
    const int nc = basis.n_cells;
    out.dense = false;
    out.banded = BandedMatrix(h_wannier.dim(), h_wannier.half_bandwidth());
    const int cell_range = (h_wannier.half_bandwidth() - int(nw) + 1) / int(nw);
    const auto& u = basis.cell_unitary;

    Matrix blk(nw, nw);
    for (int ci = 0; ci < nc; ++ci) {
        for (int cj = std::max(0, ci - cell_range); cj <= std::min(nc - 1, ci + cell_range); ++cj) {
            for (std::size_t m = 0; m < nw; ++m)
                for (std::size_t n = 0; n < nw; ++n)
                    blk(m, n) = h_wannier.at(std::size_t(ci) * nw + m, std::size_t(cj) * nw + n);
            Matrix rot = adjoint_multiply(u, multiply(blk, u));
            for (std::size_t a = 0; a < nw; ++a)
                for (std::size_t b = 0; b < nw; ++b)
                    out.banded.set(std::size_t(ci) * nw + a, std::size_t(cj) * nw + b, rot(a, b));
        }
    }
    return out;
}

ChargeScalingPair charge_scaling_pair(double gamma) {
    if (!(gamma >= 1.0)) throw ConfigError("gamma must be >= 1");
    return {gamma, 1.0 / gamma};
}

} // namespace pzw
