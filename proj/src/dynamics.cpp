#include "pzw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <utility>

#include "pzw/errors.hpp"
#include "pzw/units.hpp"

namespace pzw {

Matrix GroundState::occupied_orbitals() const {
    const std::size_t dim = eig.vectors.rows();
    Matrix occ(dim, std::size_t(n_occupied));
    for (int j = 0; j < n_occupied; ++j)
        std::copy(eig.vectors.col(std::size_t(j)), eig.vectors.col(std::size_t(j)) + dim,
                  occ.col(std::size_t(j)));
    return occ;
}

std::vector<double> GroundState::occupations() const {
    std::vector<double> f(eig.values.size(), 0.0);
    for (int j = 0; j < n_occupied; ++j) f[std::size_t(j)] = 1.0;
    return f;
}

std::vector<double> GroundState::rho0_diagonal() const {
    const std::size_t dim = eig.vectors.rows();
    std::vector<double> d(dim, 0.0);
    for (int j = 0; j < n_occupied; ++j) {
        const cplx* v = eig.vectors.col(std::size_t(j));
        for (std::size_t i = 0; i < dim; ++i) d[i] += std::norm(v[i]);
    }
    return d;
}

double GroundState::homo_lumo_gap() const {
    return eig.values[std::size_t(n_occupied)] - eig.values[std::size_t(n_occupied) - 1];
}

GroundState ground_state(const MatterOperator& h_m, int n_electrons) {
    const std::size_t dim = h_m.dim();
    if (n_electrons < 1 || std::size_t(n_electrons) >= dim)
        throw ConfigError("electron count must be in [1, dim)");

    GroundState gs;
    gs.eig = hermitian_eigen(h_m.densify());
    gs.n_occupied = n_electrons;
    const double homo = gs.eig.values[std::size_t(n_electrons) - 1];
    const double lumo = gs.eig.values[std::size_t(n_electrons)];
    if (lumo - homo < 1e-9)
        throw ConfigError("spectrum degenerate at the Fermi level; explicit filling required");
    gs.fermi_energy = 0.5 * (homo + lumo);
    return gs;
}

Matrix density_matrix(const Matrix& orbitals) {
    const std::size_t dim = orbitals.rows();
    Matrix rho(dim, dim);
    for (std::size_t c = 0; c < orbitals.cols(); ++c) {
        const cplx* v = orbitals.col(c);
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx vj = std::conj(v[j]);
            cplx* col = rho.col(j);
            for (std::size_t i = 0; i < dim; ++i) col[i] += v[i] * vj;
        }
    }
    return rho;
}

namespace {

// Eighth-order Dormand-Prince pair with fifth- and third-order error
// estimators (Hairer, Norsett & Wanner, dop853.f constants).
namespace dp {
constexpr double c2 = 0.526001519587677318785587544488e-1,
                 c3 = 0.789002279381515978178381316732e-1,
                 c4 = 0.118350341907227396726757197510,
                 c5 = 0.281649658092772603273242802490,
                 c6 = 0.333333333333333333333333333333,
                 c7 = 0.25,
                 c8 = 0.307692307692307692307692307692,
                 c9 = 0.651282051282051282051282051282,
                 c10 = 0.6,
                 c11 = 0.857142857142857142857142857142;

constexpr double b1 = 5.42937341165687622380535766363e-2,
                 b6 = 4.45031289275240888144113950566,
                 b7 = 1.89151789931450038304281599044,
                 b8 = -5.8012039600105847814672114227,
                 b9 = 3.1116436695781989440891606237e-1,
                 b10 = -1.52160949662516078556178806805e-1,
                 b11 = 2.01365400804030348374776537501e-1,
                 b12 = 4.47106157277725905176885569043e-2;

constexpr double a21 = 5.26001519587677318785587544488e-2,
                 a31 = 1.97250569845378994544595329183e-2,
                 a32 = 5.91751709536136983633785987549e-2,
                 a41 = 2.95875854768068491816892993775e-2,
                 a43 = 8.87627564304205475450678981324e-2,
                 a51 = 2.41365134159266685502369798665e-1,
                 a53 = -8.84549479328286085344864962717e-1,
                 a54 = 9.24834003261792003115737966543e-1,
                 a61 = 3.7037037037037037037037037037e-2,
                 a64 = 1.70828608729473871279604482173e-1,
                 a65 = 1.25467687566822425016691814123e-1,
                 a71 = 3.7109375e-2,
                 a74 = 1.70252211019544039314978060272e-1,
                 a75 = 6.02165389804559606850219397283e-2,
                 a76 = -1.7578125e-2;

constexpr double a81 = 3.70920001185047927108779319836e-2,
                 a84 = 1.70383925712239993810214054705e-1,
                 a85 = 1.07262030446373284651809199168e-1,
                 a86 = -1.53194377486244017527936158236e-2,
                 a87 = 8.27378916381402288758473766002e-3,
                 a91 = 6.24110958716075717114429577812e-1,
                 a94 = -3.36089262944694129406857109825,
                 a95 = -8.68219346841726006818189891453e-1,
                 a96 = 2.75920996994467083049415600797e1,
                 a97 = 2.01540675504778934086186788979e1,
                 a98 = -4.34898841810699588477366255144e1,
                 a101 = 4.77662536438264365890433908527e-1,
                 a104 = -2.48811461997166764192642586468,
                 a105 = -5.90290826836842996371446475743e-1,
                 a106 = 2.12300514481811942347288949897e1,
                 a107 = 1.52792336328824235832596922938e1,
                 a108 = -3.32882109689848629194453265587e1,
                 a109 = -2.03312017085086261358222928593e-2;

constexpr double a111 = -9.3714243008598732571704021658e-1,
                 a114 = 5.18637242884406370830023853209,
                 a115 = 1.09143734899672957818500254654,
                 a116 = -8.14978701074692612513997267357,
                 a117 = -1.85200656599969598641566180701e1,
                 a118 = 2.27394870993505042818970056734e1,
                 a119 = 2.49360555267965238987089396762,
                 a1110 = -3.0467644718982195003823669022,
                 a121 = 2.27331014751653820792359768449,
                 a124 = -1.05344954667372501984066689879e1,
                 a125 = -2.00087205822486249909675718444,
                 a126 = -1.79589318631187989172765950534e1,
                 a127 = 2.79488845294199600508499808837e1,
                 a128 = -2.85899827713502369474065508674,
                 a129 = -8.87285693353062954433549289258,
                 a1210 = 1.23605671757943030647266201528e1,
                 a1211 = 6.43392746015763530355970484046e-1;

constexpr double bhh1 = 0.244094488188976377952755905512,
                 bhh2 = 0.733846688281611857341361741547,
                 bhh3 = 0.220588235294117647058823529412e-1;

constexpr double er1 = 0.1312004499419488073250102996e-1,
                 er6 = -0.1225156446376204440720569753e1,
                 er7 = -0.4957589496572501915214079952,
                 er8 = 0.1664377182454986536961530415e1,
                 er9 = -0.3503288487499736816886487290,
                 er10 = 0.3341791187130174790297318841,
                 er11 = 0.8192320648511571246570742613e-1,
                 er12 = -0.2235530786388629525884427845e-1;
} // namespace dp

// DOP853 on a flat double array with a per-component error-weight floor.
// weight_abs marks components controlled in absolute terms (the lifted
// phases, which grow secularly).
class Dop853 {
public:
    using Rhs = std::function<void(double, const double*, double*)>;

    Dop853(std::size_t n, std::size_t n_abs, double rtol, double atol, Rhs rhs)
        : n_(n), n_abs_(n_abs), rtol_(rtol), atol_(atol), rhs_(std::move(rhs)) {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &k8_, &k9_, &k10_, &yy_, &yn_})
            v->assign(n_, 0.0);
    }

    long n_steps = 0, n_rhs = 0, n_rejected = 0;

    // Advances y from t to t_target; the cruising step size persists across
    // segment boundaries so that stepping onto the output grid stays cheap.
    void integrate_to(std::vector<double>& y, double& t, double t_target, long max_steps) {
        if (t_target - t <= 0.0) return;
        if (first_call_) {
            rhs_(t, y.data(), k1_.data());
            ++n_rhs;
            h_ = initial_step(y, t);
            first_call_ = false;
        }

        bool reject = false;
        const double eps = 1e-12 * std::max(1.0, std::abs(t_target));
        while (t < t_target - eps) {
            if (n_steps > max_steps)
                throw NumericalError("step budget exhausted at t = " + std::to_string(t));
            if (h_ < 1e-13 * std::max(1.0, std::abs(t_target)))
                throw NumericalError("step size underflow at t = " + std::to_string(t) + " fs");
            const double rem = t_target - t;
            const bool last = h_ >= rem;
            const double h_try = last ? rem : h_;

            const double err = step(y, t, h_try);
            ++n_steps;
            const double fac11 = std::pow(err, 1.0 / 8.0);

            if (err <= 1.0) {
                // Accept: yn_ holds the new state.
                t = last ? t_target : t + h_try;
                std::swap(y, yn_);
                rhs_(t, y.data(), k1_.data());
                ++n_rhs;
                if (!last) {
                    double hnew = h_try / std::max(1.0 / 6.0, std::min(3.0, fac11 / safe_));
                    if (reject) hnew = std::min(hnew, h_try);
                    h_ = hnew;
                }
                reject = false;
            } else {
                h_ = h_try / std::min(3.0, fac11 / safe_);
                reject = true;
                ++n_rejected;
            }
        }
        t = t_target;
    }

private:
    double initial_step(const std::vector<double>& y, double t) {
        // Hairer's hinit, simplified for forward integration.
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = weight(y, y, i);
            const double a = k1_[i] / sk, b = y[i] / sk;
            dnf += a * a;
            dny += b * b;
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        for (std::size_t i = 0; i < n_; ++i) yy_[i] = y[i] + h * k1_[i];
        rhs_(t + h, yy_.data(), k2_.data());
        ++n_rhs;
        double der2 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double a = (k2_[i] - k1_[i]) / weight(y, y, i);
            der2 += a * a;
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
        return std::min(100.0 * h, h1);
    }

    double weight(const std::vector<double>& y, const std::vector<double>& yn, std::size_t i) const {
        const double mag = i >= n_ - n_abs_ ? 1.0 : std::max(std::abs(y[i]), std::abs(yn[i]));
        return atol_ + rtol_ * mag;
    }

    // One trial step of size h; returns the scaled error norm and fills yn_.
    double step(const std::vector<double>& y, double t, double h) {
        using namespace dp;
        auto stage = [&](double c, std::vector<double>& k, auto&&... terms) {
            for (std::size_t i = 0; i < n_; ++i) {
                double acc = 0.0;
                ((acc += terms.first * terms.second[i]), ...);
                yy_[i] = y[i] + h * acc;
            }
            rhs_(t + c * h, yy_.data(), k.data());
            ++n_rhs;
        };
        using P = std::pair<double, const std::vector<double>&>;

        stage(c2, k2_, P{a21, k1_});
        stage(c3, k3_, P{a31, k1_}, P{a32, k2_});
        stage(c4, k4_, P{a41, k1_}, P{a43, k3_});
        stage(c5, k5_, P{a51, k1_}, P{a53, k3_}, P{a54, k4_});
        stage(c6, k6_, P{a61, k1_}, P{a64, k4_}, P{a65, k5_});
        stage(c7, k7_, P{a71, k1_}, P{a74, k4_}, P{a75, k5_}, P{a76, k6_});
        stage(c8, k8_, P{a81, k1_}, P{a84, k4_}, P{a85, k5_}, P{a86, k6_}, P{a87, k7_});
        stage(c9, k9_, P{a91, k1_}, P{a94, k4_}, P{a95, k5_}, P{a96, k6_}, P{a97, k7_},
              P{a98, k8_});
        stage(c10, k10_, P{a101, k1_}, P{a104, k4_}, P{a105, k5_}, P{a106, k6_}, P{a107, k7_},
              P{a108, k8_}, P{a109, k9_});
        stage(c11, k2_, P{a111, k1_}, P{a114, k4_}, P{a115, k5_}, P{a116, k6_}, P{a117, k7_},
              P{a118, k8_}, P{a119, k9_}, P{a1110, k10_});
        stage(1.0, k3_, P{a121, k1_}, P{a124, k4_}, P{a125, k5_}, P{a126, k6_}, P{a127, k7_},
              P{a128, k8_}, P{a129, k9_}, P{a1210, k10_}, P{a1211, k2_});

        // k4_ <- b-weighted derivative sum; yn_ <- candidate state.
        double err5 = 0.0, err3 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double ksum = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] +
                                b9 * k9_[i] + b10 * k10_[i] + b11 * k2_[i] + b12 * k3_[i];
            k4_[i] = ksum;
            yn_[i] = y[i] + h * ksum;
            const double sk = 1.0 / weight(y, yn_, i);
            const double e3 = ksum - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i];
            const double e5 = er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] +
                              er9 * k9_[i] + er10 * k10_[i] + er11 * k2_[i] + er12 * k3_[i];
            err3 += e3 * sk * e3 * sk;
            err5 += e5 * sk * e5 * sk;
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = double(n_);
        return std::abs(h) * err5 * std::sqrt(1.0 / (double(n_) * deno));
    }

    std::size_t n_, n_abs_;
    double rtol_, atol_;
    Rhs rhs_;
    double h_ = 0.0;
    bool first_call_ = true;
    const double safe_ = 0.9;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_, yy_, yn_;
};

} // namespace

Trajectory propagate(const MatterOperator& h_m, const InteractionOperator& h_lm,
                     const Matrix& initial_orbitals, const ModifiedBasis& basis,
                     const PropagationOptions& opt) {
    const std::size_t dim = h_m.dim();
    const std::size_t ncols = initial_orbitals.cols();
    if (initial_orbitals.rows() != dim || h_lm.dim() != dim || basis.dim() != dim)
        throw ConfigError("propagate: dimension mismatch");
    if (!(opt.t_end > opt.t_begin)) throw ConfigError("t_end must exceed t_begin");
    if (!(opt.dt_out > 0.0)) throw ConfigError("dt_out must be positive");

    const bool lifted = opt.lift_diagonal_phase;
    const std::size_t psi_len = 2 * dim * ncols;
    const std::size_t n_state = psi_len + (lifted ? dim : 0);

    // Scratch shared by the RHS closure.
    std::vector<double> dbuf(dim);
    std::vector<cplx> phases(dim), v(dim * ncols), w(dim * ncols);
    const double inv_hbar = 1.0 / units::hbar;

    auto rhs = [&](double t, const double* y, double* dy) {
        const cplx* psi = reinterpret_cast<const cplx*>(y);
        cplx* dpsi = reinterpret_cast<cplx*>(dy);
        h_lm.evaluate(t, dbuf, nullptr);
        if (lifted) {
            const double* theta = y + psi_len;
            double* dtheta = dy + psi_len;
            for (std::size_t i = 0; i < dim; ++i) {
                phases[i] = std::polar(1.0, -theta[i]);
                dtheta[i] = dbuf[i] * inv_hbar;
            }
            for (std::size_t c = 0; c < ncols; ++c) {
                const cplx* pc = psi + c * dim;
                cplx* vc = v.data() + c * dim;
                for (std::size_t i = 0; i < dim; ++i) vc[i] = phases[i] * pc[i];
            }
            h_m.apply(v.data(), w.data(), ncols, dim);
            for (std::size_t c = 0; c < ncols; ++c) {
                const cplx* wc = w.data() + c * dim;
                cplx* dc = dpsi + c * dim;
                for (std::size_t i = 0; i < dim; ++i)
                    dc[i] = cplx(0.0, -inv_hbar) * std::conj(phases[i]) * wc[i];
            }
        } else {
            h_m.apply(psi, w.data(), ncols, dim);
            for (std::size_t c = 0; c < ncols; ++c) {
                const cplx* pc = psi + c * dim;
                const cplx* wc = w.data() + c * dim;
                cplx* dc = dpsi + c * dim;
                for (std::size_t i = 0; i < dim; ++i)
                    dc[i] = cplx(0.0, -inv_hbar) * (wc[i] + dbuf[i] * pc[i]);
            }
        }
    };

    Dop853 stepper(n_state, lifted ? dim : 0, opt.rtol, opt.atol, rhs);

    std::vector<double> state(n_state, 0.0);
    std::memcpy(state.data(), initial_orbitals.data(), psi_len * sizeof(double));

    Trajectory traj;
    const long n_samples = long(std::ceil((opt.t_end - opt.t_begin) / opt.dt_out - 1e-9));
    traj.times.reserve(std::size_t(n_samples) + 1);
    traj.energy.reserve(std::size_t(n_samples) + 1);
    traj.polarization.reserve(std::size_t(n_samples) + 1);

    Matrix phi(dim, ncols);
    std::vector<double> site_density(dim);
    double baseline_polarization = 0.0;

    auto record = [&](double t, bool first) {
        // Recover the physical orbitals from the lifted representation.
        const cplx* psi = reinterpret_cast<const cplx*>(state.data());
        if (lifted) {
            const double* theta = state.data() + psi_len;
            for (std::size_t i = 0; i < dim; ++i) phases[i] = std::polar(1.0, -theta[i]);
            for (std::size_t c = 0; c < ncols; ++c) {
                const cplx* pc = psi + c * dim;
                cplx* fc = phi.col(c);
                for (std::size_t i = 0; i < dim; ++i) fc[i] = phases[i] * pc[i];
            }
        } else {
            std::memcpy(phi.data(), psi, psi_len * sizeof(double));
        }

        std::fill(site_density.begin(), site_density.end(), 0.0);
        double drift = 0.0;
        for (std::size_t c = 0; c < ncols; ++c) {
            const cplx* fc = phi.col(c);
            double nrm = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double p = std::norm(fc[i]);
                site_density[i] += p;
                nrm += p;
            }
            drift = std::max(drift, std::abs(std::sqrt(nrm) - 1.0));
        }
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        // Divergence guard: 100x the accumulated per-step tolerance budget
        // (the inverted comparison also trips on NaN).
        const double budget = opt.rtol * double(std::max<long>(stepper.n_steps, 1));
        if (!(drift <= 100.0 * std::max(budget, 1e-12)))
            throw NumericalError("orbital norm drift " + std::to_string(drift) +
                                 " beyond 100x the tolerance budget at t = " + std::to_string(t) +
                                 " fs");

        // <H(t)> = sum_c <phi_c|H_M + D(t)|phi_c> + charge-neutral c-number.
        double scalar = 0.0;
        h_lm.evaluate(t, dbuf, &scalar);
        h_m.apply(phi.data(), w.data(), ncols, dim);
        double energy = scalar;
        for (std::size_t c = 0; c < ncols; ++c) {
            const cplx* fc = phi.col(c);
            const cplx* wc = w.data() + c * dim;
            for (std::size_t i = 0; i < dim; ++i)
                energy += (std::conj(fc[i]) * wc[i]).real();
        }
        for (std::size_t i = 0; i < dim; ++i) energy += dbuf[i] * site_density[i];

        double pol = 0.0;
        for (std::size_t i = 0; i < dim; ++i) pol += basis.lab_x(i) * site_density[i];
        if (first) baseline_polarization = pol;

        traj.times.push_back(t);
        traj.energy.push_back(energy);
        traj.polarization.push_back(pol - baseline_polarization);
        if (opt.store_orbitals) traj.snapshots.push_back(phi);
    };

    double t = opt.t_begin;
    record(t, true);
    for (long s = 1; s <= n_samples; ++s) {
        const double t_target = std::min(opt.t_begin + double(s) * opt.dt_out, opt.t_end);
        stepper.integrate_to(state, t, t_target, opt.max_steps);
        record(t, false);
    }

    traj.final_orbitals = phi;
    traj.n_steps = stepper.n_steps;
    traj.n_rhs = stepper.n_rhs;
    traj.n_rejected = stepper.n_rejected;
    return traj;
}

} // namespace pzw
