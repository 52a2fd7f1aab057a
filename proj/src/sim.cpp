#include "spinmech/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spinmech/nv_spin.hpp"
#include "spinmech/rng.hpp"

namespace spinmech {

SimDrive make_drive(const SpinSystem& spin, const FieldConfig& field, Transition t)
{
    const Eigensystem eig = exact_eigensystem(spin, field);
    const CouplingConstants cc = coupling_constants(spin, field);
    SimDrive d;
    d.Delta = field.omega_mw - eig.transition(t);
    d.G = cc.G_theta(t);
    d.Omega = field.Omega;
    d.Gamma2_star = spin.Gamma2_star;
    d.gamma_las = spin.gamma_las;
    d.N = spin.N;
    return d;
}

void validate(const SimConfig& cfg)
{
    validate(cfg.mode);
    if (!(cfg.dt > 0.0)) throw ConfigError("sim: dt must be > 0");
    if (!(cfg.duration >= cfg.dt)) throw ConfigError("sim: duration must cover at least one step");
    if (cfg.stride < 1) throw ConfigError("sim: stride must be >= 1");

    const double lim_mech = 0.05 / cfg.mode.omega0;
    if (cfg.dt > lim_mech) throw ConfigError("sim: dt exceeds 0.05/omega0");

    if (cfg.spin_model == SpinModel::Off) return;
    if (!(cfg.drive.Gamma2_star > 0.0 && cfg.drive.gamma_las > 0.0))
        throw ConfigError("sim: spin models need Gamma2_star > 0 and gamma_las > 0");

    const double Delta0 = cfg.drive.Delta - cfg.drive.G * cfg.theta0;
    const double tau =
        1.0 / (cfg.drive.gamma_las + pumping_rate(cfg.drive.Omega, cfg.drive.Gamma2_star, Delta0));
    if (cfg.dt > 0.05 * tau) throw ConfigError("sim: dt exceeds 0.05*tau");
    if (cfg.spin_model == SpinModel::FullBloch) {
        if (cfg.dt > 0.05 / cfg.drive.Gamma2_star)
            throw ConfigError("sim: dt exceeds 0.05/Gamma2_star (full-bloch)");
        if (cfg.dt > 0.05 / cfg.drive.gamma_las)
            throw ConfigError("sim: dt exceeds 0.05/gamma_las (full-bloch)");
    }
}

namespace {

// Exact one-step propagator of the linear Langevin block
//   dx = v dt;  dv = (-omega0^2 x - gamma v) dt + sqrt(2 gamma kT / I) dW
// M = exp(A dt); noise covariance from stationarity: Sigma = P - M P M^T with
// P = diag(kT/(I omega0^2), kT/I), exact at any dt (zero for T = 0 or gamma = 0).
struct MechStep {
    double m00, m01, m10, m11;
    double l00, l10, l11;  // Cholesky factor of Sigma
};

MechStep make_mech_step(const MechanicalMode& mode, double dt)
{
    const double w2 = mode.omega0 * mode.omega0;
    const double lam = 0.5 * mode.gamma;
    const double x = w2 - lam * lam;
    const double xt2 = x * dt * dt;

    // c = cos(sqrt(x) t), s = sin(sqrt(x) t)/sqrt(x); same analytic function
    // continues through x <= 0 (overdamped) and x ~ 0 (critical, series).
    double c, s;
    if (std::fabs(xt2) < 1e-8) {
        s = dt * (1.0 - xt2 / 6.0 * (1.0 - xt2 / 20.0));
        c = 1.0 - xt2 / 2.0 * (1.0 - xt2 / 12.0);
    } else if (x > 0.0) {
        const double wd = std::sqrt(x);
        c = std::cos(wd * dt);
        s = std::sin(wd * dt) / wd;
    } else {
        const double kp = std::sqrt(-x);
        c = std::cosh(kp * dt);
        s = std::sinh(kp * dt) / kp;
    }
    const double e = std::exp(-lam * dt);

    MechStep st;
    st.m00 = e * (c + lam * s);
    st.m01 = e * s;
    st.m10 = -e * w2 * s;
    st.m11 = e * (c - lam * s);

    const double kT = k_boltzmann * mode.T_bath;
    const double p0 = kT / (mode.inertia * w2);
    const double p1 = kT / mode.inertia;
    const double s00 = p0 - (st.m00 * st.m00 * p0 + st.m01 * st.m01 * p1);
    const double s01 = -(st.m00 * st.m10 * p0 + st.m01 * st.m11 * p1);
    const double s11 = p1 - (st.m10 * st.m10 * p0 + st.m11 * st.m11 * p1);

    st.l00 = std::sqrt(std::max(0.0, s00));
    st.l10 = st.l00 > 0.0 ? s01 / st.l00 : 0.0;
    st.l11 = std::sqrt(std::max(0.0, s11 - st.l10 * st.l10));
    return st;
}

} // namespace

Trajectory simulate(const SimConfig& cfg)
{
    validate(cfg);

    const MechanicalMode& mode = cfg.mode;
    const SimDrive& dr = cfg.drive;
    const long long n_steps = std::llround(cfg.duration / cfg.dt);
    const long long n_rec = n_steps / cfg.stride;
    const double dt = cfg.dt;

    const MechStep mech = make_mech_step(mode, dt);
    const bool spin_on = cfg.spin_model != SpinModel::Off;
    const double torque_scale = -hbar * dr.N * dr.G / mode.inertia;  // per rho11
    const double half_dt = 0.5 * dt;

    // Full-Bloch precomputed factors: coherence substep dt/4, population dt/2
    const double e_uv = spin_on ? std::exp(-dr.Gamma2_star * 0.25 * dt) : 0.0;
    const double e_w = spin_on ? std::exp(-dr.gamma_las * 0.5 * dt) : 0.0;
    const double f_w = spin_on ? -std::expm1(-dr.gamma_las * 0.5 * dt) / dr.gamma_las : 0.0;

    double th = cfg.theta0;
    double vel = cfg.v0;
    if (cfg.thermal_init) {
        const NormalPair z = normal_pair(cfg.seed, 0, cfg.stream);
        const double kT = k_boltzmann * mode.T_bath;
        th += std::sqrt(kT / mode.rigidity()) * z.z0;
        vel += std::sqrt(kT / mode.inertia) * z.z1;
    }

    double w = cfg.spin0.rho11;
    std::complex<double> uv = cfg.spin0.rho10;
    if (spin_on && cfg.spin_steady_init) {
        const double Delta0 = dr.Delta - dr.G * th;
        w = steady_population(Delta0, dr.Omega, dr.Gamma2_star, dr.gamma_las);
        uv = std::complex<double>{0.0, 0.5 * dr.Omega} * (2.0 * w - 1.0) /
             std::complex<double>{dr.Gamma2_star, -Delta0};
    }

    // Coherence substep over dt/4 at fixed angle and population
    const auto uv_quarter = [&](double Delta_th) {
        const double ang = Delta_th * 0.25 * dt;
        const std::complex<double> E = e_uv * std::complex<double>{std::cos(ang), std::sin(ang)};
        const std::complex<double> a{-dr.Gamma2_star, Delta_th};
        const std::complex<double> b{0.0, 0.5 * dr.Omega * (2.0 * w - 1.0)};
        uv = E * uv + (E - 1.0) / a * b;
    };

    // Half-step of the spin block at fixed angle (palindromic internally)
    const auto spin_half = [&](double angle) {
        const double Delta_th = dr.Delta - dr.G * angle;
        if (cfg.spin_model == SpinModel::FullBloch) {
            uv_quarter(Delta_th);
            w = w * e_w - dr.Omega * uv.imag() * f_w;
            uv_quarter(Delta_th);
        } else {
            const double g0 = pumping_rate(dr.Omega, dr.Gamma2_star, Delta_th);
            const double r = dr.gamma_las + g0;
            const double w_inf = 0.5 * g0 / r;
            w = w_inf + (w - w_inf) * std::exp(-r * half_dt);
        }
    };

    Trajectory out;
    out.dt_sample = dt * cfg.stride;
    out.theta.reserve(static_cast<std::size_t>(n_rec));
    out.velocity.reserve(static_cast<std::size_t>(n_rec));
    out.rho11.reserve(static_cast<std::size_t>(n_rec));
    if (cfg.record_coherence) out.rho10.reserve(static_cast<std::size_t>(n_rec));

    for (long long step = 1; step <= n_steps; ++step) {
        if (spin_on) {
            spin_half(th);
            vel += half_dt * torque_scale * w;
        }

        const NormalPair z = normal_pair(cfg.seed, static_cast<std::uint64_t>(step), cfg.stream);
        const double th_new = mech.m00 * th + mech.m01 * vel + mech.l00 * z.z0;
        const double v_new =
            mech.m10 * th + mech.m11 * vel + mech.l10 * z.z0 + mech.l11 * z.z1;
        th = th_new;
        vel = v_new;

        if (spin_on) {
            vel += half_dt * torque_scale * w;
            spin_half(th);

            if (w < -1e-6 || w > 1.0 + 1e-6) {
                out.aborted = true;
                out.abort_reason = "population bound violated";
                break;
            }
            w = std::clamp(w, 0.0, 1.0);
            const double bound = std::sqrt(std::max(0.0, w * (1.0 - w)));
            const double nr = std::abs(uv);
            if (nr > bound + 1e-3) {
                out.aborted = true;
                out.abort_reason = "coherence physicality violated";
                break;
            }
            if (nr > bound + 1e-9) uv *= bound / nr;
        }
        if (!std::isfinite(th) || !std::isfinite(vel)) {
            out.aborted = true;
            out.abort_reason = "non-finite state";
            break;
        }

        if (step % cfg.stride == 0) {
            out.theta.push_back(th);
            out.velocity.push_back(vel);
            out.rho11.push_back(spin_on ? w : 0.0);
            if (cfg.record_coherence) out.rho10.push_back(uv);
        }
    }
    return out;
}

// --- FFT -------------------------------------------------------------------

namespace {

void fft_inplace(std::vector<std::complex<double>>& a)
{
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -two_pi / static_cast<double>(len);
        const std::complex<double> wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> wc{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> t = wc * a[i + j + len / 2];
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
                wc *= wl;
            }
        }
    }
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

PsdEstimate welch_psd(const std::vector<double>& x, double dt_sample,
                      std::size_t segment_len, double overlap)
{
    if (!(dt_sample > 0.0)) throw ConfigError("welch_psd: dt_sample must be > 0");
    if (!is_pow2(segment_len) || segment_len < 16)
        throw ConfigError("welch_psd: segment_len must be a power of two >= 16");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("welch_psd: overlap in [0,1)");

    const std::size_t L = segment_len;
    const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(L * (1.0 - overlap)));
    const std::size_t n = x.size();
    const std::size_t n_seg = n >= L ? (n - L) / hop + 1 : 0;
    if (n_seg < 8) throw ConfigError("welch_psd: trajectory too short (< 8 segments)");

    std::vector<double> window(L);
    double wsum2 = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        window[j] = 0.5 * (1.0 - std::cos(two_pi * j / L));
        wsum2 += window[j] * window[j];
    }

    std::vector<double> acc(L / 2 + 1, 0.0);
    std::vector<std::complex<double>> buf(L);
    double var_acc = 0.0;
    for (std::size_t s = 0; s < n_seg; ++s) {
        const double* seg = x.data() + s * hop;
        double mean = 0.0;
        for (std::size_t j = 0; j < L; ++j) mean += seg[j];
        mean /= static_cast<double>(L);
        double var = 0.0;
        for (std::size_t j = 0; j < L; ++j) {
            const double d = seg[j] - mean;
            var += d * d;
            buf[j] = d * window[j];
        }
        var_acc += var / static_cast<double>(L);
        fft_inplace(buf);
        for (std::size_t k = 0; k <= L / 2; ++k) acc[k] += std::norm(buf[k]);
    }

    PsdEstimate out;
    out.segments = n_seg;
    out.variance = var_acc / static_cast<double>(n_seg);
    out.omega.resize(L / 2 + 1);
    out.S.resize(L / 2 + 1);
    const double norm = dt_sample / (wsum2 * static_cast<double>(n_seg));
    for (std::size_t k = 0; k <= L / 2; ++k) {
        out.omega[k] = two_pi * static_cast<double>(k) / (static_cast<double>(L) * dt_sample);
        out.S[k] = norm * acc[k];
    }
    return out;
}

double psd_integral(const PsdEstimate& est)
{
    const std::size_t half = est.S.size() - 1;  // = L/2
    double sum = est.S[0] + est.S[half];
    for (std::size_t k = 1; k < half; ++k) sum += 2.0 * est.S[k];
    const double df = est.omega[1] / two_pi;
    return sum * df;
}

// --- Fits ------------------------------------------------------------------

namespace {

// Deterministic Nelder-Mead for small smooth problems.
template <int N>
std::array<double, N> nelder_mead(const std::function<double(const std::array<double, N>&)>& f,
                                  std::array<double, N> start,
                                  const std::array<double, N>& step, int max_iter = 400)
{
    constexpr int M = N + 1;
    std::array<std::array<double, N>, M> pt;
    std::array<double, M> fv;
    pt[0] = start;
    fv[0] = f(start);
    for (int i = 0; i < N; ++i) {
        pt[i + 1] = start;
        pt[i + 1][i] += step[i];
        fv[i + 1] = f(pt[i + 1]);
    }

    for (int it = 0; it < max_iter; ++it) {
        std::array<int, M> ord;
        for (int i = 0; i < M; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = ord[0], worst = ord[M - 1], second = ord[M - 2];

        std::array<double, N> centroid{};
        for (int i = 0; i < M; ++i) {
            if (i == worst) continue;
            for (int d = 0; d < N; ++d) centroid[d] += pt[i][d] / N;
        }

        const auto blend = [&](double t) {
            std::array<double, N> p;
            for (int d = 0; d < N; ++d) p[d] = centroid[d] + t * (centroid[d] - pt[worst][d]);
            return p;
        };

        const auto refl = blend(1.0);
        const double fr = f(refl);
        if (fr < fv[best]) {
            const auto exp_pt = blend(2.0);
            const double fe = f(exp_pt);
            pt[worst] = fe < fr ? exp_pt : refl;
            fv[worst] = std::min(fe, fr);
        } else if (fr < fv[second]) {
            pt[worst] = refl;
            fv[worst] = fr;
        } else {
            const auto con = blend(-0.5);
            const double fc = f(con);
            if (fc < fv[worst]) {
                pt[worst] = con;
                fv[worst] = fc;
            } else {
                for (int i = 0; i < M; ++i) {
                    if (i == best) continue;
                    for (int d = 0; d < N; ++d)
                        pt[i][d] = pt[best][d] + 0.5 * (pt[i][d] - pt[best][d]);
                    fv[i] = f(pt[i]);
                }
            }
        }
        if (std::fabs(fv[ord[0]] - fv[ord[M - 1]]) <
            1e-14 * (1.0 + std::fabs(fv[ord[0]])))
            break;
    }
    int best = 0;
    for (int i = 1; i < M; ++i)
        if (fv[i] < fv[best]) best = i;
    return pt[best];
}

} // namespace

LorentzianFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& S)
{
    if (omega.size() != S.size() || omega.size() < 8)
        throw ConfigError("fit_lorentzian: need >= 8 points");

    std::size_t kpk = 0;
    double speak = 0.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
        if (omega[k] > 0.0 && S[k] > speak) {
            speak = S[k];
            kpk = k;
        }
    }
    if (speak <= 0.0) throw NumericalError("fit_lorentzian: no positive peak");

    // half-power width estimate
    std::size_t lo = kpk, hi = kpk;
    while (lo > 0 && S[lo] > 0.5 * speak) --lo;
    while (hi + 1 < S.size() && S[hi] > 0.5 * speak) ++hi;
    double g0 = omega[hi] - omega[lo];
    if (!(g0 > 0.0)) g0 = omega[1] - omega[0];
    const double w0 = omega[kpk];
    const double a0 = speak * g0 * g0 * w0 * w0;

    // fit only the resonance neighbourhood: far-tail bins carry leakage and
    // estimator noise orders of magnitude above the true spectrum there
    std::vector<std::size_t> band;
    for (std::size_t k = 0; k < S.size(); ++k)
        if (S[k] > 0.0 && omega[k] > 0.0 && std::fabs(omega[k] - w0) <= 20.0 * g0)
            band.push_back(k);
    if (band.size() < 8) throw NumericalError("fit_lorentzian: peak too narrow for the grid");

    const auto objective = [&](const std::array<double, 3>& p) {
        const double A = std::exp(p[0]);
        const double wc = p[1];
        const double g = std::exp(p[2]);
        double sum = 0.0;
        for (std::size_t k : band) {
            const double d = wc * wc - omega[k] * omega[k];
            const double model = A / (d * d + g * g * omega[k] * omega[k]);
            const double r = std::log(model / S[k]);
            sum += r * r;
        }
        return sum;
    };

    const auto p = nelder_mead<3>(objective, {std::log(a0), w0, std::log(g0)},
                                  {0.5, 0.25 * g0 + 1e-3 * w0, 0.3});
    return {p[1], std::exp(p[2]), std::exp(p[0])};
}

TemperatureEstimate equipartition_temperature(const Trajectory& traj,
                                              const MechanicalMode& mode, double omega_fit)
{
    const std::vector<double>& x = traj.theta;
    if (x.size() < 256) throw ConfigError("equipartition_temperature: trajectory too short");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());

    if (omega_fit == 0.0) {
        std::size_t L = 16;
        while (L * 16 <= x.size()) L <<= 1;
        const PsdEstimate psd = welch_psd(x, traj.dt_sample, L);
        const LorentzianFit fit = fit_lorentzian(psd.omega, psd.S);
        omega_fit = fit.omega0;
    }

    // variance drift between halves, sigma calibrated from the scatter of
    // 16 block variances (self-adjusts to the trajectory's correlation time)
    constexpr std::size_t n_blocks = 16;
    const std::size_t bl = x.size() / n_blocks;
    double bsum = 0.0, bsum2 = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < bl; ++i) m += x[b * bl + i];
        m /= static_cast<double>(bl);
        double s = 0.0;
        for (std::size_t i = 0; i < bl; ++i) s += (x[b * bl + i] - m) * (x[b * bl + i] - m);
        s /= static_cast<double>(bl);
        bsum += s;
        bsum2 += s * s;
    }
    const double bmean = bsum / n_blocks;
    const double bvar = std::max(0.0, bsum2 / n_blocks - bmean * bmean);
    // halves are means of 8 blocks each
    const double sigma_half = std::sqrt(bvar / (n_blocks / 2));
    double v1 = 0.0, v2 = 0.0;
    {
        double m1 = 0.0, m2 = 0.0;
        const std::size_t nh = x.size() / 2;
        for (std::size_t i = 0; i < nh; ++i) m1 += x[i];
        for (std::size_t i = nh; i < 2 * nh; ++i) m2 += x[i];
        m1 /= static_cast<double>(nh);
        m2 /= static_cast<double>(nh);
        for (std::size_t i = 0; i < nh; ++i) v1 += (x[i] - m1) * (x[i] - m1);
        for (std::size_t i = nh; i < 2 * nh; ++i) v2 += (x[i] - m2) * (x[i] - m2);
        v1 /= static_cast<double>(nh);
        v2 /= static_cast<double>(nh);
    }
    const bool drift = std::fabs(v1 - v2) > 3.0 * std::sqrt(2.0) * sigma_half;

    TemperatureEstimate out;
    out.omega_fit = omega_fit;
    out.T_eff = mode.inertia * omega_fit * omega_fit * var / k_boltzmann;
    out.nonstationary = drift;
    return out;
}

RingdownFit ringdown_fit(const Trajectory& traj)
{
    const std::vector<double>& x0 = traj.theta;
    if (x0.size() < 64) throw ConfigError("ringdown_fit: trajectory too short");
    const double dt = traj.dt_sample;
    const std::size_t n = x0.size();

    // settle offset from the decayed tail
    double offset = 0.0;
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    for (std::size_t i = n - tail; i < n; ++i) offset += x0[i];
    offset /= static_cast<double>(tail);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = x0[i] - offset;

    // frequency estimate from zero crossings over the first half
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < n / 2; ++i)
        if ((x[i - 1] < 0.0) != (x[i] < 0.0)) ++crossings;
    const double t_half = dt * static_cast<double>(n / 2);
    double w_est = pi * static_cast<double>(crossings) / t_half;
    if (!(w_est > 0.0)) throw NumericalError("ringdown_fit: no oscillation detected");

    // quadrature demodulation, boxcar over one period
    std::size_t period = std::max<std::size_t>(2, static_cast<std::size_t>(two_pi / (w_est * dt)));
    if (period >= n / 4) period = n / 4;
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = -w_est * dt * static_cast<double>(i);
        z[i] = x[i] * std::complex<double>{std::cos(ph), std::sin(ph)};
    }
    std::vector<std::complex<double>> prefix(n + 1, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + z[i];

    std::vector<double> t_fit, lnA, phase;
    double amax = 0.0;
    std::vector<std::complex<double>> env(n - period);
    for (std::size_t i = 0; i + period < n; ++i) {
        env[i] = (prefix[i + period] - prefix[i]) / static_cast<double>(period);
        amax = std::max(amax, std::abs(env[i]));
    }
    double prev_arg = 0.0;
    double wrap = 0.0;
    for (std::size_t i = 0; i + period < n; ++i) {
        const double a = std::abs(env[i]);
        if (a < 1e-3 * amax) break;
        double ar = std::arg(env[i]);
        if (!t_fit.empty()) {
            while (ar + wrap - prev_arg > pi) wrap -= two_pi;
            while (ar + wrap - prev_arg < -pi) wrap += two_pi;
        }
        prev_arg = ar + wrap;
        t_fit.push_back(dt * static_cast<double>(i));
        lnA.push_back(std::log(a));
        phase.push_back(prev_arg);
    }
    if (t_fit.size() < 16) throw NumericalError("ringdown_fit: envelope too short to fit");

    const auto slope_of = [&](const std::vector<double>& y) {
        const std::size_t m = t_fit.size();
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            st += t_fit[i];
            sy += y[i];
            stt += t_fit[i] * t_fit[i];
            sty += t_fit[i] * y[i];
        }
        const double md = static_cast<double>(m);
        return (md * sty - st * sy) / (md * stt - st * st);
    };

    RingdownFit out;
    out.gamma = -2.0 * slope_of(lnA);
    out.omega = w_est + slope_of(phase);
    return out;
}

} // namespace spinmech
