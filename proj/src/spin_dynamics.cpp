#include "spinmech/spin_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/math.hpp"
#include "spinmech/nv_spin.hpp"

namespace spinmech {

TwoLevelState bloch_rhs(const TwoLevelState& s, const BlochParams& p)
{
    const std::complex<double> i_unit{0.0, 1.0};
    TwoLevelState d;
    d.rho10 = (std::complex<double>{-p.Gamma2_star, p.Delta}) * s.rho10 +
              i_unit * (0.5 * p.Omega) * (2.0 * s.rho11 - 1.0);
    d.rho11 = -p.gamma_las * s.rho11 - p.Omega * s.rho10.imag();
    return d;
}

double lorentzian_factor(double Delta, double Gamma2_star)
{
    const double x = Delta / Gamma2_star;
    return 1.0 / (1.0 + x * x);
}

double pumping_rate(double Omega, double Gamma2_star, double Delta)
{
    return Omega * Omega * Gamma2_star / (Gamma2_star * Gamma2_star + Delta * Delta);
}

double steady_population(double Delta_bar, double Omega, double Gamma2_star, double gamma_las)
{
    const double g0 = pumping_rate(Omega, Gamma2_star, Delta_bar);
    return 0.5 * g0 / (gamma_las + g0);
}

DriveState drive_state(double Delta_bar, double Omega, double Gamma2_star, double gamma_las)
{
    DriveState d;
    d.Delta_bar = Delta_bar;
    d.Gamma0 = pumping_rate(Omega, Gamma2_star, Delta_bar);
    d.L = lorentzian_factor(Delta_bar, Gamma2_star);
    d.tau = 1.0 / (gamma_las + d.Gamma0);
    return d;
}

double adiabatic_rhs(double rho11, double theta, const AdiabaticParams& p)
{
    const double L = lorentzian_factor(p.Delta - p.G * theta, p.Gamma2_star);
    return -p.gamma_las * rho11 -
           0.5 * p.Omega * p.Omega / p.Gamma2_star * L * (2.0 * rho11 - 1.0);
}

namespace {

double model_population(const EquilibriaInputs& in, EquilibriumModel model, double theta)
{
    const double Delta_theta = in.Delta - in.G * theta;
    if (model == EquilibriumModel::Dispersive) {
        const double r = in.Omega / Delta_theta;
        return r * r;  // dressed lower-state admixture, (Omega/Delta)^2 convention
    }
    return steady_population(Delta_theta, in.Omega, in.Gamma2_star, in.gamma_las);
}

// d tau_s / d theta at the given angle, exact.
double model_torque_slope(const EquilibriaInputs& in, EquilibriumModel model, double theta)
{
    const double dt = in.Delta - in.G * theta;
    if (model == EquilibriumModel::Dispersive)
        return -2.0 * hbar * in.N * in.G * in.G * in.Omega * in.Omega / (dt * dt * dt);
    const double g0 = pumping_rate(in.Omega, in.Gamma2_star, dt);
    const double gsum = in.gamma_las + g0;
    const double denom = in.Gamma2_star * in.Gamma2_star + dt * dt;
    return -hbar * in.N * in.G * in.G * in.gamma_las * g0 * dt / (gsum * gsum * denom);
}

} // namespace

double model_spin_torque(const EquilibriaInputs& in, EquilibriumModel model, double theta)
{
    return -hbar * in.N * in.G * model_population(in, model, theta);
}

EquilibriumSet equilibria(const EquilibriaInputs& in, EquilibriumModel model)
{
    // Torque balance tau_s(theta) - rigidity * theta = 0 cleared of
    // denominators, with Delta(theta) = Delta - G theta:
    //
    //   dispersive:  hbar N G Omega^2 + K theta (Delta - G theta)^2 = 0
    //   saturated:   2 K theta [gamma_las ((Delta - G theta)^2 + Gamma2*^2)
    //                           + Omega^2 Gamma2*] + hbar N G Omega^2 Gamma2* = 0
    const double K = in.rigidity;
    const double hNG = hbar * in.N * in.G;
    const double W2 = in.Omega * in.Omega;

    double a, b, c, d;
    if (model == EquilibriumModel::Dispersive) {
        a = K * in.G * in.G;
        b = -2.0 * K * in.G * in.Delta;
        c = K * in.Delta * in.Delta;
        d = hNG * W2;
    } else {
        const double g2 = in.Gamma2_star * in.Gamma2_star;
        a = 2.0 * K * in.gamma_las * in.G * in.G;
        b = -4.0 * K * in.gamma_las * in.G * in.Delta;
        c = 2.0 * K * (in.gamma_las * (in.Delta * in.Delta + g2) + W2 * in.Gamma2_star);
        d = hNG * W2 * in.Gamma2_star;
    }

    const CubicRoots roots = solve_cubic(a, b, c, d);

    EquilibriumSet out;
    out.marginal = roots.marginal;
    const double coeff_scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(d)});

    // Stability: restoring total torque, d/dtheta [tau_s - K theta] < 0.
    // Central difference of the model torque is robust for both models.
    int n_stable = 0;
    for (int k = 0; k < roots.count; ++k) {
        const double th = roots.root[k];
        // Reject dispersive pseudo-roots at the torque singularity
        if (model == EquilibriumModel::Dispersive &&
            std::fabs(in.Delta - in.G * th) == 0.0)
            continue;
        const double residual = ((a * th + b) * th + c) * th + d;
        const double th_scale = std::max(1.0, std::fabs(th));
        if (std::fabs(residual) > 1e-10 * coeff_scale * th_scale * th_scale * th_scale)
            throw NumericalError("equilibria: root residual exceeds tolerance");

        const double slope = model_torque_slope(in, model, th) - K;
        Equilibrium e;
        e.theta = th;
        e.stable = slope < 0.0;
        e.rho11 = model_population(in, model, th);
        out.roots.push_back(e);
        if (e.stable) ++n_stable;
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const Equilibrium& x, const Equilibrium& y) { return x.theta < y.theta; });
    out.bistable = n_stable >= 2;
    return out;
}

EquilibriumSet equilibria(const SpinSystem& spin, const FieldConfig& field,
                          const MechanicalMode& mode, Transition t, EquilibriumModel model)
{
    const Eigensystem eig = exact_eigensystem(spin, field);
    const CouplingConstants cc = coupling_constants(spin, field);
    EquilibriaInputs in;
    in.Delta = field.omega_mw - eig.transition(t);
    in.G = cc.G_theta(t);
    in.Omega = field.Omega;
    in.Gamma2_star = spin.Gamma2_star;
    in.gamma_las = spin.gamma_las;
    in.N = spin.N;
    in.rigidity = mode.rigidity();
    return equilibria(in, model);
}

} // namespace spinmech
