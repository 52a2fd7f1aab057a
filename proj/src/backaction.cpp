#include "spinmech/backaction.hpp"

#include <cmath>
#include <limits>

#include "spinmech/parallel.hpp"

namespace spinmech {

double alpha_rate(const BackactionInputs& in)
{
    const double g0 = pumping_rate(in.Omega, in.Gamma2_star, in.Delta_bar);
    return in.G * std::sqrt(in.gamma_las * g0 * g0 / (in.Gamma2_star * in.Omega * in.Omega));
}

double spin_response_time(const BackactionInputs& in)
{
    return 1.0 / (in.gamma_las + pumping_rate(in.Omega, in.Gamma2_star, in.Delta_bar));
}

DispersiveRigidity dispersive_rigidity(const BackactionInputs& in)
{
    if (in.Delta_bar == 0.0)
        throw NumericalError("dispersive_rigidity: formula is singular at Delta_bar = 0");
    const double r = in.Omega / in.Delta_bar;
    DispersiveRigidity out;
    out.tau_s0 = -hbar * in.N * in.G * r * r;
    out.K_s = -2.0 * hbar * in.N * in.G * in.G * in.Omega * in.Omega /
              (in.Delta_bar * in.Delta_bar * in.Delta_bar);
    return out;
}

std::complex<double> adiabatic_rigidity(const BackactionInputs& in, double omega)
{
    const double at = alpha_rate(in) * spin_response_time(in);
    const double tau = spin_response_time(in);
    return -hbar * in.N * in.Delta_bar * at * at /
           std::complex<double>(1.0, -omega * tau);
}

ModifiedMode modified_mode(const MechanicalMode& mode, std::complex<double> Ks)
{
    const double Kt = mode.rigidity();
    const double Q = mode.omega0 / mode.gamma;
    ModifiedMode out;
    out.omega_tilde = mode.omega0 * (1.0 - Ks.real() / (2.0 * Kt));
    out.gamma_tilde = mode.gamma * (1.0 + Q * Ks.imag() / Kt);
    out.unstable = !(out.gamma_tilde > 0.0);
    return out;
}

ModifiedMode modified_mode_adiabatic(const MechanicalMode& mode, const BackactionInputs& in)
{
    const double at = alpha_rate(in) * spin_response_time(in);
    const double wt = mode.omega0 * spin_response_time(in);
    const double Kt = mode.rigidity();
    const double Q = mode.omega0 / mode.gamma;
    const double common = hbar * in.N * at * at * in.Delta_bar / (Kt * (1.0 + wt * wt));

    ModifiedMode out;
    out.omega_tilde = mode.omega0 * (1.0 + 0.5 * common);
    out.gamma_tilde = mode.gamma * (1.0 - Q * wt * common);
    out.unstable = !(out.gamma_tilde > 0.0);
    return out;
}

ModifiedMode modified_mode_self_consistent(const MechanicalMode& mode,
                                           const BackactionInputs& in, int max_iter,
                                           double rel_tol)
{
    double w = mode.omega0;
    ModifiedMode out = modified_mode(mode, adiabatic_rigidity(in, w));
    for (int i = 0; i < max_iter; ++i) {
        const double prev = out.omega_tilde;
        out = modified_mode(mode, adiabatic_rigidity(in, prev));
        if (std::fabs(out.omega_tilde - prev) <= rel_tol * prev) break;
    }
    return out;
}

std::complex<double> susceptibility(const MechanicalMode& mode, std::complex<double> Ks,
                                    double omega)
{
    const std::complex<double> den =
        mode.inertia * std::complex<double>(mode.omega0 * mode.omega0 - omega * omega,
                                            -omega * mode.gamma) -
        Ks;
    return 1.0 / den;
}

double psd_value(const MechanicalMode& mode, std::complex<double> Ks, double omega)
{
    const double st = 2.0 * k_boltzmann * mode.T_bath * mode.inertia * mode.gamma;
    return std::norm(susceptibility(mode, Ks, omega)) * st;
}

std::vector<std::complex<double>> susceptibility_grid(const MechanicalMode& mode,
                                                      const BackactionInputs& in,
                                                      const std::vector<double>& omega)
{
    std::vector<std::complex<double>> out(omega.size());
    parallel_for(omega.size(), [&](std::size_t i) {
        out[i] = susceptibility(mode, adiabatic_rigidity(in, omega[i]), omega[i]);
    });
    return out;
}

std::vector<double> psd_grid(const MechanicalMode& mode, const BackactionInputs& in,
                             const std::vector<double>& omega)
{
    std::vector<double> out(omega.size());
    parallel_for(omega.size(), [&](std::size_t i) {
        out[i] = psd_value(mode, adiabatic_rigidity(in, omega[i]), omega[i]);
    });
    return out;
}

double final_temperature(const MechanicalMode& mode, double gamma_tilde)
{
    if (!(gamma_tilde > 0.0))
        throw NumericalError("final_temperature: gamma_tilde <= 0 (anti-damping instability)");
    return mode.gamma / gamma_tilde * mode.T_bath;
}

BackactionResult analyze_backaction(const MechanicalMode& mode, const BackactionInputs& in)
{
    BackactionResult r;
    r.Ks_at_omega0 = adiabatic_rigidity(in, mode.omega0);
    const ModifiedMode mm = modified_mode(mode, r.Ks_at_omega0);
    r.omega_tilde = mm.omega_tilde;
    r.gamma_tilde = mm.gamma_tilde;
    r.unstable = mm.unstable;
    r.T_f = mm.unstable ? std::numeric_limits<double>::quiet_NaN()
                        : final_temperature(mode, mm.gamma_tilde);
    r.alpha = alpha_rate(in);
    r.tau = spin_response_time(in);
    return r;
}

} // namespace spinmech
