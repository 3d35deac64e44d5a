#include "sgsim/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgsim {

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& i : issues) os << i.where << ": " << i.message << "\n";
    return os.str();
}

double omega_harmonic(const PhysicalConstants& c, double eta_l) {
    if (!(eta_l > 0.0)) throw std::domain_error("omega_harmonic: eta_l must be > 0");
    return std::sqrt(-c.chi_rho / c.mu0) * eta_l;
}

double omega_inverted(const PhysicalConstants& c, double B0, double eta_n) {
    if (!(B0 > 0.0)) throw std::domain_error("omega_inverted: B0 must be > 0");
    if (!(eta_n > 0.0)) throw std::domain_error("omega_inverted: eta_n must be > 0");
    return std::sqrt(-2.0 * c.chi_rho * B0 * eta_n / c.mu0);
}

double stage_omega(const PhysicalConstants& c, const StageSpec& s) {
    return s.kind == StageKind::Harmonic ? omega_harmonic(c, s.eta_linear)
                                         : omega_inverted(c, s.B0, s.eta_nonlinear);
}

double ihp_validity_bound(double B0, double eta_n) {
    if (!(B0 > 0.0) || !(eta_n > 0.0))
        throw std::domain_error("ihp_validity_bound: B0 and eta_n must be > 0");
    return std::sqrt(2.0 * B0 / eta_n);
}

namespace {

void check_constants(const PhysicalConstants& c, ValidationReport& r) {
    if (!(c.chi_rho < 0.0))
        r.issues.push_back({"constants.chi_rho", "chi_rho must be negative (diamagnet)"});
    if (!(c.hbar > 0.0)) r.issues.push_back({"constants.hbar", "hbar must be > 0"});
    if (!(c.mu0 > 0.0)) r.issues.push_back({"constants.mu0", "mu0 must be > 0"});
    if (!(c.gamma_e > 0.0)) r.issues.push_back({"constants.gamma_e", "gamma_e must be > 0"});
    if (!(c.zero_field_D > 0.0))
        r.issues.push_back({"constants.zero_field_D", "zero_field_D must be > 0"});
}

void check_particle(const ParticleSpec& p, ValidationReport& r) {
    if (!(p.mass > 0.0)) r.issues.push_back({"particle.mass", "mass > 0 required"});
    if (!(p.sigma0 > 0.0)) r.issues.push_back({"particle.sigma0", "sigma0 > 0 required"});
    if (!std::isfinite(p.x0) || !std::isfinite(p.p0))
        r.issues.push_back({"particle", "x0 and p0 must be finite"});
}

void check_stage(const StageSpec& s, ValidationReport& r) {
    const std::string where = "stage." + std::to_string(s.index);
    if (!(s.duration > 0.0)) r.issues.push_back({where, "duration > 0 required"});
    if (s.kind == StageKind::Harmonic) {
        if (!(s.eta_linear > 0.0)) r.issues.push_back({where, "Harmonic stage requires eta_linear > 0"});
        if (s.eta_nonlinear != 0.0)
            r.issues.push_back({where, "Harmonic stage must leave eta_nonlinear unset"});
    } else {
        if (!(s.eta_nonlinear > 0.0))
            r.issues.push_back({where, "InvertedHarmonic stage requires eta_nonlinear > 0"});
        if (s.eta_linear != 0.0)
            r.issues.push_back({where, "InvertedHarmonic stage must leave eta_linear unset"});
        if (!(s.B0 > 0.0)) r.issues.push_back({where, "InvertedHarmonic stage requires B0 > 0"});
        if (s.spin != SpinState::SxZero)
            r.issues.push_back({where, "IHP requires S_x = 0"});
    }
}

}  // namespace

ValidationReport validate_config(const ExperimentConfig& cfg) {
    ValidationReport r;
    check_constants(cfg.constants, r);
    check_particle(cfg.particle, r);
    for (const auto& s : cfg.stages) check_stage(s, r);

    if (cfg.mode == ProtocolMode::FiveStage) {
        if (cfg.stages.size() != 5) {
            r.issues.push_back({"stages", "five-stage protocol requires exactly 5 stages"});
        } else {
            static const StageKind pattern[5] = {
                StageKind::Harmonic, StageKind::InvertedHarmonic, StageKind::Harmonic,
                StageKind::InvertedHarmonic, StageKind::Harmonic};
            for (int i = 0; i < 5; ++i) {
                if (cfg.stages[i].kind != pattern[i])
                    r.issues.push_back({"stage." + std::to_string(i + 1),
                                        "stage kinds must alternate H, I, H, I, H"});
                if (cfg.stages[i].index != i + 1)
                    r.issues.push_back({"stage." + std::to_string(i + 1),
                                        "stage indices must be 1..5 in order"});
            }
        }
    }
    return r;
}

}  // namespace sgsim
