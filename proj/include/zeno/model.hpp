#pragma once

#include <string>
#include <vector>

namespace zeno {

// Physical parameters of the decaying level. Frequencies in s^-1.
// The model only depends on omega() = omega1/cutoff, lambda2 and the product cutoff*t.
struct ModelParams {
    double cutoff = 1.0;   // Lambda
    double omega1 = 0.0;   // bare level frequency
    double lambda2 = 0.0;  // dimensionless coupling

    // Validating constructor: cutoff > 0, omega1 > 0, 0 <= lambda2 < 1.
    static ModelParams make(double cutoff, double omega1, double lambda2);

    double omega() const { return omega1 / cutoff; }
    double lambda() const;
    // Flags gating the weak-coupling approximations: lambda^2 << 1 and omega1 << cutoff.
    bool weak_coupling() const;
    // Same physics with cutoff = 1, i.e. times measured in units of 1/Lambda.
    ModelParams dimensionless() const { return {1.0, omega(), lambda2}; }
};

enum class FormfactorId { Phi1, Phi2, Phi3, Custom };

struct Preset {
    std::string name;
    FormfactorId formfactor;
    ModelParams params;
};

const std::vector<Preset>& presets();
// Throws std::out_of_range for unknown names.
const Preset& preset(const std::string& name);

}  // namespace zeno
