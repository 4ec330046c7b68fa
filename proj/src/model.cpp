#include "zeno/model.hpp"

#include <cmath>
#include <stdexcept>

#include "zeno/errors.hpp"

namespace zeno {

namespace {
// "much less than" threshold used for the weak-coupling flags
constexpr double kWeak = 1e-2;
}

ModelParams ModelParams::make(double cutoff, double omega1, double lambda2) {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("cutoff must be positive");
    if (!(omega1 > 0.0) || !std::isfinite(omega1)) throw DomainError("omega1 must be positive");
    if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw DomainError("lambda2 must lie in [0, 1)");
    return {cutoff, omega1, lambda2};
}

double ModelParams::lambda() const { return std::sqrt(lambda2); }

bool ModelParams::weak_coupling() const { return lambda2 < kWeak && omega() < kWeak; }

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"photodetachment", FormfactorId::Phi1, {1.0e10, 2.0e4, 3.18e-7}},
        {"quantum-dot", FormfactorId::Phi2, {1.67e16, 7.25e12, 3.58e-6}},
        {"hydrogen", FormfactorId::Phi3, {8.498e18, 1.55e16, 6.43e-9}},
    };
    return table;
}

const Preset& preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw std::out_of_range("unknown preset '" + name + "'");
}

}  // namespace zeno
