#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace imkit {

// Machine-readable domain error. `name()` is the stable identifier the CLI
// reports; `what()` carries the human-readable detail.
class domain_error : public std::runtime_error {
public:
    domain_error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Numerical tolerances. All spectral work is double precision on dims <= 64,
// so the defaults sit well above accumulated rounding noise.
struct config {
    double herm = 1e-9;     // hermiticity residual
    double tr = 1e-9;       // trace / probability bookkeeping
    double psd = 1e-9;      // eigenvalue negativity allowance
    double orth = 1e-9;     // orthogonality residual
    double recon = 1e-9;    // reconstruction residual
    double norm = 1e-9;     // pure-state normalization
    double bloch = 1e-9;    // Bloch ball membership
    double real = 1e-9;     // imaginary-part residual for real objects
    double antisym = 1e-9;  // antisymmetry residual
    double fid = 1e-9;      // fidelity / measure comparisons
    double deg = 1e-9;      // degenerate-branch detection
    double diag = 1e-9;     // diagonal-zeroing target
    double p0 = 1e-12;      // outcome-pruning threshold

    double& by_name(const std::string& key) {
        static const std::map<std::string, double config::*> fields = {
            {"herm", &config::herm},     {"tr", &config::tr},
            {"psd", &config::psd},       {"orth", &config::orth},
            {"recon", &config::recon},   {"norm", &config::norm},
            {"bloch", &config::bloch},   {"real", &config::real},
            {"antisym", &config::antisym}, {"fid", &config::fid},
            {"deg", &config::deg},       {"diag", &config::diag},
            {"p0", &config::p0}};
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw domain_error("UnknownTolerance", "no tolerance named '" + key + "'");
        }
        return this->*(it->second);
    }
};

}  // namespace imkit
