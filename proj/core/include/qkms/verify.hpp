#pragma once

#include "qkms/perfect.hpp"
#include "qkms/qhs.hpp"

namespace qkms {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    unsigned height_cutoff = 5;
    unsigned boson_cutoff = 4;
    unsigned qhs_fuzz = 2000;
    uint64_t seed = 20240901u;
    unsigned jobs = 1;
};

/// Library-level check battery for one Cartan preset; every acceptance
/// criterion is reachable through these.
std::vector<CheckResult> verify_preset(const std::string& preset, const VerifyOptions& opt);

/// The full acceptance battery (all presets + the quiver Hecke and
/// perfect-basis criteria); one entry per criterion.
std::vector<CheckResult> acceptance_criteria(unsigned jobs);

Json results_to_json(const std::vector<CheckResult>& results);

}  // namespace qkms
