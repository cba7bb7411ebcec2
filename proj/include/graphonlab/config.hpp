#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace graphonlab {

// Central numeric defaults. Every tolerance that a report depends on lives
// here so report headers can print the active configuration.
struct Config {
    std::uint64_t seed = 0;            // fixed default: runs are reproducible
    std::size_t mc_samples = 1'000'000;
    int oprod_resolution = 1024;       // kernel-product grid
    int discretize_subsample = 3;      // s x s cell averaging
    double exact_cap = 1e8;            // max summands for exact step densities
    double spectral_truncation = 1e-9; // eigenvalues dropped in spectral solves
    double root_tol = 1e-12;           // scalar inverse solves
    double tol_exact = 1e-9;           // verification tolerance on exact paths
    double tol_mc_floor = 1e-4;        // MC verification: max(3*stderr, floor)
    int ae_zero_samples = 200;         // tuples for the "zero a.e." proxy test
    int pointwise_samples = 20;        // tuples for pointwise identity checks
    int cr_max_depth = 64;             // tree descent cutoff
    int mc_chunk = 65536;              // samples per deterministic chunk

    static const Config& defaults() {
        static Config c;
        return c;
    }

    std::string header() const;
};

inline std::string Config::header() const {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "# seed=%llu mc_samples=%zu oprod_resolution=%d tol_exact=%g tol_mc_floor=%g"
                  " cr_max_depth=%d",
                  static_cast<unsigned long long>(seed), mc_samples, oprod_resolution, tol_exact,
                  tol_mc_floor, cr_max_depth);
    return buf;
}

}  // namespace graphonlab
