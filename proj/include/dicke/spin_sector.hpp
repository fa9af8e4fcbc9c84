#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Fixed-N symmetric (spin-N/2) sector. Owns all operator dimensions:
/// the Dicke basis index n = occupation of mode b, n = 0..N, so the
/// J_z eigenvalue at index n is N/2 - n.
struct SpinSector {
    int n_particles = 0;

    SpinSector() = default;
    explicit SpinSector(int n) : n_particles(n) {
        if (n < 0)
            throw std::invalid_argument("SpinSector: n_particles must be >= 0, got " +
                                        std::to_string(n));
    }

    int dim() const { return n_particles + 1; }

    /// j = N/2; exact in double also for odd N (half-integers are dyadic).
    double spin_j() const { return 0.5 * n_particles; }

    /// m = N/2 - n for Dicke index n.
    double jz_eigenvalue(int dicke_index) const {
        return 0.5 * n_particles - dicke_index;
    }

    /// Dicke index for imbalance m (throws unless N/2 +- m are integers in range).
    int index_of_imbalance(double m) const;

    bool operator==(const SpinSector& o) const { return n_particles == o.n_particles; }
    bool operator!=(const SpinSector& o) const { return !(*this == o); }
};

} // namespace dicke
