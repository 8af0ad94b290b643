#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gkp/rng.hpp"

namespace gkp {

// L x L torus. Edge indexing (documented in docs/formats.md, schema v1):
//   horizontal edge h(r,c), joining vertices (r,c)-(r,c+1):  index r*L + c
//   vertical   edge v(r,c), joining vertices (r,c)-(r+1,c):  index L*L + r*L + c
// Plaquette p(r,c) has index r*L + c and boundary
//   { h(r,c), h(r+1,c), v(r,c), v(r,c+1) }   (rows/cols mod L).
// Only the Z-plaquette sector is represented; X-type shift errors live on
// edges and fire the two plaquettes containing the edge.
class ToricLattice {
public:
    explicit ToricLattice(int L);

    int length() const noexcept { return L_; }
    int num_edges() const noexcept { return 2 * L_ * L_; }
    int num_plaquettes() const noexcept { return L_ * L_; }

    int horizontal_edge(int r, int c) const noexcept { return r * L_ + c; }
    int vertical_edge(int r, int c) const noexcept { return L_ * L_ + r * L_ + c; }
    int plaquette(int r, int c) const noexcept { return r * L_ + c; }

    const std::array<int, 4>& plaquette_support(int p) const noexcept {
        return support_[static_cast<std::size_t>(p)];
    }

    // Edges incident to vertex (r,c). Stars are the contractible
    // syndrome-free deformations of this sector: every plaquette shares
    // either zero or two edges with a star, so toggling one never changes a
    // syndrome or a homology class.
    std::array<int, 4> vertex_star(int r, int c) const noexcept {
        const int cm = (c + L_ - 1) % L_;
        const int rm = (r + L_ - 1) % L_;
        return {horizontal_edge(r, c), horizontal_edge(r, cm),
                vertical_edge(r, c), vertical_edge(rm, c)};
    }

    struct DualStep {
        int plaquette;
        int crossing_edge;
    };
    // The four dual-lattice neighbors of a plaquette and the data edge each
    // step crosses; order is right, left, down, up (fixed for deterministic
    // tie-breaking downstream).
    const std::array<DualStep, 4>& dual_neighbors(int p) const noexcept {
        return dual_[static_cast<std::size_t>(p)];
    }

private:
    int L_;
    std::vector<std::array<int, 4>> support_;
    std::vector<std::array<DualStep, 4>> dual_;
};

// 0/1 per edge.
using ErrorPattern = std::vector<std::uint8_t>;

ErrorPattern empty_pattern(const ToricLattice& lat);
void xor_into(ErrorPattern& dst, const ErrorPattern& src);

struct SyndromeMeasurement {
    std::vector<std::uint8_t> defects;  // measured plaquette parity, 1 = fired
    std::vector<double> fail_prob;      // per-plaquette P(measurement wrong); empty if ideal
};

SyndromeMeasurement ideal_syndrome(const ToricLattice& lat, const ErrorPattern& e);

// Syndrome extraction with noisy ancillas: the measurement ancilla picks up
// the residual shifts of the four data qubits plus its own, u_t ~
// N(0, 5 sigma2^2). The measured parity is the true parity XOR the tooth
// parity of u_t, and the folded u_t yields the conditional flip probability
// at effective width sqrt(5)*sigma2. sigma2 = 0 degenerates to
// ideal_syndrome with zero fail probabilities.
SyndromeMeasurement noisy_syndrome(const ToricLattice& lat, const ErrorPattern& e,
                                   double sigma2, RandomStream& rng, int k = 1);

struct HomologyClass {
    bool wraps_horizontal;
    bool wraps_vertical;

    bool trivial() const noexcept { return !wraps_horizontal && !wraps_vertical; }
    friend bool operator==(HomologyClass, HomologyClass) noexcept = default;
};

// Crossing parities of a pattern against two fixed transversal cuts: row 0
// of horizontal edges (crossed once by a winding column of h-edges) and
// column 0 of vertical edges (crossed once by a winding row of v-edges).
// Vertex stars meet both cuts evenly, so the parities are constant on each
// coset of the syndrome-free group and label the four homology classes of
// any fixed syndrome.
HomologyClass cut_parities(const ToricLattice& lat, const ErrorPattern& pattern);

// Homology class of a residual cycle: cut_parities plus the check that the
// pattern's syndrome is empty (a pattern with defects is not a cycle and
// has no class of its own). Throws invalid_argument otherwise.
HomologyClass logical_class(const ToricLattice& lat, const ErrorPattern& residual);

}  // namespace gkp
