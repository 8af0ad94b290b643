#pragma once

#include <array>

#include "gkp/analytics.hpp"
#include "gkp/rng.hpp"

namespace gkp {

// Three-qubit phase-flip repetition code on top of the shift code: each
// block qubit goes through one Steane round, the resulting logical-flip
// pattern is decoded from the two-bit parity syndrome.

enum class RepetitionMode { average, ml };

// Parity checks Z1 Z2 and Z2 Z3, reported as booleans (true = violated).
struct RepetitionSyndrome {
    bool s12;
    bool s23;

    friend bool operator==(RepetitionSyndrome, RepetitionSyndrome) noexcept = default;
};

// Per-trial observables after the three Steane rounds: the flip pattern is
// ground truth, the rates are what a decoder may look at.
struct RepetitionState {
    std::array<bool, 3> flips;
    std::array<double, 3> rates;  // conditional error rate per qubit
};

RepetitionSyndrome extract_syndrome(const std::array<bool, 3>& flips) noexcept;

// The weight <= 1 flip pattern consistent with the syndrome; ignores rates.
std::array<bool, 3> decode_majority(RepetitionSyndrome s) noexcept;

// Compares the likelihoods of the two syndrome-consistent patterns
// (candidate c and its complement): P(c) = prod p_i^{c_i} (1-p_i)^{1-c_i}.
// Falls back to the majority candidate on ties.
std::array<bool, 3> decode_ml(RepetitionSyndrome s, const std::array<double, 3>& rates) noexcept;

// One Steane round per block qubit: data shift ~ N(0, sigma^2), perfect
// ancillas. Flips come from the actual tooth parity; rates from the
// conditional error formula at the measured q_cor.
RepetitionState draw_repetition_state(double sigma, int k, RandomStream& rng);

// Returns true when the decoded correction leaves a logical error
// (correction XOR flips has odd parity).
bool decode_repetition_trial(const RepetitionState& st, RepetitionMode mode) noexcept;

bool run_repetition_trial(double sigma, RandomStream& rng,
                          RepetitionMode mode = RepetitionMode::ml, int k = 1);

}  // namespace gkp
