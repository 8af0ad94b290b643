#pragma once

#include <utility>

#include "gkp/qubit.hpp"

namespace gkp {

// What a decoder is allowed to see from one error-correction round: the
// measured value folded into the fundamental domain, nothing else.
struct SteaneObservable {
    double q_cor;
};

// Full record of one round. tooth and success are ground truth the
// simulator keeps for accounting; decoding code must go through
// observable() only.
struct SteaneOutcomeRaw {
    double q_cor;
    long tooth;    // n with measured_sum = q_cor + n*sqrt(pi)
    bool success;  // tooth even: the applied correction was not off by a logical

    SteaneObservable observable() const noexcept { return {q_cor}; }
};

// One Steane round in the q quadrature. The ancilla (prepared |+>, measured
// in q) arrives with its own shift pair, drawn by the caller. Measured value
// is u1 + u2; the correction replaces the data shifts by
//   u -> -ancilla.u,  v -> v - ancilla.v,
// and a logical X lands in the frame when the measured sum wraps an odd
// number of teeth.
inline std::pair<GkpQubit, SteaneOutcomeRaw> steane_correct_q(const GkpQubit& data,
                                                              const ShiftPair& ancilla) noexcept {
    WrapResult w = wrap_to_fundamental(data.shift.u + ancilla.u);
    GkpQubit out = data;
    out.shift.u = -ancilla.u;
    out.shift.v = data.shift.v - ancilla.v;
    out.frame.x = data.frame.x != ((w.n & 1L) != 0);
    return {out, SteaneOutcomeRaw{w.q_cor, w.n, (w.n & 1L) == 0}};
}

// One Steane round in the p quadrature (ancilla prepared |0>, measured in
// p). Measured value is ancilla.v - data.v; the correction maps
//   u -> u + ancilla.u,  v -> ancilla.v,
// with a logical Z in the frame on odd tooth.
inline std::pair<GkpQubit, SteaneOutcomeRaw> steane_correct_p(const GkpQubit& data,
                                                              const ShiftPair& ancilla) noexcept {
    WrapResult w = wrap_to_fundamental(ancilla.v - data.shift.v);
    GkpQubit out = data;
    out.shift.u = data.shift.u + ancilla.u;
    out.shift.v = ancilla.v;
    out.frame.z = data.frame.z != ((w.n & 1L) != 0);
    return {out, SteaneOutcomeRaw{w.q_cor, w.n, (w.n & 1L) == 0}};
}

// Convenience overloads for the common model where only the measured
// quadrature of the ancilla is noisy.
inline std::pair<GkpQubit, SteaneOutcomeRaw> steane_correct_q(const GkpQubit& data,
                                                              double ancilla_u) noexcept {
    return steane_correct_q(data, ShiftPair{ancilla_u, 0.0});
}

inline std::pair<GkpQubit, SteaneOutcomeRaw> steane_correct_p(const GkpQubit& data,
                                                              double ancilla_v) noexcept {
    return steane_correct_p(data, ShiftPair{0.0, ancilla_v});
}

}  // namespace gkp
