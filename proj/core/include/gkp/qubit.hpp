#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "gkp/constants.hpp"

namespace gkp {

// Shift error in the two quadratures. The pair (u, v) is the ground-truth
// displacement relative to a clean code state; u couples to logical X, v to
// logical Z.
struct ShiftPair {
    double u = 0.0;
    double v = 0.0;
};

// Accumulated logical byproduct operators, tracked in software. x and z are
// parities (number of logical X / Z applications mod 2).
struct PauliFrame {
    bool x = false;
    bool z = false;

    friend PauliFrame operator^(PauliFrame a, PauliFrame b) noexcept {
        return {a.x != b.x, a.z != b.z};
    }
    friend bool operator==(PauliFrame a, PauliFrame b) noexcept = default;
};

struct GkpQubit {
    ShiftPair shift;
    PauliFrame frame;
};

struct WrapResult {
    double q_cor;  // in [-sqrt(pi)/2, sqrt(pi)/2)
    long n;        // tooth index: x = q_cor + n*sqrt(pi)
};

// Reduce x into the fundamental domain. Total for every finite x; boundary
// convention is half-open, so wrap(+sqrt(pi)/2) lands on -sqrt(pi)/2 with
// n = 1. The fixup loops handle the rounding of x/sqrt(pi) at cell edges
// and run at most twice.
inline WrapResult wrap_to_fundamental(double x) noexcept {
    const double sp = sqrt_pi();
    long n = static_cast<long>(std::floor(x / sp + 0.5));
    double q = std::fma(static_cast<double>(-n), sp, x);
    while (q < -half_cell()) {
        --n;
        q = std::fma(static_cast<double>(-n), sp, x);
    }
    while (q >= half_cell()) {
        ++n;
        q = std::fma(static_cast<double>(-n), sp, x);
    }
    return {q, n};
}

// Shift propagation through CNOT, control first: u flows control -> target,
// v flows target -> control with a sign. Frames propagate the same way
// (X on the control copies to the target, Z on the target copies to the
// control).
inline std::pair<GkpQubit, GkpQubit> cnot_propagate(const GkpQubit& control,
                                                    const GkpQubit& target) noexcept {
    GkpQubit c = control;
    GkpQubit t = target;
    t.shift.u = target.shift.u + control.shift.u;
    c.shift.v = control.shift.v - target.shift.v;
    t.frame.x = target.frame.x != control.frame.x;
    c.frame.z = control.frame.z != target.frame.z;
    return {c, t};
}

// Fold both shifts into the fundamental domain, absorbing whole teeth into
// the frame. Idempotent.
inline GkpQubit canonicalize(const GkpQubit& q) noexcept {
    GkpQubit out = q;
    WrapResult wu = wrap_to_fundamental(q.shift.u);
    WrapResult wv = wrap_to_fundamental(q.shift.v);
    out.shift.u = wu.q_cor;
    out.shift.v = wv.q_cor;
    out.frame.x = q.frame.x != ((wu.n & 1L) != 0);
    out.frame.z = q.frame.z != ((wv.n & 1L) != 0);
    return out;
}

}  // namespace gkp
