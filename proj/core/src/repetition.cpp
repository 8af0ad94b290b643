#include "gkp/repetition.hpp"

#include "gkp/steane.hpp"

namespace gkp {

RepetitionSyndrome extract_syndrome(const std::array<bool, 3>& flips) noexcept {
    return {flips[0] != flips[1], flips[1] != flips[2]};
}

std::array<bool, 3> decode_majority(RepetitionSyndrome s) noexcept {
    if (!s.s12 && !s.s23) return {false, false, false};
    if (s.s12 && !s.s23) return {true, false, false};
    if (s.s12 && s.s23) return {false, true, false};
    return {false, false, true};
}

std::array<bool, 3> decode_ml(RepetitionSyndrome s, const std::array<double, 3>& rates) noexcept {
    std::array<bool, 3> c = decode_majority(s);
    double pc = 1.0, pd = 1.0;
    for (int i = 0; i < 3; ++i) {
        pc *= c[i] ? rates[i] : 1.0 - rates[i];
        pd *= c[i] ? 1.0 - rates[i] : rates[i];
    }
    if (pd > pc)
        return {!c[0], !c[1], !c[2]};
    return c;
}

RepetitionState draw_repetition_state(double sigma, int k, RandomStream& rng) {
    RatePair rp(sigma, 0.0, k);
    RepetitionState st;
    for (int i = 0; i < 3; ++i) {
        GkpQubit q;
        q.shift.u = sigma * rng.normal();
        auto [corrected, outcome] = steane_correct_q(q, 0.0);
        st.flips[i] = !outcome.success;
        st.rates[i] = conditional_error(outcome.observable().q_cor, rp);
    }
    return st;
}

bool decode_repetition_trial(const RepetitionState& st, RepetitionMode mode) noexcept {
    RepetitionSyndrome s = extract_syndrome(st.flips);
    std::array<bool, 3> corr =
        mode == RepetitionMode::ml ? decode_ml(s, st.rates) : decode_majority(s);
    bool parity = false;
    for (int i = 0; i < 3; ++i) parity = parity != (corr[i] != st.flips[i]);
    return parity;
}

bool run_repetition_trial(double sigma, RandomStream& rng, RepetitionMode mode, int k) {
    return decode_repetition_trial(draw_repetition_state(sigma, k, rng), mode);
}

}  // namespace gkp
