#include "gkp/toric.hpp"

#include <cmath>
#include <stdexcept>

#include "gkp/analytics.hpp"
#include "gkp/qubit.hpp"

namespace gkp {

ToricLattice::ToricLattice(int L) : L_(L) {
    if (L < 2) throw std::invalid_argument("ToricLattice: L must be >= 2");
    support_.resize(static_cast<std::size_t>(L * L));
    dual_.resize(static_cast<std::size_t>(L * L));
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            int rp = (r + 1) % L;
            int rm = (r + L - 1) % L;
            int cp = (c + 1) % L;
            int cm = (c + L - 1) % L;
            int p = plaquette(r, c);
            support_[static_cast<std::size_t>(p)] = {
                horizontal_edge(r, c), horizontal_edge(rp, c),
                vertical_edge(r, c), vertical_edge(r, cp)};
            dual_[static_cast<std::size_t>(p)] = {{
                {plaquette(r, cp), vertical_edge(r, cp)},
                {plaquette(r, cm), vertical_edge(r, c)},
                {plaquette(rp, c), horizontal_edge(rp, c)},
                {plaquette(rm, c), horizontal_edge(r, c)},
            }};
        }
    }
}

ErrorPattern empty_pattern(const ToricLattice& lat) {
    return ErrorPattern(static_cast<std::size_t>(lat.num_edges()), 0);
}

void xor_into(ErrorPattern& dst, const ErrorPattern& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

SyndromeMeasurement ideal_syndrome(const ToricLattice& lat, const ErrorPattern& e) {
    if (e.size() != static_cast<std::size_t>(lat.num_edges()))
        throw std::invalid_argument("ideal_syndrome: pattern size does not match the lattice");
    SyndromeMeasurement s;
    s.defects.resize(static_cast<std::size_t>(lat.num_plaquettes()));
    for (int p = 0; p < lat.num_plaquettes(); ++p) {
        const auto& sup = lat.plaquette_support(p);
        s.defects[static_cast<std::size_t>(p)] =
            e[static_cast<std::size_t>(sup[0])] ^ e[static_cast<std::size_t>(sup[1])] ^
            e[static_cast<std::size_t>(sup[2])] ^ e[static_cast<std::size_t>(sup[3])];
    }
    return s;
}

SyndromeMeasurement noisy_syndrome(const ToricLattice& lat, const ErrorPattern& e,
                                   double sigma2, RandomStream& rng, int k) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("noisy_syndrome: sigma2 must be >= 0");
    SyndromeMeasurement s = ideal_syndrome(lat, e);
    if (sigma2 == 0.0) {
        s.fail_prob.assign(static_cast<std::size_t>(lat.num_plaquettes()), 0.0);
        return s;
    }
    const double sigma_t = std::sqrt(5.0) * sigma2;
    RatePair rp(sigma_t, 0.0, k);
    s.fail_prob.resize(static_cast<std::size_t>(lat.num_plaquettes()));
    for (int p = 0; p < lat.num_plaquettes(); ++p) {
        double ut = sigma_t * rng.normal();
        WrapResult w = wrap_to_fundamental(ut);
        if ((w.n & 1L) != 0) s.defects[static_cast<std::size_t>(p)] ^= 1u;
        s.fail_prob[static_cast<std::size_t>(p)] = conditional_error(w.q_cor, rp);
    }
    return s;
}

HomologyClass cut_parities(const ToricLattice& lat, const ErrorPattern& pattern) {
    const int L = lat.length();
    unsigned wh = 0, wv = 0;
    for (int c = 0; c < L; ++c) wh ^= pattern[static_cast<std::size_t>(lat.horizontal_edge(0, c))];
    for (int r = 0; r < L; ++r) wv ^= pattern[static_cast<std::size_t>(lat.vertical_edge(r, 0))];
    return {wh != 0, wv != 0};
}

HomologyClass logical_class(const ToricLattice& lat, const ErrorPattern& residual) {
    SyndromeMeasurement s = ideal_syndrome(lat, residual);
    for (auto d : s.defects)
        if (d) throw std::invalid_argument("logical_class: pattern has nonempty syndrome");
    return cut_parities(lat, residual);
}

}  // namespace gkp
