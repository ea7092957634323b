#ifndef ICOH_FORMALITY_HPP
#define ICOH_FORMALITY_HPP

#include "cohomology.hpp"

#include <map>
#include <optional>
#include <utility>

namespace icoh {

struct FormalityVerdict {
    bool formal = true;
    std::optional<std::pair<FormExpr, FormExpr>> counterexample;
    FormExpr product;
    std::map<std::pair<int, int>, std::size_t> harmonic_dims;
};

// Every wedge of two BC-harmonic basis forms must again be BC-harmonic.
inline FormalityVerdict geom_bc_formality(const Complex& c, const Metric& g) {
    const int n = c.n();
    std::map<std::pair<int, int>, Subspace> harm;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) harm.emplace(std::make_pair(p, q), bc_harmonic_space(c, p, q, g));
    FormalityVerdict v;
    for (const auto& [k, h] : harm) v.harmonic_dims[k] = h.dim();
    for (auto i1 = harm.begin(); i1 != harm.end(); ++i1) {
        auto [p1, q1] = i1->first;
        if (p1 + q1 == 0) continue;
        for (auto i2 = i1; i2 != harm.end(); ++i2) {
            auto [p2, q2] = i2->first;
            if (p1 + p2 > n || q1 + q2 > n) continue;
            const Subspace& target = harm.at({p1 + p2, q1 + q2});
            const auto& B1 = i1->second.basis();
            const auto& B2 = i2->second.basis();
            for (std::size_t a = 0; a < B1.size(); ++a) {
                FormExpr fa = c.form(B1[a], p1, q1);
                for (std::size_t b = (i1 == i2 ? a : 0); b < B2.size(); ++b) {
                    FormExpr fb = c.form(B2[b], p2, q2);
                    FormExpr w = wedge(fa, fb);
                    if (w.is_zero()) continue;
                    if (!target.contains(c.coords(w, p1 + p2, q1 + q2))) {
                        v.formal = false;
                        v.counterexample = std::make_pair(fa, fb);
                        v.product = w;
                        return v;
                    }
                }
            }
        }
    }
    return v;
}

}  // namespace icoh

#endif
