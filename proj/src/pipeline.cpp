#include "wickgen/pipeline.hpp"

#include <algorithm>
#include <vector>

#include "wickgen/linalg.hpp"
#include "wickgen/reduce.hpp"

namespace wickgen {

std::vector<Term> candidate_terms(const ModelSpec& m, const std::vector<Monomial>& monos,
                                  const OutputSignature& out) {
    std::vector<Term> terms;
    for (const Monomial& mono : monos)
        for (Term& t : enumerate_schemes(mono, out, m.oriented, m.dim)) terms.push_back(std::move(t));
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        int ma = a.monomial.marginal_count(), mb = b.monomial.marginal_count();
        if (ma != mb) return ma < mb;
        return a.key() < b.key();
    });
    return terms;
}

namespace {

bool has_differentiated_background(const Monomial& mono) {
    for (const auto& b : mono.blocks)
        if (b.kind == BlockKind::Background && b.derivs > 0) return true;
    return false;
}

}  // namespace

ComponentBasis enumerate_component(const ModelSpec& m, const MultiIndex& Q,
                                   const EnumerateOptions& opt) {
    ComponentBasis out;
    out.Q = Q;
    out.W = target_weight(m, Q);
    out.basis.witness = {opt.seed, opt.samples, 0, false};
    if (out.W < 0) {
        out.vanishing = true;  // the whole component is exactly zero
        return out;
    }

    OutputSignature sig = OutputSignature::for_component(m, Q);
    const int hard_ceiling = m.dim;
    const bool deepening = opt.marginal_cap < 0;
    const int cap_limit = deepening ? hard_ceiling : opt.marginal_cap;

    std::vector<Monomial> monos = enumerate_monomials(m, Q, cap_limit);
    if (opt.constant_backgrounds) {
        monos.erase(std::remove_if(monos.begin(), monos.end(), has_differentiated_background),
                    monos.end());
    }
    bool any_marginal = false;
    for (const Monomial& mono : monos) any_marginal = any_marginal || mono.marginal_count() > 0;

    std::vector<Term> terms = candidate_terms(m, monos, sig);
    if (any_marginal) {
        // invariant dressings and over-long marginal chains are always
        // module-redundant
        terms.erase(std::remove_if(terms.begin(), terms.end(),
                                   [&](const Term& t) { return t.module_reducible(m.dim); }),
                    terms.end());
    }

    ReduceOptions ropt;
    ropt.samples = opt.samples;
    // scalar outputs stack one component per sample; make the witness vector
    // long enough to ever reach full rank
    if (sig.rank == 0)
        ropt.samples = std::max(ropt.samples, static_cast<int>(terms.size()) + 2);
    ropt.marginal_witnesses = opt.marginal_witnesses;
    ropt.marginal_mode = any_marginal;
    ropt.seed = opt.seed;
    ropt.dim = m.dim;

    long comps_per_sample = 1;
    for (int r = 0; r < sig.rank; ++r) comps_per_sample *= m.dim;

    // One greedy pass; returns (basis, cap_used, stabilized).
    auto run_pass = [&](const ReduceOptions& rp) {
        struct PassResult {
            Basis basis;
            int cap_used = 0;
            bool stabilized = true;
        } res;
        res.basis.witness = {rp.seed, rp.samples, rp.marginal_mode ? rp.marginal_witnesses : 0,
                             rp.marginal_mode};
        if (!deepening || !any_marginal) {
            res.basis = reduce_basis(terms, rp);
            res.cap_used = any_marginal ? cap_limit : 0;
            return res;
        }
        // Iterative deepening over the marginal dressing depth: the terms are
        // ordered by marginal count, so the greedy pass simply continues into
        // each next depth. Stop once two consecutive depths contribute no new
        // independent term; the hard ceiling is the dimension (trace powers
        // beyond it are algebraically dependent). Hitting the ceiling before
        // stabilization is flagged.
        const int witnesses = rp.marginal_mode ? rp.marginal_witnesses : 1;
        std::vector<RankAccumulator> acc(static_cast<std::size_t>(witnesses));
        std::size_t i = 0;
        int quiet = 0, cap_used = 0;
        bool stabilized = false;
        for (int d = 0; d <= hard_ceiling; ++d) {
            std::size_t kept_before = res.basis.terms.size();
            while (i < terms.size() && terms[i].monomial.marginal_count() == d) {
                const Term& t = terms[i];
                std::vector<Vec> rows;
                bool keep = false;
                for (int w = 0; w < witnesses; ++w) rows.push_back(evaluation_row(t, rp, w));
                for (int w = 0; w < witnesses; ++w)
                    if (!acc[static_cast<std::size_t>(w)].contains(rows[static_cast<std::size_t>(w)])) {
                        keep = true;
                        break;
                    }
                if (keep) {
                    for (int w = 0; w < witnesses; ++w)
                        acc[static_cast<std::size_t>(w)].offer(
                            std::move(rows[static_cast<std::size_t>(w)]));
                    res.basis.terms.push_back(t);
                }
                ++i;
            }
            cap_used = d;
            if (d > 0) {
                quiet = res.basis.terms.size() == kept_before ? quiet + 1 : 0;
                if (quiet >= 2) {
                    stabilized = true;
                    break;
                }
            }
        }
        res.cap_used = cap_used;
        res.stabilized = stabilized;
        return res;
    };

    // Independence decisions are sound only when the stacked witness rows are
    // comfortably longer than the rank they certify; rerun with more samples
    // until adequate (decisions are exact rank computations either way, the
    // sample count only controls how much of each term's multilinear profile
    // the rows expose).
    auto pass = run_pass(ropt);
    for (int round = 0; round < 3; ++round) {
        long kept = static_cast<long>(pass.basis.terms.size());
        int adequate = static_cast<int>((2 * kept + 8 + comps_per_sample - 1) / comps_per_sample);
        if (ropt.samples >= adequate) break;
        ropt.samples = adequate;
        pass = run_pass(ropt);
    }

    out.basis = std::move(pass.basis);
    out.marginal_cap_used = pass.cap_used;
    out.saturation_flagged = deepening && any_marginal && !pass.stabilized;
    const int cap_used = out.marginal_cap_used;
    if (any_marginal) {
        monos.erase(std::remove_if(monos.begin(), monos.end(),
                                   [&](const Monomial& mo) { return mo.marginal_count() > cap_used; }),
                    monos.end());
        terms.erase(std::remove_if(terms.begin(), terms.end(),
                                   [&](const Term& t) { return t.monomial.marginal_count() > cap_used; }),
                    terms.end());
    }

    out.monomials = monos;
    out.work.monomials = static_cast<long>(monos.size());
    out.work.candidate_terms = static_cast<long>(terms.size());
    out.work.evaluations = static_cast<long>(terms.size()) * opt.samples *
                           (ropt.marginal_mode ? opt.marginal_witnesses : 1);
    for (const Term& t : out.basis.terms) out.rendered.push_back(render_term(t));
    return out;
}

}  // namespace wickgen
