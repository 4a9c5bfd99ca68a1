#include "causalfi/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "causalfi/rng.hpp"

namespace causalfi {

namespace {

constexpr double kSimplexTolerance = 1e-12;

std::string format_sum(double sum) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, sum);
    return std::string(buf, res.ptr);
}

}  // namespace

void validate(const ResponseDistribution& dist) {
    const double masses[4] = {dist.always, dist.causative, dist.preventive, dist.never};
    for (double m : masses) {
        if (!(m >= 0.0 && m <= 1.0)) {
            throw std::invalid_argument("response-type masses must lie in [0, 1]");
        }
    }
    const double sum = dist.always + dist.causative + dist.preventive + dist.never;
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw std::invalid_argument("response-type masses must sum to 1, got " +
                                    format_sum(sum));
    }
}

double ground_truth_pns(const ResponseDistribution& dist) {
    validate(dist);
    return dist.causative;
}

double ground_truth_pn(const ResponseDistribution& dist) {
    validate(dist);
    const double with_outcome = dist.causative + dist.always;  // P(y|x)
    if (with_outcome == 0.0) {
        throw UndefinedBoundError(BoundAbsence::zero_p_y_given_x);
    }
    return dist.causative / with_outcome;
}

double ground_truth_ps(const ResponseDistribution& dist) {
    validate(dist);
    const double without_outcome = dist.causative + dist.never;  // P(y'|x')
    if (without_outcome == 0.0) {
        throw UndefinedBoundError(BoundAbsence::zero_p_yp_given_xp);
    }
    return dist.causative / without_outcome;
}

GroundTruths ground_truths(const ResponseDistribution& dist) {
    validate(dist);
    GroundTruths out;
    out.pns = ground_truth_pns(dist);
    if (dist.causative + dist.always > 0.0) {
        out.pn = ground_truth_pn(dist);
    }
    if (dist.causative + dist.never > 0.0) {
        out.ps = ground_truth_ps(dist);
    }
    return out;
}

ConditionalRates exact_rates(const ResponseDistribution& dist) {
    validate(dist);
    return {dist.always + dist.causative, dist.always + dist.preventive};
}

bool is_monotone(const ResponseDistribution& dist) {
    validate(dist);
    return std::abs(dist.preventive) <= kSimplexTolerance;
}

Population sample_population(const ResponseDistribution& dist, std::size_t n,
                             std::uint64_t seed) {
    validate(dist);
    if (n < 1) {
        throw std::invalid_argument("population size must be >= 1");
    }
    const double c0 = dist.always;
    const double c1 = c0 + dist.causative;
    const double c2 = c1 + dist.preventive;

    Population pop(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.next_double();
        if (u < c0) {
            pop[i] = ResponseType::always;
        } else if (u < c1) {
            pop[i] = ResponseType::causative;
        } else if (u < c2) {
            pop[i] = ResponseType::preventive;
        } else {
            pop[i] = ResponseType::never;
        }
    }
    return pop;
}

void validate(const RctConfig& cfg) {
    if (cfg.population_size < 2) {
        throw std::invalid_argument("population_size must be >= 2");
    }
    if (!(cfg.treated_fraction > 0.0 && cfg.treated_fraction < 1.0)) {
        throw std::invalid_argument("treated_fraction must lie strictly in (0, 1)");
    }
    if (cfg.paired && !cfg.fixed_arms) {
        throw std::invalid_argument("paired read-out requires fixed_arms");
    }
}

RctResult run_rct(const Population& pop, const RctConfig& cfg) {
    if (pop.empty()) {
        throw std::invalid_argument("population is empty");
    }
    if (!(cfg.treated_fraction > 0.0 && cfg.treated_fraction < 1.0)) {
        throw std::invalid_argument("treated_fraction must lie strictly in (0, 1)");
    }
    if (cfg.paired && !cfg.fixed_arms) {
        throw std::invalid_argument("paired read-out requires fixed_arms");
    }

    const std::size_t n = pop.size();
    RctResult result;

    if (cfg.paired) {
        // Same units in both arms: read y_x and y_x' from every unit.
        for (ResponseType t : pop) {
            result.controlled.recognized += outcome_with_feature(t) ? 1 : 0;
            result.experimental.recognized += outcome_without_feature(t) ? 1 : 0;
        }
        result.controlled.total = n;
        result.experimental.total = n;
        return result;
    }

    SplitMix64 rng(cfg.seed);

    if (cfg.fixed_arms) {
        const auto treated =
            static_cast<std::size_t>(std::llround(cfg.treated_fraction * static_cast<double>(n)));
        if (treated == 0 || treated >= n) {
            throw EmptyArmError("fixed-arms split leaves an empty arm");
        }
        std::vector<std::uint32_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(order[i], order[rng.next_below(i + 1)]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const ResponseType t = pop[order[i]];
            if (i < treated) {
                result.controlled.recognized += outcome_with_feature(t) ? 1 : 0;
            } else {
                result.experimental.recognized += outcome_without_feature(t) ? 1 : 0;
            }
        }
        result.controlled.total = treated;
        result.experimental.total = n - treated;
        return result;
    }

    for (ResponseType t : pop) {
        if (rng.bernoulli(cfg.treated_fraction)) {
            result.controlled.recognized += outcome_with_feature(t) ? 1 : 0;
            ++result.controlled.total;
        } else {
            result.experimental.recognized += outcome_without_feature(t) ? 1 : 0;
            ++result.experimental.total;
        }
    }
    if (result.controlled.total == 0 || result.experimental.total == 0) {
        throw EmptyArmError("random assignment left an arm empty");
    }
    return result;
}

RctResult simulate_rct(const ResponseDistribution& dist, const RctConfig& cfg) {
    validate(dist);
    validate(cfg);
    const Population pop =
        sample_population(dist, cfg.population_size, derive_seed(cfg.seed, 0));
    RctConfig assignment = cfg;
    assignment.seed = derive_seed(cfg.seed, 1);
    return run_rct(pop, assignment);
}

CoverageResult coverage_study(const ResponseDistribution& dist, const CoverageConfig& cfg) {
    validate(dist);
    if (cfg.replications < 1) {
        throw std::invalid_argument("replications must be >= 1");
    }
    const GroundTruths truths = ground_truths(dist);

    struct RepOutcome {
        bool pn = false;
        bool ps = false;
        bool pns = false;
        bool all = false;
    };
    std::vector<RepOutcome> outcomes(cfg.replications);

    auto run_replication = [&](std::size_t r) {
        const Population pop = sample_population(dist, cfg.population_size,
                                                 derive_seed(cfg.seed, 2 * r));
        RctConfig rct_cfg;
        rct_cfg.population_size = cfg.population_size;
        rct_cfg.treated_fraction = cfg.treated_fraction;
        rct_cfg.fixed_arms = cfg.fixed_arms;
        rct_cfg.paired = cfg.paired;
        rct_cfg.seed = derive_seed(cfg.seed, 2 * r + 1);
        const RctResult rct = run_rct(pop, rct_cfg);
        const CausationBounds env = bounds_with_uncertainty(rct, cfg.confidence_level);

        RepOutcome& o = outcomes[r];
        o.pns = env.pns.contains(truths.pns);
        o.pn = truths.pn && env.pn.defined() && env.pn.interval->contains(*truths.pn);
        o.ps = truths.ps && env.ps.defined() && env.ps.interval->contains(*truths.ps);
        o.all = o.pns && (!truths.pn || o.pn) && (!truths.ps || o.ps);
    };

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.replications)));

    if (threads == 1) {
        for (std::size_t r = 0; r < cfg.replications; ++r) run_replication(r);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t r = t; r < cfg.replications; r += threads) {
                        run_replication(r);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    CoverageResult result;
    result.replications = cfg.replications;
    for (const RepOutcome& o : outcomes) {
        result.pn_contained += o.pn ? 1 : 0;
        result.ps_contained += o.ps ? 1 : 0;
        result.pns_contained += o.pns ? 1 : 0;
        result.all_contained += o.all ? 1 : 0;
    }
    return result;
}

}  // namespace causalfi
