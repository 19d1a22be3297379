#include "shopstab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace shopstab {

PairedSchedules pair_schedules(const Schedule& x, const Schedule& x_prime) {
    PairedSchedules out;
    for (const auto& [key, s] : x.starts) {
        auto it = x_prime.starts.find(key);
        if (it == x_prime.starts.end()) {
            out.removed.push_back(key);
            continue;
        }
        const Operation* a = x.instance->find_op(key);
        const Operation* b = x_prime.instance->find_op(key);
        if (!a || !b)
            throw std::invalid_argument("paired start " + to_string(key) +
                                        " is missing from an instance");
        if (a->duration != b->duration)
            throw std::invalid_argument("operation " + to_string(key) +
                                        " changed duration between instances");
        if (a->machine != b->machine) out.machine_changed.push_back(key);
        out.paired.push_back({key, a->machine, a->duration, s, it->second});
    }
    for (const auto& [key, s] : x_prime.starts)
        if (!x.starts.count(key)) out.added.push_back(key);
    return out;
}

Tick delta_start(Tick s, Tick s_prime) {
    return std::llabs(s_prime - s);
}

Tick closeness(Tick s, Tick s_prime, Tick t0) {
    return std::min(s, s_prime) - t0;
}

double impact(Tick dist, double decay) {
    if (decay <= 0.0) throw std::domain_error("impact base must be positive");
    return std::pow(decay, static_cast<double>(dist));
}

namespace {

MeasureReport make_report(const PairedSchedules& p) {
    MeasureReport r;
    r.added_count = static_cast<int>(p.added.size());
    r.removed_count = static_cast<int>(p.removed.size());
    return r;
}

}  // namespace

MeasureReport wu_measure(const PairedSchedules& p) {
    MeasureReport r = make_report(p);
    for (const PairedOp& op : p.paired) {
        double term = static_cast<double>(delta_start(op.s, op.s_prime));
        r.per_op[op.key] = term;
        r.total += term;
    }
    return r;
}

MeasureReport lin_measure(const PairedSchedules& p) {
    MeasureReport r = make_report(p);
    for (const PairedOp& op : p.paired) {
        double term = static_cast<double>(std::max<Tick>(0, op.s - op.s_prime));
        r.per_op[op.key] = term;
        r.total += term;
    }
    return r;
}

MeasureReport combined_measure(const PairedSchedules& p, double w_early, double w_late) {
    if (!std::isfinite(w_early) || !std::isfinite(w_late) || w_early < 0.0 || w_late < 0.0)
        throw std::invalid_argument("combined measure weights must be finite and non-negative");
    MeasureReport r = make_report(p);
    for (const PairedOp& op : p.paired) {
        double early = static_cast<double>(std::max<Tick>(0, op.s - op.s_prime));
        double late = static_cast<double>(std::max<Tick>(0, op.s_prime - op.s));
        double term = w_early * early + w_late * late;
        r.per_op[op.key] = term;
        r.total += term;
    }
    return r;
}

MeasureReport job_level_measure(const PairedSchedules& p, double g_start, double g_completion) {
    if (g_start < 0.0 || g_completion < 0.0)
        throw std::invalid_argument("job level weights must be non-negative");
    MeasureReport r = make_report(p);

    struct JobSpan {
        Tick s = 0, s_prime = 0;      // start of op 1
        Tick c = 0, c_prime = 0;      // end of the highest-indexed op
        int max_op = 0;
        bool has_first = false;
        bool partial = false;
    };
    std::map<std::string, JobSpan> spans;
    for (const PairedOp& op : p.paired) {
        JobSpan& js = spans[op.key.job];
        if (op.key.op == 1) {
            js.s = op.s;
            js.s_prime = op.s_prime;
            js.has_first = true;
        }
        if (op.key.op > js.max_op) {
            js.max_op = op.key.op;
            js.c = op.s + op.duration;
            js.c_prime = op.s_prime + op.duration;
        }
    }
    // A job with keys in added or removed is not fully present in both.
    for (const OpKey& key : p.added) spans[key.job].partial = true;
    for (const OpKey& key : p.removed) spans[key.job].partial = true;

    for (const auto& [job, js] : spans) {
        if (js.partial || !js.has_first) {
            ++r.skipped_count;
            continue;
        }
        double term = g_start * static_cast<double>(delta_start(js.s, js.s_prime)) +
                      g_completion * static_cast<double>(delta_start(js.c, js.c_prime));
        r.per_op[OpKey{job, 0}] = term;
        r.total += term;
    }
    return r;
}

namespace {

// Fenwick tree over compressed revised starts; counts already-seen
// operations with a strictly larger s'.
class BitCounter {
  public:
    explicit BitCounter(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t rank) {
        for (std::size_t i = rank + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
    }

    long long count_le(std::size_t rank) const {
        long long c = 0;
        for (std::size_t i = rank + 1; i > 0; i -= i & (~i + 1)) c += tree_[i];
        return c;
    }

  private:
    std::vector<long long> tree_;
};

// Counts pairs (a, b) with s_a < s_b and s'_a > s'_b over one group of
// operations; attributes each pair to its later-starting member b.
void count_flipped_pairs(std::vector<const PairedOp*>& ops, MeasureReport& r) {
    if (ops.size() < 2) {
        for (const PairedOp* op : ops) r.per_op.try_emplace(op->key, 0.0);
        return;
    }
    std::sort(ops.begin(), ops.end(), [](const PairedOp* a, const PairedOp* b) {
        return a->s != b->s ? a->s < b->s : a->key < b->key;
    });
    std::vector<Tick> primes;
    primes.reserve(ops.size());
    for (const PairedOp* op : ops) primes.push_back(op->s_prime);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    auto rank_of = [&](Tick v) {
        return static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), v) - primes.begin());
    };

    BitCounter bit(primes.size());
    long long inserted = 0;
    std::size_t i = 0;
    while (i < ops.size()) {
        std::size_t j = i;
        while (j < ops.size() && ops[j]->s == ops[i]->s) ++j;
        // Query the whole equal-s group before inserting it, so ties on s
        // never form a pair.
        for (std::size_t k = i; k < j; ++k) {
            long long flipped = inserted - bit.count_le(rank_of(ops[k]->s_prime));
            double& cell = r.per_op.try_emplace(ops[k]->key, 0.0).first->second;
            cell += static_cast<double>(flipped);
            r.total += static_cast<double>(flipped);
        }
        for (std::size_t k = i; k < j; ++k) {
            bit.add(rank_of(ops[k]->s_prime));
            ++inserted;
        }
        i = j;
    }
}

}  // namespace

MeasureReport sequence_measure(const PairedSchedules& p, SequenceScope scope) {
    MeasureReport r = make_report(p);
    if (scope == SequenceScope::global) {
        std::vector<const PairedOp*> ops;
        ops.reserve(p.paired.size());
        for (const PairedOp& op : p.paired) ops.push_back(&op);
        count_flipped_pairs(ops, r);
    } else {
        std::map<std::string, std::vector<const PairedOp*>> by_machine;
        for (const PairedOp& op : p.paired) by_machine[op.machine].push_back(&op);
        for (auto& [machine, ops] : by_machine) count_flipped_pairs(ops, r);
    }
    return r;
}

MeasureReport instability(const PairedSchedules& p, const InstabilityConfig& cfg) {
    if (cfg.decay <= 0.0)
        throw std::invalid_argument("instability decay base must be positive");
    if (cfg.decay > 1.0)
        throw std::invalid_argument("instability decay base above 1 inflates future impact");
    MeasureReport r = make_report(p);
    for (const PairedOp& op : p.paired) {
        Tick dist = closeness(op.s, op.s_prime, cfg.t0);
        if (dist < 0 && !cfg.include_frozen) {
            ++r.skipped_count;
            continue;
        }
        double term = impact(dist, cfg.decay) * static_cast<double>(delta_start(op.s, op.s_prime));
        r.per_op[op.key] = term;
        r.total += term;
    }
    return r;
}

}  // namespace shopstab
