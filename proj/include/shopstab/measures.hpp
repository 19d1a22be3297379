#pragma once

#include "shopstab/model.hpp"

namespace shopstab {

// One operation present in both schedules under comparison.
struct PairedOp {
    OpKey key;
    std::string machine;
    Tick duration = 0;
    Tick s = 0;        // start in the initial schedule x
    Tick s_prime = 0;  // start in the revised schedule x'
};

// Operation-level matching of an initial schedule x against a revised
// schedule x'. Jobs may arrive or be canceled between the two, so the key
// sets need not coincide; unmatched keys are reported, not scored.
struct PairedSchedules {
    std::vector<PairedOp> paired;  // sorted by key
    std::vector<OpKey> added;      // only in x'
    std::vector<OpKey> removed;    // only in x
    // Same key, different machine between the two instances. Recorded as
    // metadata; no measure assigns it a cost.
    std::vector<OpKey> machine_changed;
};

// Match by (job, op index). Throws std::invalid_argument if the two
// instances disagree on the duration of a shared key.
PairedSchedules pair_schedules(const Schedule& x, const Schedule& x_prime);

struct MeasureReport {
    double total = 0.0;
    std::map<OpKey, double> per_op;  // job-level measures key rows as {job, 0}
    int added_count = 0;
    int removed_count = 0;
    int skipped_count = 0;  // partial jobs / frozen operations left out of the sum
};

// Parameters of the time-decaying instability measure.
struct InstabilityConfig {
    double decay = 1.0;          // I, per-tick impact multiplier; 0 < I <= 1
    Tick t0 = 0;                 // moment of rescheduling
    bool include_frozen = false; // score pairs with min(s, s') < t0?
};

Tick delta_start(Tick s, Tick s_prime);            // |s' - s|
Tick closeness(Tick s, Tick s_prime, Tick t0);     // min(s, s') - t0, may be negative
double impact(Tick dist, double decay);            // decay^dist, requires decay > 0

// Sum of |s - s'| over paired operations.
MeasureReport wu_measure(const PairedSchedules& p);

// Sum of max(0, s - s'): only operations moved earlier count.
MeasureReport lin_measure(const PairedSchedules& p);

// Two-weight combination of earliness and lateness shifts per operation:
// w_early * max(0, s - s') + w_late * max(0, s' - s).
MeasureReport combined_measure(const PairedSchedules& p, double w_early, double w_late);

// Job-level differences g_start * |S_j - S'_j| + g_completion * |C_j - C'_j|.
// Jobs not fully present in both schedules are skipped and counted.
MeasureReport job_level_measure(const PairedSchedules& p, double g_start, double g_completion);

enum class SequenceScope { global, per_machine };

// Number of operation pairs whose relative start order flips:
// s_a < s_b and s'_a > s'_b, both strict, so ties never count.
// per_machine restricts pairs to operations sharing a machine.
MeasureReport sequence_measure(const PairedSchedules& p, SequenceScope scope = SequenceScope::global);

// Time-decaying instability: sum of decay^(min(s,s') - t0) * |s' - s| over
// eligible paired operations. With include_frozen unset, pairs whose
// min(s, s') lies before t0 are skipped and counted. decay = 1 reduces the
// measure to wu_measure. Throws std::invalid_argument unless 0 < decay <= 1.
MeasureReport instability(const PairedSchedules& p, const InstabilityConfig& cfg);

}  // namespace shopstab
